"""Maximum-weight matching in general graphs with an odd-set cover certificate.

Edmonds' primal-dual blossom algorithm in the O(n^3) form of Galil,
Micali and Gabow.  Slacks are kept in doubled units
(``slack = d_u + d_v - 2 w``), so with integer weights every vertex and
blossom dual stays integral.  On exit the duals are exported as an
:class:`~streammatch.graph.OddSetCover` with ``scale=2``:

* ``y_v = d_v`` (vertex dual in doubled units),
* ``z_B = 2 d_B`` for each remaining blossom with positive dual.

Feasibility then reads ``y_u + y_v + sum z >= 2 w(e)`` and complementary
slackness gives ``cover_value == 2 w(M)``; :func:`max_weight_matching_with_duals`
checks both before returning.
"""

from __future__ import annotations

from ..graph import Graph, LaminarFamily, Matching, OddSetCover, cover_value, is_laminar
from .bipartite import CertificateError

__all__ = ["max_weight_matching_with_duals", "certify_odd_set_cover"]


def _dedupe(g: Graph) -> list[int]:
    """Index of the heaviest (then earliest) edge per vertex pair."""
    best: dict[tuple[int, int], int] = {}
    for idx, e in enumerate(g.edges):
        k = e.key
        cur = best.get(k)
        if cur is None or e.weight > g.edges[cur].weight:
            best[k] = idx
    return sorted(best.values())


class _Solver:
    def __init__(self, n: int, edges: list[tuple[int, int, int]]):
        self.n = n
        self.edges = edges
        nv = n
        self.endpoint = [edges[p // 2][p % 2] for p in range(2 * len(edges))]
        self.neighbend: list[list[int]] = [[] for _ in range(nv)]
        for k, (i, j, _) in enumerate(edges):
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)
        maxweight = max((w for _, _, w in edges), default=0)
        self.mate = [-1] * nv
        self.label = [0] * (2 * nv)
        self.labelend = [-1] * (2 * nv)
        self.inblossom = list(range(nv))
        self.blossomparent = [-1] * (2 * nv)
        self.blossomchilds: list = [None] * (2 * nv)
        self.blossombase = list(range(nv)) + [-1] * nv
        self.blossomendps: list = [None] * (2 * nv)
        self.bestedge = [-1] * (2 * nv)
        self.blossombestedges: list = [None] * (2 * nv)
        self.unusedblossoms = list(range(nv, 2 * nv))
        self.dualvar = [maxweight] * nv + [0] * nv
        self.allowedge = [False] * len(edges)
        self.queue: list[int] = []

    def slack(self, k: int) -> int:
        i, j, w = self.edges[k]
        return self.dualvar[i] + self.dualvar[j] - 2 * w

    def leaves(self, b: int) -> list[int]:
        if b < self.n:
            return [b]
        out = []
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.n:
                out.append(t)
            else:
                stack.extend(reversed(self.blossomchilds[t]))
        return out

    def assign_label(self, w: int, t: int, p: int) -> None:
        while True:
            b = self.inblossom[w]
            self.label[w] = self.label[b] = t
            self.labelend[w] = self.labelend[b] = p
            self.bestedge[w] = self.bestedge[b] = -1
            if t == 1:
                self.queue.extend(self.leaves(b))
                return
            # T-blossom: its base's mate becomes an S-vertex
            base = self.blossombase[b]
            mb = self.mate[base]
            w, t, p = self.endpoint[mb], 1, mb ^ 1

    def scan_blossom(self, v: int, w: int) -> int:
        """Trace back from v and w to find a new blossom base, or -1 for an augmenting path."""
        label, labelend, endpoint, inblossom = self.label, self.labelend, self.endpoint, self.inblossom
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(self, base: int, k: int) -> None:
        v, w, _ = self.edges[k]
        inblossom, labelend, endpoint = self.inblossom, self.labelend, self.endpoint
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = self.unusedblossoms.pop()
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        self.blossomchilds[b] = path
        self.blossomendps[b] = endps
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        self.label[b] = 1
        labelend[b] = labelend[bb]
        self.dualvar[b] = 0
        for x in self.leaves(b):
            if self.label[inblossom[x]] == 2:
                self.queue.append(x)
            inblossom[x] = b
        bestedgeto = [-1] * (2 * self.n)
        for sub in path:
            if self.blossombestedges[sub] is None:
                nblists = [[p // 2 for p in self.neighbend[x]] for x in self.leaves(sub)]
            else:
                nblists = [self.blossombestedges[sub]]
            for nblist in nblists:
                for kk in nblist:
                    i, j, _ = self.edges[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and self.label[bj] == 1
                            and (bestedgeto[bj] == -1 or self.slack(kk) < self.slack(bestedgeto[bj]))):
                        bestedgeto[bj] = kk
            self.blossombestedges[sub] = None
            self.bestedge[sub] = -1
        self.blossombestedges[b] = [kk for kk in bestedgeto if kk != -1]
        self.bestedge[b] = -1
        for kk in self.blossombestedges[b]:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    def expand_blossom(self, b: int, endstage: bool) -> None:
        label, labelend, endpoint, inblossom = self.label, self.labelend, self.endpoint, self.inblossom
        for s in self.blossomchilds[b]:
            self.blossomparent[s] = -1
            if s < self.n:
                inblossom[s] = s
            elif endstage and self.dualvar[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for x in self.leaves(s):
                    inblossom[x] = s
        if not endstage and label[b] == 2:
            # relabel the children along the even-length path through b
            childs = self.blossomchilds[b]
            endps = self.blossomendps[b]
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= len(childs)
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[j - endptrick] ^ endptrick ^ 1]] = 0
                self.assign_label(endpoint[p ^ 1], 2, p)
                self.allowedge[endps[j - endptrick] // 2] = True
                j += jstep
                p = endps[j - endptrick] ^ endptrick
                self.allowedge[p // 2] = True
                j += jstep
            bv = childs[j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entrychild:
                bv = childs[j]
                if label[bv] == 1:
                    j += jstep
                    continue
                reached = -1
                for x in self.leaves(bv):
                    if label[x] != 0:
                        reached = x
                        break
                if reached != -1:
                    label[reached] = 0
                    label[endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(reached, 2, labelend[reached])
                j += jstep
        label[b] = labelend[b] = -1
        self.blossomchilds[b] = self.blossomendps[b] = None
        self.blossombase[b] = -1
        self.blossombestedges[b] = None
        self.bestedge[b] = -1
        self.unusedblossoms.append(b)

    def augment_blossom(self, b: int, v: int) -> None:
        """Swap matched/unmatched edges inside b so that v becomes its base."""
        t = v
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.n:
            self.augment_blossom(t, v)
        childs = self.blossomchilds[b]
        endps = self.blossomendps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        endpoint = self.endpoint
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - endptrick] ^ endptrick
            if t >= self.n:
                self.augment_blossom(t, endpoint[p])
            j += jstep
            t = childs[j]
            if t >= self.n:
                self.augment_blossom(t, endpoint[p ^ 1])
            self.mate[endpoint[p]] = p ^ 1
            self.mate[endpoint[p ^ 1]] = p
        self.blossomchilds[b] = childs[i:] + childs[:i]
        self.blossomendps[b] = endps[i:] + endps[:i]
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]]

    def augment_matching(self, k: int) -> None:
        v, w, _ = self.edges[k]
        endpoint, inblossom, labelend = self.endpoint, self.inblossom, self.labelend
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= self.n:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= self.n:
                    self.augment_blossom(bt, j)
                self.mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    def run(self) -> None:
        n = self.n
        label, inblossom, dualvar = self.label, self.inblossom, self.dualvar
        for _ in range(n):
            label[:] = [0] * (2 * n)
            self.bestedge[:] = [-1] * (2 * n)
            self.blossombestedges[n:] = [None] * n
            self.allowedge[:] = [False] * len(self.edges)
            self.queue[:] = []
            for v in range(n):
                if self.mate[v] == -1 and label[inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    for p in self.neighbend[v]:
                        k = p // 2
                        w = self.endpoint[p]
                        if inblossom[v] == inblossom[w]:
                            continue
                        if not self.allowedge[k]:
                            kslack = self.slack(k)
                            if kslack <= 0:
                                self.allowedge[k] = True
                        if self.allowedge[k]:
                            if label[inblossom[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif label[inblossom[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif label[w] == 0:
                                label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif label[inblossom[w]] == 1:
                            b = inblossom[v]
                            if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                                self.bestedge[b] = k
                        elif label[w] == 0:
                            if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                                self.bestedge[w] = k
                if augmented:
                    break

                # no augmenting path under the current duals: pick the dual step
                deltatype = 1
                delta = min(dualvar[:n])
                deltaedge = deltablossom = -1
                for v in range(n):
                    if label[inblossom[v]] == 0 and self.bestedge[v] != -1:
                        d = self.slack(self.bestedge[v])
                        if d < delta:
                            delta, deltatype, deltaedge = d, 2, self.bestedge[v]
                for b in range(2 * n):
                    if self.blossomparent[b] == -1 and label[b] == 1 and self.bestedge[b] != -1:
                        kslack = self.slack(self.bestedge[b])
                        if kslack % 2:
                            raise CertificateError("odd slack between S-blossoms")
                        d = kslack // 2
                        if d < delta:
                            delta, deltatype, deltaedge = d, 3, self.bestedge[b]
                for b in range(n, 2 * n):
                    if (self.blossombase[b] >= 0 and self.blossomparent[b] == -1
                            and label[b] == 2 and dualvar[b] < delta):
                        delta, deltatype, deltablossom = dualvar[b], 4, b

                for v in range(n):
                    lv = label[inblossom[v]]
                    if lv == 1:
                        dualvar[v] -= delta
                    elif lv == 2:
                        dualvar[v] += delta
                for b in range(n, 2 * n):
                    if self.blossombase[b] >= 0 and self.blossomparent[b] == -1:
                        if label[b] == 1:
                            dualvar[b] += delta
                        elif label[b] == 2:
                            dualvar[b] -= delta

                if deltatype == 1:
                    break
                if deltatype == 2:
                    self.allowedge[deltaedge] = True
                    i, j, _ = self.edges[deltaedge]
                    if label[inblossom[i]] == 0:
                        i, j = j, i
                    self.queue.append(i)
                elif deltatype == 3:
                    self.allowedge[deltaedge] = True
                    i, _, _ = self.edges[deltaedge]
                    self.queue.append(i)
                else:
                    self.expand_blossom(deltablossom, False)

            if not augmented:
                break
            for b in range(n, 2 * n):
                if (self.blossomparent[b] == -1 and self.blossombase[b] >= 0
                        and label[b] == 1 and dualvar[b] == 0):
                    self.expand_blossom(b, True)

    def positive_blossoms(self) -> list[tuple[list[int], int]]:
        out = []
        for b in range(self.n, 2 * self.n):
            if self.blossombase[b] >= 0 and self.dualvar[b] > 0:
                out.append((sorted(self.leaves(b)), 2 * self.dualvar[b]))
        return out


def certify_odd_set_cover(g: Graph, matching: Matching, cover: OddSetCover) -> None:
    """Raise :class:`CertificateError` unless ``cover`` proves ``matching`` optimal on ``g``."""
    u, v, w = g.arrays
    if g.m and not cover.covered_mask(u, v, w).all():
        raise CertificateError("odd-set cover violated by some edge")
    if not is_laminar(cover.laminar.sets):
        raise CertificateError("odd-set support is not laminar")
    if cover_value(cover) != cover.scale * matching.value:
        raise CertificateError(
            f"duality gap: cover value {cover_value(cover)} vs {cover.scale} * {matching.value}")


def max_weight_matching_with_duals(g: Graph, check: bool = True) -> tuple[Matching, OddSetCover]:
    """Maximum-weight matching plus an optimal odd-set cover in doubled units.

    Parallel edges collapse to the heaviest copy; the cover is still checked
    against every edge of ``g``.
    """
    keep = _dedupe(g)
    edges = [(g.edges[i].u, g.edges[i].v, g.edges[i].weight) for i in keep]
    solver = _Solver(g.n, edges)
    if edges:
        solver.run()
    matched = []
    for v in range(g.n):
        p = solver.mate[v]
        if p != -1 and v < solver.endpoint[p]:
            matched.append(g.edges[keep[p // 2]])
    matched.sort(key=lambda e: e.key)
    matching = Matching.from_edges(matched, weighted=True)

    blossoms = sorted(solver.positive_blossoms(), key=lambda t: (-len(t[0]), t[0]))
    family = LaminarFamily.from_sets(s for s, _ in blossoms)
    cover = OddSetCover(
        y=tuple(solver.dualvar[: g.n]),
        laminar=family,
        z=tuple(z for _, z in blossoms),
        scale=2,
    )
    if check:
        certify_odd_set_cover(g, matching, cover)
    return matching, cover

