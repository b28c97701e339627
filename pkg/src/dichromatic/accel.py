"""Compiled branch-and-prune kernel (numba), a drop-in backend for CompletionSearch.

The kernel walks exactly the same tree as the pure Python search: same
branching pair, same child order, same cuts, so node and cut counts agree
and checkpoints taken with one backend resume with the other.  It supports
colourability cuts with k in 2..4 and the two-disjoint-TT5 cut.  Leaves are
handed back to Python, which does the final exact check.
"""
from __future__ import annotations

import time
from typing import Iterator, Optional, Sequence

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

from .tournament import PartialTournament, Tournament, full_mask

MAX_KERNEL_K = 4


def available() -> bool:
    return numba is not None


if numba is not None:

    @njit(cache=True, inline="always")
    def _popcount(x):
        x = np.uint64(x)
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))

    @njit(cache=True, inline="always")
    def _ctz(low):
        return _popcount(low - 1)

    @njit(cache=True)
    def _transitive(out, inn, subset):
        degrees = np.int64(0)
        rest = subset
        while rest:
            low = rest & -rest
            rest ^= low
            v = _ctz(low)
            row = out[v] & subset
            if (row | (inn[v] & subset) | low) != subset:
                return False
            bit = np.int64(1) << _popcount(row)
            if degrees & bit:
                return False
            degrees |= bit
        return True

    @njit(cache=True)
    def _grow(buf, need):
        if need <= buf.shape[0]:
            return buf
        size = buf.shape[0] * 2
        while size < need:
            size *= 2
        bigger = np.empty(size, dtype=np.int64)
        bigger[: buf.shape[0]] = buf
        return bigger

    @njit(cache=True)
    def _maximal_sets(out, inn, n, region, required, buf):
        """Maximal transitive subsets of region containing required; returns (buf, count)."""
        count = 0
        chosen = np.zeros(n + 2, dtype=np.int64)
        cand = np.zeros(n + 2, dtype=np.int64)
        rest = np.zeros(n + 2, dtype=np.int64)
        gaps = np.zeros((n + 2, n + 2), dtype=np.int64)
        d = 0
        cand[0] = region
        rest[0] = region
        while d >= 0:
            if cand[d] == 0:
                ok = True
                for p in range(d):
                    if gaps[d, p]:
                        ok = False
                        break
                if ok:
                    buf = _grow(buf, count + 1)
                    buf[count] = chosen[d]
                    count += 1
                d -= 1
                continue
            if rest[d] == 0:
                d -= 1
                continue
            low = rest[d] & -rest[d]
            rest[d] ^= low
            v = _ctz(low)
            nxt = cand[d] & out[v]
            if required & ~(chosen[d] | low | nxt):
                continue
            iv = inn[v]
            blocked = False
            for p in range(d + 1):
                g = (gaps[d, p] & iv) if p < d else (cand[d] & iv)
                gaps[d + 1, p] = g
                while g:
                    lu = g & -g
                    g ^= lu
                    if nxt & ~out[_ctz(lu)] == 0:
                        blocked = True
                        break
                if blocked:
                    break
            if blocked:
                continue
            chosen[d + 1] = chosen[d] | low
            cand[d + 1] = nxt
            rest[d + 1] = nxt
            d += 1
        return buf, count

    @njit(cache=True)
    def _split2(out, inn, region, sets, nsets):
        if _transitive(out, inn, region):
            return True
        v = region & -region
        for i in range(nsets):
            s = sets[i]
            if s & v and _transitive(out, inn, region & ~(s & region)):
                return True
        return False

    @njit(cache=True)
    def _through(region, sets, nsets):
        """Distinct restrictions of sets meeting the lowest vertex, largest first, and the biggest restriction."""
        v = region & -region
        keys = np.empty(nsets, dtype=np.int64)
        m = 0
        biggest = 0
        for i in range(nsets):
            r = sets[i] & region
            c = _popcount(r)
            if c > biggest:
                biggest = c
            if r & v:
                keys[m] = ((64 - c) << 33) | r
                m += 1
        keys = np.sort(keys[:m])
        mask = np.int64((1 << 33) - 1)
        found = np.empty(m, dtype=np.int64)
        k = 0
        prev = np.int64(-1)
        for i in range(m):
            if keys[i] != prev:
                found[k] = keys[i] & mask
                k += 1
                prev = keys[i]
        return found[:k], biggest

    @njit(cache=True)
    def _split3(out, inn, region, sets, nsets):
        if _transitive(out, inn, region):
            return True
        through, biggest = _through(region, sets, nsets)
        if _popcount(region) > 3 * biggest:
            return False
        for s in through:
            if _split2(out, inn, region & ~s, sets, nsets):
                return True
        return False

    @njit(cache=True)
    def _split4(out, inn, region, sets, nsets):
        if _transitive(out, inn, region):
            return True
        through, biggest = _through(region, sets, nsets)
        if _popcount(region) > 4 * biggest:
            return False
        for s in through:
            if _split3(out, inn, region & ~s, sets, nsets):
                return True
        return False

    @njit(cache=True)
    def _split(out, inn, region, k, sets, nsets):
        if k <= 1:
            return _transitive(out, inn, region)
        if k == 2:
            return _split2(out, inn, region, sets, nsets)
        if k == 3:
            return _split3(out, inn, region, sets, nsets)
        return _split4(out, inn, region, sets, nsets)

    @njit(cache=True)
    def _has_tt5(out, cand):
        a = cand
        while a:
            la = a & -a
            a ^= la
            c1 = cand & out[_ctz(la)]
            if _popcount(c1) < 4:
                continue
            b = c1
            while b:
                lb = b & -b
                b ^= lb
                c2 = c1 & out[_ctz(lb)]
                if _popcount(c2) < 3:
                    continue
                c = c2
                while c:
                    lc = c & -c
                    c ^= lc
                    c3 = c2 & out[_ctz(lc)]
                    if _popcount(c3) < 2:
                        continue
                    d = c3
                    while d:
                        ld = d & -d
                        d ^= ld
                        if c3 & out[_ctz(ld)]:
                            return True
        return False

    @njit(cache=True)
    def _two_disjoint_tt5(out, cand):
        a = cand
        while a:
            la = a & -a
            a ^= la
            c1 = cand & out[_ctz(la)]
            b = c1
            while b:
                lb = b & -b
                b ^= lb
                c2 = c1 & out[_ctz(lb)]
                c = c2
                while c:
                    lc = c & -c
                    c ^= lc
                    c3 = c2 & out[_ctz(lc)]
                    d = c3
                    while d:
                        ld = d & -d
                        d ^= ld
                        e = c3 & out[_ctz(ld)]
                        while e:
                            le = e & -e
                            e ^= le
                            first = la | lb | lc | ld | le
                            if _has_tt5(out, cand & ~first):
                                return True
        return False

    @njit(cache=True)
    def _first_free(out, inn, region):
        r = region
        while r:
            la = r & -r
            r ^= la
            a = _ctz(la)
            free = region & ~(out[a] | inn[a]) & ~((la << 1) - 1)
            if free:
                return a, _ctz(free & -free)
        return -1, -1

    @njit(cache=True)
    def _choose(out, inn, everything, sets, nsets, maxset):
        if maxset and nsets > 0:
            top = 0
            for i in range(nsets):
                c = _popcount(sets[i])
                if c > top:
                    top = c
            ba = -1
            bb = -1
            for i in range(nsets):
                if _popcount(sets[i]) == top:
                    a, b = _first_free(out, inn, sets[i])
                    if a >= 0 and (ba < 0 or a < ba or (a == ba and b < bb)):
                        ba = a
                        bb = b
            if ba >= 0:
                return ba, bb
        return _first_free(out, inn, everything)

    @njit(cache=True)
    def _update(out, inn, n, a, b, par, npar, dest, pos, fresh):
        """Write the maximal sets after arc a->b at dest[pos:]; returns (dest, fresh, count)."""
        both = (np.int64(1) << a) | (np.int64(1) << b)
        region = both
        common = ~both & (out[a] | inn[a]) & (out[b] | inn[b])
        while common:
            lx = common & -common
            common ^= lx
            x = _ctz(lx)
            if not ((out[b] >> x) & 1 and (out[x] >> a) & 1):
                region |= lx
        fresh, nf = _maximal_sets(out, inn, n, region, both, fresh)
        dest = _grow(dest, pos + npar + nf)
        k = 0
        for i in range(npar):
            s = par[i]
            if nf and s & both:
                dominated = False
                for j in range(nf):
                    if s & ~fresh[j] == 0:
                        dominated = True
                        break
                if dominated:
                    continue
            dest[pos + k] = s
            k += 1
        for j in range(nf):
            dest[pos + k] = fresh[j]
            k += 1
        return dest, fresh, k

    @njit(cache=True)
    def _run(outs, inns, starts, counts, top, pool, n, k, two_tt5, maxset, budget, leaf):
        """Depth-first search; returns (status, top, pool, nodes, cuts).

        status 0: stack exhausted, 1: budget used up, 2: leaf copied to ``leaf``.
        """
        everything = (np.int64(1) << n) - 1
        nodes = 0
        cuts = 0
        fresh = np.empty(64, dtype=np.int64)
        par = np.empty(64, dtype=np.int64)
        while top > 0:
            if budget >= 0:
                if budget == 0:
                    return 1, top, pool, nodes, cuts
                budget -= 1
            top -= 1
            out = outs[top].copy()
            inn = inns[top].copy()
            base = starts[top]
            npar = counts[top]
            par = _grow(par, npar)
            par[:npar] = pool[base:base + npar]
            nodes += 1
            if k > 0 and _split(out, inn, everything, k, par, npar):
                cuts += 1
                continue
            if two_tt5 and _two_disjoint_tt5(out, everything):
                cuts += 1
                continue
            a, b = _choose(out, inn, everything, par, npar, maxset)
            if a < 0:
                leaf[:n] = out[:n]
                return 2, top, pool, nodes, cuts
            pos = base
            for child in range(2):
                x = b if child == 0 else a
                y = a if child == 0 else b
                o = out.copy()
                i = inn.copy()
                o[x] |= np.int64(1) << y
                i[y] |= np.int64(1) << x
                pool, fresh, cnt = _update(o, i, n, x, y, par, npar, pool, pos, fresh)
                outs[top] = o
                inns[top] = i
                starts[top] = pos
                counts[top] = cnt
                pos += cnt
                top += 1
        return 0, top, pool, nodes, cuts

    @njit(cache=True)
    def maximal_sets_kernel(out, inn, n, region, required):
        buf = np.empty(64, dtype=np.int64)
        buf, count = _maximal_sets(out, inn, n, region, required, buf)
        return buf[:count].copy()

    @njit(cache=True)
    def split_kernel(out, inn, region, k, sets):
        return _split(out, inn, region, k, sets, sets.shape[0])

    @njit(cache=True)
    def two_disjoint_tt5_kernel(out, cand):
        return _two_disjoint_tt5(out, cand)


def _rows(p, n) -> tuple[np.ndarray, np.ndarray]:
    return np.array(p.out, dtype=np.int64), np.array(p.inn, dtype=np.int64)


def kernel_supports(prune) -> bool:
    return available() and (prune.k is None or 2 <= prune.k <= MAX_KERNEL_K)


class KernelStack:
    """The DFS stack in array form; entries are (out, inn, maximal sets)."""

    def __init__(self, n: int, nodes: Sequence, capacity: int):
        self.n = n
        self.outs = np.zeros((capacity, n), dtype=np.int64)
        self.inns = np.zeros((capacity, n), dtype=np.int64)
        self.starts = np.zeros(capacity, dtype=np.int64)
        self.counts = np.zeros(capacity, dtype=np.int64)
        self.pool = np.empty(1024, dtype=np.int64)
        self.top = 0
        pos = 0
        everything = full_mask(n)
        for p in nodes:
            out, inn = _rows(p, n)
            sets = maximal_sets_kernel(out, inn, n, everything, 0)
            if pos + len(sets) > len(self.pool):
                bigger = np.empty(max(2 * len(self.pool), pos + len(sets)), dtype=np.int64)
                bigger[:pos] = self.pool[:pos]
                self.pool = bigger
            self.pool[pos:pos + len(sets)] = sets
            self.outs[self.top] = out
            self.inns[self.top] = inn
            self.starts[self.top] = pos
            self.counts[self.top] = len(sets)
            pos += len(sets)
            self.top += 1

    def frontier(self) -> list[PartialTournament]:
        return [PartialTournament(self.n, tuple(int(x) for x in self.outs[e])) for e in range(self.top)]


def kernel_search_class():
    """CompletionSearch subclass running the compiled kernel (import cycle kept lazy)."""
    from .completions import CompletionSearch

    class KernelSearch(CompletionSearch):
        backend = "numba"

        def __init__(self, root, prune, strategy: str = "maxset", frontier=None):
            if not kernel_supports(prune):
                raise ValueError(f"kernel cannot apply pruner {prune}")
            if strategy not in ("lex", "maxset"):
                raise ValueError(f"unknown branching strategy {strategy!r}")
            self.n = root.n
            self.prune = prune
            self.strategy = strategy
            from .completions import SearchStats

            self.stats = SearchStats()
            nodes = [root] if frontier is None else list(frontier)
            undecided = max((len(p.undecided) for p in nodes), default=0)
            self._kstack = KernelStack(self.n, nodes, capacity=len(nodes) + undecided + 2)

        @property
        def done(self) -> bool:
            return self._kstack.top == 0

        def frontier(self) -> list[PartialTournament]:
            return self._kstack.frontier()

        def run(self, max_nodes: Optional[int] = None) -> Iterator[Tournament]:
            ks = self._kstack
            n = self.n
            k = self.prune.k or 0
            leaf = np.zeros(n, dtype=np.int64)
            stats = self.stats
            remaining = -1 if max_nodes is None else max_nodes
            start = time.perf_counter()
            try:
                while ks.top:
                    if remaining == 0:
                        return
                    status, ks.top, ks.pool, nodes, cuts = _run(
                        ks.outs, ks.inns, ks.starts, ks.counts, ks.top, ks.pool, n, k,
                        self.prune.two_tt5, self.strategy == "maxset", remaining, leaf)
                    stats.nodes += nodes
                    stats.cuts += cuts
                    if remaining > 0:
                        remaining -= nodes
                    if status == 2:
                        t = Tournament(n, tuple(int(x) for x in leaf))
                        if self.prune.accepts(t):
                            stats.emitted += 1
                            yield t
                        else:
                            stats.rejected_final += 1
                    elif status == 1:
                        return
            finally:
                stats.seconds += time.perf_counter() - start

    return KernelSearch
