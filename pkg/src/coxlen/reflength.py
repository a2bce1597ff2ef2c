"""Reflection length through minimal deletion sets.

The length of an element is the fewest letters that can be deleted from a
reduced expression u_1...u_p to leave a word for the identity. Deleting the
positions i_1 < ... < i_q multiplies the element on the left by
r_{i_1} ... r_{i_q}, where r_i = u_1..u_{i-1} u_i u_{i-1}..u_1. So a q-subset
is a deletion set exactly when T_{i_1} ... T_{i_q} = W^{-1} for the matrices
T_i of those reflections, which is what the search kernel tests.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import NamedTuple, Optional

import numpy as np

from . import rewriting
from .core import (
    DEFAULT_LIMITS,
    CoxeterSystem,
    NotADeletionSet,
    SearchLimits,
    SubsetBudgetExceeded,
    Word,
    delete_positions,
    stats,
)
from .geometric import Representation, representation

log = logging.getLogger(__name__)

ORACLES = ("matrix", "tits", "both")
# below this many candidate subsets a level is searched in-process
PARALLEL_THRESHOLD = 200_000


class ReflectionLength(NamedTuple):
    length: int
    witness: tuple  # colex-least minimal deletion set, 0-based positions into `word`
    word: Word      # the reduced expression the witness refers to


def colex_subsets(p: int, q: int):
    """All q-subsets of range(p) as ascending tuples, in colex order."""
    if q == 0:
        yield ()
        return
    for top in range(q - 1, p):
        for rest in colex_subsets(top, q - 1):
            yield rest + (top,)


# -- universal groups ------------------------------------------------------

def _max_matching(u: Word):
    """Nussinov table: best[i][j] = max non-crossing equal-letter pairs in u[i:j]."""
    p = len(u)
    best = [[0] * (p + 1) for _ in range(p + 1)]
    for length in range(2, p + 1):
        for i in range(p - length + 1):
            j = i + length
            row = best[i + 1]
            b = row[j]
            x = u[i]
            for k in range(i + 1, j):
                if u[k] == x:
                    cand = 1 + row[k] + best[k + 1][j]
                    if cand > b:
                        b = cand
            best[i][j] = b
    return best


def universal_reflection_length(w: Word, n: Optional[int] = None) -> int:
    """Reflection length of the image of w in the universal group of rank n.

    A word is trivial there iff its letters pair up into equal, non-crossing
    pairs, so the length is p - 2 * (largest such partial pairing) on the
    freely reduced word.
    """
    if n is not None and any(not 1 <= x <= n for x in w):
        raise ValueError(f"word has letters outside 1..{n}")
    u = rewriting.free_reduce(tuple(w))
    if not u:
        return 0
    return len(u) - 2 * _max_matching(u)[0][len(u)]


def universal_deletion_set(w: Word) -> tuple:
    """Some minimal deletion set of the freely reduced word (via the table traceback)."""
    u = rewriting.free_reduce(tuple(w))
    best = _max_matching(u)
    deleted = []
    stack = [(0, len(u))]
    while stack:
        i, j = stack.pop()
        if j - i <= 0:
            continue
        if best[i][j] == best[i + 1][j]:
            deleted.append(i)
            stack.append((i + 1, j))
            continue
        for k in range(i + 1, j):
            if u[k] == u[i] and best[i][j] == 1 + best[i + 1][k] + best[k + 1][j]:
                stack.append((i + 1, k))
                stack.append((k + 1, j))
                break
    return tuple(sorted(deleted))


# -- deletion-set search ---------------------------------------------------

class _Kernel:
    """Colex search for q-subsets with T_{i_1} ... T_{i_q} = W^{-1}."""

    def __init__(self, rep: Representation, word: Word, limits: SearchLimits):
        self.rep = rep
        self.word = word
        self.limits = limits
        self.tested = 0
        p = len(word)
        prefix, prefix_inv = rep.one, rep.one
        T = []
        for x in word:
            g = rep.gens[x - 1]
            T.append(rep.mul(rep.mul(prefix, g), prefix_inv))
            prefix = rep.mul(prefix, g)
            prefix_inv = rep.mul(g, prefix_inv)
        self.T = T
        self.target = prefix_inv
        self.p = p
        if rep.exact:
            self.tail = 2
            self.singles = {}
            for j, t in enumerate(T):
                self.singles.setdefault(t, []).append(j)
            pairs = {}
            for c in range(p):
                for a in range(c):
                    pairs.setdefault(rep.mul(T[a], T[c]), []).append((c, a))
            for v in pairs.values():
                v.sort()
            self.pairs = pairs
        else:
            self.tail = 1
            self.stack = np.array(T) if T else np.zeros((0, rep.n, rep.n))
            # entries of conjugated reflections grow with the word, so the
            # band scales with them; every float hit is confirmed by rewriting
            scale = max([1.0, float(np.max(np.abs(prefix_inv)))]
                        + [float(np.max(np.abs(t))) for t in T])
            lo, hi = rep.tolerance(p)
            self.band = hi * scale

    def __getstate__(self):
        state = dict(self.__dict__)
        state["rep"] = self.rep.sys
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.rep = representation(state["rep"])

    def _count(self, n):
        self.tested += n
        if self.tested > self.limits.max_subsets:
            raise SubsetBudgetExceeded(
                f"deletion-set search tested more than {self.limits.max_subsets} subsets"
            )

    def _confirm(self, subset):
        deleted = delete_positions(self.word, subset)
        return rewriting.is_identity(deleted, self.rep.sys, self.limits)

    def _tail(self, k, bound, Y, chosen):
        """Subsets of size k inside range(bound) completing `chosen`, in colex order."""
        self._count(comb(bound, k))
        rep = self.rep
        above = tuple(reversed(chosen))
        if k == 0:
            if rep.exact:
                ok = Y == rep.one
            else:
                ok = rep.deviation(Y, rep.one) < self.band and self._confirm(above)
            if ok:
                yield above
            return
        if rep.exact:
            if k == 1:
                for j in self.singles.get(Y, ()):
                    if j < bound:
                        yield (j,) + above
            else:
                for c, a in self.pairs.get(Y, ()):
                    if c < bound:
                        yield (a, c) + above
            return
        if bound == 0:
            return
        dev = np.max(np.abs(self.stack[:bound] - Y), axis=(1, 2))
        for j in np.flatnonzero(dev < self.band):
            cand = (int(j),) + above
            if self._confirm(cand):
                yield cand

    def _rec(self, k, bound, Y, chosen, out, find_all):
        if k <= self.tail:
            for sub in self._tail(k, bound, Y, chosen):
                out.append(sub)
                if not find_all:
                    return True
            return False
        mul, T = self.rep.mul, self.T
        for top in range(k - 1, bound):
            chosen.append(top)
            done = self._rec(k - 1, top, mul(Y, T[top]), chosen, out, find_all)
            chosen.pop()
            if done:
                return True
        return False

    def search_top(self, q, top, find_all):
        """Subsets of size q whose largest element is `top`."""
        out = []
        self._rec(q - 1, top, self.rep.mul(self.target, self.T[top]), [top], out, find_all)
        return out

    def search(self, q, find_all=False, threads=1):
        if q > self.p:
            return []
        if threads > 1 and q > self.tail + 1 and comb(self.p, q) >= PARALLEL_THRESHOLD:
            return self._search_parallel(q, find_all, threads)
        out = []
        self._rec(q, self.p, self.target, [], out, find_all)
        return out

    def _search_parallel(self, q, find_all, threads):
        # results are consumed in `top` order, so the outcome matches the serial scan
        out = []
        tops = range(q - 1, self.p)
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker,
                                 initargs=(self,)) as pool:
            for hits, tested in pool.map(_worker_top, tops, [q] * len(tops),
                                         [find_all] * len(tops)):
                self._count(tested)
                out.extend(hits)
                if hits and not find_all:
                    pool.shutdown(cancel_futures=True)
                    break
        return out


_worker_kernel = None


def _init_worker(kernel):
    global _worker_kernel
    _worker_kernel = kernel


def _worker_top(top, q, find_all):
    k = _worker_kernel
    k.tested = 0
    hits = k.search_top(q, top, find_all)
    return hits, k.tested


def _tits_search(word, sys, q, limits, find_all, tested):
    out = []
    for sub in colex_subsets(len(word), q):
        tested[0] += 1
        if tested[0] > limits.max_subsets:
            raise SubsetBudgetExceeded(f"tested more than {limits.max_subsets} subsets")
        if rewriting.is_identity(delete_positions(word, sub), sys, limits):
            out.append(sub)
            if not find_all:
                break
    return out


def _check_oracle(oracle):
    if oracle not in ORACLES:
        raise ValueError(f"oracle must be one of {ORACLES}, got {oracle!r}")


def _scan(s, sys, limits, oracle, threads, q_values, find_all):
    """Yield (q, hits) for each q tried until one has hits."""
    if oracle == "tits":
        tested = [0]
        try:
            for q in q_values:
                hits = _tits_search(s, sys, q, limits, find_all, tested)
                if hits:
                    return q, hits
        finally:
            stats.add("subsets_tested", tested[0])
        return None, []
    kernel = _Kernel(representation(sys), s, limits)
    try:
        for q in q_values:
            hits = kernel.search(q, find_all, threads)
            if hits:
                if oracle == "both":
                    for h in hits:
                        if not rewriting.is_identity(delete_positions(s, h), sys, limits):
                            raise AssertionError(f"oracles disagree on deletion set {h} of {s}")
                return q, hits
    finally:
        stats.add("subsets_tested", kernel.tested)
    return None, []


def reflection_length(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS,
                      *, oracle: str = "matrix", threads: int = 1) -> ReflectionLength:
    _check_oracle(oracle)
    s = rewriting.reduced_word(w, sys, limits)
    if not s:
        return ReflectionLength(0, (), s)
    cap = universal_reflection_length(s)
    if sys.is_universal:
        q_values = [cap]
    else:
        q_values = range(len(s) % 2, cap + 1, 2)
    q, hits = _scan(s, sys, limits, oracle, threads, q_values, find_all=False)
    if q is None:
        raise AssertionError(f"no deletion set of size <= {cap} for reduced word {s}")
    return ReflectionLength(q, hits[0], s)


def all_deletion_sets(w: Word, sys: CoxeterSystem, q: Optional[int] = None,
                      limits: SearchLimits = DEFAULT_LIMITS, *, oracle: str = "matrix",
                      threads: int = 1) -> list:
    """Every q-subset of positions of reduce(w) whose deletion gives the identity, colex order.

    With q=None the reflection length is computed first.
    """
    _check_oracle(oracle)
    s = rewriting.reduced_word(w, sys, limits)
    if q is None:
        q = reflection_length(s, sys, limits, oracle=oracle, threads=threads).length
    _, hits = _scan(s, sys, limits, oracle, threads, [q], find_all=True)
    return hits


@dataclass
class ReflectionFactorization:
    """Palindromes r_i for i in the deletion set, ascending by i.

    The element equals the product taken in descending order, see ``product_word``.
    """

    reflections: list = field(default_factory=list)

    def product_word(self) -> Word:
        return tuple(x for r in reversed(self.reflections) for x in r)


def reflection_factorization(w: Word, d, sys: CoxeterSystem,
                             limits: SearchLimits = DEFAULT_LIMITS) -> ReflectionFactorization:
    w = tuple(w)
    d = tuple(sorted(d))
    if any(not 0 <= i < len(w) for i in d):
        raise NotADeletionSet(f"positions {d} out of range for a word of length {len(w)}")
    if not rewriting.is_identity(delete_positions(w, d), sys, limits):
        raise NotADeletionSet(f"deleting {d} from {w} does not give the identity")
    refl = [w[:i] + (w[i],) + w[:i][::-1] for i in d]
    fac = ReflectionFactorization(refl)
    lhs = rewriting.canonical_form(fac.product_word(), sys, limits)
    if lhs != rewriting.canonical_form(w, sys, limits):
        raise AssertionError("reflection factorization does not multiply back to w")
    return fac


def verify_after_dyer(w: Word, d, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS,
                      *, seed: int = 0, samples: int = 256) -> bool:
    """Check l_R(w minus N) = |d| - |N| for proper subsets N of the deletion set d.

    Exhaustive when |d| <= limits.after_dyer_max, otherwise a seeded sample.
    """
    w = tuple(w)
    d = tuple(sorted(d))
    if not rewriting.is_identity(delete_positions(w, d), sys, limits):
        raise NotADeletionSet(f"deleting {d} from {w} does not give the identity")
    q = len(d)
    if q <= limits.after_dyer_max:
        subsets = (N for size in range(q) for N in combinations(d, size))
    else:
        rng = random.Random(seed)
        subsets = [()] + [tuple(sorted(rng.sample(d, rng.randrange(q)))) for _ in range(samples)]
    for N in subsets:
        got = reflection_length(delete_positions(w, N), sys, limits).length
        if got != q - len(N):
            log.info("after-Dyer fails for N=%s: length %d, expected %d", N, got, q - len(N))
            return False
    return True


def lower_bound_theorem2(w: Word, sys: CoxeterSystem, d,
                         limits: SearchLimits = DEFAULT_LIMITS) -> int:
    """l_Rn(w) - 2 * (fewest braid-moves taking w minus d to the identity).

    ``d`` indexes into ``w`` exactly as given; when |d| is the reflection
    length of w this is a lower bound for it.
    """
    w = tuple(w)
    deleted = delete_positions(w, d)
    if not rewriting.is_identity(deleted, sys, limits):
        raise NotADeletionSet(f"deleting {tuple(d)} from {w} does not give the identity")
    m = rewriting.minimal_braid_moves_to_identity(deleted, sys, limits)
    return universal_reflection_length(w, sys.rank) - 2 * m


def equality_criterion(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS) -> bool:
    """True when no word braid-equivalent to w contains a (s_i s_j)^m_ij subword.

    The word is taken as given, so an unreduced word that spells out a
    relation is rejected; for reduced w this is the condition on all
    reduced expressions. When it holds, l_R(w) equals the universal length of w.
    """
    return not rewriting.orbit_has_relation_subword(tuple(w), sys, limits)


@dataclass
class ConjectureReport:
    verdict: bool
    witnesses: list
    reflection_length: int
    universal_length: int
    word_is_reduced: bool


def conjecture_scan(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS,
                    *, oracle: str = "matrix") -> ConjectureReport:
    """Positions whose omission lowers both l_R and l_Rn by exactly one.

    Positions refer to w as given; the statement is about reduced
    expressions, which ``word_is_reduced`` records.
    """
    w = tuple(w)
    lr = reflection_length(w, sys, limits, oracle=oracle).length
    lrn = universal_reflection_length(w, sys.rank)
    witnesses = []
    for i in range(len(w)):
        v = w[:i] + w[i + 1:]
        if universal_reflection_length(v) != lrn - 1:
            continue
        if reflection_length(v, sys, limits, oracle=oracle).length == lr - 1:
            witnesses.append(i)
    return ConjectureReport(bool(witnesses), witnesses, lr, lrn,
                            rewriting.is_reduced(w, sys, limits))
