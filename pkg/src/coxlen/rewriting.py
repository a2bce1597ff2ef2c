"""Nil-moves, braid-moves and Tits' solution to the word problem.

Words are tuples of 1-based generator indices. Every search here only
visits words of non-increasing length, so the state space of a query is
bounded by the words of length at most ``len(w)``.
"""

from __future__ import annotations

import threading
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .core import (
    DEFAULT_LIMITS,
    INF,
    CoxeterSystem,
    NotIdentity,
    OrbitLimitExceeded,
    SearchLimits,
    Word,
    stats,
)

NIL = "nil"
BRAID = "braid"
_KIND_ORDER = {NIL: 0, BRAID: 1}


class Move(NamedTuple):
    kind: str
    position: int
    pair: Optional[tuple] = None  # (i, j) for a braid-move b_ij -> b_ji

    def __str__(self):
        if self.kind == NIL:
            return f"nil@{self.position}"
        return f"braid@{self.position}({self.pair[0]},{self.pair[1]})"


@dataclass
class MoveTrace:
    moves: list = field(default_factory=list)

    @property
    def braid_count(self) -> int:
        return sum(1 for mv in self.moves if mv.kind == BRAID)

    def replay(self, w: Word, sys: CoxeterSystem) -> Word:
        for mv in self.moves:
            w = apply_move(w, mv, sys)
        return w


def _alternating(a: int, b: int, length: int) -> Word:
    return tuple(a if k % 2 == 0 else b for k in range(length))


def _braid_at(w: Word, i: int, sys: CoxeterSystem):
    """The (label, pair) of the braid-move starting at i, or None."""
    if i + 1 >= len(w):
        return None
    a, b = w[i], w[i + 1]
    if a == b:
        return None
    m = sys.matrix[a - 1][b - 1]
    if m == INF or i + m > len(w):
        return None
    for k in range(2, m):
        if w[i + k] != (a if k % 2 == 0 else b):
            return None
    return m, (a, b)


def applicable_moves(w: Word, sys: CoxeterSystem) -> list:
    moves = []
    for i in range(len(w) - 1):
        if w[i] == w[i + 1]:
            moves.append(Move(NIL, i))
        else:
            hit = _braid_at(w, i, sys)
            if hit:
                moves.append(Move(BRAID, i, hit[1]))
    return moves


def apply_move(w: Word, mv: Move, sys: CoxeterSystem) -> Word:
    i = mv.position
    if mv.kind == NIL:
        if not (0 <= i < len(w) - 1 and w[i] == w[i + 1]):
            raise ValueError(f"nil-move not applicable at {i}")
        return w[:i] + w[i + 2:]
    hit = _braid_at(w, i, sys) if 0 <= i else None
    if hit is None or (mv.pair is not None and hit[1] != tuple(mv.pair)):
        raise ValueError(f"braid-move {mv} not applicable")
    m, (a, b) = hit
    return w[:i] + _alternating(b, a, m) + w[i + m:]


def _braid_neighbours(w: Word, sys: CoxeterSystem):
    for i in range(len(w) - 1):
        hit = _braid_at(w, i, sys)
        if hit:
            m, (a, b) = hit
            yield Move(BRAID, i, (a, b)), w[:i] + _alternating(b, a, m) + w[i + m:]


def _has_square(w: Word) -> int:
    for i in range(len(w) - 1):
        if w[i] == w[i + 1]:
            return i
    return -1


def free_reduce(w: Word, trace: Optional[MoveTrace] = None) -> Word:
    """Apply nil-moves to a fixpoint (stack cancellation)."""
    stack = []
    for x in w:
        if stack and stack[-1] == x:
            if trace is not None:
                trace.moves.append(Move(NIL, len(stack) - 1))
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class _LRU:
    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self._data = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            try:
                self._data.move_to_end(key)
            except KeyError:
                return None
            return self._data[key]

    def put(self, key, value):
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


_cache = _LRU(DEFAULT_LIMITS.max_cache)


def clear_cache():
    _cache.clear()


def _find_reducible(w: Word, sys: CoxeterSystem, limits: SearchLimits, want_path: bool):
    """BFS over the braid orbit of a square-free word.

    Returns (word, path) for the first orbit member admitting a nil-move, or
    (None, None) if the whole orbit is square-free (w is reduced).
    """
    parent = {w: None}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        for mv, v in _braid_neighbours(u, sys):
            if v in parent:
                continue
            parent[v] = (u, mv) if want_path else None
            if len(parent) > limits.max_orbit:
                stats.add("orbit_states", len(parent))
                raise OrbitLimitExceeded(
                    f"braid orbit exceeded {limits.max_orbit} states at length {len(w)}"
                )
            if _has_square(v) >= 0:
                stats.add("orbit_states", len(parent))
                path = []
                if want_path:
                    x = v
                    while parent[x] is not None:
                        x, step = parent[x]
                        path.append(step)
                    path.reverse()
                return v, path
            queue.append(v)
    stats.add("orbit_states", len(parent))
    return None, None


def reduce(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS, *, trace=True):
    """Reduce w to an S-reduced word with a braid-minimalistic schedule.

    Returns ``(reduced_word, MoveTrace)``; the trace is None if ``trace=False``.
    """
    w = tuple(w)
    t = MoveTrace() if trace else None
    if not trace:
        key = (sys, free_reduce(w))
        hit = _cache.get(key)
        if hit is not None:
            stats.add("cache_hits")
            return hit, None
    if _cache.maxsize != limits.max_cache:
        _cache.maxsize = limits.max_cache
    cur = free_reduce(w, t)
    while cur:
        nxt, path = _find_reducible(cur, sys, limits, trace)
        if nxt is None:
            break
        if t is not None:
            t.moves.extend(path)
        cur = free_reduce(nxt, t)
    if not trace:
        _cache.put(key, cur)
    return cur, t


def reduced_word(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS) -> Word:
    return reduce(w, sys, limits, trace=False)[0]


def is_identity(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS) -> bool:
    return not reduced_word(w, sys, limits)


def is_reduced(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS) -> bool:
    return len(reduced_word(w, sys, limits)) == len(w)


def braid_orbit(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS) -> set:
    """Closure of {w} under braid-moves."""
    w = tuple(w)
    seen = {w}
    queue = deque([w])
    while queue:
        u = queue.popleft()
        for _, v in _braid_neighbours(u, sys):
            if v not in seen:
                seen.add(v)
                if len(seen) > limits.max_orbit:
                    raise OrbitLimitExceeded(f"braid orbit exceeded {limits.max_orbit} states")
                queue.append(v)
    stats.add("orbit_states", len(seen))
    return seen


def canonical_form(w: Word, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS) -> Word:
    """Shortlex-least reduced expression of the element; a complete invariant."""
    return min(braid_orbit(reduced_word(w, sys, limits), sys, limits))


def minimal_braid_moves_to_identity(w: Word, sys: CoxeterSystem,
                                    limits: SearchLimits = DEFAULT_LIMITS) -> int:
    """Fewest braid-moves in any move sequence taking w to the empty word.

    0-1 BFS: nil-moves cost 0, braid-moves cost 1.
    """
    w = tuple(w)
    if not is_identity(w, sys, limits):
        raise NotIdentity(f"word {w} does not represent the identity")
    dist = {w: 0}
    dq = deque([(0, w)])
    while dq:
        d, u = dq.popleft()
        if d > dist[u]:
            continue
        if not u:
            stats.add("orbit_states", len(dist))
            return d
        for mv in applicable_moves(u, sys):
            v = apply_move(u, mv, sys)
            cost = d + (mv.kind == BRAID)
            if cost < dist.get(v, cost + 1):
                dist[v] = cost
                if len(dist) > limits.max_orbit:
                    raise OrbitLimitExceeded(f"move graph exceeded {limits.max_orbit} states")
                if mv.kind == NIL:
                    dq.appendleft((cost, v))
                else:
                    dq.append((cost, v))
    raise AssertionError("identity word never reached the empty word")


def contains_braid_power_subword(w: Word, sys: CoxeterSystem):
    """First ordered pair (i, j) such that (s_i s_j)^m_ij is a subsequence of w."""
    n = sys.rank
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            m = sys.m(i, j)
            if m == INF:
                continue
            need = 2 * m
            k = 0
            for x in w:
                if x == (i if k % 2 == 0 else j):
                    k += 1
                    if k == need:
                        return (i, j)
    return None


def orbit_has_relation_subword(w: Word, sys: CoxeterSystem,
                               limits: SearchLimits = DEFAULT_LIMITS) -> bool:
    return any(contains_braid_power_subword(u, sys) for u in braid_orbit(w, sys, limits))
