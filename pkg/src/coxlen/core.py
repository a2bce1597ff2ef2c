"""Coxeter presentations, words and the shared error/limit types."""

from __future__ import annotations

import hashlib
import json
import math
import re
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

INF = math.inf

Word = tuple  # tuple[int, ...] of 1-based generator indices
Label = Union[int, float]


class CoxlenError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CoxlenError, ValueError):
    pass


class InvalidMatrix(ParseError):
    pass


class BudgetExceeded(CoxlenError):
    """A search ran past one of the configured SearchLimits."""


class OrbitLimitExceeded(BudgetExceeded):
    pass


class SubsetBudgetExceeded(BudgetExceeded):
    pass


class NotIdentity(CoxlenError, ValueError):
    pass


class NotADeletionSet(CoxlenError, ValueError):
    pass


@dataclass(frozen=True)
class SearchLimits:
    max_orbit: int = 2_000_000
    max_subsets: int = 200_000_000
    max_cache: int = 1_000_000
    after_dyer_max: int = 10

    def __post_init__(self):
        for name in ("max_orbit", "max_subsets", "max_cache", "after_dyer_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


DEFAULT_LIMITS = SearchLimits()


class Stats:
    """Process-wide work counters, reset by the CLI around each command."""

    _fields = ("subsets_tested", "orbit_states", "cache_hits")

    def __init__(self):
        self._lock = threading.Lock()
        self.reset()

    def reset(self):
        with self._lock:
            for f in self._fields:
                setattr(self, f, 0)

    def add(self, name: str, amount: int = 1):
        with self._lock:
            setattr(self, name, getattr(self, name) + amount)

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in self._fields}


stats = Stats()


@dataclass(frozen=True)
class CoxeterSystem:
    """A Coxeter matrix. Entries are ints, with ``INF`` for missing relations.

    Generators are numbered ``1..rank`` everywhere in the public API.
    """

    matrix: tuple
    rank: int = field(init=False)

    def __post_init__(self):
        rows = tuple(tuple(_label(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "rank", len(rows))
        _validate(rows)

    def m(self, i: int, j: int) -> Label:
        """Label m_ij for 1-based generator indices."""
        return self.matrix[i - 1][j - 1]

    @property
    def labels(self) -> set:
        n = self.rank
        return {self.matrix[i][j] for i in range(n) for j in range(n) if i != j}

    @property
    def is_universal(self) -> bool:
        return all(x == INF for x in self.labels)

    def single_label(self):
        """The common off-diagonal label if the system is single braided, else None."""
        labels = self.labels
        if len(labels) == 1:
            (k,) = labels
            return k
        return None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "matrix": [[0 if x == INF else int(x) for x in row] for row in self.matrix],
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_json()["matrix"], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def __str__(self):
        rows = [" ".join("inf" if x == INF else str(x) for x in row) for row in self.matrix]
        return "; ".join(rows)


def _label(x) -> Label:
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        x = int(x)
    if isinstance(x, float):
        if x == INF:
            return INF
        if not x.is_integer():
            raise InvalidMatrix(f"non-integer label {x!r}")
        return int(x)
    if isinstance(x, bool) or not isinstance(x, int):
        raise InvalidMatrix(f"bad label {x!r}")
    return x


def _validate(rows):
    n = len(rows)
    if n < 1:
        raise InvalidMatrix("rank must be at least 1")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InvalidMatrix(f"row {i + 1} has {len(row)} entries, expected {n}")
    for i in range(n):
        if rows[i][i] != 1:
            raise InvalidMatrix(f"diagonal entry ({i + 1},{i + 1}) must be 1")
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise InvalidMatrix(f"matrix is not symmetric at ({i + 1},{j + 1})")
            if rows[i][j] < 2:
                raise InvalidMatrix(f"off-diagonal entry ({i + 1},{j + 1}) must be >= 2 or inf")


def from_matrix(matrix, *, zero_is_inf=False) -> CoxeterSystem:
    if zero_is_inf:
        matrix = [[INF if x == 0 else x for x in row] for row in matrix]
    return CoxeterSystem(tuple(tuple(row) for row in matrix))


def universal(n: int) -> CoxeterSystem:
    return single(n, INF)


def single(n: int, k: Label) -> CoxeterSystem:
    if n < 1:
        raise InvalidMatrix("rank must be at least 1")
    if k != INF and k < 2:
        raise InvalidMatrix("single braided label must be >= 2")
    return CoxeterSystem(tuple(tuple(1 if i == j else k for j in range(n)) for i in range(n)))


def triangle(p: Label, q: Label, r: Label) -> CoxeterSystem:
    """Rank 3 with m_12 = p, m_13 = q, m_23 = r."""
    return CoxeterSystem(((1, p, q), (p, 1, r), (q, r, 1)))


def _int_arg(tok: str, what: str) -> Label:
    tok = tok.strip()
    if tok.lower() in ("inf", "infinity", "oo"):
        return INF
    if not re.fullmatch(r"\d+", tok):
        raise ParseError(f"{what}: expected an integer, got {tok!r}")
    return int(tok)


def parse_group(text: str) -> CoxeterSystem:
    """Parse ``universal:n``, ``single:n:k``, ``triangle:p:q:r`` or a JSON matrix object."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON group: {exc}") from None
        if not isinstance(obj, dict) or "matrix" not in obj:
            raise ParseError("JSON group must be an object with a 'matrix' field")
        try:
            sys = from_matrix(obj["matrix"], zero_is_inf=True)
        except TypeError:
            raise ParseError("JSON matrix must be a list of lists of integers") from None
        if "rank" in obj and obj["rank"] != sys.rank:
            raise InvalidMatrix(f"rank {obj['rank']} does not match matrix size {sys.rank}")
        return sys

    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    if kind == "universal" and len(args) == 1:
        n = _int_arg(args[0], "rank")
        if n == INF or n < 1:
            raise ParseError("rank must be a positive integer")
        return universal(n)
    if kind == "single" and len(args) == 2:
        n = _int_arg(args[0], "rank")
        if n == INF or n < 1:
            raise ParseError("rank must be a positive integer")
        return single(n, _int_arg(args[1], "label"))
    if kind == "triangle" and len(args) == 3:
        return triangle(*(_int_arg(a, "label") for a in args))
    raise ParseError(f"unrecognised group spec {text!r}")


_TOKEN = re.compile(r"[sS]?(\d+)")


def parse_word(text: str, sys: CoxeterSystem) -> Word:
    letters = []
    for tok in text.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise ParseError(f"bad word token {tok!r}")
        letters.append(int(m.group(1)))
    return check_word(letters, sys)


def check_word(letters: Iterable[int], sys: CoxeterSystem) -> Word:
    w = tuple(letters)
    for x in w:
        if not 1 <= x <= sys.rank:
            raise ParseError(f"generator {x} out of range 1..{sys.rank}")
    return w


def render_word(w: Sequence[int]) -> str:
    return " ".join(str(x) for x in w)


def coxeter_power_word(n: int, lam: int, r: int = 0) -> Word:
    """(s_1 ... s_n)^lam s_1 ... s_r."""
    if isinstance(n, CoxeterSystem):
        n = n.rank
    if lam < 0 or not 0 <= r <= n:
        raise ValueError(f"need lam >= 0 and 0 <= r <= n, got lam={lam}, r={r}")
    return tuple(range(1, n + 1)) * lam + tuple(range(1, r + 1))


def delete_positions(w: Sequence[int], positions: Iterable[int]) -> Word:
    drop = set(positions)
    return tuple(x for i, x in enumerate(w) if i not in drop)
