"""Self-check suites run by ``coxlen verify``."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from . import formulas, rewriting
from .core import DEFAULT_LIMITS, INF, CoxeterSystem, SearchLimits, coxeter_power_word
from .reflength import reflection_length, universal_reflection_length, verify_after_dyer
from .twisted import generate_decomposed, verify_middle_deletion

SUITES = ("invariants", "table1", "bounds", "twisted")

# lambda -> l_R((s1 s2 s3)^lambda) in the (3,3,4) triangle group
TABLE1 = {2: 4, 3: 3, 4: 4, 5: 5, 6: 4, 7: 5, 8: 4}
TABLE1_EXTENDED = {9: 5, 10: 6, 11: 5, 12: 6, 15: 7}


@dataclass
class SuiteReport:
    suite: str
    passed: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def fail(self, msg):
        self.passed = False
        self.failures.append(msg)

    def to_json(self):
        return asdict(self)


def random_word(rng: random.Random, n: int, max_len: int):
    return tuple(rng.randint(1, n) for _ in range(rng.randint(0, max_len)))


def invariants(sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS, *,
               cases: int = 200, seed: int = 0, max_len: int = 10) -> SuiteReport:
    rep = SuiteReport("invariants")
    rng = random.Random(seed)
    n = sys.rank
    for _ in range(cases):
        w = random_word(rng, n, max_len)
        res = reflection_length(w, sys, limits)
        ls = len(res.word)
        lrn = universal_reflection_length(res.word)
        rep.checked += 1
        if (res.length - ls) % 2:
            rep.fail(f"parity: {w} has l_R={res.length}, l_S={ls}")
        if res.length > ls:
            rep.fail(f"l_R > l_S for {w}")
        if res.length > lrn:
            rep.fail(f"l_R > universal length for {w}")
        if sys.is_universal and res.length != lrn:
            rep.fail(f"universal system: l_R={res.length} but table gives {lrn} for {w}")
    if n >= 2:
        for lam in range(5):
            for r in range(1, n + 1):
                w = coxeter_power_word(n, lam, r)
                want = lam * (n - 2) + r
                got = universal_reflection_length(w)
                rep.checked += 1
                if got != want or formulas.universal_power_length(n, lam, r) != want:
                    rep.fail(f"power grid n={n} lam={lam} r={r}: got {got}, want {want}")
                if sys.is_universal and reflection_length(w, sys, limits).length != want:
                    rep.fail(f"power grid search n={n} lam={lam} r={r} differs from {want}")
        rep.notes.append(f"power grid checked for n={n}, lambda 0..4")
    return rep


def is_table1_group(sys: CoxeterSystem) -> bool:
    if sys.rank != 3:
        return False
    return sorted((sys.m(1, 2), sys.m(1, 3), sys.m(2, 3))) == [3, 3, 4]


def table1(sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS, *,
           extended: bool = False, threads: int = 1) -> SuiteReport:
    rep = SuiteReport("table1")
    if not is_table1_group(sys):
        rep.fail(f"table1 needs the (3,3,4) triangle group up to relabelling, got {sys}")
        return rep
    expected = dict(TABLE1)
    if extended:
        expected.update(TABLE1_EXTENDED)
    for lam, want in sorted(expected.items()):
        got = reflection_length(coxeter_power_word(3, lam), sys, limits, threads=threads).length
        rep.checked += 1
        if got != want:
            rep.fail(f"lambda={lam}: got {got}, table has {want}")
    return rep


def bounds(sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS, *,
           lam_max: int = 5, threads: int = 1) -> SuiteReport:
    """Computed length against the closed-form upper and lower bounds.

    Cells where the upper bound is not attained are listed in ``notes``.
    """
    rep = SuiteReport("bounds")
    k = sys.single_label()
    n = sys.rank
    if k is None or n < 3 or (k != INF and k < 3):
        rep.fail(f"bounds needs a single-braided system of rank >= 3 with label >= 3, got {sys}")
        return rep
    strict = 0
    for lam in range(lam_max + 1):
        for r in range(1, n + 1):
            got = reflection_length(coxeter_power_word(n, lam, r), sys, limits,
                                    threads=threads).length
            up = formulas.upper_bound(n, k, lam, r)
            lo = formulas.power_lower_bound(n, k, lam, r)
            rep.checked += 1
            if got > up:
                rep.fail(f"lambda={lam} r={r}: length {got} exceeds upper bound {up}")
            if got < lo:
                rep.fail(f"lambda={lam} r={r}: length {got} below lower bound {lo}")
            if got < up:
                strict += 1
                rep.notes.append(f"lambda={lam} r={r}: length {got} < upper bound {up}")
    rep.notes.append(f"{rep.checked - strict} of {rep.checked} cells attain the upper bound")
    return rep


def twisted(sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS, *,
            count: int = 1000, max_depth: int = 4, seed: int = 0) -> SuiteReport:
    """Middle-letter deletion on generated twisted palindromes over the rank of sys."""
    rep = SuiteReport("twisted")
    n = sys.rank
    if n < 2:
        rep.fail("twisted palindromes need rank >= 2")
        return rep
    per = [count // max_depth + (1 if d < count % max_depth else 0) for d in range(max_depth)]
    for d, num in enumerate(per, start=1):
        for tp in generate_decomposed(n, d, seed + d, num):
            rep.checked += 1
            if not verify_middle_deletion(tp):
                rep.fail(" ".join(map(str, tp.word())))
    return rep


def run_suite(name: str, sys: CoxeterSystem, limits: SearchLimits = DEFAULT_LIMITS,
              **kw) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = {"invariants": invariants, "table1": table1, "bounds": bounds, "twisted": twisted}[name]
    return fn(sys, limits, **kw)


def check_move_invariance(w, sys, limits: SearchLimits = DEFAULT_LIMITS) -> bool:
    """Every applicable move leaves the reduced form unchanged."""
    base = rewriting.reduced_word(w, sys, limits)
    canon = rewriting.canonical_form(base, sys, limits)
    for mv in rewriting.applicable_moves(tuple(w), sys):
        v = rewriting.apply_move(tuple(w), mv, sys)
        if rewriting.canonical_form(v, sys, limits) != canon:
            return False
    return True


def check_after_dyer(w, sys, limits: SearchLimits = DEFAULT_LIMITS) -> bool:
    res = reflection_length(w, sys, limits)
    return verify_after_dyer(res.word, res.witness, sys, limits)
