"""coxlen command-line interface."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import re
import sys as _sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import formulas, rewriting, verify
from .cache import ResultCache
from .core import (
    INF,
    BudgetExceeded,
    CoxeterSystem,
    CoxlenError,
    ParseError,
    SearchLimits,
    check_word,
    coxeter_power_word,
    parse_group,
    parse_word,
    render_word,
    stats,
)
from .reflength import (
    ORACLES,
    all_deletion_sets,
    conjecture_scan,
    lower_bound_theorem2,
    reflection_factorization,
    reflection_length,
)
from .twisted import generate_twisted_palindromes

log = logging.getLogger("coxlen")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

_POWER = re.compile(r"\((\d+)\)\^(\d+)")


@dataclass
class RunConfig:
    group: CoxeterSystem
    group_text: str
    format: str = "plain"
    limits: SearchLimits = field(default_factory=SearchLimits)
    threads: int = 1
    cache_path: Optional[str] = None

    def __post_init__(self):
        if self.threads < 1:
            raise ParseError("--threads must be >= 1")


@dataclass
class Outcome:
    input: dict
    result: dict
    plain: list
    csv_header: list = field(default_factory=list)
    csv_rows: list = field(default_factory=list)
    code: int = EXIT_OK


def expand_word(text: str, sys: CoxeterSystem):
    """Letters from tokens like ``1 s2 (123)^4``; each digit inside a power group is a letter."""
    letters = []
    for tok in text.split():
        m = _POWER.fullmatch(tok)
        if m:
            letters.extend(int(ch) for ch in m.group(1) * int(m.group(2)))
        else:
            letters.extend(parse_word(tok, sys))
    return check_word(letters, sys)


# -- cached lookups --------------------------------------------------------

def _canonical(word, cfg):
    try:
        return rewriting.canonical_form(word, cfg.group, cfg.limits)
    except BudgetExceeded:
        return None


def _length(word, cfg, cache, oracle="matrix"):
    """Reflection length of an element, consulting the result cache when present."""
    s = rewriting.reduced_word(word, cfg.group, cfg.limits)
    key = _canonical(s, cfg) if cache is not None else None
    if key is not None:
        hit = cache.get(cfg.group, key, "reflection_length")
        if hit is not None:
            return int(hit), s
    q = reflection_length(s, cfg.group, cfg.limits, oracle=oracle, threads=cfg.threads).length
    if key is not None:
        cache.put(cfg.group, key, reflection_length=q)
    return q, s


# -- commands --------------------------------------------------------------

def cmd_reduce(args, cfg, cache):
    w = expand_word(args.word, cfg.group)
    red, trace = rewriting.reduce(w, cfg.group, cfg.limits)
    nil = len(trace.moves) - trace.braid_count
    if cache is not None:
        key = _canonical(red, cfg)
        if key is not None:
            cache.put(cfg.group, key, is_identity=not red)
    result = {
        "reduced_word": list(red),
        "length": len(red),
        "is_identity": not red,
        "braid_count": trace.braid_count,
        "nil_count": nil,
    }
    if args.trace:
        result["moves"] = [str(mv) for mv in trace.moves]
    plain = [render_word(red) if red else "(identity)",
             f"length={len(red)} braid_count={trace.braid_count} nil_count={nil}"]
    if args.trace:
        plain += result["moves"]
    return Outcome({"word": list(w)}, result, plain)


def cmd_reflen(args, cfg, cache):
    w = expand_word(args.word, cfg.group)
    if args.witness or args.all:
        res = reflection_length(w, cfg.group, cfg.limits, oracle=args.oracle, threads=cfg.threads)
        q, s = res.length, res.word
    else:
        q, s = _length(w, cfg, cache, args.oracle)
    result = {"reflection_length": q, "reduced_word": list(s)}
    plain = [str(q)]
    if args.witness:
        fac = reflection_factorization(s, res.witness, cfg.group, cfg.limits)
        result["witness"] = list(res.witness)
        result["reflections"] = [list(r) for r in fac.reflections]
        plain.append(f"reduced word: {render_word(s)}")
        plain.append(f"witness: {' '.join(map(str, res.witness))}")
    if args.all:
        sets = all_deletion_sets(s, cfg.group, q, cfg.limits, oracle=args.oracle,
                                 threads=cfg.threads)
        bounds = [lower_bound_theorem2(s, cfg.group, d, cfg.limits) for d in sets]
        result["deletion_sets"] = [list(d) for d in sets]
        result["deletion_set_bounds"] = bounds
        result["deletion_set_bound_max"] = max(bounds) if bounds else 0
        if not args.witness:
            plain.append(f"reduced word: {render_word(s)}")
        plain.append(f"{len(sets)} deletion sets (positions are 0-based):")
        plain += [f"  {' '.join(map(str, d))}  lower bound {b}" for d, b in zip(sets, bounds)]
    return Outcome({"word": list(w)}, result, plain,
                   ["reflection_length"], [[q]])


def cmd_powers_table(args, cfg, cache):
    n = cfg.group.rank
    if args.max < 1:
        raise ParseError("--max must be >= 1")
    rows = []
    for lam in range(1, args.max + 1):
        q, _ = _length(coxeter_power_word(n, lam), cfg, cache)
        rows.append({"lambda": lam, "reflection_length": q})
    plain = [f"{r['lambda']}: {r['reflection_length']}" for r in rows]
    return Outcome({"lambda_max": args.max}, {"rows": rows}, plain,
                   ["lambda", "reflection_length"],
                   [[r["lambda"], r["reflection_length"]] for r in rows])


def cmd_bounds(args, cfg, cache):
    sys = cfg.group
    k = sys.single_label()
    if k is None or sys.rank < 3 or (k != INF and k < 3):
        raise ParseError("bounds needs a single-braided group single:n:k with n >= 3 and k >= 3")
    try:
        report = formulas.bound_report(sys.rank, k, args.lam, args.r)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if not args.no_compute:
        report.computed, _ = _length(coxeter_power_word(sys.rank, args.lam, args.r), cfg, cache)
    result = report.to_json()
    plain = [f"upper {report.upper}", f"lower {report.lower}",
             f"universal {report.exact_universal}",
             f"unbounded_condition {str(report.unbounded_condition_met).lower()}"]
    if report.computed is not None:
        plain.append(f"computed {report.computed}")
    return Outcome({"lambda": args.lam, "r": args.r}, result, plain)


def cmd_conjecture_scan(args, cfg, cache):
    if args.batch:
        words = generate_twisted_palindromes(cfg.group.rank, args.depth, args.seed, args.batch)
        false = []
        for w in words:
            if not conjecture_scan(w, cfg.group, cfg.limits).verdict:
                false.append(list(w))
        result = {"count": len(words), "verdict_true": len(words) - len(false),
                  "verdict_false": false}
        plain = [f"{len(words) - len(false)}/{len(words)} verdicts true"]
        plain += [f"false: {render_word(w)}" for w in false]
        inp = {"batch": args.batch, "depth": args.depth, "seed": args.seed}
        return Outcome(inp, result, plain)
    if args.word is None:
        raise ParseError("conjecture-scan needs -w/--word or --batch")
    w = expand_word(args.word, cfg.group)
    rep = conjecture_scan(w, cfg.group, cfg.limits)
    result = {"verdict": rep.verdict, "witnesses": rep.witnesses,
              "reflection_length": rep.reflection_length,
              "universal_length": rep.universal_length,
              "word_is_reduced": rep.word_is_reduced}
    plain = [f"verdict {str(rep.verdict).lower()}",
             f"witnesses {' '.join(map(str, rep.witnesses)) or '-'}",
             f"l_R={rep.reflection_length} l_Rn={rep.universal_length}"]
    if not rep.word_is_reduced:
        plain.append("note: the word is not S-reduced")
    return Outcome({"word": list(w)}, result, plain)


def cmd_verify(args, cfg, cache):
    kw = {}
    if args.suite == "invariants":
        kw = {"cases": args.cases, "seed": args.seed}
    elif args.suite == "table1":
        kw = {"extended": args.extended, "threads": cfg.threads}
    elif args.suite == "bounds":
        kw = {"lam_max": args.lam_max, "threads": cfg.threads}
    elif args.suite == "twisted":
        kw = {"count": args.count, "seed": args.seed}
    rep = verify.run_suite(args.suite, cfg.group, cfg.limits, **kw)
    status = "PASS" if rep.passed else "FAIL"
    plain = [f"{status} {args.suite}: {rep.checked} checked, {len(rep.failures)} failed"]
    plain += [f"  fail: {f}" for f in rep.failures[:50]]
    plain += [f"  note: {x}" for x in rep.notes]
    return Outcome({"suite": args.suite}, rep.to_json(), plain,
                   ["suite", "passed", "checked", "failed"],
                   [[args.suite, rep.passed, rep.checked, len(rep.failures)]],
                   EXIT_OK if rep.passed else EXIT_VERIFY)


COMMANDS = {
    "reduce": cmd_reduce,
    "reflen": cmd_reflen,
    "powers-table": cmd_powers_table,
    "bounds": cmd_bounds,
    "conjecture-scan": cmd_conjecture_scan,
    "verify": cmd_verify,
}


# -- argument parsing ------------------------------------------------------

def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    d = SearchLimits()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-g", "--group", required=True,
                        help="universal:n, single:n:k, triangle:p:q:r or a JSON matrix object")
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--max-orbit", type=_positive, default=d.max_orbit)
    common.add_argument("--max-subsets", type=_positive, default=d.max_subsets)
    common.add_argument("--max-cache", type=_positive, default=d.max_cache)
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--cache", default=os.environ.get("COXLEN_CACHE"),
                        help="JSON-lines result cache (default: $COXLEN_CACHE)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="coxlen", description="Word problem and reflection length "
                                "in Coxeter groups.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", parents=[common], help="reduce a word by nil- and braid-moves")
    s.add_argument("-w", "--word", required=True)
    s.add_argument("--trace", action="store_true", help="list every move")

    s = sub.add_parser("reflen", parents=[common], help="reflection length of a word")
    s.add_argument("-w", "--word", required=True)
    s.add_argument("--all", action="store_true", help="list every minimal deletion set")
    s.add_argument("--witness", action="store_true", help="show one deletion set")
    s.add_argument("--oracle", choices=ORACLES, default="matrix")

    s = sub.add_parser("powers-table", parents=[common],
                       help="l_R((s_1...s_n)^lambda) for lambda = 1..max")
    s.add_argument("--max", type=_positive, required=True)

    s = sub.add_parser("bounds", parents=[common], help="closed-form bounds for a power word")
    s.add_argument("-l", "--lambda", dest="lam", type=_nonneg, required=True)
    s.add_argument("-r", type=_nonneg, required=True)
    s.add_argument("--no-compute", action="store_true", help="skip the exact computation")

    s = sub.add_parser("conjecture-scan", parents=[common],
                       help="letters whose omission lowers both lengths by one")
    s.add_argument("-w", "--word")
    s.add_argument("--batch", type=_positive, help="scan this many generated twisted palindromes")
    s.add_argument("--depth", type=_nonneg, default=2)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("verify", parents=[common], help="run a self-check suite")
    s.add_argument("suite", choices=verify.SUITES)
    s.add_argument("--extended", action="store_true", help="table1: include lambda 9..12, 15")
    s.add_argument("--cases", type=_positive, default=200)
    s.add_argument("--count", type=_positive, default=1000)
    s.add_argument("--lam-max", type=_nonneg, default=5)
    s.add_argument("--seed", type=int, default=0)
    return p


def _render(outcome: Outcome, command: str, cfg: RunConfig, elapsed_ms: float) -> str:
    if cfg.format == "json":
        doc = {
            "command": command,
            "group": {"spec": cfg.group_text, **cfg.group.to_json()},
            "input": outcome.input,
            "result": outcome.result,
            "stats": {"elapsed_ms": round(elapsed_ms, 3), **stats.as_dict()},
        }
        return json.dumps(doc, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        if outcome.csv_header:
            wr.writerow(outcome.csv_header)
            wr.writerows(outcome.csv_rows)
        else:
            wr.writerow(["key", "value"])
            for k, v in outcome.result.items():
                wr.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
        return buf.getvalue()
    return "\n".join(outcome.plain) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="coxlen: %(levelname)s: %(message)s")
    try:
        cfg = RunConfig(
            group=parse_group(args.group),
            group_text=args.group,
            format=args.format,
            limits=SearchLimits(max_orbit=args.max_orbit, max_subsets=args.max_subsets,
                                max_cache=args.max_cache),
            threads=args.threads,
            cache_path=args.cache or None,
        )
        cache = ResultCache(cfg.cache_path) if cfg.cache_path else None
        stats.reset()
        t0 = time.perf_counter()
        outcome = COMMANDS[args.command](args, cfg, cache)
        elapsed = (time.perf_counter() - t0) * 1000
    except BudgetExceeded as exc:
        print(f"coxlen: budget exhausted: {exc}", file=_sys.stderr)
        return EXIT_BUDGET
    except (ParseError, CoxlenError, ValueError) as exc:
        print(f"coxlen: error: {exc}", file=_sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"coxlen: error: {exc}", file=_sys.stderr)
        return EXIT_INPUT
    _sys.stdout.write(_render(outcome, args.command, cfg, elapsed))
    return outcome.code


if __name__ == "__main__":
    raise SystemExit(main())
