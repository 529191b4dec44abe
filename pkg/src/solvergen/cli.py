"""Command-line front end.

Commands: gb, fan, sample, template, solve, bench, gen. Every command is
deterministic for fixed flags; wall-clock timings only ever appear in the
last CSV column. Exit codes: 0 success, 1 usage, 2 bad input, 3 failed
computation.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import problems
from .basis import (
    SamplerConfig,
    basis_from_gb,
    build_candidate_set,
    extractable_actions,
    is_independent,
    quotient_coordinates,
    sample_basis,
    sample_basis_uniform,
)
from .fan import enumerate_reduced_gbs
from .field import DEFAULT_PRIME, FieldError
from .groebner import GroebnerError, PositiveDimensionalError, fglm, groebner_basis
from .numeric import NumericError, make_solver
from .poly import MonomialOrder, PolyError, Polynomial, Ring, format_monomial
from .sysio import SysError, SystemFile, format_polynomial, format_system, read_system
from .template import (
    DEFAULT_DEGREE_CAP,
    AllActionsFailedError,
    TemplateError,
    best_template,
    build_template,
    format_template,
    prune,
    write_template,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2, 3

# template sizes reported for the built-in problems in the literature
# (rows x cols), printed beside achieved sizes for manual comparison
REFERENCE_SIZES = {
    "stitch2": {"grevlex": (48, 66), "heuristic": (18, 36)},
    "stitch3": {"grevlex": (48, 66), "heuristic": (18, 36)},
    "efl": {"grevlex": (181, 200), "heuristic": (69, 90)},
}

BENCH_MODES = ("fan", "heuristic", "uniform", "uniform-degree", "grevlex")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class ComputeError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def parse_order(text: str, names: Sequence[str]) -> MonomialOrder:
    """grevlex | lex | weighted(w1:w2:...), optionally followed by [y>x>...]."""
    m = re.fullmatch(r"\s*(grevlex|lex|weighted)(?:\(([\d:,\s]+)\))?(?:\[([^\]]+)\])?\s*", text)
    if m is None:
        raise UsageError(f"cannot parse order {text!r}")
    kind, w, prec = m.groups()
    precedence = None
    if prec:
        parts = [s.strip() for s in prec.split(">")]
        if sorted(parts) != sorted(names):
            raise UsageError(f"precedence {prec!r} must list every variable once")
        precedence = tuple(names.index(s) for s in parts)
    if kind == "weighted":
        if not w:
            raise UsageError("weighted order needs weights, e.g. weighted(1:2)")
        weights = [int(x) for x in re.split(r"[:,\s]+", w.strip()) if x]
        if len(weights) != len(names):
            raise UsageError(f"expected {len(names)} weights")
        return MonomialOrder.weighted(weights, precedence)
    if w:
        raise UsageError(f"{kind} takes no weights")
    return MonomialOrder(kind, None, precedence)


def _monos(mons, names) -> str:
    return " ".join(format_monomial(m, names) for m in mons)


@dataclass
class _Problem:
    name: str
    zp: SystemFile
    numeric: SystemFile | None
    truth: tuple | None = None


def _lift_to_complex(s: SystemFile) -> SystemFile:
    ring = Ring.complex(s.ring.var_names)
    F = s.ring.field
    eqs = tuple(Polynomial(ring, {m: complex(F.signed(c)) for m, c in f.terms.items()}) for f in s.equations)
    return SystemFile(ring, eqs, s.name)


def _shadow_zp(s: SystemFile, p: int, seed: int) -> SystemFile:
    """Exact counterpart of a float system: integer coefficients map exactly,
    anything else is replaced by a random field element on the same support."""
    ring = Ring.zp(s.ring.var_names, p)
    rng = np.random.default_rng(seed)
    exact = all(c.imag == 0 and float(c.real).is_integer() for f in s.equations for c in f.terms.values())
    eqs = []
    for f in s.equations:
        if exact:
            terms = {m: int(c.real) for m, c in f.terms.items()}
        else:
            terms = {m: int(rng.integers(1, p)) for m in f.terms}
        eqs.append(Polynomial(ring, terms))
    return SystemFile(ring, tuple(eqs), s.name)


def load_problem(source: str, seed: int, prime: int) -> _Problem:
    if source in problems.PROBLEMS:
        zi = problems.generate(source, seed, "zp", prime)
        try:
            fi = problems.generate(source, seed, "float", prime)
        except problems.ProblemError:
            fi = None
        return _Problem(source, zi.system, fi.system if fi else None, fi.ground_truth if fi else None)
    try:
        s = read_system(source)
    except FileNotFoundError:
        raise InputError(f"no such file or problem: {source!r} (problems: {', '.join(problems.PROBLEMS)})") from None
    if s.ring.is_exact:
        return _Problem(s.name or source, s, _lift_to_complex(s))
    return _Problem(s.name or source, _shadow_zp(s, prime, seed), s)


def _read_exact(path: str, prime: int, seed: int) -> SystemFile:
    if path in problems.PROBLEMS:
        return problems.generate(path, seed, "zp", prime).system
    try:
        s = read_system(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path!r}") from None
    return s if s.ring.is_exact else _shadow_zp(s, prime, seed)


def _sub_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def choose_basis(source: str, eqs, gb, seed: int):
    """grevlex, lex, an order string, heuristic[:k] or uniform[:k]."""
    kind, _, idx = source.partition(":")
    k = int(idx) if idx else 0
    if kind in ("heuristic", "uniform", "uniform-degree"):
        qc = quotient_coordinates(gb)
        M = build_candidate_set(eqs, qc)
        if kind == "heuristic":
            return sample_basis(M, qc, SamplerConfig(seed=_sub_seed(seed, k)))
        mode = "from-M" if kind == "uniform" else "from-degree-closure"
        return sample_basis_uniform(M, qc, _sub_seed(seed, k), mode)
    order = parse_order(source, gb.ring.var_names)
    return basis_from_gb(fglm(gb, order) if order != gb.order else gb)


class _Clock:
    def __init__(self, limit: float | None):
        self.start = time.perf_counter()
        self.limit = limit

    def check(self):
        if self.limit is not None and time.perf_counter() - self.start > self.limit:
            raise ComputeError(f"time limit of {self.limit} s exceeded")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gen(args, out):
    try:
        inst = problems.generate(args.problem, args.seed, args.mode, args.prime)
    except problems.ProblemError as e:
        raise ComputeError(str(e)) from None
    text = format_system(inst.system)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.write(f"wrote {args.out}\n")
    else:
        out.write(text)


def cmd_gb(args, out):
    s = _read_exact(args.file, args.prime, args.seed)
    order = parse_order(args.order, s.ring.var_names)
    gb = groebner_basis(list(s.equations), order)
    if not gb.is_zero_dimensional:
        raise PositiveDimensionalError("ideal is not zero-dimensional (infinitely many solutions)")
    out.write(f"order {order.label(s.ring.var_names)}\n")
    out.write(f"generators {len(gb.generators)}\n")
    for g in gb.generators:
        out.write(format_polynomial(g) + "\n")
    std = gb.standard_monomials
    out.write(f"standard monomials K={len(std)}: {_monos(std, s.ring.var_names)}\n")


def cmd_fan(args, out):
    s = _read_exact(args.file, args.prime, args.seed)
    clock = _Clock(args.timeout_seconds)
    fan = enumerate_reduced_gbs(list(s.equations), args.budget, args.seed)
    clock.check()
    names = s.ring.var_names
    out.write("index,leading_monomials,K,witness\n")
    for i, (gb, w) in enumerate(zip(fan.bases, fan.witnesses)):
        lms = sorted(gb.leading_monomials, key=lambda m: (sum(m), tuple(-e for e in m)))
        out.write(f"{i},{_monos(lms, names)},{len(gb.standard_monomials)},{w.label(names)}\n")
    out.write(f"# bases={len(fan)} budget={fan.sample_budget} exhausted={str(fan.exhausted).lower()}\n")


def cmd_sample(args, out):
    prob = load_problem(args.problem, args.seed, args.prime)
    eqs = list(prob.zp.equations)
    gb = groebner_basis(eqs)
    qc = quotient_coordinates(gb)
    M = build_candidate_set(eqs, qc)
    names = prob.zp.ring.var_names
    out.write("index,basis,action,independent,extraction_complete\n")
    for i in range(args.count):
        sub = _sub_seed(args.seed, i)
        if args.mode == "heuristic":
            b = sample_basis(M, qc, SamplerConfig(seed=sub))
        else:
            b = sample_basis_uniform(M, qc, sub, "from-M" if args.mode == "uniform" else "from-degree-closure")
        ind = is_independent(b.monomials, qc)
        ext = bool(extractable_actions(b.monomials, len(names)))
        out.write(f"{i},{_monos(b.monomials, names)},{names[b.action_var]},{str(ind).lower()},{str(ext).lower()}\n")


def cmd_template(args, out):
    prob = load_problem(args.problem, args.seed, args.prime)
    eqs = list(prob.zp.equations)
    gb = groebner_basis(eqs)
    B = choose_basis(args.basis, eqs, gb, args.seed)
    names = prob.zp.ring.var_names
    if args.action is not None:
        if args.action not in names:
            raise UsageError(f"unknown action variable {args.action!r}")
        t = build_template(eqs, B, names.index(args.action), args.max_degree)
        if not args.no_prune:
            t = prune(t, eqs)
    else:
        t = best_template(eqs, B, args.max_degree)
    if args.out:
        write_template(t, args.out)
    else:
        out.write(format_template(t))
    r, c = t.size
    out.write(f"size {r}x{c} action {names[t.action_var]} K {t.K}\n")
    out.write("basis exponents: " + " ".join("(" + ",".join(map(str, m)) + ")" for m in t.basis) + "\n")


def _fmt_c(z: complex) -> str:
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def cmd_solve(args, out):
    prob = load_problem(args.problem, args.seed, args.prime)
    if prob.numeric is None:
        raise InputError("no numeric instance available")
    eqs = list(prob.zp.equations)
    gb = groebner_basis(eqs)
    B = choose_basis(args.basis, eqs, gb, args.seed)
    solver = make_solver(eqs, B)
    sol = solver.solve(list(prob.numeric.equations), args.refine)
    names = prob.numeric.ring.var_names
    out.write(f"# template {solver.template.size[0]}x{solver.template.size[1]} action {names[solver.action_var]}\n")
    out.write(",".join(["index", *names, "residual"]) + "\n")
    order = sorted(range(len(sol)), key=lambda k: (sol.residuals[k] > 1e-6, tuple(_fmt_c(v) for v in sol.points[k])))
    for i, k in enumerate(order):
        out.write(",".join([str(i), *(_fmt_c(v) for v in sol.points[k]), f"{sol.residuals[k]:.3e}"]) + "\n")
    if args.hist:
        out.write("log10_residual_bin,count\n")
        logs = np.log10(np.maximum(sol.residuals, 1e-300))
        for lo in range(-20, 1):
            cnt = int(np.sum((logs >= lo) & (logs < lo + 1)))
            out.write(f"{lo},{cnt}\n")


@dataclass(frozen=True)
class BenchRecord:
    mode: str
    seed_index: int
    rows: int
    cols: int
    action: str
    feasible: bool
    basis: str
    millis: float


def run_bench(problem: str, mode: str, n_samples: int, seed: int = 0, prime: int = DEFAULT_PRIME,
              max_degree: int = DEFAULT_DEGREE_CAP, budget: int = 200, clock: _Clock | None = None) -> list[BenchRecord]:
    """Best template (over all actions) for each basis drawn in `mode`."""
    if mode not in BENCH_MODES:
        raise UsageError(f"unknown bench mode {mode!r}")
    s = problems.generate(problem, seed, "zp", prime).system if problem in problems.PROBLEMS else _read_exact(problem, prime, seed)
    eqs = list(s.equations)
    names = s.ring.var_names
    gb = groebner_basis(eqs)
    bases = []
    if mode == "grevlex":
        bases.append(gb.standard_monomials)
    elif mode == "fan":
        bases.extend(b.standard_monomials for b in enumerate_reduced_gbs(eqs, budget, seed).bases)
    else:
        qc = quotient_coordinates(gb)
        M = build_candidate_set(eqs, qc)
        for i in range(n_samples):
            sub = _sub_seed(seed, i)
            if mode == "heuristic":
                bases.append(sample_basis(M, qc, SamplerConfig(seed=sub)).monomials)
            else:
                m = "from-M" if mode == "uniform" else "from-degree-closure"
                bases.append(sample_basis_uniform(M, qc, sub, m).monomials)
    records = []
    for i, B in enumerate(bases):
        if clock:
            clock.check()
        t0 = time.perf_counter()
        try:
            t = best_template(eqs, B, max_degree)
            r, c = t.size
            rec = (r, c, names[t.action_var], True)
        except AllActionsFailedError:
            rec = (0, 0, "-", False)
        ms = (time.perf_counter() - t0) * 1000
        records.append(BenchRecord(mode, i, *rec, _monos(B, names), ms))
    # fixed post-sort: feasible first, smallest templates first
    records.sort(key=lambda r: (not r.feasible, r.rows, r.cols, r.seed_index))
    return records


def bench_summary(records: Sequence[BenchRecord]) -> dict:
    rows = sorted(r.rows for r in records if r.feasible)
    return {
        "n": len(records),
        "feasible": len(rows),
        "infeasible_rate": 1 - len(rows) / len(records) if records else math.nan,
        "min_rows": rows[0] if rows else None,
        "median_rows": float(np.median(rows)) if rows else None,
    }


def cmd_bench(args, out):
    clock = _Clock(args.timeout_seconds)
    recs = run_bench(args.problem, args.mode, args.samples, args.seed, args.prime, args.max_degree, args.budget, clock)
    out.write("mode,seed_index,rows,cols,action,feasible,basis,time_ms\n")
    for r in recs:
        out.write(f"{r.mode},{r.seed_index},{r.rows},{r.cols},{r.action},{str(r.feasible).lower()},{r.basis},{r.millis:.1f}\n")
    s = bench_summary(recs)
    med = "nan" if s["median_rows"] is None else f"{s['median_rows']:g}"
    out.write(f"# summary mode={args.mode} n={s['n']} feasible={s['feasible']} min_rows={s['min_rows']} "
              f"median_rows={med} infeasible_rate={s['infeasible_rate']:.3f}\n")
    ref = REFERENCE_SIZES.get(args.problem, {})
    key = "heuristic" if args.mode == "heuristic" else "grevlex" if args.mode in ("grevlex", "fan") else None
    if key and key in ref:
        best = min(((r.rows, r.cols) for r in recs if r.feasible), default=None)
        achieved = f"{best[0]}x{best[1]}" if best else "none"
        out.write(f"# reference {args.problem} {key} {ref[key][0]}x{ref[key][1]} achieved_min {achieved}\n")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field size for exact computations")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=200, help="random weight vectors for fan sampling")
    common.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE_CAP, help="template degree cap")
    common.add_argument("--timeout-seconds", type=float, default=None)

    ap = _Parser(prog="solvergen", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gb", parents=[common], help="reduced Groebner basis and standard monomials")
    p.add_argument("file", help=".sys file or built-in problem name")
    p.add_argument("--order", default="grevlex", help="grevlex, lex, weighted(1:2), optionally [y>x]")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("fan", parents=[common], help="distinct reduced Groebner bases over sampled orders")
    p.add_argument("file")
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("sample", parents=[common], help="sample quotient-ring bases")
    p.add_argument("problem")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--mode", choices=("heuristic", "uniform", "uniform-degree"), default="heuristic")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("template", parents=[common], help="build an elimination template")
    p.add_argument("problem")
    p.add_argument("--basis", default="grevlex", help="order string, heuristic[:k] or uniform[:k]")
    p.add_argument("--action", default=None, help="action variable (default: best over all)")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("solve", parents=[common], help="solve a float instance")
    p.add_argument("problem")
    p.add_argument("--basis", default="grevlex")
    p.add_argument("--hist", action="store_true", help="append a log10 residual histogram")
    p.add_argument("--refine", type=int, default=0, metavar="STEPS", help="Gauss-Newton polish steps per solution")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", parents=[common], help="template sizes over many bases (CSV)")
    p.add_argument("problem")
    p.add_argument("--mode", choices=BENCH_MODES, default="heuristic")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", parents=[common], help="write a built-in problem instance as .sys")
    p.add_argument("problem", choices=problems.PROBLEMS)
    p.add_argument("--mode", choices=("zp", "float"), default="zp")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except UsageError as e:
        print(f"solvergen: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, SysError, PositiveDimensionalError, FieldError, PolyError) as e:
        print(f"solvergen: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ComputeError, GroebnerError, TemplateError, NumericError, problems.ProblemError, ArithmeticError) as e:
        print(f"solvergen: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
