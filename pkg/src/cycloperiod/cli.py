"""Command-line front end: ``cycloperiod {bound,lrs,expsum,gauss,kloosterman,random-lrs}``.

Every subcommand prints a schema-versioned report (JSON by default, CSV with
``--output csv``).  Exit codes: 0 success, 2 usage or parse error,
3 infeasible (caps, prime search), 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from typing import Any, Callable, Sequence

from . import __version__
from .bounds import bound_R
from .cyclotomic import CycNum, cyc_from_root_power
from .expsums import (
    TORUS_CAP,
    CapExceeded,
    ExpSumSpec,
    exp_sums,
    extend_sequence,
    gauss_period_prediction,
    gauss_poly,
    kloosterman,
    max_feasible_k,
    torus_size,
)
from .ffield import field_make
from .laurent import ParseError, parse_coefficient, parse_laurent
from .periodicity import (
    SingularReduction,
    certified_multiple,
    certify_with_multiple,
    default_window,
    detect_virtual_period,
    field_sequence,
    monotone_containment_failures,
    verify_against_bound,
    zero_indicator_period,
    zero_set_decompose,
)
from .recurrence import Lrs, dump_lrs, load_lrs, minimal_recurrence, terms
from .subfields import fixing_subgroup

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INVARIANT = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


class InvariantViolation(CliError):
    def __init__(self, message: str) -> None:
        super().__init__(message, EXIT_INVARIANT)


# ---------------------------------------------------------------------------
# subcommand bodies: each returns (inputs, outputs)

def cmd_bound(m: int, n: int) -> tuple[dict, dict]:
    if m < 1 or n < 1:
        raise CliError("m and n must be positive", EXIT_USAGE)
    return {"m": m, "n": n}, bound_R(m, n).to_json()


def cmd_lrs(path: str, kmax: int | None, ell: int | None) -> tuple[dict, dict]:
    try:
        L = load_lrs(path)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read LRS file {path}: {exc}", EXIT_USAGE) from exc
    K = kmax if kmax is not None else default_window(L.m, L.n)
    if K < 4:
        raise CliError("kmax must be at least 4", EXIT_USAGE)
    values = terms(L, K + 1)
    fields = field_sequence(L, K, values)
    s = zero_indicator_period(values)
    if K < 4 * s:
        s = 1
    zeros = zero_set_decompose(L, K, s, values)
    for i, step in zeros.progressions:
        if any(not values[k].is_zero() for k in range(i, K + 1, step)):
            raise InvariantViolation("zero-set progression contains a nonzero term")
    R_n, R_2n = bound_R(L.m, L.n).R, bound_R(L.m, 2 * L.n).R
    rep = detect_virtual_period(fields)
    outputs: dict[str, Any] = {
        "degrees": [f.degree for f in fields],
        "zero_set": zeros.to_json(),
        "R_mn": str(R_n),
        "R_m2n": str(R_2n),
    }
    if rep.found:
        checked = verify_against_bound(rep, R_n)
        outputs["period_2n"] = verify_against_bound(rep, R_2n).to_json()
        try:
            ell_used, s_ell = certified_multiple(L, ell=ell)
            checked = certify_with_multiple(checked, ell_used, s_ell)
            if zeros.s > 1 and s_ell % zeros.s:
                outputs["zero_modulus_outside_multiple"] = True
        except SingularReduction as exc:
            outputs["certified_multiple_error"] = str(exc)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INFEASIBLE) from exc
        outputs["period"] = checked.to_json()
        outputs["containment_failures"] = monotone_containment_failures(fields, rep.N, rep.r)
    else:
        outputs["period"] = rep.to_json()
    return {"file": os.path.basename(path), "m": L.m, "n": L.n, "K": K, "ell": ell}, outputs


def _guard_caps(spec: ExpSumSpec, kmax: int, cap: int) -> None:
    feasible = max_feasible_k(spec, cap)
    if kmax > feasible:
        raise CliError(
            f"kmax={kmax} needs a torus of {torus_size(spec, kmax)} points; "
            f"largest feasible kmax is {feasible}",
            EXIT_INFEASIBLE,
        )


def _sequence_outputs(seq: Sequence[CycNum], rec_dim: int, m_bound: int, name: str) -> dict:
    fields = [fixing_subgroup(x) for x in seq]
    out: dict[str, Any] = {"degrees": [f.degree for f in fields]}
    rep = detect_virtual_period(fields, index_base=1)
    if rep.found and rec_dim >= 1:
        R = bound_R(m_bound, rec_dim).R
        rep = verify_against_bound(rep, R)
        out[name] = str(R)
    out["period"] = rep.to_json()
    return out


def cmd_expsum(p: int, f: int, poly: str, c: int, kmax: int, threads: int, cap: int) -> tuple[dict, dict]:
    try:
        spec = ExpSumSpec(parse_laurent(poly, field_make(p, f)), c)
    except ParseError as exc:
        raise CliError(f"cannot parse polynomial: {exc}", EXIT_USAGE) from exc
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    _guard_caps(spec, kmax, cap)
    values = exp_sums(spec, kmax, threads, cap)
    rec = minimal_recurrence(values)
    outputs = {
        "S": [v.to_json() for v in values],
        "recurrence_dimension": rec.dimension,
        "recurrence_certified": rec.certified,
        **_sequence_outputs(values, rec.dimension, p * c, "R_pc_d"),
    }
    return {"p": p, "f": f, "poly": str(spec.poly), "c": c, "kmax": kmax}, outputs


def cmd_gauss(p: int, f: int, d: int, a: str, kmax: int, threads: int, cap: int) -> tuple[dict, dict]:
    q = p**f
    if d < 1 or (q - 1) % d:
        raise CliError(f"d={d} must divide q-1={q - 1}", EXIT_USAGE)
    try:
        F = field_make(p, f)
        a_code = parse_coefficient(a, F)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    spec = ExpSumSpec(gauss_poly(F, d, a_code))
    # the toric L-function of x^d + a has at most d reciprocal roots
    window = min(kmax, 2 * d + 2, max_feasible_k(spec, cap))
    if window < 2:
        raise CliError("no feasible brute-force window", EXIT_INFEASIBLE)
    brute = exp_sums(spec, window, threads, cap)
    seq, rec = extend_sequence(brute, kmax)
    predicted = gauss_period_prediction(p, q, d, a_code)
    outputs: dict[str, Any] = {
        "S": [v.to_json() for v in seq],
        "brute_force_terms": window,
        "recurrence_dimension": rec.dimension,
        "recurrence_certified": rec.certified,
        "predicted_period": predicted,
        **_sequence_outputs(seq, rec.dimension, p, "R_p_d"),
    }
    detected = outputs["period"]["r"]
    outputs["match"] = predicted is not None and detected == predicted
    return {"p": p, "f": f, "d": d, "a": a, "kmax": kmax}, outputs


def cmd_kloosterman(p: int, f: int, n: int, a: str, kmax: int, threads: int, cap: int) -> tuple[dict, dict]:
    if n < 2:
        raise CliError("Kloosterman sums need n >= 2", EXIT_USAGE)
    try:
        F = field_make(p, f)
        a_code = parse_coefficient(a, F)
        if a_code == 0:
            raise ValueError("a must be nonzero")
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    nv = n - 1
    feasible = 0
    while F.size ** (feasible + 1) <= 2**24 and (F.size ** (feasible + 1) - 1) ** nv <= cap:
        feasible += 1
    if kmax > feasible:
        raise CliError(f"kmax={kmax} exceeds the caps; largest feasible kmax is {feasible}", EXIT_INFEASIBLE)
    values = [kloosterman(F, n, a_code, k, threads, cap) for k in range(1, kmax + 1)]
    rec = minimal_recurrence(values)
    R = bound_R(p, n).R
    fields = [fixing_subgroup(x) for x in values]
    rep = detect_virtual_period(fields, index_base=1)
    if rep.found:
        rep = verify_against_bound(rep, R)
    outputs = {
        "S": [v.to_json() for v in values],
        "recurrence_dimension": rec.dimension,
        "recurrence_certified": rec.certified,
        "degrees": [x.degree for x in fields],
        "R_p_n": str(R),
        "period": rep.to_json(),
    }
    return {"p": p, "f": f, "n": n, "a": a, "kmax": kmax}, outputs


def cmd_random_lrs(seed: int, m: int, n: int, height: int, write: str | None = None) -> tuple[dict, dict]:
    if m < 1 or n < 1 or height < 1:
        raise CliError("m, n and height must be positive", EXIT_USAGE)
    L = random_lrs(random.Random(seed), m, n, height)
    if write:
        dump_lrs(L, write)
    return {"seed": seed, "m": m, "n": n, "height": height}, L.to_json()


def random_cycnum(rng: random.Random, m: int, height: int, density: float = 0.5) -> CycNum:
    from fractions import Fraction

    from .cyclotomic import euler_phi

    coeffs = []
    for _ in range(euler_phi(m)):
        if rng.random() < density:
            coeffs.append(Fraction(rng.randint(-height, height), rng.randint(1, height)))
        else:
            coeffs.append(Fraction(0))
    return CycNum(m, coeffs)


def random_lrs(rng: random.Random, m: int, n: int, height: int = 9) -> Lrs:
    """Random LRS whose entries have numerators and denominators bounded by ``height``.

    Coefficients are sometimes roots of unity or rationals so that
    non-generic field sequences show up.
    """
    def entry() -> CycNum:
        roll = rng.random()
        if roll < 0.25:
            return cyc_from_root_power(m, rng.randrange(m)) * rng.choice([1, -1, 2])
        if roll < 0.4:
            return CycNum.rational(m, rng.randint(-height, height))
        return random_cycnum(rng, m, height)

    coeffs = [entry() for _ in range(n)]
    while coeffs[-1].is_zero():
        coeffs[-1] = entry()
    initial = [entry() for _ in range(n)]
    return Lrs(m, tuple(coeffs), tuple(initial))


# ---------------------------------------------------------------------------
# output

def _flatten(prefix: str, obj: Any, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], rows)
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, json.dumps(obj)))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=1)
    rows: list[tuple[str, str]] = []
    _flatten("", report, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path", "value"])
    writer.writerows(rows)
    return buf.getvalue()


def parse_csv_report(text: str) -> dict[str, Any]:
    """Inverse of the CSV rendering, as a flat path -> value mapping."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    assert header == ["path", "value"]
    return {path: json.loads(value) for path, value in reader}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cycloperiod", description=__doc__.splitlines()[0])
    parser.add_argument("--output", choices=("json", "csv"), default="json")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--seed", type=int, default=0, help="seed for random-lrs")
    parser.add_argument("--unsafe-caps", action="store_true", help="lift the torus-size cap")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="the divisor bound R_{m,n}")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=int, required=True)

    lr = sub.add_parser("lrs", help="analyse an LRS file")
    lr.add_argument("file")
    lr.add_argument("--kmax", type=int)
    lr.add_argument("--ell", type=int)

    e = sub.add_parser("expsum", help="toric exponential sums S_1..S_kmax")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--f", type=int, default=1)
    e.add_argument("--poly", required=True)
    e.add_argument("--c", type=int, default=1)
    e.add_argument("--kmax", type=int, default=6)

    g = sub.add_parser("gauss", help="S_k(x^d + a) against the predicted period")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--f", type=int, default=1)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--a", default="0")
    g.add_argument("--kmax", type=int, default=40)

    k = sub.add_parser("kloosterman", help="Kloosterman sums")
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--f", type=int, default=1)
    k.add_argument("--n", type=int, default=2)
    k.add_argument("--a", default="1")
    k.add_argument("--kmax", type=int, default=6)

    r = sub.add_parser("random-lrs", help="emit a random LRS file (uses --seed)")
    r.add_argument("--m", type=int, default=4)
    r.add_argument("--n", type=int, default=2)
    r.add_argument("--height", type=int, default=9)
    r.add_argument("--write", metavar="FILE", help="also save the LRS to FILE")
    return parser


def dispatch(args: argparse.Namespace) -> tuple[dict, dict]:
    cap = 2**62 if args.unsafe_caps else TORUS_CAP
    threads = max(1, args.threads)
    commands: dict[str, Callable[[], tuple[dict, dict]]] = {
        "bound": lambda: cmd_bound(args.m, args.n),
        "lrs": lambda: cmd_lrs(args.file, args.kmax, args.ell),
        "expsum": lambda: cmd_expsum(args.p, args.f, args.poly, args.c, args.kmax, threads, cap),
        "gauss": lambda: cmd_gauss(args.p, args.f, args.d, args.a, args.kmax, threads, cap),
        "kloosterman": lambda: cmd_kloosterman(args.p, args.f, args.n, args.a, args.kmax, threads, cap),
        "random-lrs": lambda: cmd_random_lrs(args.seed, args.m, args.n, args.height, args.write),
    }
    return commands[args.command]()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    if args.unsafe_caps and args.command in ("expsum", "gauss", "kloosterman"):
        q = args.p**args.f
        print(f"warning: caps lifted; S_kmax alone sweeps about {q ** args.kmax:.3g} points per variable",
              file=sys.stderr)
    start = time.perf_counter()
    try:
        inputs, outputs = dispatch(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": inputs,
        "outputs": outputs,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
        "version": __version__,
    }
    sys.stdout.write(render(report, args.output))
    if args.output == "json":
        sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
