"""Command-line interface: ``chainrevival <subcommand> ...``.

Exit codes: 0 on success (negative verdicts included), 1 on usage or
I/O errors, 2 when a design or geometry request is infeasible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import inverse_design as dsg
from .chain import CouplingChain, normalize_state
from .commensurability import (
    DEFAULT_MAX_DENOMINATOR,
    DEFAULT_TOL,
    CommensurateLabels,
    NoDynamics,
    NotCommensurateError,
    is_commensurate,
    revival_period,
)
from .dynamics import perfect_transfer_check, revival_check, sample_trajectory
from .geometry import (
    CouplingModel,
    NonPositiveSeparation,
    ZeroCoupling,
    min_separation_advisory,
    separations_from_couplings,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_PI_RE = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_length(text: str) -> float:
    """Float, or a multiple of pi such as ``4pi``, ``2*pi``, ``pi/2``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text.lower())
    if not m:
        raise argparse.ArgumentTypeError(f"not a number or multiple of pi: {text!r}")
    coeff = m.group(1)
    value = (float(coeff) if coeff not in ("", "+", "-") else float(coeff + "1")) * math.pi
    if m.group(2):
        value /= float(m.group(2))
    return value


def format_pi(value: float) -> str:
    frac = Fraction(value / math.pi).limit_denominator(1000)
    if abs(float(frac) * math.pi - value) > 1e-9 * max(1.0, abs(value)):
        return repr(value)
    if frac == 1:
        return "π"
    if frac.denominator == 1:
        return f"{frac.numerator}π"
    num = "" if frac.numerator == 1 else str(frac.numerator)
    return f"{num}π/{frac.denominator}"


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_chain(path: str) -> CouplingChain:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return CouplingChain.from_dict(json.loads(text))
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read chain from {path}: {exc}") from exc


def _parse_input(args, n: int) -> np.ndarray:
    if args.input_complex:
        try:
            parts = [p.split(":") for p in args.input_complex.split(",")]
            psi = np.array([complex(float(re_), float(im)) for re_, im in parts])
        except ValueError as exc:
            raise UsageError(f"--input-complex expects re:im,... ({exc})") from exc
    elif args.input:
        try:
            psi = np.array([float(x) for x in args.input.split(",")], dtype=complex)
        except ValueError as exc:
            raise UsageError(f"--input expects comma-separated reals ({exc})") from exc
    else:
        psi = np.zeros(n, dtype=complex)
        psi[0] = 1.0
    if psi.size != n:
        raise UsageError(f"input has {psi.size} amplitudes but the chain has {n} elements")
    if not np.linalg.norm(psi) > 0:
        raise UsageError("input state is zero")
    return psi


# -- subcommands -------------------------------------------------------------


def cmd_design(args) -> int:
    if args.spec:
        try:
            spec = dsg.DesignSpec.from_dict(json.loads(Path(args.spec).read_text()))
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"bad DesignSpec file {args.spec}: {exc}") from exc
    else:
        if not args.family or not args.targets:
            raise UsageError("design needs FAMILY and --targets (or --spec FILE)")
        try:
            spec = dsg.DesignSpec(
                dsg.Family.parse(args.family), tuple(args.targets), q=args.q,
                s=args.s, t=args.t, eps1=args.eps1, eps2=args.eps2, phi=args.phi,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    try:
        result = dsg.design(spec)
    except dsg.DesignError as exc:
        print(f"infeasible {spec.family.value} design {list(spec.targets)}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    q_red, labels_red = result.reduced
    period = revival_period(CommensurateLabels(q_red, labels_red))
    payload = result.chain.to_dict()
    payload["design"] = {
        "spec": spec.to_dict(),
        "expected_labels": list(result.expected_labels),
        "period": period,
        "decomposed": result.decomposed,
        "notes": list(result.notes),
    }
    _emit(_dumps(payload), args.out)
    summary = sys.stdout if args.out else sys.stderr
    print(f"{spec.family.value} targets {list(spec.targets)} q={spec.q:g}", file=summary)
    print("couplings: " + ", ".join(f"{a:.6f}" for a in result.chain.couplings), file=summary)
    print(f"expected labels: {list(result.expected_labels)}", file=summary)
    print(f"T = {format_pi(period)}", file=summary)
    for note in result.notes:
        print(f"note: {note}", file=summary)
    return EXIT_OK


def cmd_check(args) -> int:
    chain = _load_chain(args.chain)
    ok, verdict = is_commensurate(chain, args.tol, args.max_denominator)
    report = {"commensurate": ok, "residual": verdict.residual}
    if ok:
        report.update(q=verdict.q, labels=list(verdict.labels))
        try:
            report["T"] = revival_period(verdict)
        except NoDynamics:
            report["T"] = None
    else:
        report.update(q=None, labels=None, T=None)
    pt = perfect_transfer_check(chain, args.tol, args.max_denominator)
    report["perfect_transfer"] = {
        "is_perfect": pt.is_perfect,
        "L0": pt.transfer_length if pt.is_perfect else None,
        "multipliers": list(pt.odd_multipliers) if pt.is_perfect else None,
        "reason": pt.reason,
    }
    _emit(_dumps(report), args.out)
    return EXIT_OK


def cmd_revival(args) -> int:
    chain = _load_chain(args.chain)
    try:
        rep = revival_check(chain, args.fidelity_tol, args.tol, args.max_denominator)
    except NotCommensurateError as exc:
        report = {"commensurate": False, "T": None, "deficit": None, "ok": False,
                  "residual": exc.verdict.residual}
    except NoDynamics:
        report = {"commensurate": True, "T": None, "deficit": 0.0, "ok": True}
    else:
        report = {"commensurate": True, "T": rep.period, "deficit": float(rep.deficit),
                  "ok": bool(rep.ok), "labels": list(rep.labels.labels)}
    _emit(_dumps(report), args.out)
    return EXIT_OK


def cmd_propagate(args) -> int:
    chain = _load_chain(args.chain)
    psi = _parse_input(args, chain.n)
    if not args.no_normalize:
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > 1e-12:
            print(f"note: input normalized (norm was {norm:.6g})", file=sys.stderr)
        psi = normalize_state(psi)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    if args.zmax < 0:
        raise UsageError("--zmax must be non-negative")
    traj = sample_trajectory(chain, psi, args.zmax, args.samples)
    _emit(traj.to_csv(intensity=args.intensity), args.out)
    return EXIT_OK


def cmd_geometry(args) -> int:
    chain = _load_chain(args.chain)
    c0 = args.c0 if args.c0 is not None else abs(chain.couplings[0])
    try:
        model = CouplingModel(c0, args.kappa, args.dref)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        layout = separations_from_couplings(chain, model)
    except (ZeroCoupling, NonPositiveSeparation) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    payload = layout.to_dict()
    payload["ratios_to_first"] = layout.ratios().tolist()
    if args.diameter:
        advice = min_separation_advisory(layout, args.diameter, args.min_ratio)
        for line in advice:
            print(f"advisory: {line}", file=sys.stderr)
    _emit(_dumps(payload), args.out)
    return EXIT_OK


def _parse_range(text: str) -> list[float]:
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--range expects start:stop:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise UsageError("--range needs step > 0 and stop >= start")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(count)]


def cmd_scan(args) -> int:
    params = args.param or []
    ranges = args.range or []
    if len(params) != len(ranges):
        raise UsageError("give one --range per --param")
    grid = {p: _parse_range(r) for p, r in zip(params, ranges)}
    fixed = {}
    if args.eps1 is not None:
        fixed["eps1"] = args.eps1
    if args.eps2 is not None:
        fixed["eps2"] = args.eps2
    try:
        points = dsg.feasible_region_scan(args.family, tuple(args.targets), grid, q=args.q, **fixed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(grid) + ["feasible", "reason"])
    for pt in points:
        writer.writerow([f"{pt.params[k]:.12g}" for k in grid] + [int(pt.feasible), pt.reason])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _add_tol(p):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="largest accepted |omega/q - n| for commensurability (default %(default)g)")
    p.add_argument("--max-denominator", type=int, default=DEFAULT_MAX_DENOMINATOR,
                   help="largest label of the reference eigenvalue (default %(default)d)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chainrevival", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    families = "a4 | a5 (general) | a5e (equal ends) | m5 | a7 | a9"

    p = sub.add_parser("design", help="couplings for a target integer spectrum")
    p.add_argument("family", nargs="?", help=families)
    p.add_argument("--targets", type=int, nargs="+", help="positive integer labels n1 n2 ...")
    p.add_argument("--spec", help="DesignSpec JSON file instead of FAMILY/--targets")
    p.add_argument("--q", type=float, default=1.0, help="base frequency (default 1)")
    p.add_argument("--s", type=float, help="free parameter s (a4: a2 = q s; a5: a1 = q|s|)")
    p.add_argument("--t", type=float, help="free parameter t (a5: a4 = q|t|)")
    p.add_argument("--eps1", type=int, choices=(-1, 1), default=1, help="a4 sign choice")
    p.add_argument("--eps2", type=int, choices=(-1, 1), default=1, help="a4 sign choice")
    p.add_argument("--phi", type=parse_length, help="a5e rotation angle in radians (default pi/4)")
    p.add_argument("--out", help="write chain JSON here (default stdout)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("check", help="commensurability and perfect-transfer report")
    p.add_argument("chain", help="chain JSON file ('-' for stdin)")
    _add_tol(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("revival", help="revival period and worst fidelity deficit")
    p.add_argument("chain", help="chain JSON file ('-' for stdin)")
    _add_tol(p)
    p.add_argument("--fidelity-tol", type=float, default=1e-9,
                   help="largest accepted 1 - F(T) (default %(default)g)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_revival)

    p = sub.add_parser("propagate", help="sample psi(z) to CSV")
    p.add_argument("chain", help="chain JSON file ('-' for stdin)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--input", help="real amplitudes, e.g. 1,1,0,0,0 (default e_1)")
    g.add_argument("--input-complex", help="complex amplitudes re:im,..., e.g. 1:0,0:-1,0:0")
    p.add_argument("--zmax", type=parse_length, required=True, help="final length, e.g. 12.5 or 4pi")
    p.add_argument("--samples", type=int, default=1024, help="number of z samples incl. ends")
    p.add_argument("--no-normalize", action="store_true", help="propagate the input as given")
    p.add_argument("--intensity", action="store_true", help="emit |psi_i|^2 columns")
    p.add_argument("--out")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("geometry", help="waveguide separations for a chain")
    p.add_argument("chain", help="chain JSON file ('-' for stdin)")
    p.add_argument("--kappa", type=float, required=True, help="decay rate per length unit")
    p.add_argument("--c0", type=float, help="coupling at d_ref (default |a1|)")
    p.add_argument("--dref", type=float, default=1.0, help="reference separation (default 1)")
    p.add_argument("--diameter", type=float, help="guide diameter for the spacing advisory")
    p.add_argument("--min-ratio", type=float, default=2.2,
                   help="advise below this separation/diameter (default %(default)g)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("scan", help="feasibility table over free parameters")
    p.add_argument("family", help=families)
    p.add_argument("--targets", type=int, nargs="+", required=True)
    p.add_argument("--param", action="append", choices=("s", "t", "phi"))
    p.add_argument("--range", action="append", help="start:stop:step, one per --param")
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--eps1", type=int, choices=(-1, 1))
    p.add_argument("--eps2", type=int, choices=(-1, 1))
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"chainrevival {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"chainrevival {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
