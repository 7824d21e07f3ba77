"""``entmeter`` command-line front end.

Exit codes: 0 success, 1 validation or parse error, 2 invariant-suite
failure, 3 internal numeric error.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from contextlib import contextmanager

import numpy as np

from . import measures, mixed, serialize, states, verify
from .errors import ArgumentError, EntmeterError, NumericError, ParseError, ValidationError
from .observables import BasisConvention

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_NUMERIC = 0, 1, 2, 3


@contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _load_state(args) -> states.PureState:
    if (args.state is None) == (args.file is None):
        raise ArgumentError("give exactly one of --state or --file")
    if args.file is not None:
        if args.x is not None:
            raise ArgumentError("--x applies to named states only")
        return serialize.state_from_json(serialize.read_text(args.file))
    return states.named_state(args.state, args.x)


def cmd_measure(args, out) -> int:
    psi = _load_state(args)
    convention = BasisConvention.parse(args.convention) if args.convention else None
    report = measures.mu(psi, psi.shape, convention)
    out.write(serialize.dumps(serialize.report_to_dict(report)))
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    lo, hi, steps = args.lo, args.hi, args.steps
    if not (0.0 <= lo <= hi <= 1.0):
        raise ArgumentError(f"need 0 <= from <= to <= 1, got from={lo}, to={hi}")
    if steps < 2:
        raise ArgumentError(f"steps must be >= 2, got {steps}")
    f = serialize.fmt_str
    if args.family == "ghz3":
        out.write("x,mu,tau\n")
        for x in np.linspace(lo, hi, steps):
            psi = states.ghz3(x)
            out.write(f"{f(x)},{f(measures.mu(psi).mu)},{f(measures.three_tangle(psi))}\n")
    else:
        out.write("x,mu,residual_max\n")
        for x in np.linspace(lo, hi, steps):
            psi = states.ghz4(x)
            out.write(f"{f(x)},{f(measures.mu(psi).mu)},{f(measures.entanglement_residual(psi)[1])}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.trials < 1:
        raise ArgumentError("trials must be >= 1")
    ok = verify.run_checks(args.seed, args.trials, out)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_roof(args, out) -> int:
    rho = serialize.density_from_json(serialize.read_text(args.file))
    opts = mixed.RoofOptions(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        seed=args.seed,
    )
    result = mixed.convex_roof_mu(rho, rho.shape, opts)
    doc = serialize.roof_to_dict(result, emit_ensemble=args.emit_ensemble)
    doc["mu_upper_bound"] = serialize.fmt(mixed.mu_upper_bound(rho))
    if rho.shape.dims == (2, 2):
        doc["wootters_concurrence"] = serialize.fmt(mixed.wootters_concurrence(rho))
    out.write(serialize.dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entmeter", description="Entanglement via total variance of local observables.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="entanglement report for a pure state")
    m.add_argument("--state", choices=sorted(states.NAMED_STATES), help="named state")
    m.add_argument("--file", help="state file (JSON)")
    m.add_argument("--x", type=float, help="amplitude parameter for the GHZ families")
    m.add_argument("--convention", choices=[c.value for c in BasisConvention])
    m.add_argument("--output")
    m.set_defaults(func=cmd_measure)

    s = sub.add_parser("sweep", help="mu along a GHZ family, as CSV")
    s.add_argument("family", nargs="?", choices=["ghz3", "ghz4"], default="ghz3")
    s.add_argument("--family", dest="family_opt", choices=["ghz3", "ghz4"])
    s.add_argument("--from", dest="lo", type=float, default=0.0)
    s.add_argument("--to", dest="hi", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=11)
    s.add_argument("--output")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--output")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("roof", help="convex-roof estimate for a density file")
    r.add_argument("--file", required=True, help="density file (JSON)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--restarts", type=int, default=32)
    r.add_argument("--ensemble-size", type=int)
    r.add_argument("--emit-ensemble", action="store_true")
    r.add_argument("--output")
    r.set_defaults(func=cmd_roof)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="entmeter: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "family_opt", None):
        args.family = args.family_opt
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (ParseError, ValidationError, ArgumentError) as exc:
        kind = "validation error" if isinstance(exc, ValidationError) else "error"
        print(f"entmeter: {kind}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"entmeter: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except EntmeterError as exc:
        print(f"entmeter: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    with _sink(args.output) as out:
        out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
