"""Command-line driver: compute moduli, best approximations, rates, run the
verification suites, and persist results as CSV or JSON.

Numeric payloads are deterministic: identical configurations produce
byte-identical payload sections (floats rendered with 17 significant digits,
JSON keys sorted).  Exit codes: 0 success, 1 usage error, 2 numerical error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import List, Tuple

from . import __version__
from .approx import best_approx
from .core import JacobiWeight, NormOrder
from .errors import ModulusLabError
from .extremals import catalog_get, catalog_names
from .moduli import ModulusRequest, dt_modulus
from .rates import (family_sup_sweep, fit_rate_auto, request_hash, upsilon,
                    UpsilonSpec)
from .verify import SUITES, run_suite


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: Tuple[Tuple[str, str], ...]   # sorted key/value pairs
    output_dir: str
    seed: int
    format: str

    @property
    def hash(self) -> str:
        body = ";".join(f"{k}={v}" for k, v in self.parameters)
        return request_hash(f"{self.command}?{body}&seed={self.seed}")


@dataclass(frozen=True)
class ResultRecord:
    config_hash: str
    timestamp: float
    payload: Tuple[Tuple[float, float, str], ...]   # (abscissa, value, component)
    version: str


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _csv_lines(record: ResultRecord) -> List[str]:
    lines = ["abscissa,value,component,config_hash"]
    for absc, val, comp in record.payload:
        lines.append(f"{_fmt(absc)},{_fmt(val)},{comp},{record.config_hash}")
    return lines


def _json_text(record: ResultRecord) -> str:
    doc = {
        "config_hash": record.config_hash,
        "payload": [{"abscissa": _fmt(a), "value": _fmt(v), "component": c}
                    for a, v, c in record.payload],
        "version": record.version,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(record: ResultRecord, config: RunConfig, plot_data: str = ""):
    """Write or print the record, plus optional per-component plot files."""
    text = "\n".join(_csv_lines(record)) + "\n" if config.format == "csv" \
        else _json_text(record)
    if config.output_dir:
        import os
        os.makedirs(config.output_dir, exist_ok=True)
        path = os.path.join(config.output_dir,
                            f"{config.command}_{record.config_hash}.{config.format}")
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    if plot_data:
        comps = sorted({c for _, _, c in record.payload})
        for comp in comps:
            path = f"{plot_data}_{comp}.dat"
            with open(path, "w") as fh:
                for absc, val, c in record.payload:
                    if c == comp:
                        fh.write(f"{_fmt(absc)} {_fmt(val)}\n")
            print(f"wrote {path}")


# ---------------------------------------------------------------------------
# catalog plumbing


def _build_function(args):
    """Map CLI flags onto the parameters of the named catalog entry."""
    name = args.fn
    if name is None:
        raise ModulusLabError("--fn is required for this command")
    k = args.k
    if name == "heaviside":
        entry = catalog_get(name)
    elif name == "oscillating_step":
        entry = catalog_get(name, k=k, delta=args.delta)
    elif name == "truncated_power":
        eps = 2.0 * k * k * args.delta ** 2
        entry = catalog_get(name, k=k, eps=eps, beta=args.beta,
                            p=NormOrder.of(args.p).q)
    elif name == "inverse_power":
        entry = catalog_get(name, beta=max(args.beta, 0.5))
    elif name == "zeta_spline":
        m = int(math.floor(math.log2(1.0 / args.delta))) + 1
        entry = catalog_get(name, m=m, p=NormOrder.of(args.p).q)
    elif name == "truncated_power_origin":
        entry = catalog_get(name, k=k)
    elif name == "moving_truncated_power":
        entry = catalog_get(name, k=k, n=args.n)
    else:
        entry = catalog_get(name)   # raises UnknownEntryError with the names
    return entry


def _family(args):
    """Delta-indexed family for the sweep commands."""
    name = args.fn
    k = args.k

    def build(delta):
        if name == "truncated_power":
            return catalog_get(name, k=k, eps=2.0 * k * k * delta ** 2,
                               beta=args.beta, p=NormOrder.of(args.p).q)
        if name == "zeta_spline":
            m = int(math.floor(math.log2(1.0 / delta))) + 1
            return catalog_get(name, m=m, p=NormOrder.of(args.p).q)
        if name == "oscillating_step":
            return catalog_get(name, k=k, delta=delta)
        if name == "heaviside":
            return catalog_get(name)
        raise ModulusLabError(
            f"no delta-indexed family for {name!r}; choose from "
            "heaviside, oscillating_step, truncated_power, zeta_spline")

    return build


def _sweep_deltas(args) -> List[float]:
    j_hi = max(3, int(round(math.log2(1.0 / args.delta))))
    return [2.0 ** -j for j in range(3, j_hi + 1)]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_modulus(args, config: RunConfig) -> int:
    entry = _build_function(args)
    req = ModulusRequest(k=args.k, delta=args.delta,
                         weight=JacobiWeight(args.alpha, args.beta),
                         q=NormOrder.of(args.q))
    res = dt_modulus(entry.descriptor, req)
    payload = tuple((args.delta, v, c) for c, v in
                    (("main", res.main), ("forward", res.forward),
                     ("backward", res.backward), ("total", res.total)))
    record = ResultRecord(config.hash, time.time(), payload, __version__)
    print(f"modulus  fn={entry.descriptor.name}  k={args.k}  q={args.q}  "
          f"w=({args.alpha:g},{args.beta:g})  delta={args.delta:g}")
    for absc, val, comp in payload:
        print(f"  {comp:<9} {val:.10g}")
    _emit(record, config, args.plot_data)
    return 0


def _cmd_approx(args, config: RunConfig) -> int:
    entry = _build_function(args)
    res = best_approx(entry.descriptor, args.n,
                      JacobiWeight(args.alpha, args.beta), args.q)
    payload = ((float(args.n), res.error, "error"),
               (float(args.n), float(res.iterations), "iterations"))
    record = ResultRecord(config.hash, time.time(), payload, __version__)
    print(f"approx  fn={entry.descriptor.name}  n={args.n}  q={args.q}  "
          f"w=({args.alpha:g},{args.beta:g})")
    print(f"  error     {res.error:.10g}")
    print(f"  solver    {res.solver} ({res.iterations} iterations)")
    _emit(record, config, args.plot_data)
    return 0


def _cmd_rates(args, config: RunConfig) -> int:
    if args.mode == "upsilon":
        spec = UpsilonSpec(k=args.k, q=args.q, p=args.p,
                           alpha=args.alpha, beta=args.beta)
        val = upsilon(spec, args.delta)
        payload = ((args.delta, val, "upsilon"),)
        record = ResultRecord(config.hash, time.time(), payload, __version__)
        print(f"upsilon  k={args.k}  q={args.q}  p={args.p}  "
              f"(alpha,beta)=({args.alpha:g},{args.beta:g})  delta={args.delta:g}")
        print(f"  value     {val:.10g}")
        _emit(record, config, args.plot_data)
        return 0
    # sweep / fit share the same computation
    deltas = _sweep_deltas(args)
    sweep = family_sup_sweep(_family(args), args.k,
                             JacobiWeight(args.alpha, args.beta),
                             args.q, args.p, deltas)
    payload = tuple((a, v, "modulus") for a, v in
                    zip(sweep.abscissae, sweep.values))
    print(f"sweep  fn={args.fn}  k={args.k}  q={args.q}  p={args.p}  "
          f"{len(deltas)} deltas")
    for absc, val, _ in payload:
        print(f"  delta={absc:<12g} modulus={val:.10g}")
    if args.mode == "fit":
        fit = fit_rate_auto(sweep)
        payload = payload + ((0.0, fit.exponent, "exponent"),
                             (0.0, fit.log_power, "log_power"),
                             (0.0, fit.r_squared, "r_squared"))
        print(f"  fit: exponent={fit.exponent:.6g}  log_power={fit.log_power:.6g}"
              f"  r^2={fit.r_squared:.6g}  model={fit.model}")
    record = ResultRecord(config.hash, time.time(), payload, __version__)
    _emit(record, config, args.plot_data)
    return 0


def _cmd_verify(args, config: RunConfig) -> int:
    results = run_suite(args.suite, seed=args.seed)
    width = max(len(r.name) for r in results)
    n_fail = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        n_fail += not r.passed
        print(f"[{mark}] {r.suite:<12} {r.name:<{width}}  {r.detail}")
    print(f"{len(results)} checks, {n_fail} failed")
    payload = tuple((float(i), float(r.passed), f"{r.suite}:{r.name}")
                    for i, r in enumerate(results))
    record = ResultRecord(config.hash, time.time(), payload, __version__)
    if config.output_dir:
        _emit(record, config)
    return 3 if n_fail else 0


def _cmd_catalog(args, config: RunConfig) -> int:
    names = [args.name] if args.name else list(catalog_names())
    for name in names:
        if name not in catalog_names():
            raise ModulusLabError(f"no catalog entry named {name!r}")
    width = max(len(n) for n in names)
    for name in names:
        # build a representative instance to show the claimed rate
        defaults = {"oscillating_step": {"k": 1, "delta": 0.1},
                    "heaviside": {},
                    "truncated_power": {"k": 2, "eps": 0.125},
                    "inverse_power": {"beta": 0.5},
                    "zeta_spline": {"m": 4},
                    "truncated_power_origin": {"k": 2},
                    "moving_truncated_power": {"k": 2, "n": 16}}[name]
        claim = catalog_get(name, **defaults).claimed_rate
        log_part = f", log power {claim.log_power_rule}" \
            if claim.log_power_rule != "0" else ""
        print(f"{name:<{width}}  exponent {claim.exponent_rule}{log_part}")
        print(f"{'':<{width}}  {claim.anchor}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _norm_order(text: str) -> float:
    return NormOrder.of(float("inf") if text == "inf" else float(text)).q


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--q", type=_norm_order, default=2.0)
    p.add_argument("--p", type=_norm_order, default=float("inf"))
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--fn", type=str, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=str, default="")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot-data", dest="plot_data", type=str, default="")


def _build_parser() -> _Parser:
    parser = _Parser(prog="modulus-lab",
                     description="Weighted moduli of smoothness and best "
                     "polynomial approximation for k-monotone functions.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    _add_common(sub.add_parser("modulus", help="weighted modulus of a "
                               "catalog function"))
    _add_common(sub.add_parser("approx", help="best weighted polynomial "
                               "approximation error"))
    rates = sub.add_parser("rates", help="rate formulas, sweeps, and fits")
    rates.add_argument("mode", choices=("upsilon", "sweep", "fit"))
    _add_common(rates)
    verify = sub.add_parser("verify", help="run an invariant suite")
    verify.add_argument("--suite", choices=tuple(sorted(SUITES)) + ("all",),
                        default="all")
    _add_common(verify)
    catalog = sub.add_parser("catalog", help="list catalog entries")
    catalog.add_argument("--name", type=str, default="")
    _add_common(catalog)
    return parser


_DISPATCH = {"modulus": _cmd_modulus, "approx": _cmd_approx,
             "rates": _cmd_rates, "verify": _cmd_verify,
             "catalog": _cmd_catalog}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    skip = {"command", "mode", "suite", "name", "seed", "out", "format",
            "plot_data"}
    params = tuple(sorted((key, str(val)) for key, val in vars(args).items()
                          if key not in skip))
    if getattr(args, "mode", None):
        params = (("mode", args.mode),) + params
    if getattr(args, "suite", None):
        params = (("suite", args.suite),) + params
    config = RunConfig(command=args.command, parameters=params,
                       output_dir=args.out, seed=args.seed, format=args.format)
    try:
        return _DISPATCH[args.command](args, config)
    except (ModulusLabError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
