"""Command-line surface: basis inspection, norms, recovery, certificates,
batch experiments and width estimates.

Exit codes: 0 success, 1 computational failure (solver undecided),
2 usage or file-format error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from thetatensor import _svg
from thetatensor.groebner import (
    IdealSpec,
    build_groebner,
    buchberger_check,
    format_polynomial,
    parse_polynomial,
)
from thetatensor.gwidth import estimate_width_bound
from thetatensor.recovery import (
    ExperimentConfig,
    MeasurementEnsemble,
    SolverFailure,
    certify_sos,
    recover,
    run_recovery_experiment,
    theta_norm,
)
from thetatensor.solver import SolverSettings
from thetatensor.tensors import Shape, Tensor, load_tensor, random_low_rank, save_tensor


def _parse_shape(text: str) -> Shape:
    try:
        return Shape(tuple(int(c) for c in text.split(",")))
    except Exception:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}, expected e.g. 2,2,3")


def _parse_p(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p {text!r}")
    if p != 1 and (p < 2 or p % 2):
        raise argparse.ArgumentTypeError(
            f"p = {p} unsupported: odd exponents do not cut out a bounded "
            "variety; use 1, an even integer, or inf"
        )
    return p


def _parse_p_list(text: str) -> tuple:
    return tuple(_parse_p(tok) for tok in text.split(","))


def _settings(args) -> SolverSettings:
    kw = {}
    if getattr(args, "max_iters", None) is not None:
        kw["max_iterations"] = args.max_iters
    if getattr(args, "eps", None) is not None:
        kw["eps_primal"] = kw["eps_dual"] = kw["eps_gap"] = args.eps
    return SolverSettings(**kw)


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-iters", type=int, default=None, help="iteration budget")
    p.add_argument("--eps", type=float, default=None, help="solver tolerance")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_groebner(args) -> int:
    G = build_groebner(IdealSpec(args.shape, args.p))
    for g in G:
        print(format_polynomial(g))
    if args.check_buchberger:
        ok = buchberger_check(G)
        print("buchberger: " + ("ok" if ok else "FAILED"))
        if not ok:
            return 1
    return 0


def _cmd_norm(args) -> int:
    x = load_tensor(args.tensor)
    value = theta_norm(x, args.p, args.k, _settings(args))
    print(f"{value:.10g}")
    return 0


def _load_measurements(path: str) -> MeasurementEnsemble:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "shape" not in doc or "a" not in doc or "b" not in doc:
        raise ValueError("measurements file needs 'shape', 'a' and 'b' fields")
    shape = Shape(tuple(doc["shape"]))
    pairs = [(Tensor(shape, row), float(bi)) for row, bi in zip(doc["a"], doc["b"])]
    return MeasurementEnsemble(pairs, shape)


def _cmd_recover(args) -> int:
    if args.measurements:
        ens = _load_measurements(args.measurements)
    else:
        if args.shape is None or args.m is None:
            raise ValueError("need --measurements, or --shape with --m")
        truth = random_low_rank(args.shape, args.rank, args.kind, args.seed)
        ens = MeasurementEnsemble.gaussian(truth, args.m, args.seed + 1)
    res = recover(ens, args.p, args.k, _settings(args))
    print(f"norm {res.norm_value:.10g}")
    if res.rel_error is not None:
        print(f"rel_error {res.rel_error:.10g}")
        print(f"success {1 if res.success else 0}")
    if args.output:
        save_tensor(res.recovered, args.output)
    return 0


def _cmd_certify(args) -> int:
    with open(args.poly) as fh:
        f = parse_polynomial(fh.read())
    res = certify_sos(f, args.shape, args.p, args.k, _settings(args))
    print(res.status)
    if res.status == "feasible" and args.witness:
        doc = {
            "basis": [str(m) for m in res.witness.basis],
            "gram": res.witness.Q.tolist(),
            "reconstruction_error": res.witness.reconstruction_error,
        }
        with open(args.witness, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return 0 if res.status in ("feasible", "infeasible") else 1


def _parse_m_range(text: str) -> tuple[int, ...]:
    parts = text.split(":")
    if len(parts) == 1:
        return (int(parts[0]),)
    lo, hi = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) > 2 else 1
    return tuple(range(lo, hi + 1, step))


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        shape=args.shape,
        rank=args.rank,
        kind=args.kind,
        p_list=args.p,
        k=args.k,
        trials=args.trials,
        seed=args.seed,
        mode="sweep" if args.m_range else "search",
        m_values=_parse_m_range(args.m_range) if args.m_range else (),
        vary_rank=args.vary_rank,
        workers=args.threads,
        settings=_settings(args),
    )
    result = run_recovery_experiment(cfg)
    _write(args.csv, result.to_csv())
    if args.svg:
        from thetatensor.recovery import format_p

        series = []
        if cfg.mode == "search":
            for p in cfg.p_list:
                xs = list(range(cfg.trials))
                ys = [float(result.minimal_m[(t, p)]) for t in xs]
                series.append((f"p={format_p(p)}", [float(x) for x in xs], ys))
            svg = _svg.line_plot(
                series, "measurements required", "trial", "minimal m"
            )
        else:
            for p in cfg.p_list:
                xs = sorted(set(r.m for r in result.rows if r.p == p))
                ys = []
                for m in xs:
                    rows = [r for r in result.rows if r.p == p and r.m == m]
                    ys.append(sum(r.success for r in rows) / len(rows))
                series.append((f"p={format_p(p)}", [float(x) for x in xs], ys))
            svg = _svg.line_plot(series, "recovery rate", "m", "success rate")
        _write(args.svg, svg)
    return 0


def _cmd_gwidth(args) -> int:
    shapes: list[Shape]
    if args.sweep:
        lo, hi = (int(t) for t in args.sweep.split(":"))
        shapes = [Shape((n,) * args.order) for n in range(lo, hi + 1)]
    elif args.shape is not None:
        shapes = [args.shape]
    else:
        raise ValueError("need --shape or --sweep")
    chunks = []
    means = []
    for sh in shapes:
        est = estimate_width_bound(
            sh, args.samples, args.seed, _settings(args), workers=args.threads
        )
        csv = est.to_csv()
        chunks.append(csv if not chunks else "".join(csv.splitlines(True)[1:]))
        means.append((max(sh.dims), est.mean_gamma_sq, est.bound_mean))
    _write(args.csv, "".join(chunks))
    if args.svg:
        svg = _svg.line_plot(
            [
                ("mean gamma^2", [float(n) for n, g2, _ in means], [g2 for _, g2, _ in means]),
                ("bound", [float(n) for n, _, bd in means], [bd for _, _, bd in means]),
            ],
            "width-based measurement estimate",
            "n",
            "value",
        )
        _write(args.svg, svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thetatensor",
        description="Theta-body relaxations of tensor nuclear p-norms",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("groebner", help="print a basis, optionally verify it")
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--p", type=_parse_p, required=True)
    p.add_argument("--check-buchberger", action="store_true")
    p.set_defaults(func=_cmd_groebner)

    p = sub.add_parser("norm", help="theta-k norm of a tensor file")
    p.add_argument("--tensor", required=True, help="JSON with 'shape' and 'values'")
    p.add_argument("--p", type=_parse_p, required=True)
    p.add_argument("--k", type=int, default=1)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("recover", help="single recovery from measurements")
    p.add_argument("--measurements", help="JSON with 'shape', 'a', 'b'")
    p.add_argument("--shape", type=_parse_shape)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--kind", choices=("gaussian", "signed"), default="gaussian")
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=_parse_p, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--output", help="write recovered tensor JSON here")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("certify", help="k-sos membership of a polynomial file")
    p.add_argument("--poly", required=True, help="polynomial text file")
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--p", type=_parse_p, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--witness", help="write the Gram witness JSON here")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("experiment", help="batch recovery sweep or minimal-m search")
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--vary-rank", action="store_true", help="draw rank from 1..rank")
    p.add_argument("--kind", choices=("gaussian", "signed"), default="gaussian")
    p.add_argument("--p", type=_parse_p_list, default=(2, math.inf),
                   help="comma-separated list, e.g. 2,inf")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m-range", help="lo:hi[:step] sweep; omit to search minimal m")
    p.add_argument("--csv", required=True, help="output CSV path ('-' for stdout)")
    p.add_argument("--svg", help="optional success-curve plot")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("gwidth", help="Gaussian-width measurement estimate")
    p.add_argument("--shape", type=_parse_shape)
    p.add_argument("--sweep", help="lo:hi cubic sweep of n")
    p.add_argument("--order", type=int, default=3, help="tensor order for --sweep")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True, help="output CSV path ('-' for stdout)")
    p.add_argument("--svg", help="optional trend plot")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_gwidth)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
