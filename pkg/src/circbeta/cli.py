"""Batch command-line front end: sample ensembles to CSV/JSON, reproduce the
trace-moment table, run the verification suite, and compute moment estimates.

Exit codes: 0 success, 1 verification failure, 2 argument error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .distributions import GENERATOR_ID
from .ensembles import (
    EnsembleSpec,
    SampleBatch,
    moment_estimate,
    sample_batch,
    trace_moment_table,
    trace_power_abs2,
)
from .verify import CHECK_GROUPS, run_suite

_ENSEMBLE_FLAGS = {
    "cbe": "cbe",
    "circular-jacobi": "circular_jacobi",
    "joint": "joint_perturbed",
    "haar": "haar_unitary",
    "doubled-cue": "doubled_cue",
    "cse-dual": "cse_dual",
    "coe-union": "coe_union",
    "coe-2n": "coe_2n",
}

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class MomentEstimate:
    p: int
    estimate: float
    stderr: float
    m: int


def _fmt(x: float) -> str:
    # 17 significant digits round-trips a double exactly, locale-independent
    return format(float(x), ".17g")


def _default_seed() -> int:
    env = os.environ.get("RMT_SEED")
    return int(env) if env else 0


def _spec_from_args(args) -> EnsembleSpec:
    kind = _ENSEMBLE_FLAGS[args.ensemble]
    kwargs = {}
    if kind in ("cbe", "joint_perturbed"):
        if args.beta is None:
            raise ValueError("--beta is required for this ensemble")
        kwargs["beta"] = args.beta
    if kind == "circular_jacobi":
        if args.a is None or args.d is None:
            raise ValueError("--a and --d are required for circular-jacobi")
        kwargs["a"] = args.a
        kwargs["d"] = args.d
    return EnsembleSpec(kind, args.n, args.m, args.seed, **kwargs)


def _arg_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _csv_provenance(spec: EnsembleSpec) -> list[str]:
    params = " ".join(f"{k}={v}" for k, v in spec.params_dict().items())
    return [
        f"# spec: {params}",
        f"# generator: {GENERATOR_ID} library: circbeta {__version__}",
    ]


def _batch_csv(batch: SampleBatch) -> str:
    lines = _csv_provenance(batch.spec)
    if batch.companions is None:
        lines.append("sample_index,angle_index,theta")
        for i, row in enumerate(batch.draws):
            for j, th in enumerate(row):
                lines.append(f"{i},{j},{_fmt(th)}")
    else:
        lines.append("sample_index,angle_index,theta,kind")
        for i, (row, comp) in enumerate(zip(batch.draws, batch.companions)):
            for j, th in enumerate(row):
                lines.append(f"{i},{j},{_fmt(th)},theta")
            for j, ps in enumerate(comp):
                lines.append(f"{i},{j},{_fmt(ps)},psi")
    return "\n".join(lines) + "\n"


def _batch_json(batch: SampleBatch) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "spec": batch.spec.params_dict(),
        "generator": GENERATOR_ID,
        "library_version": __version__,
        "samples": batch.draws.tolist(),
    }
    if batch.companions is not None:
        doc["companions"] = batch.companions.tolist()
        doc["t_angles"] = np.asarray(batch.t_angles).tolist()
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write(path: str, text: str) -> int:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_sample(args) -> int:
    try:
        spec = _spec_from_args(args)
    except ValueError as exc:
        return _arg_error(str(exc))
    batch = sample_batch(spec)
    text = _batch_csv(batch) if args.format == "csv" else _batch_json(batch)
    return _write(args.out, text)


def cmd_table1(args) -> int:
    est, err = trace_moment_table(args.m, args.n_max, args.p_max, args.seed)
    cols = list(range(args.n_min, args.n_max + 1))
    width = 9

    def print_matrix(title, mat):
        print(title)
        print("p\\N".ljust(6) + "".join(str(c).rjust(width) for c in cols))
        for p in range(1, args.p_max + 1):
            cells = "".join(f"{mat[p - 1, c - 1]:{width}.3f}" for c in cols)
            print(str(p).ljust(6) + cells)

    print_matrix(
        f"|Tr U^p|^2 Monte Carlo estimates (M={args.m}, seed={args.seed})", est
    )
    print_matrix("standard errors", err)
    if args.m < 2:
        print("note: single replicate, standard errors degenerate (reported as 0)")
    if args.out:
        lines = [
            f"# spec: table1 m={args.m} n_max={args.n_max} p_max={args.p_max} seed={args.seed}",
            f"# generator: {GENERATOR_ID} library: circbeta {__version__}",
            "p,N,estimate,stderr",
        ]
        for p in range(1, args.p_max + 1):
            for c in cols:
                lines.append(f"{p},{c},{_fmt(est[p - 1, c - 1])},{_fmt(err[p - 1, c - 1])}")
        return _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    names = None
    if args.only:
        names = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in names if s not in CHECK_GROUPS]
        if unknown:
            return _arg_error(
                f"unknown check group(s) {unknown}; known: {sorted(CHECK_GROUPS)}"
            )
    reports = run_suite(names, seed=args.seed)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "seed": args.seed,
        "library_version": __version__,
        "groups": names if names is not None else list(CHECK_GROUPS),
        "checks": [r.to_dict() for r in reports],
        "all_passed": all(r.passed for r in reports),
    }
    text = json.dumps(doc, sort_keys=True, indent=2, default=float) + "\n"
    if args.out:
        rc = _write(args.out, text)
        if rc:
            return rc
    else:
        print(text, end="")
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(
            f"[{status}] {r.check_name}: max_rel_error={r.max_rel_error:.3e}"
            f" tol={r.tolerance:.1e} trials={r.trials}",
            file=sys.stderr,
        )
    return 0 if doc["all_passed"] else 1


def cmd_estimate(args) -> int:
    try:
        spec = _spec_from_args(args)
    except ValueError as exc:
        return _arg_error(str(exc))
    try:
        p_list = [int(s) for s in args.p.split(",")]
    except ValueError:
        return _arg_error("--p must be a comma-separated list of integers")
    if any(p < 0 for p in p_list):
        return _arg_error("powers must be non-negative")
    batch = sample_batch(spec)
    out = []
    for p in p_list:
        vals = trace_power_abs2(batch.draws, p)
        mean, err = moment_estimate(vals)
        out.append(MomentEstimate(p, mean, err, spec.m_samples))
    print(f"ensemble={args.ensemble} n={args.n} m={args.m} seed={args.seed}")
    print("p,estimate,stderr")
    for me in out:
        flag = " (single-sample stderr degenerate)" if me.m < 2 else ""
        print(f"{me.p},{_fmt(me.estimate)},{_fmt(me.stderr)}{flag}")
    return 0


def _add_ensemble_args(p: argparse.ArgumentParser):
    p.add_argument("--ensemble", required=True, choices=sorted(_ENSEMBLE_FLAGS))
    p.add_argument("--n", type=int, required=True, help="matrix size / number of angles")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--a", type=float, default=None, help="one-point exponent")
    p.add_argument("--d", type=float, default=None, help="half the pair exponent")
    p.add_argument("--m", type=int, default=1000, help="number of samples")
    p.add_argument("--seed", type=int, default=_default_seed())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circbeta",
        description="circular beta ensemble sampling and verification toolkit",
    )
    ap.add_argument("--version", action="version", version=f"circbeta {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", help="draw angle sets and write them to disk")
    _add_ensemble_args(ps)
    ps.add_argument("--out", required=True)
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    ps.set_defaults(fn=cmd_sample)

    pt = sub.add_parser("table1", help="trace-moment table from recurrence sweeps")
    pt.add_argument("--m", type=int, default=5000)
    pt.add_argument("--n-max", type=int, default=5)
    pt.add_argument("--n-min", type=int, default=2)
    pt.add_argument("--p-max", type=int, default=5)
    pt.add_argument("--seed", type=int, default=_default_seed())
    pt.add_argument("--out", default=None, help="optional CSV output path")
    pt.set_defaults(fn=cmd_table1)

    pv = sub.add_parser("verify", help="run the numerical verification suite")
    pv.add_argument("--only", default=None, help="comma-separated check groups")
    pv.add_argument("--seed", type=int, default=_default_seed())
    pv.add_argument("--out", default=None, help="write the JSON report here")
    pv.set_defaults(fn=cmd_verify)

    pe = sub.add_parser("estimate", help="trace-moment estimates with stderr")
    _add_ensemble_args(pe)
    pe.add_argument("--p", default="1,2", help="comma-separated powers")
    pe.set_defaults(fn=cmd_estimate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        return _arg_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
