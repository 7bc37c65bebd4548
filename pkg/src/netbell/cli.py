"""Command-line surface: reproducible experiments with machine-readable
records.

Every run emits one RunRecord carrying the scenario, the seed, the value
and both closed-form bounds. Exit codes are part of the contract:

* 0 success
* 2 usage error, invalid scenario, or malformed settings file
* 3 dimension / search-space guard
* 4 formula and enumeration bounds disagree
* 5 certificate failure (negative gap or certificate operator not PSD)
* 6 a correspondence trial violated the bound
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from . import __version__, serialize
from .certify import correspondence_scan, sos_certificate
from .classical import enumerate_deterministic_max, sample_nlocal_value
from .errors import (
    DimensionGuard,
    InvalidScenario,
    OutOfRange,
    SearchSpaceTooLarge,
    ZeroNorm,
)
from .functionals import (
    BIPARTITE_KINDS,
    Kind,
    build_functional,
    classical_bound,
    quantum_bound,
)
from .optimize import SeesawConfig, seesaw_optimize, vector_model_optimize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_BOUND_MISMATCH = 4
EXIT_CERTIFICATE = 5
EXIT_CORRESPONDENCE = 6

SIGN_FAMILY_NOTE = (
    "classical bound uses m*C(m-1,floor((m-1)/2)), confirmed by exhaustive "
    "enumeration (6 at m=3); the superficially similar closed form "
    "m*C(m,floor((m-1)/2)) does not match enumeration (it gives 9 at m=3)"
)


@dataclass
class RunRecord:
    """One machine-readable experiment record; round-trips bit-identically
    through JSON apart from wall_time_ms and version."""

    command: str
    scenario: dict
    seed: int | None
    value: float
    classical_bound: float
    quantum_bound: float
    artifacts: dict | None
    note: str | None
    wall_time_ms: int
    version: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "scenario": self.scenario,
            "seed": self.seed,
            "value": self.value,
            "classical_bound": self.classical_bound,
            "quantum_bound": self.quantum_bound,
            "artifacts": self.artifacts,
            "note": self.note,
            "wall_time_ms": self.wall_time_ms,
            "version": self.version,
        }


def _emit(record: RunRecord, fmt: str) -> None:
    data = record.to_dict()
    if fmt == "json":
        print(serialize.dumps(data))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        fields = [
            "command", "kind", "m", "n", "seed", "value",
            "classical_bound", "quantum_bound", "wall_time_ms", "version",
        ]
        writer.writerow(fields)
        writer.writerow(
            [
                record.command,
                record.scenario["kind"],
                record.scenario["m"],
                record.scenario["n"],
                record.seed,
                repr(record.value),
                repr(record.classical_bound),
                repr(record.quantum_bound),
                record.wall_time_ms,
                record.version,
            ]
        )
        sys.stdout.write(buf.getvalue())
    else:
        kind = record.scenario["kind"]
        print(
            f"{record.command} {kind} m={record.scenario['m']} "
            f"n={record.scenario['n']}: value = {record.value:.9f}"
        )
        print(
            f"  classical bound = {record.classical_bound:.9f}   "
            f"quantum bound = {record.quantum_bound:.9f}"
        )
        if record.note:
            print(f"  note: {record.note}")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".netbell-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _resolve_n(expr: str, n: int | None) -> int:
    kind = Kind(expr)
    if kind in BIPARTITE_KINDS:
        return 1
    if kind is Kind.BILOCAL:
        return 2
    return 2 if n is None else n


def _build_functional_from_args(args) -> "Functional":
    n = _resolve_n(args.expr, args.n)
    return build_functional(Kind(args.expr), args.m, n)


def _record(command, f, seed, value, artifacts=None, note=None, started=0.0):
    return RunRecord(
        command=command,
        scenario=serialize.functional_to_json(f),
        seed=seed,
        value=float(value),
        classical_bound=classical_bound(f),
        quantum_bound=quantum_bound(f),
        artifacts=artifacts,
        note=note,
        wall_time_ms=int((time.perf_counter() - started) * 1000),
        version=__version__,
    )


def cmd_optimize(args) -> int:
    started = time.perf_counter()
    f = _build_functional_from_args(args)
    if args.model == "vector":
        ambient = args.ambient if args.ambient else f.m
        value, model = vector_model_optimize(f, ambient=ambient, seed=args.seed)
        artifacts = {
            "model": "vector",
            "ambient": ambient,
            "vectors": np.asarray(model.vectors).tolist(),
        }
    else:
        cfg = SeesawConfig(
            edge_dim=args.dim,
            max_iters=args.iters,
            tol=args.tol,
            restarts=args.restarts,
            seed=args.seed,
        )
        result = seesaw_optimize(f, cfg)
        artifacts = {
            "model": "seesaw",
            "state": serialize.state_to_json(result.state),
            **serialize.assignment_to_json(result.observables),
            "history": list(result.history),
            "iterations": result.iterations,
            "converged": result.converged,
        }
        value = result.value
    _emit(_record("optimize", f, args.seed, value, artifacts, started=started), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    started = time.perf_counter()
    f = _build_functional_from_args(args)
    note = SIGN_FAMILY_NOTE if f.kind in (Kind.GM, Kind.DELTA) else None
    formula = classical_bound(f)
    if args.method == "formula":
        value, artifacts = formula, None
    elif args.method == "enumerate":
        value, witness = enumerate_deterministic_max(f)
        if value != formula:
            print(
                f"bound mismatch: enumeration gives {value!r}, "
                f"formula gives {formula!r}",
                file=sys.stderr,
            )
            return EXIT_BOUND_MISMATCH
        artifacts = {"witness": serialize.strategy_to_json(witness)}
    else:
        value = sample_nlocal_value(
            f, trials=args.trials, support_size=args.support, seed=args.seed
        )
        artifacts = {"trials": args.trials, "support_size": args.support}
    _emit(_record("bound", f, args.seed, value, artifacts, note, started), args.out)
    return EXIT_OK


def _load_settings(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        obj = json.load(handle)
    return serialize.settings_from_json(obj)


def cmd_certify(args) -> int:
    started = time.perf_counter()
    f = _build_functional_from_args(args)
    if not args.settings and not args.at_optimum:
        print("certify needs --settings FILE or --at-optimum", file=sys.stderr)
        return EXIT_USAGE
    if args.settings:
        try:
            state, assignment = _load_settings(args.settings)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            print(f"invalid settings file: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        cfg = SeesawConfig(
            edge_dim=args.dim,
            max_iters=args.iters,
            tol=args.tol,
            restarts=args.restarts,
            seed=args.seed,
        )
        result = seesaw_optimize(f, cfg)
        state, assignment = result.state, result.observables

    try:
        report = sos_certificate(f, state, assignment)
    except ZeroNorm as exc:
        print(f"certificate undefined: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE

    artifacts = {
        "omegas": list(report.omegas),
        "weights": list(report.weights),
        "residuals": list(report.residuals),
        "correlators": list(report.correlators),
        "bound_from_omegas": report.bound_from_omegas,
        "gap": report.gap,
        "gamma_min_eig": report.gamma_min_eig,
        "state": serialize.state_to_json(state),
        **serialize.assignment_to_json(assignment),
    }
    record = _record(
        "certify", f, args.seed, report.value, artifacts, started=started
    )
    _emit(record, args.out)
    if report.gap < -1e-9 or report.gamma_min_eig < -1e-8:
        print(
            f"certificate failure: gap={report.gap!r} "
            f"gamma_min_eig={report.gamma_min_eig!r}",
            file=sys.stderr,
        )
        return EXIT_CERTIFICATE
    return EXIT_OK


def cmd_correspondence(args) -> int:
    started = time.perf_counter()
    family = args.family
    ranks = tuple(int(r) for r in args.ranks.split(","))
    report = correspondence_scan(
        family,
        trials=args.trials,
        seed=args.seed,
        m=args.m,
        n=_resolve_n(family, args.n),
        edge_restarts=args.edge_restarts,
        ranks=ranks,
    )
    f = build_functional(
        {"bilocal": Kind.BILOCAL, "star": Kind.STAR, "xi": Kind.XI}[family],
        report.m,
        report.n,
    )
    rows = [
        {
            "trial": r.trial,
            "edge_values": list(r.edge_values),
            "network_value": r.network_value,
            "bound": r.bound,
            "margin": r.bound - r.network_value,
            "satisfied": r.satisfied,
            "both_violate": r.both_violate,
            "network_violates": r.network_violates,
        }
        for r in report.results
    ]
    margins = [r.bound - r.network_value for r in report.results]
    artifacts = {
        "family": report.family,
        "trials": report.trials,
        "edge_restarts": report.edge_restarts,
        "ranks": list(ranks),
        "satisfied": report.satisfied,
        "implication_failures": report.implication_failures,
        "min_margin": min(margins),
        "results": rows,
    }
    record = _record(
        "correspondence",
        f,
        args.seed,
        min(margins),
        artifacts,
        started=started,
    )
    _emit(record, "json" if args.format is None else args.format)

    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf)
        edge_cols = [f"edge_{k + 1}" for k in range(report.n)]
        writer.writerow(["trial", "seed"] + edge_cols + ["network", "bound", "margin"])
        for r in report.results:
            writer.writerow(
                [r.trial, report.seed]
                + [repr(v) for v in r.edge_values]
                + [repr(r.network_value), repr(r.bound), repr(r.bound - r.network_value)]
            )
        _atomic_write(args.out, buf.getvalue())

    return EXIT_OK if report.satisfied else EXIT_CORRESPONDENCE


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--expr",
        required=True,
        choices=[k.value for k in Kind],
        help="functional family",
    )
    p.add_argument("--m", type=int, default=2, help="settings per edge party")
    p.add_argument("--n", type=int, default=None, help="number of sources")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="json", choices=["json", "csv", "pretty"],
                   help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netbell",
        description="Network Bell functionals: bounds, optimization, certificates.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="maximize a functional")
    _add_scenario_args(p_opt)
    p_opt.add_argument("--dim", type=int, default=2, help="edge-party dimension")
    p_opt.add_argument("--restarts", type=int, default=5)
    p_opt.add_argument("--iters", type=int, default=600)
    p_opt.add_argument("--tol", type=float, default=1e-14)
    p_opt.add_argument("--model", choices=["seesaw", "vector"], default="seesaw")
    p_opt.add_argument("--ambient", type=int, default=None,
                       help="vector-model ambient dimension (default m)")
    p_opt.set_defaults(func=cmd_optimize)

    p_bound = sub.add_parser("bound", help="classical bound of a functional")
    _add_scenario_args(p_bound)
    p_bound.add_argument(
        "--method", choices=["formula", "enumerate", "sample"], default="formula"
    )
    p_bound.add_argument("--trials", type=int, default=10_000)
    p_bound.add_argument("--support", type=int, default=2,
                         help="per-source support size for sampling")
    p_bound.set_defaults(func=cmd_bound)

    p_cert = sub.add_parser("certify", help="sum-of-squares certificate")
    _add_scenario_args(p_cert)
    p_cert.add_argument("--settings", default=None,
                        help="JSON file with state and observables")
    p_cert.add_argument("--at-optimum", action="store_true",
                        help="certify the seesaw optimum")
    p_cert.add_argument("--dim", type=int, default=2)
    p_cert.add_argument("--restarts", type=int, default=8)
    p_cert.add_argument("--iters", type=int, default=600)
    p_cert.add_argument("--tol", type=float, default=1e-15)
    p_cert.set_defaults(func=cmd_certify)

    p_corr = sub.add_parser("correspondence",
                            help="network-versus-edges bound scan")
    p_corr.add_argument("--family", required=True,
                        choices=["bilocal", "star", "xi"])
    p_corr.add_argument("--m", type=int, default=3)
    p_corr.add_argument("--n", type=int, default=None)
    p_corr.add_argument("--trials", type=int, default=100)
    p_corr.add_argument("--seed", type=int, default=0)
    p_corr.add_argument("--edge-restarts", type=int, default=10)
    p_corr.add_argument("--ranks", default="1",
                        help="comma-separated admissible source ranks")
    p_corr.add_argument("--out", default=None, help="CSV output file")
    p_corr.add_argument("--format", default=None,
                        choices=["json", "csv", "pretty"])
    p_corr.set_defaults(func=cmd_correspondence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidScenario, OutOfRange) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchSpaceTooLarge, DimensionGuard) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
