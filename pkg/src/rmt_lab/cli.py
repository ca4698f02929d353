"""Command-line front end: sampling, law evaluation, and verification.

Subcommands: ``sample``, ``pdf``, ``cdf``, ``verify``, ``invariance``,
``probe``, ``catalog``.  Exit codes: 0 success, 1 invalid arguments or I/O
failure (one-line diagnostic), 2 verification failure (the machine-readable
report is still emitted).

Reals are printed with 17 significant digits, so CSV output round-trips
doubles losslessly and identical invocations produce byte-identical files.
``--seed`` falls back to the environment variable ``RMT_LAB_SEED``, then 0.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

import numpy as np

from . import analytic, verify as verify_mod
from .ensembles import (
    ENSEMBLE_KINDS,
    EnsembleSpec,
    param_domains,
    sample_batch,
    worker_seed_sequences,
)

ENV_SEED = "RMT_LAB_SEED"

# accepted spellings of ensemble names beyond the canonical kind tags
KIND_ALIASES = {
    "truncated_gue": "pt_gamma_slice",
    "gapped_goe": "planar",
}

HERMITIAN_CSV_COLUMNS = ("e", "x", "y", "z", "lambda1", "lambda2", "s")
PT_CSV_COLUMNS = (
    "e", "gamma", "nu", "theta", "phi", "eta",
    "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "s",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(message)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _parse_params(pairs) -> dict:
    params = {}
    for item in pairs or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise _UsageError(f"--param expects name=value, got {item!r}")
        try:
            params[name] = float(value)
        except ValueError:
            raise _UsageError(f"--param {name}: {value!r} is not a number") from None
    return params


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--grid expects start:stop:points, got {text!r}")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"--grid has a malformed field in {text!r}") from None
    if points < 1 or stop < start or start < 0:
        raise _UsageError(f"--grid needs 0 <= start <= stop and points >= 1, got {text!r}")
    return np.linspace(start, stop, points)


def _resolve_seed(seed) -> int:
    if seed is not None:
        return int(seed)
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(f"{ENV_SEED}={env!r} is not an integer") from None
    return 0


def _make_spec(name: str, params: dict) -> EnsembleSpec:
    kind = KIND_ALIASES.get(name, name)
    if kind not in ENSEMBLE_KINDS:
        known = ", ".join(ENSEMBLE_KINDS + tuple(sorted(KIND_ALIASES)))
        raise _UsageError(f"unknown ensemble {name!r}; known: {known}")
    try:
        return EnsembleSpec(kind, params)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _UsageError(f"cannot write {out_path}: {exc.strerror or exc}") from None


def _rows_to_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _rows_to_json(columns, rows) -> str:
    payload = [dict(zip(columns, map(float, row))) for row in rows]
    return json.dumps(payload, indent=2) + "\n"


def _render(columns, rows, fmt: str) -> str:
    return _rows_to_csv(columns, rows) if fmt == "csv" else _rows_to_json(columns, rows)


def _sample_rows(spec: EnsembleSpec, n: int, seed: int, workers: int) -> np.ndarray:
    if workers <= 1:
        batch = sample_batch(spec, n, np.random.default_rng(seed))
        batches = [batch]
    else:
        seqs = worker_seed_sequences(seed, workers)
        base, rem = divmod(n, workers)
        sizes = [base + (1 if i < rem else 0) for i in range(workers)]
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(
                pool.map(
                    lambda args: sample_batch(spec, args[0], np.random.default_rng(args[1])),
                    zip(sizes, seqs),
                )
            )
    values = np.concatenate([b.values for b in batches])
    spacing = np.concatenate([b.spacing for b in batches])
    half = 0.5 * spacing
    e = values[:, 0]
    if spec.is_pt:
        # sampled PT matrices have real spectra: lambda = e -/+ s/2
        cols = [values[:, i] for i in range(6)]
        cols += [e - half, np.zeros_like(e), e + half, np.zeros_like(e), spacing]
    else:
        cols = [values[:, i] for i in range(4)]
        cols += [e - half, e + half, spacing]
    return np.column_stack(cols)


def _cmd_sample(args) -> int:
    spec = _make_spec(args.ensemble, _parse_params(args.param))
    if args.n < 0:
        raise _UsageError(f"--n must be nonnegative, got {args.n}")
    if args.workers < 1:
        raise _UsageError(f"--workers must be >= 1, got {args.workers}")
    seed = _resolve_seed(args.seed)
    rows = _sample_rows(spec, args.n, seed, args.workers)
    columns = PT_CSV_COLUMNS if spec.is_pt else HERMITIAN_CSV_COLUMNS
    _emit(_render(columns, rows, args.format), args.out)
    return 0


def _cmd_grid(args, which: str) -> int:
    spec = _make_spec(args.ensemble, _parse_params(args.param))
    law = analytic.spacing_law(spec)
    grid = _parse_grid(args.grid)
    values = law.pdf(grid) if which == "pdf" else law.cdf(grid)
    rows = np.column_stack([grid, values])
    _emit(_render(("s", which), rows, args.format), args.out)
    return 0


def _cmd_verify(args) -> int:
    spec = _make_spec(args.ensemble, _parse_params(args.param))
    if args.n < 1000:
        raise _UsageError(f"--n must be at least 1000, got {args.n}")
    seed = _resolve_seed(args.seed)
    report = verify_mod.verify_ensemble(spec, args.n, seed)
    text = report.to_json() + "\n"
    _emit(text, args.out)
    if args.out is not None:
        sys.stdout.write(text)
    return 0 if report.passed else 2


def _cmd_invariance(args) -> int:
    if args.trials < 100:
        raise _UsageError(f"--trials must be at least 100, got {args.trials}")
    seed = _resolve_seed(args.seed)
    report = verify_mod.invariance_suite(args.trials, seed)
    text = report.to_json() + "\n"
    _emit(text, args.out)
    if args.out is not None:
        sys.stdout.write(text)
    return 0 if report.passed else 2


def _cmd_probe(args) -> int:
    try:
        cutoffs = [float(c) for c in args.cutoffs.split(",") if c.strip()]
    except ValueError:
        raise _UsageError(f"--cutoffs expects comma-separated numbers, got {args.cutoffs!r}") from None
    try:
        rows = verify_mod.divergence_probe(cutoffs)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    table = [(r.cutoff, r.pt_mass, r.hermitian_slice_mass) for r in rows]
    _emit(_render(("cutoff", "pt_mass", "hermitian_slice_mass"), table, args.format), args.out)
    return 0


def _cmd_catalog(_args) -> int:
    lines = []
    for kind in ENSEMBLE_KINDS:
        domains = param_domains(kind)
        params = ", ".join(f"{k} ({v})" for k, v in domains.items()) or "(none)"
        law = analytic.spacing_law(kind, {k: 1.0 for k in domains})
        hi = "inf" if math.isinf(law.s_max) else "2*gamma0"
        lo = "0" if law.s_min == 0.0 and kind not in ("planar", "cylinder", "cone") else {
            "planar": "2*|y0|", "cylinder": "2*rho0", "cone": "2*sqrt(beta/(1+beta))*|y0|",
        }.get(kind, "0")
        lines.append(f"{kind}")
        lines.append(f"  parameters : {params}")
        lines.append(f"  support    : [{lo}, {hi})")
        lines.append(f"  law        : {analytic.law_description(kind)}")
        lines.append(f"  golden seed: {verify_mod.GOLDEN_SEEDS[kind]}")
    aliases = ", ".join(f"{a} -> {t}" for a, t in sorted(KIND_ALIASES.items()))
    lines.append(f"aliases: {aliases}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="rmt-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec_args(p):
        p.add_argument("--ensemble", required=True, help="ensemble kind tag (or alias)")
        p.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="constraint parameter; repeatable")

    p = sub.add_parser("sample", help="draw parameter/eigenvalue samples")
    add_spec_args(p)
    p.add_argument("--n", type=int, required=True, help="number of draws")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1,
                   help="split the stream over k derived seeds (1 = reference stream)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    for which in ("pdf", "cdf"):
        p = sub.add_parser(which, help=f"evaluate the analytic {which} on a grid")
        add_spec_args(p)
        p.add_argument("--grid", required=True, metavar="START:STOP:POINTS")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", help="run the statistical verification suite")
    add_spec_args(p)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="also write the JSON report here")

    p = sub.add_parser("invariance", help="check invariant preservation under group actions")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("probe", help="truncated-mass table of the PT measure")
    p.add_argument("--cutoffs", default="1,2,4,8,16", help="comma-separated cutoffs")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    sub.add_parser("catalog", help="list ensembles, parameter domains, and laws")
    return parser


_HANDLERS = {
    "sample": _cmd_sample,
    "pdf": lambda a: _cmd_grid(a, "pdf"),
    "cdf": lambda a: _cmd_grid(a, "cdf"),
    "verify": _cmd_verify,
    "invariance": _cmd_invariance,
    "probe": _cmd_probe,
    "catalog": _cmd_catalog,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        sys.stderr.write(parser.format_usage())
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
