"""Command-line front end: ``randdm <command> [flags]``.

Exit codes: 0 success, 2 configuration error, 3 numerical invariant failure.
Failures print a JSON object ``{"error", "message", "exit_code"}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .analytic import (
    ConvergenceError,
    SpectralLaw,
    fc_moment,
    law_for,
    law_second_moment_exact,
    nu_k_moment,
)
from .analytic.quadrature import QuadratureError
from .channels import ChannelError, random_operation
from .ensembles import KINDS, EnsembleError, EnsembleSpec
from .linalg import DimensionError
from .sampling import SeededStream
from .stats import (
    SpectrumBatch,
    compare,
    histogram,
    histogram_csv,
    predicted_mean_entropy,
    purity,
    von_neumann_entropy,
)

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 2, 3

TABLE1_ROWS = ((1, 0), (2, 0), (3, 0), (4, 0), (1, 1), (2, 1), (1, 2), (1, 3))
TABLE1_NOTE = ("k=4, s=0: predicted M2 is 2 - 1/k = 7/4; a tabulated 7/8 is a misprint "
               "(M2 >= 1 for any law with mean 1)")

LAW_ALIASES = {"dirac": "dirac_one", "dirac_one": "dirac_one", "arcsine": "arcsine",
               "nu_k": "nu_k", "nu": "nu_k", "mp": "mp", "marchenko_pastur": "mp",
               "bures": "bures", "fc": "fuss_catalan", "fuss_catalan": "fuss_catalan"}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def fmt(v: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(v), ".17g")


def _weights(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="randdm", description="Random density matrices and their spectral laws.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ens = _Parser(add_help=False)
    ens.add_argument("--kind", choices=KINDS, default="hilbert_schmidt")
    ens.add_argument("--n", type=_positive, default=None)
    ens.add_argument("--K", type=_positive, default=None, help="environment dimension (induced)")
    ens.add_argument("--k", type=_positive, default=1)
    ens.add_argument("--s", type=int, default=0)
    ens.add_argument("--weights", type=_weights, default=None)
    ens.add_argument("--dims", type=_weights, default=None)
    ens.add_argument("--a", type=float, default=0.0)
    ens.add_argument("--field", choices=("complex", "real"), default="complex")

    run = _Parser(add_help=False)
    run.add_argument("--samples", type=_positive, default=100)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--workers", type=_positive, default=1)

    out = _Parser(add_help=False)
    out.add_argument("--out", default=None, help="output path; a .meta.json sidecar is written next to it")
    out.add_argument("--format", choices=("csv", "json"), default=None)

    law = _Parser(add_help=False)
    law.add_argument("--law", default=None, help="dirac, arcsine, nu_k, mp, bures or fc")
    law.add_argument("--c", type=float, default=1.0, help="mp ratio K/N")

    sub.add_parser("sample", parents=[ens, run, out], help="sample spectra")
    d = sub.add_parser("density", parents=[ens, law, out], help="tabulate a law's density")
    d.add_argument("--bins", type=_positive, default=200, help="grid points")
    m = sub.add_parser("moments", parents=[ens, law, out], help="analytic moments")
    m.add_argument("--max-order", type=int, default=4)
    c = sub.add_parser("compare", parents=[ens, run, law, out], help="empirical vs asymptotic report")
    c.add_argument("--bins", type=_positive, default=None, help="also write a histogram CSV")
    t = sub.add_parser("table1", parents=[run, out], help="reproduce the structured-ensemble table")
    t.add_argument("--n", type=_positive, default=256)
    ch = sub.add_parser("channel", parents=[ens, out], help="random quantum operation")
    ch.add_argument("--seed", type=int, default=0)
    ch.set_defaults(kind="induced")
    return p


def ensemble_from_args(args, n: int | None = None) -> EnsembleSpec:
    n = args.n if n is None else n
    if n is None:
        raise ConfigError("--n is required")
    try:
        return EnsembleSpec(args.kind, n, K=args.K, k=args.k, s=args.s, weights=args.weights,
                            dims=args.dims, a=args.a, field=args.field)
    except EnsembleError as exc:
        raise ConfigError(str(exc)) from None


def law_from_args(args) -> SpectralLaw:
    name = LAW_ALIASES.get(args.law)
    if name is None:
        raise ConfigError(f"unknown law {args.law!r}")
    try:
        if name == "nu_k":
            return SpectralLaw.nu_k(args.k)
        if name == "mp":
            return SpectralLaw.mp(args.c)
        if name == "fuss_catalan":
            return SpectralLaw.fuss_catalan(args.s)
        return SpectralLaw(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    return {k: list(v) if isinstance(v, tuple) else v for k, v in cfg.items()}


def _emit(text: str, args, meta: dict | None = None, suffix: str = "") -> None:
    """Write ``text`` to ``--out`` (plus sidecar) or stdout."""
    if args.out is None:
        sys.stdout.write(text)
        return
    path = args.out + suffix
    with open(path, "w", newline="") as fh:
        fh.write(text)
    if meta is not None:
        with open(args.out + ".meta.json", "w") as fh:
            fh.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_sample(args) -> int:
    spec = ensemble_from_args(args)
    batch = SpectrumBatch.generate(spec, args.samples, args.seed, args.workers)
    meta = {"config": _config(args), "ensemble": spec.to_text(), "seed": args.seed}
    if args.format == "json":
        body = {"meta": meta, "sample_ids": batch.sample_ids.tolist(), "lambdas": batch.lambdas.tolist()}
        _emit(_json(body), args, meta)
        return EXIT_OK
    lines = [] if args.out else ["# " + json.dumps(meta, sort_keys=True)]
    lines.append("sample_id,eig_index,lambda,x")
    n = batch.n
    for sid, row in zip(batch.sample_ids.tolist(), batch.lambdas):
        lines.extend(f"{sid},{j},{fmt(lam)},{fmt(n * lam)}" for j, lam in enumerate(row.tolist()))
    _emit("\n".join(lines) + "\n", args, meta)
    return EXIT_OK


def _law_or_predicted(args) -> SpectralLaw:
    if args.law is not None:
        return law_from_args(args)
    law = law_for(ensemble_from_args(args))
    if law is None:
        raise ConfigError("no asymptotic law known for this ensemble; pass --law")
    return law


def cmd_density(args) -> int:
    law = law_from_args(args) if args.law else _law_or_predicted(args)
    meta = {"config": _config(args), "law": law.name, "support": list(law.support),
            "atom_mass": law.atom_mass}
    if law.kind == "dirac_one":
        meta["atom_at_one"] = 1.0
        lines = ["x,density"]
    else:
        lo, hi = law.support
        x = lo + (hi - lo) * (np.arange(args.bins) + 0.5) / args.bins
        dens = np.asarray(law.density(x))
        lines = ["x,density"] + [f"{fmt(a)},{fmt(b)}" for a, b in zip(x.tolist(), dens.tolist())]
    if args.format == "json":
        _emit(_json({"meta": meta, "rows": lines[1:]}), args, meta)
    else:
        _emit("\n".join(lines) + "\n", args, meta)
    return EXIT_OK


def cmd_moments(args) -> int:
    law = _law_or_predicted(args)
    if args.max_order < 0:
        raise ConfigError("--max-order must be >= 0")
    rows = []
    for p in range(args.max_order + 1):
        if law.kind == "fuss_catalan":
            v = fc_moment(int(law.param), p)
            rows.append({"order": p, "value": v, "exact": str(v)})
        elif law.kind in ("nu_k", "arcsine"):
            k = 2 if law.kind == "arcsine" else int(law.param)
            v = nu_k_moment(p, k, exact=True)
            rows.append({"order": p, "value": float(v), "exact": str(v)})
        elif law.kind == "dirac_one":
            rows.append({"order": p, "value": 1, "exact": "1"})
        else:
            rows.append({"order": p, "value": law.moment(p), "exact": None})
    _emit(_json({"law": law.name, "moments": rows}), args, {"config": _config(args)})
    return EXIT_OK


def cmd_compare(args) -> int:
    spec = ensemble_from_args(args)
    law = _law_or_predicted(args)
    batch = SpectrumBatch.generate(spec, args.samples, args.seed, args.workers)
    report = compare(batch, law)
    meta = {"config": _config(args), "ensemble": spec.to_text(), "seed": args.seed}
    _emit(report.to_json() + "\n", args, meta)
    if args.bins:
        edges, masses = histogram(batch, args.bins, law.support if law.kind != "dirac_one" else None)
        if args.out:
            _emit(histogram_csv(edges, masses), args, None, ".hist.csv")
    return EXIT_OK


def _sing_label(law: SpectralLaw) -> str:
    if law.kind == "dirac_one":
        return "--"
    alpha = law.singularity_exponent
    if alpha is None:
        return "none"
    num, den = (1, 2) if alpha == 0.5 else (round(alpha * (law.lower_power)), law.lower_power)
    return f"x^(-{num}/{den})"


def table1_batches(n: int, samples: int, seed: int, workers: int = 1) -> dict:
    return {(k, s): SpectrumBatch.generate(EnsembleSpec("generalized", n, k=k, s=s), samples, seed, workers)
            for k, s in TABLE1_ROWS}


def table1_rows(batches: dict) -> list[dict]:
    rows = []
    for (k, s), batch in batches.items():
        law = law_for(batch.spec)
        n, samples = batch.n, len(batch)
        pur = batch.per_sample(purity)
        ent = batch.per_sample(von_neumann_entropy)
        rows.append({
            "k": k,
            "s": s,
            "law": law.name,
            "singularity": _sing_label(law),
            "edge_predicted": law.support[1],
            "edge_empirical": math.fsum(n * batch.lambdas.max(axis=1)) / samples,
            "m2_predicted": law_second_moment_exact(law),
            "m2_empirical": n * math.fsum(pur) / samples,
            "entropy_offset_predicted": predicted_mean_entropy(law),
            "entropy_offset_empirical": math.fsum(ent) / samples - math.log(n),
        })
    return rows


def table1(n: int, samples: int, seed: int, workers: int = 1) -> list[dict]:
    return table1_rows(table1_batches(n, samples, seed, workers))


def _table_text(rows) -> str:
    head = ("k", "s", "law", "singularity", "edge_pred", "edge_emp", "M2_pred", "M2_emp", "S_pred", "S_emp")
    body = [(str(r["k"]), str(r["s"]), r["law"], r["singularity"],
             *(f"{r[key]:.4f}" for key in ("edge_predicted", "edge_empirical", "m2_predicted",
                                             "m2_empirical", "entropy_offset_predicted",
                                             "entropy_offset_empirical"))) for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(head)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\nnote: " + TABLE1_NOTE + "\n"


def cmd_table1(args) -> int:
    rows = table1(args.n, args.samples, args.seed, args.workers)
    meta = {"config": _config(args), "seed": args.seed}
    if args.format == "csv":
        raise ConfigError("table1 writes json or text; use --format json or omit --format")
    if args.out:
        _emit(_json({"n": args.n, "samples": args.samples, "rows": rows, "note": TABLE1_NOTE}), args, meta)
        with open(args.out + ".txt", "w") as fh:
            fh.write(_table_text(rows))
    elif args.format == "json":
        sys.stdout.write(_json({"n": args.n, "samples": args.samples, "rows": rows, "note": TABLE1_NOTE}))
    else:
        sys.stdout.write(_table_text(rows))
    return EXIT_OK


def cmd_channel(args) -> int:
    if args.n is None:
        raise ConfigError("--n is required")
    n = args.n
    spec = ensemble_from_args(args, n * n)
    if spec.kind == "induced" and spec.K is None:
        spec = EnsembleSpec("induced", n * n, K=n * n)
    choi = random_operation(n, SeededStream(args.seed, 0), spec)
    report = choi.cptp_report()
    meta = {"config": _config(args), "ensemble": spec.to_text(), "seed": args.seed, "cptp": report}
    if args.format == "json":
        body = {"cptp": report, "re": choi.sigma.real.tolist(), "im": choi.sigma.imag.tolist()}
        _emit(_json(body), args, meta)
    else:
        lines = [",".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row) for row in choi.sigma.tolist()]
        _emit("\n".join(lines) + "\n", args, meta)
        if args.out is None:
            sys.stderr.write(_json(report))
    if not (report["completely_positive"] and report["trace_preserving"]):
        raise ChannelError("generated operation is not CPTP")
    return EXIT_OK


COMMANDS = {"sample": cmd_sample, "density": cmd_density, "moments": cmd_moments,
            "compare": cmd_compare, "table1": cmd_table1, "channel": cmd_channel}

INVARIANT_ERRORS = (ChannelError, ConvergenceError, QuadratureError, np.linalg.LinAlgError)
CONFIG_ERRORS = (ConfigError, EnsembleError, DimensionError, ValueError)


def _fail(exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)
    try:
        return COMMANDS[args.command](args)
    except INVARIANT_ERRORS as exc:
        return _fail(exc, EXIT_INVARIANT)
    except CONFIG_ERRORS as exc:
        return _fail(exc, EXIT_CONFIG)


if __name__ == "__main__":
    sys.exit(main())
