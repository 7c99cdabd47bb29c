"""Command-line interface.

Subcommands: invariant (single point), sweep (config-driven), spectrum
(open/periodic dump), beta-spectrum (decay-mode dump), reproduce (bundled
presets), selftest (acceptance suite).  Output is CSV or JSON with complex
numbers as [re, im] pairs; flags override config-file fields.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import zoo
from .errors import NhtopoError
from .invariants import invariant_z, invariant_z2
from .model import h_beta, load_model
from .spectra import beta_spectrum, obc_spectrum
from .sweep import (
    SweepConfig,
    beta_magnitude_rows,
    describe_preset,
    emit,
    preset_config,
    run_sweep,
)


def _coerce(text):
    """Parse a parameter value: JSON first, then a complex literal."""
    try:
        return json.loads(text)
    except (json.JSONDecodeError, ValueError):
        pass
    try:
        return complex(text)
    except ValueError:
        raise NhtopoError(f"cannot parse parameter value {text!r}") from None


def _model_from_args(args):
    if getattr(args, "model_file", None):
        return load_model(args.model_file)
    if getattr(args, "zoo", None):
        params = {}
        for token in args.param or []:
            if "=" not in token:
                raise NhtopoError(f"--param expects name=value, got {token!r}")
            key, _, value = token.partition("=")
            params[key] = _coerce(value)
        return zoo.build(args.zoo, **params)
    raise NhtopoError("specify a model with --zoo or --model-file")


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def _write_json(path, payload):
    out = open(path, "w") if path else sys.stdout
    try:
        json.dump(payload, out, indent=1)
        out.write("\n")
    finally:
        if path:
            out.close()


def _write_csv(path, header, rows):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format(x, ".17g") if isinstance(x, float) else x for x in row])
    finally:
        if path:
            out.close()


def _cmd_invariant(args):
    model = _model_from_args(args)
    kind = args.kind
    if kind is None:
        kind = "Z2" if (model.symmetries and model.symmetries.u_t is not None) else "Z"
    rep = invariant_z(model) if kind == "Z" else invariant_z2(model)
    payload = {
        "kind": rep.kind,
        "value": rep.value,
        "quantization_error": rep.quantization_error,
        "rank_plus": rep.rank_plus,
        "rank_minus": rep.rank_minus,
        "kramers_pairs": rep.kramers_pairs,
        "gamma_r_eigenvalues": [_pair(z) for z in rep.gamma_r_eigenvalues],
    }
    if args.format == "json":
        _write_json(args.out, payload)
    else:
        header = ("kind", "value", "quantization_error", "rank_plus", "rank_minus", "kramers_pairs")
        row = [rep.kind, rep.value, float(rep.quantization_error), rep.rank_plus,
               rep.rank_minus, "" if rep.kramers_pairs is None else rep.kramers_pairs]
        _write_csv(args.out, header, [row])
    return 0


def _cmd_sweep(args):
    config = SweepConfig.load(args.config)
    if args.workers is not None:
        from dataclasses import replace

        config = replace(config, workers=args.workers)
    result = run_sweep(config)
    if args.out:
        emit(result, args.out, args.format)
        print(f"wrote {len(result.rows)} rows to {args.out}")
    else:
        emit_to_stdout(result, args.format)
    return 0


def emit_to_stdout(result, fmt):
    import tempfile

    with tempfile.NamedTemporaryFile("r+", suffix=f".{fmt}", delete=True) as tmp:
        emit(result, tmp.name, fmt)
        tmp.seek(0)
        sys.stdout.write(tmp.read())


def _cmd_spectrum(args):
    model = _model_from_args(args)
    if args.bc == "open":
        sample = obc_spectrum(model, args.cells)
        if args.format == "json":
            _write_json(args.out, {
                "boundary": "open",
                "cells": args.cells,
                "energies": [_pair(z) for z in sample.energies],
                "boundary_flags": [bool(f) for f in sample.boundary_flags],
            })
        else:
            rows = [
                (float(z.real), float(z.imag), int(f))
                for z, f in zip(sample.energies, sample.boundary_flags)
            ]
            _write_csv(args.out, ("energy_re", "energy_im", "boundary_flag"), rows)
    else:
        ks = np.linspace(0.0, 2 * np.pi, args.k_points, endpoint=False)
        rows = []
        for k in ks:
            for e in np.linalg.eigvals(h_beta(model, np.exp(1j * k))):
                rows.append((float(k), float(e.real), float(e.imag)))
        if args.format == "json":
            _write_json(args.out, {
                "boundary": "periodic",
                "rows": [{"k": r[0], "energy": [r[1], r[2]]} for r in rows],
            })
        else:
            _write_csv(args.out, ("k", "energy_re", "energy_im"), rows)
    return 0


def _cmd_beta_spectrum(args):
    model = _model_from_args(args)
    energies = [0.0]
    if args.cells:
        energies.extend(obc_spectrum(model, args.cells).energies.tolist())
    samples = beta_spectrum(model, energies)
    if args.format == "json":
        _write_json(args.out, {
            "samples": [
                {"energy": _pair(s.energy), "betas": [_pair(b) for b in s.betas]}
                for s in samples
            ],
            "boundary_candidates": [_pair(b) for b in samples[0].betas],
        })
    else:
        rows = []
        for s in samples:
            for b in s.betas:
                rows.append((
                    float(s.energy.real), float(s.energy.imag),
                    float(b.real), float(b.imag), int(s.energy == 0),
                ))
        _write_csv(
            args.out,
            ("energy_re", "energy_im", "beta_re", "beta_im", "zero_energy"),
            rows,
        )
    return 0


def _cmd_reproduce(args):
    if args.describe:
        print(describe_preset(args.preset))
        return 0
    if args.preset == "fig5":
        rows = beta_magnitude_rows()
        path = args.out or "fig5.csv"
        if args.format == "json":
            _write_json(path, {
                "rows": [
                    {"parameter": d, "beta": [re, im], "abs_beta": ab}
                    for d, re, im, ab in rows
                ],
            })
        else:
            _write_csv(path, ("parameter", "beta_re", "beta_im", "abs_beta"),
                       [tuple(map(float, r)) for r in rows])
        print(f"wrote {len(rows)} rows to {path}")
        return 0
    config = preset_config(args.preset, workers=args.workers)
    result = run_sweep(config)
    path = args.out or f"{args.preset}.{args.format}"
    emit(result, path, args.format)
    print(f"wrote {len(result.rows)} rows to {path}")
    return 0


def _cmd_selftest(args):
    from .acceptance import run_all

    numbers = set(args.criteria) if args.criteria else None
    results = run_all(numbers, stream=sys.stdout)
    return 0 if all(r.ok for r in results) else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="nhtopo",
        description="Reflection-matrix topological invariants of 1D "
        "non-Hermitian tight-binding chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p):
        p.add_argument("--zoo", help="zoo model name")
        p.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="builder parameter override (repeatable)")
        p.add_argument("--model-file", help="JSON model definition")

    def add_io_args(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("invariant", help="invariant of a single model")
    add_model_args(p)
    p.add_argument("--kind", choices=("Z", "Z2"),
                   help="invariant kind (default: Z2 when the model has the "
                   "time-reversal operator, else Z)")
    add_io_args(p)
    p.set_defaults(func=_cmd_invariant)

    p = sub.add_parser("sweep", help="run a config-driven parameter sweep")
    p.add_argument("--config", required=True, help="sweep config JSON")
    p.add_argument("--workers", type=int, help="override the worker count")
    add_io_args(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("spectrum", help="open/periodic spectrum dump")
    add_model_args(p)
    p.add_argument("--bc", choices=("open", "periodic"), default="open")
    p.add_argument("--cells", type=int, default=60, help="chain length (open)")
    p.add_argument("--k-points", type=int, default=256, help="grid size (periodic)")
    add_io_args(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("beta-spectrum", help="decay-mode spectrum dump")
    add_model_args(p)
    p.add_argument("--cells", type=int, default=60,
                   help="open-chain length supplying the energy samples "
                   "(0: zero energy only)")
    add_io_args(p)
    p.set_defaults(func=_cmd_beta_spectrum)

    p = sub.add_parser("reproduce", help="run a bundled preset")
    p.add_argument("preset", choices=("fig2", "fig3", "fig4", "fig5"))
    p.add_argument("--describe", action="store_true",
                   help="print the preset parameters and exit")
    p.add_argument("--workers", type=int)
    add_io_args(p)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--criteria", type=int, nargs="*", help="subset to run")
    p.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NhtopoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
