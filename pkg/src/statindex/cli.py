"""Command-line front end.

Subcommands: genus, index, verify, stats, zeta-det, spectral.  Exit codes:
0 on success, 1 when a verification fails, 2 on input or domain errors.
Exact values are printed as p/q, numeric values with 17 significant
digits, and identical inputs always produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .series import format_rational
from .symmetric import poly_str
from .genera import GENUS_KINDS, genus_polynomial
from .bundles import DivergenceError, RootModel
from .manifolds import CatalogError, catalog, genus_number
from .pairings import PAIRING_KINDS, hrr_index, pairing_index, verify_identity
from .statmech import (
    ConvergenceError,
    LevelSystem,
    TailBoundError,
    correspondence_check,
    grand_ensemble,
)
from .spectral import SpectrumSpec, build_spectral_report, zeta_det

__all__ = ["main", "RunConfig"]

FORMATS = ("text", "json", "csv")


@dataclass
class RunConfig:
    degree: Optional[int] = None
    fmt: str = "text"
    tolerance: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.degree is not None and self.degree < 0:
            raise ValueError("degree must be >= 0")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")


class _CliError(Exception):
    """Input or domain error; mapped to exit code 2."""


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statindex",
        description=(
            "Exact characteristic-class and index computations driven by "
            "quantum-statistics generating functions."
        ),
    )
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    parser.add_argument("--degree", type=int, help="series truncation degree")
    parser.add_argument("--format", choices=FORMATS, dest="fmt", help="output format")
    parser.add_argument("--tolerance", type=float, help="numeric tolerance")
    parser.add_argument("--seed", type=int, help="seed for randomized subcommands")
    sub = parser.add_subparsers(dest="command", required=True)

    p_genus = sub.add_parser("genus", help="genus polynomials and genus numbers")
    p_genus.add_argument("kind", choices=GENUS_KINDS)
    group = p_genus.add_mutually_exclusive_group(required=True)
    group.add_argument("--degree", type=int, dest="genus_degree",
                       help="print the degree-homogeneous class polynomial")
    group.add_argument("--manifold", help="evaluate the genus on a catalog manifold")

    p_index = sub.add_parser("index", help="index pairings on catalog manifolds")
    p_index.add_argument("pairing", choices=PAIRING_KINDS + ("hrr",))
    p_index.add_argument("manifold")
    p_index.add_argument("--mode", choices=("exact", "nondegenerate"), default="exact")
    p_index.add_argument(
        "--bundle",
        help="line bundle for hrr, e.g. O(3) or O(1,2) (one integer per generator)",
    )

    p_verify = sub.add_parser("verify", help="dual-route identity verification")
    p_verify.add_argument("kind", nargs="?", choices=PAIRING_KINDS)
    p_verify.add_argument("--all", action="store_true", help="verify all four pairings")
    p_verify.add_argument("--l", type=int, default=2, dest="roots", help="number of roots")
    p_verify.add_argument("--degree", type=int, dest="verify_degree",
                          help="series truncation (default 2l+4)")

    p_stats = sub.add_parser("stats", help="grand canonical ensemble report")
    p_stats.add_argument("input", help="JSON file with {levels, mu, beta, statistics}")
    p_stats.add_argument(
        "--check-correspondence",
        action="store_true",
        help="also check Xi against the Fock-character routes",
    )

    p_zeta = sub.add_parser("zeta-det", help="zeta-regularized spectral determinant")
    spec_group = p_zeta.add_mutually_exclusive_group(required=True)
    spec_group.add_argument("--finite", help="comma-separated eigenvalues, e.g. 1,2,3")
    spec_group.add_argument("--affine", nargs=2, type=float, metavar=("A", "C"),
                            help="spectrum a*(n+c), n >= 0")
    spec_group.add_argument("--input", help="JSON SpectrumSpec file")

    p_spec = sub.add_parser("spectral", help="full spectral-pair report")
    p_spec.add_argument("input", help="JSON SpectrumSpec file")

    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        for key in ("degree", "tolerance", "seed"):
            if key in raw:
                values[key] = raw[key]
        if "format" in raw:
            values["fmt"] = raw["format"]
    if args.degree is not None:
        values["degree"] = args.degree
    if args.fmt is not None:
        values["fmt"] = args.fmt
    if args.tolerance is not None:
        values["tolerance"] = args.tolerance
    if args.seed is not None:
        values["seed"] = args.seed
    return RunConfig(**values)


def _parse_spectrum(args: argparse.Namespace) -> SpectrumSpec:
    if getattr(args, "finite", None):
        eigenvalues = [float(part) for part in args.finite.split(",") if part.strip()]
        return SpectrumSpec.finite(eigenvalues)
    if getattr(args, "affine", None):
        return SpectrumSpec.affine(args.affine[0], args.affine[1])
    with open(args.input, "r", encoding="utf-8") as handle:
        return SpectrumSpec.from_json_dict(json.load(handle))


def _parse_bundle(spec: str, model) -> RootModel:
    text = spec.strip()
    if text.lower() in ("o", "trivial", "o(0)"):
        return RootModel.build(model.generators, model.complex_dim, [({}, 1)])
    if not (text.startswith("O(") and text.endswith(")")):
        raise _CliError(f"cannot parse bundle {spec!r}; expected O(k1,...)")
    try:
        coeffs = [Fraction(part.strip()) for part in text[2:-1].split(",")]
    except ValueError as exc:
        raise _CliError(f"cannot parse bundle {spec!r}: {exc}") from exc
    if len(coeffs) != len(model.generators):
        raise _CliError(
            f"bundle {spec!r} has {len(coeffs)} twist(s), manifold "
            f"{model.name} has {len(model.generators)} generator(s)"
        )
    root = dict(zip(model.generators, coeffs))
    return RootModel.build(model.generators, model.complex_dim, [(root, 1)])


def _cmd_genus(args: argparse.Namespace, config: RunConfig) -> int:
    if args.genus_degree is not None:
        poly = genus_polynomial(args.kind, args.genus_degree)
        if config.fmt == "json":
            _emit_json(poly.to_json_dict())
        else:
            print(poly_str(poly))
        return 0
    model, tangent = catalog(args.manifold)
    value = genus_number(args.kind, model, tangent)
    if config.fmt == "json":
        _emit_json({"kind": args.kind, "manifold": model.name,
                    "value": format_rational(value)})
    else:
        print(format_rational(value))
    return 0


def _cmd_index(args: argparse.Namespace, config: RunConfig) -> int:
    model, tangent = catalog(args.manifold)
    if args.pairing == "hrr":
        bundle = _parse_bundle(args.bundle, model) if args.bundle else None
        value = hrr_index((model, tangent), bundle, D=config.degree)
        if config.fmt == "json":
            _emit_json({
                "manifold": model.name,
                "pairing": "hrr",
                "bundle": args.bundle or "trivial",
                "index": format_rational(value),
            })
        else:
            print(format_rational(value))
        return 0
    report = pairing_index(args.pairing, (model, tangent), args.mode, D=config.degree)
    if config.fmt == "json":
        _emit_json(report.to_json_dict())
    else:
        print(format_rational(report.index_value))
    return 0


_TABLE_ROWS = (
    ("operator", {"fb": "Dirac", "bb": "de Rham", "ff": "Dirac", "bf": "de Rham"}),
    ("vector bundle", {
        "fb": "spin bundle",
        "bb": "de Rham symbol bundle",
        "ff": "spin bundle",
        "bf": "de Rham symbol bundle",
    }),
    ("character", {
        "fb": "prod exp(x/2)(1+exp(-x))",
        "bb": "prod (1-exp(-x))(1-exp(x))",
        "ff": "prod exp(x/2)(1+exp(-x))",
        "bf": "prod (1-exp(-x))(1-exp(x))",
    }),
    ("class", {"fb": "A-hat", "bb": "Todd/euler", "ff": "B-hat", "bf": "Td*/euler"}),
)


def _cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    kinds = PAIRING_KINDS if args.all or args.kind is None else (args.kind,)
    reports = [verify_identity(kind, args.roots, args.verify_degree) for kind in kinds]
    if config.fmt == "json":
        _emit_json([report.to_json_dict() for report in reports])
    else:
        header = f"pairing dictionary (l = {args.roots}, D = {reports[0].truncation})"
        print(header)
        print("-" * len(header))
        for label, values in _TABLE_ROWS:
            for report in reports:
                print(f"{report.kind:>3}  {label:<14} {values[report.kind]}")
        for report in reports:
            print(f"{report.kind:>3}  density        {report.canonical_form}")
        for report in reports:
            status = "PASS" if report.ok else "FAIL"
            print(f"{report.kind:>3}  dual-route     {status}")
            if report.first_mismatch is not None:
                exps, a, b = report.first_mismatch
                print(f"     first differing coefficient at {exps}: {a} vs {b}")
    if all(report.ok for report in reports):
        return 0
    failing = next(r for r in reports if not r.ok)
    print(f"verification failed for {failing.kind} (l={failing.l})", file=sys.stderr)
    return 1


def _cmd_stats(args: argparse.Namespace, config: RunConfig) -> int:
    with open(args.input, "r", encoding="utf-8") as handle:
        system = LevelSystem.from_json_dict(json.load(handle))
    report = grand_ensemble(system)
    if config.fmt == "json":
        payload = report.to_json_dict()
        if args.check_correspondence:
            payload["correspondence"] = correspondence_check(
                system, tol=config.tolerance
            ).to_json_dict()
        _emit_json(payload)
    elif config.fmt == "csv":
        for row in report.csv_rows():
            print(",".join(row))
    else:
        print(f"statistics        {system.statistics}")
        print(f"levels            {len(system.levels)}")
        print(f"ln Xi             {_fmt_float(report.log_xi)}")
        print(f"Xi                {_fmt_float(report.xi)}")
        print(f"Omega             {_fmt_float(report.omega)}")
        print(f"mean N            {_fmt_float(report.mean_particle_number)}")
    if args.check_correspondence and config.fmt != "json":
        check = correspondence_check(system, tol=config.tolerance)
        status = "PASS" if check.ok else "FAIL"
        print(
            f"correspondence    {status} "
            f"(max deviation {_fmt_float(check.max_relative_deviation)})"
        )
        if not check.ok:
            return 1
    return 0


def _cmd_zeta_det(args: argparse.Namespace, config: RunConfig) -> int:
    spec = _parse_spectrum(args)
    value = zeta_det(spec)
    if config.fmt == "json":
        _emit_json({"spectrum": spec.to_json_dict(), "determinant": value})
    else:
        print(_fmt_float(value))
    return 0


def _cmd_spectral(args: argparse.Namespace, config: RunConfig) -> int:
    spec = _parse_spectrum(args)
    report = build_spectral_report(spec, tol=config.tolerance)
    if config.fmt == "json":
        _emit_json(report.to_json_dict())
        return 0
    print(f"spectrum          {spec.form}")
    print(f"chern character   {_fmt_float(report.chern_character)}")
    print(f"ln Xi_BE          {_fmt_float(report.log_xi_be)}")
    print(f"ln Xi_FD          {_fmt_float(report.log_xi_fd)}")
    print(f"determinant       {_fmt_float(report.determinant)}")
    print(f"euler class       {_fmt_float(report.euler_class)}")
    if report.pairings is not None:
        for kind in PAIRING_KINDS:
            values = report.pairings[kind]
            print(
                f"pairing {kind}        exact {_fmt_float(values['exact'])}  "
                f"nondegenerate {_fmt_float(values['nondegenerate'])}"
            )
    return 0


_HANDLERS = {
    "genus": _cmd_genus,
    "index": _cmd_index,
    "verify": _cmd_verify,
    "stats": _cmd_stats,
    "zeta-det": _cmd_zeta_det,
    "spectral": _cmd_spectral,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        return _HANDLERS[args.command](args, config)
    except (
        _CliError,
        CatalogError,
        ConvergenceError,
        DivergenceError,
        TailBoundError,
        ValueError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
