"""Command-line interface.

Three subcommands:

``run``     reproduce a benchmark case as a convergence table::

                beambounds run --case uniform-rect --refinements 2,4,8,16 \
                    --format csv --out table.csv

            ``--study`` switches to the multi-eigenvalue study and emits
            error-versus-h data for log-log plotting.

``verify``  run the lemma verification suite and print its report.

``bounds``  guaranteed bounds for a custom beam read from a TOML file::

                beambounds bounds --config beam.toml

Configuration file schema (TOML, SI units)::

    [geometry]
    kind = "rectangular"        # or "circular"
    length = 1.0                # beam length in metres
    youngs_modulus = 21.0e10    # pascals
    width = 0.05                # rectangular sections only

    [stiffness]                 # exactly one of:
    thickness = 0.015           # constant thickness (rectangular)
    # radius = 0.01             # constant radius (circular)
    # segments = [[0.125, 0.0155], [0.125, 0.010], ...]
    #                           # stepped: (length-fraction, value) pairs,
    #                           # fractions must sum to 1
    # affine = [0.015, 0.010]   # linear from x=0 to x=L

    [mesh]
    elements = 64               # element count of the uniform mesh
    eigenvalues = 1             # how many eigenvalues to bound

Exit codes: 0 on success, 1 on configuration errors, 2 on numerical
failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .bounds import two_sided_bounds
from .errors import (
    BeamBoundsError,
    FactorizationFailureError,
    MisalignedMeshError,
    NoConvergenceError,
    SingularSystemError,
    UnsupportedProfileError,
)
from .experiments import (
    PRESETS,
    ExperimentConfig,
    emit_table,
    format_study_csv,
    format_table,
    run_case,
    run_multi_eigenvalue_study,
)
from .model import (
    AffineDimension,
    BeamGeometry,
    CircularSection,
    ConstantDimension,
    RectangularSection,
    SteppedDimension,
    make_uniform_mesh,
    stiffness_from_geometry,
)
from .verification import format_report, run_verification_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


class _CliError(Exception):
    """Configuration or usage problem; maps to exit code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _parse_refinements(text: str):
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise _CliError(
            f"--refinements expects comma-separated integers, got {text!r}"
        )


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="beambounds",
                             description="Guaranteed buckling eigenvalue bounds "
                                         "for clamped beams")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a benchmark case")
    run.add_argument("--case", required=True, choices=sorted(PRESETS),
                     help="benchmark preset")
    run.add_argument("--refinements", default="",
                     help="comma-separated element counts (default: the "
                          "case's benchmark grid)")
    run.add_argument("--eigenvalues", type=int, default=1, metavar="M",
                     help="eigenvalues to track (used by --study)")
    run.add_argument("--format", default="plain", choices=("csv", "md", "plain"),
                     dest="output_format")
    run.add_argument("--out", type=Path, default=None,
                     help="output file (default: stdout)")
    run.add_argument("--study", action="store_true",
                     help="emit per-eigenvalue error-versus-h study data")
    run.add_argument("--with-verification", action="store_true",
                     help="also run the lemma verification suite (report on "
                          "stderr)")

    verify = sub.add_parser("verify", help="run the lemma verification suite")
    verify.add_argument("--out", type=Path, default=None)

    bounds_cmd = sub.add_parser("bounds", help="bounds for a custom beam")
    bounds_cmd.add_argument("--config", required=True, type=Path,
                            help="TOML beam description")
    bounds_cmd.add_argument("--out", type=Path, default=None)
    return parser


def _load_config(path: Path) -> dict:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise _CliError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise _CliError(f"invalid TOML in {path}: {exc}")


def _dimension_from_config(stiffness: dict, length: float):
    keys = [k for k in ("thickness", "radius", "segments", "affine")
            if k in stiffness]
    if len(keys) != 1:
        raise _CliError(
            "[stiffness] needs exactly one of thickness, radius, segments, affine"
        )
    key = keys[0]
    value = stiffness[key]
    if key in ("thickness", "radius"):
        return ConstantDimension(float(value))
    if key == "affine":
        start, end = value
        return AffineDimension(float(start), float(end))
    fractions = [float(pair[0]) for pair in value]
    values = [float(pair[1]) for pair in value]
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise _CliError("segment length fractions must sum to 1")
    breakpoints = [0.0]
    for fraction in fractions:
        breakpoints.append(breakpoints[-1] + fraction * length)
    breakpoints[-1] = length
    return SteppedDimension(tuple(breakpoints), tuple(values))


def _geometry_from_config(config: dict) -> BeamGeometry:
    try:
        geometry = config["geometry"]
        kind = geometry["kind"]
        length = float(geometry["length"])
        youngs = float(geometry["youngs_modulus"])
        stiffness = config["stiffness"]
    except KeyError as exc:
        raise _CliError(f"missing config key: {exc}")
    dimension = _dimension_from_config(stiffness, length)
    if kind == "rectangular":
        try:
            width = float(geometry["width"])
        except KeyError:
            raise _CliError("rectangular geometry needs a width")
        section = RectangularSection(width, dimension)
    elif kind == "circular":
        section = CircularSection(dimension)
    else:
        raise _CliError(f"unknown geometry kind {kind!r}")
    try:
        return BeamGeometry(length, youngs, section)
    except ValueError as exc:
        raise _CliError(str(exc))


def _write_or_print(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="ascii")


def _cmd_run(args) -> int:
    config = ExperimentConfig(
        case=args.case,
        refinements=_parse_refinements(args.refinements),
        eigenvalues=args.eigenvalues,
        output_format=args.output_format,
        output_path=args.out,
        include_verification=args.with_verification,
    )
    if config.include_verification:
        report = run_verification_suite()
        sys.stderr.write(format_report(report))
        if not report.passed:
            return EXIT_NUMERIC
    if args.study:
        study = run_multi_eigenvalue_study(config, count=config.eigenvalues)
        _write_or_print(format_study_csv(study), args.out)
        if len(config.refinements) >= 2:
            for curve in study.curves:
                slopes = ", ".join(f"{k}={v:.3f}"
                                   for k, v in curve.slopes().items())
                sys.stderr.write(
                    f"eigenvalue {curve.index}: least-squares slopes over the "
                    f"finest three meshes (non-normative): {slopes}\n"
                )
        return EXIT_OK
    table = run_case(config)
    if args.out is None:
        sys.stdout.write(format_table(table, config.output_format))
    else:
        emit_table(table, config.output_format, args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_verification_suite()
    _write_or_print(format_report(report), args.out)
    return EXIT_OK if report.passed else EXIT_NUMERIC


def _cmd_bounds(args) -> int:
    config = _load_config(args.config)
    geometry = _geometry_from_config(config)
    mesh_section = config.get("mesh", {})
    elements = int(mesh_section.get("elements", 64))
    count = int(mesh_section.get("eigenvalues", 1))
    profile = stiffness_from_geometry(geometry)
    try:
        mesh = make_uniform_mesh(geometry.length, elements)
        report = two_sided_bounds(mesh, profile, count)
    except ValueError as exc:
        raise _CliError(str(exc))
    lines = [
        f"beam length {geometry.length} m, {elements} elements, "
        f"interpolation constant C_h = {report.c_h:.6e}",
        f"{'index':>5} {'lower bound [N]':>17} {'upper bound [N]':>17} "
        f"{'eta_rel':>12}",
    ]
    for i in range(report.count):
        lines.append(f"{i + 1:>5} {report.lower[i]:>17.6e} "
                     f"{report.upper[i]:>17.6e} {report.eta_rel[i]:>12.4e}")
    guarantee = "guaranteed" if report.guaranteed else "NOT guaranteed"
    lines.append(f"bounds are {guarantee} "
                 f"(stiffness infima: {report.kappa.provenance})")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_bounds(args)
    except _CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (ValueError, UnsupportedProfileError, MisalignedMeshError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (SingularSystemError, FactorizationFailureError,
            NoConvergenceError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except BeamBoundsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
