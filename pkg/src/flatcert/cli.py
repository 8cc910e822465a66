"""Command-line front end: every pipeline as a subcommand with deterministic output.

Exit codes: 0 success (or a valid certificate), 2 certification failure at
some degree (a result, not an error), 1 usage or I/O errors.  Reports embed
the config, seed, tool version, and the schema tag, and serialize with sorted
keys so identical runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

from . import SCHEMA, __version__
from .geometry import (
    EarringFamily,
    SphereFamilySpec,
    XAxisFamily,
    earring_distances,
    read_points_csv,
)
from .jets import ArcJet, circle_arc_jet, jet_nondegeneracy
from .lojasiewicz import certify_flatness_via_directions, fit_exponent
from .witness import field_by_name, zero_set_distance


@dataclass
class RunConfig:
    """Flags of one invocation, echoed verbatim into every artifact."""

    subcommand: str
    seed: int = 0
    field: str | None = None
    family: str | None = None
    zero: str | None = None
    dim: int = 2
    pmax: int | None = None
    mmax: int | None = None
    r: float | None = None
    count: int | None = None
    samples: int | None = None
    k_lo: int | None = None
    k_hi: int | None = None
    floor: float | None = None
    tol: float = 1e-8
    n: int | None = None
    jet_order: int | None = None
    arcs: str | None = None
    points: str | None = None
    header: bool = False
    format: str = "json"
    out: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _artifact(config: RunConfig, result: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool": {"name": "flatcert", "version": __version__},
        "config": config.as_dict(),
        "result": result,
    }


def _emit(config: RunConfig, artifact: dict, csv_table=None) -> None:
    if config.format == "csv" and csv_table is not None:
        header, rows = csv_table
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
        text = buf.getvalue()
    else:
        text = json.dumps(artifact, indent=2, sort_keys=True) + "\n"
    if config.out:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _family_from_config(config: RunConfig):
    if config.family == "earring":
        return EarringFamily()
    if config.family == "spheres":
        return SphereFamilySpec(dim=config.dim)
    if config.family == "x-axis":
        return XAxisFamily()
    raise ValueError(f"unknown family {config.family!r}")


def cmd_certify_flatness(config: RunConfig) -> int:
    family = _family_from_config(config)
    cert = certify_flatness_via_directions(
        family,
        p_max=config.pmax,
        r=config.r,
        count=config.count,
        seed=config.seed,
        tol=config.tol,
    )
    artifact = _artifact(config, cert.to_dict())
    _emit(config, artifact, cert.csv_table())
    return 0 if cert.valid else 2


def cmd_loj_exponent(config: RunConfig) -> int:
    fld = field_by_name(config.field, n=config.dim)
    dist_fn = zero_set_distance(config.zero, n=fld.n)
    report = fit_exponent(
        fld,
        dist_fn,
        k_range=range(config.k_lo, config.k_hi + 1),
        samples_per_annulus=config.samples,
        seed=config.seed,
        dist_floor=config.floor,
    )
    artifact = _artifact(config, report.to_dict())
    _emit(config, artifact, report.csv_table())
    return 0


def _load_arcs(path: str) -> list[ArcJet]:
    with open(path) as fh:
        payload = json.load(fh)
    if isinstance(payload, dict):
        payload = payload.get("arcs", [])
    if not isinstance(payload, list) or not payload:
        raise ValueError(f"{path} holds no arcs")
    return [ArcJet.from_dict(item) for item in payload]


def cmd_jet_report(config: RunConfig) -> int:
    if config.arcs:
        arcs = _load_arcs(config.arcs)
    elif config.family == "earring":
        order = config.jet_order or max(2, 2 * config.mmax)
        arcs = [circle_arc_jet(n, order) for n in range(1, config.n + 1)]
    else:
        raise ValueError("jet-report needs --arcs FILE or --family earring")
    report = jet_nondegeneracy(arcs, m_max=config.mmax, tol=config.tol)
    artifact = _artifact(config, report.to_dict())
    header = ["m", "dimension", "max_dimension", "condition_b"]
    rows = [[d.m, d.dimension, d.max_dimension, d.condition_b] for d in report.degrees]
    _emit(config, artifact, (header, rows))
    return 0


def _append_column(config: RunConfig, colname: str, compute) -> int:
    pts = read_points_csv(config.points, header=config.header)
    values = compute(pts)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if config.header:
        writer.writerow([f"x{i + 1}" for i in range(pts.shape[1])] + [colname])
    for row, val in zip(pts, values):
        writer.writerow([repr(float(v)) for v in row] + [repr(float(val))])
    text = buf.getvalue()
    if config.out:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_distance(config: RunConfig) -> int:
    return _append_column(config, "distance", earring_distances)


def cmd_witness_eval(config: RunConfig) -> int:
    fld = field_by_name(config.field, n=config.dim)
    return _append_column(config, fld.name, fld)


def _parse_k_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("..")
    if not hi:
        raise ValueError("expected a range like 2..6")
    return int(lo), int(hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatcert",
        description="Flatness certification and Lojasiewicz exponent estimation.",
    )
    parser.add_argument("--version", action="version", version=f"flatcert {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    cert = sub.add_parser("certify-flatness", help="Certify flatness from secant directions")
    cert.add_argument("--family", choices=["earring", "spheres", "x-axis"], required=True)
    cert.add_argument("--dim", type=int, default=3, help="Ambient dimension for spheres")
    cert.add_argument("--pmax", type=int, default=8)
    cert.add_argument("--r", type=float, default=0.1, help="Sampling radius around the origin")
    cert.add_argument("--count", type=int, default=200)
    cert.add_argument("--seed", type=int, default=0)
    cert.add_argument("--tol", type=float, default=1e-8)
    _output_flags(cert)

    loj = sub.add_parser("loj-exponent", help="Per-annulus Lojasiewicz exponent estimates")
    loj.add_argument("--field", choices=["earring", "sq", "axis", "flat-radial"], required=True)
    loj.add_argument("--zero", choices=["earring", "origin", "x-axis"], required=True)
    loj.add_argument("--k", type=str, default="2..6", help="Dyadic annulus range, e.g. 2..6")
    loj.add_argument("--samples", type=int, default=2000)
    loj.add_argument("--seed", type=int, default=0)
    loj.add_argument("--floor", type=float, default=1e-4)
    loj.add_argument("--dim", type=int, default=2)
    _output_flags(loj)

    jet = sub.add_parser("jet-report", help="Jet-nondegeneracy report for an arc family")
    jet.add_argument("--family", choices=["earring"], default=None)
    jet.add_argument("--n", type=int, default=20, help="Number of earring arcs")
    jet.add_argument("--arcs", type=str, default=None, help="JSON file of arc jets")
    jet.add_argument("--mmax", type=int, default=4)
    jet.add_argument("--jet-order", type=int, default=None)
    jet.add_argument("--tol", type=float, default=1e-8)
    jet.add_argument("--seed", type=int, default=0)
    _output_flags(jet)

    dist = sub.add_parser("distance", help="Append earring distances to a CSV of points")
    dist.add_argument("--points", type=str, required=True)
    dist.add_argument("--header", action="store_true")
    dist.add_argument("--out", type=str, default=None)

    wev = sub.add_parser("witness-eval", help="Append values of a named field to a CSV of points")
    wev.add_argument("--field", choices=["earring", "sq", "axis", "flat-radial"], default="earring")
    wev.add_argument("--points", type=str, required=True)
    wev.add_argument("--header", action="store_true")
    wev.add_argument("--dim", type=int, default=2)
    wev.add_argument("--out", type=str, default=None)

    return parser


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", type=str, default=None)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in vars(cfg):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if args.subcommand == "loj-exponent":
        cfg.k_lo, cfg.k_hi = _parse_k_range(args.k)
    if args.subcommand == "jet-report":
        cfg.jet_order = args.jet_order
    return cfg


_HANDLERS = {
    "certify-flatness": cmd_certify_flatness,
    "loj-exponent": cmd_loj_exponent,
    "jet-report": cmd_jet_report,
    "distance": cmd_distance,
    "witness-eval": cmd_witness_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        return _HANDLERS[args.subcommand](config)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"flatcert: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
