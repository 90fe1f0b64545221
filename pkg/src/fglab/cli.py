"""Command-line verification harness: one subcommand per campaign.

Every run builds the requested field and geometry, dispatches to a
campaign, and writes a deterministic report (JSON by default, CSV flattens
the counts only).  Identical configuration, including the seed, yields a
byte-identical report file; wall time goes to stderr, never into the file.

Exit codes: 0 all checks passed, 1 verification failures in the report,
2 configuration error (reported as a JSON object on stderr).

The --sample flag is the per-campaign sampling knob: matrix-form sample
size for ``main1`` (default: exhaustive below the threshold), number of
random matrices for ``main3``, extra distance-3 pairs for ``vlemmas``,
cross-check sample sizes for ``quot2`` and ``hyperscan``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field

from . import hyper, semipoly
from .errors import ConfigError, FglabError
from .flaggeom import build_geometry
from .gf import automorphism_group, make_field
from .linalg import MatrixVec, span_basis
from .reporting import Report

SUBCOMMANDS = (
    "geometry", "main1", "main3", "vlemmas", "quot2", "polarized", "identity", "hyperscan",
)


@dataclass
class RunConfig:
    subcommand: str
    p: int = 2
    k: int = 1
    modulus: tuple[int, ...] | None = None
    n: int = 2
    sample: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    sigma: int = 0
    rho: int | None = None
    quotient_identity: bool = False
    expr: str | None = None
    dump: bool = False
    extra: dict = dc_field(default_factory=dict)

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.sample is not None and self.sample <= 0:
            raise ConfigError("sample size must be positive")
        if self.subcommand == "identity" and not self.expr:
            raise ConfigError("identity needs --expr")

    def as_parameters(self) -> dict:
        cfg = asdict(self)
        cfg["modulus"] = list(self.modulus) if self.modulus else None
        cfg.pop("out")
        return cfg


def run(config: RunConfig) -> Report:
    """Dispatch a validated configuration to its campaign."""
    config.validate()
    started = time.monotonic()
    field = make_field(config.p, config.k, config.modulus)

    if config.subcommand == "identity":
        report = _run_identity(config, field)
    else:
        geometry = build_geometry(config.n, field)
        if config.subcommand == "geometry":
            report = hyper.verify_geometry(geometry, dump=config.dump)
        elif config.subcommand == "main1":
            report = hyper.verify_main1(geometry, sample=config.sample, seed=config.seed)
        elif config.subcommand == "main3":
            report = hyper.verify_cross_twist(
                geometry, sample_size=config.sample or 200, seed=config.seed
            )
        elif config.subcommand == "vlemmas":
            report = _run_vlemmas(config, geometry)
        elif config.subcommand == "quot2":
            report = hyper.verify_quot2(
                geometry, seed=config.seed, sample_size=config.sample or 10
            )
        elif config.subcommand == "polarized":
            report = _run_polarized(config, geometry)
        elif config.subcommand == "hyperscan":
            report = hyper.verify_hyperscan(
                geometry, seed=config.seed, sample_size=config.sample or 1000
            )
        else:  # pragma: no cover - validate() guards this
            raise ConfigError(config.subcommand)

    report.parameters["config"] = config.as_parameters()
    report.seed = config.seed
    report.elapsed = time.monotonic() - started
    return report


def _run_identity(config: RunConfig, field) -> Report:
    poly = semipoly.parse_semipolynomial(config.expr, field)
    report = Report(
        theorem="identity-principle",
        parameters={"p": field.p, "k": field.k, "expr": config.expr},
        seed=config.seed,
    )
    report.counts["arity"] = poly.arity
    report.counts["monomials"] = len(poly.monomials)
    witness = semipoly.identity_witness(poly)
    report.checked_count = field.order**poly.arity
    if witness is None:
        report.witnesses["witness"] = None
        report.counts["null_polynomial"] = 1
    else:
        report.witnesses["witness"] = [list(t.coeffs) for t in witness]
        value = poly.eval(witness)
        report.witnesses["value"] = list(value.coeffs)
        if value.is_zero():
            report.fail("witness-evaluates-to-zero")
    return report


def _run_vlemmas(config: RunConfig, geometry) -> Report:
    auts = automorphism_group(geometry.field)
    if len(auts) < 2:
        raise ConfigError("vlemmas needs a field with a nontrivial automorphism")
    if config.rho is not None:
        pairs = [(auts[config.sigma % len(auts)], auts[config.rho % len(auts)])]
    else:
        pairs = [(s, r) for s in auts for r in auts if s != r]
    merged = Report(
        theorem="v-lemmas",
        parameters={"p": geometry.field.p, "k": geometry.field.k, "n": geometry.n},
        seed=config.seed,
    )
    for sigma, rho in pairs:
        part = hyper.verify_v_lemmas(
            geometry, sigma, rho,
            extra_pairs=config.sample if config.sample is not None else 5,
            seed=config.seed,
        )
        tag = f"sigma_{sigma.frobenius_power}_rho_{rho.frobenius_power}"
        merged.counts[f"{tag}_pairs"] = part.counts["pairs"]
        for failure in part.failures:
            merged.failures.append({"twisting_pair": tag, **failure})
        merged.checked_count += part.checked_count
    return merged


def _run_polarized(config: RunConfig, geometry) -> Report:
    auts = automorphism_group(geometry.field)
    sigma = auts[config.sigma % len(auts)]
    embedding = hyper.get_embedding(geometry, sigma)
    kernel_desc = "none"
    if config.quotient_identity:
        ident = MatrixVec.identity(geometry.field, geometry.n + 1)
        embedding = hyper.quotient(embedding, span_basis([ident]))
        kernel_desc = "identity"
    report = Report(
        theorem="polarized-embedding",
        parameters={
            "p": geometry.field.p, "k": geometry.field.k, "n": geometry.n,
            "sigma": sigma.frobenius_power, "kernel": kernel_desc,
        },
        seed=config.seed,
    )
    report.checked_count = geometry.num_flags
    report.counts["ambient_dim"] = embedding.dim
    polarized = hyper.is_polarized(embedding)
    report.counts["polarized"] = int(polarized)
    if not polarized:
        report.fail("embedding-not-polarized", sigma=sigma.frobenius_power, kernel=kernel_desc)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fglab",
        description="Exhaustive verification lab for point-hyperplane flag geometries "
                    "over small finite fields.",
        epilog=(
            "identity expression grammar: poly := mono ('+' mono)*; "
            "mono := coeff ('*' var)* | var ('*' var)*; "
            "coeff := int | '[' int (',' int)* ']' (little-endian coordinates); "
            "var := name '{' powers? '}' with powers a comma list of Frobenius "
            "exponents, repeats adding up; example: 1*t{0}+1*t{1}"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("geometry", "build the flag geometry; counts, distance rule vs graph walk, diameter"),
        ("main1", "which hyperplanes arise from which twistings (exhaustive sweep)"),
        ("main3", "cross-twist transfer forces rank one (seeded matrix sweep)"),
        ("vlemmas", "maximal-subspace lemmas for distance-3 singular hyperplane pairs"),
        ("quot2", "classify polarized one-point quotients of every twisting"),
        ("polarized", "test one embedding (optionally a quotient) for polarization"),
        ("identity", "witness search for a semi-polynomial expression"),
        ("hyperscan", "enumerate ALL geometric hyperplanes of a tiny geometry"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None,
                       help="JSON config file: {\"field\": {\"p\", \"k\", \"modulus\"}, ...};"
                            " explicit flags override it")
        p.add_argument("--p", type=int, default=None, help="field characteristic (prime)")
        p.add_argument("--k", type=int, default=None, help="extension degree")
        p.add_argument("--modulus", type=str, default=None,
                       help="comma-separated little-endian modulus coefficients")
        p.add_argument("--n", type=int, default=None, help="projective dimension (>= 2)")
        p.add_argument("--sample", type=int, default=None, help="per-campaign sample size")
        p.add_argument("--seed", type=int, default=None, help="PRNG seed (SplitMix64), default 0")
        p.add_argument("--out", type=str, default=None, help="report file path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "vlemmas":
            p.add_argument("--sigma", type=int, default=0, help="Frobenius power of sigma")
            p.add_argument("--rho", type=int, default=None, help="Frobenius power of rho")
        if name == "polarized":
            p.add_argument("--sigma", type=int, default=0, help="Frobenius power of the twist")
            p.add_argument("--quotient-identity", action="store_true",
                           help="quotient over the span of the identity matrix first")
        if name == "identity":
            p.add_argument("--expr", type=str, required=True, help="semi-polynomial expression")
        if name == "geometry":
            p.add_argument("--dump", action="store_true",
                           help="include the full flag/line dump in the report")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def config_from_args(args: argparse.Namespace) -> RunConfig:
    file_cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}
    field_cfg = file_cfg.get("field", {})

    def pick(flag_value, file_value, default):
        if flag_value is not None:
            return flag_value
        if file_value is not None:
            return file_value
        return default

    modulus = None
    if args.modulus:
        try:
            modulus = tuple(int(c) for c in args.modulus.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad modulus {args.modulus!r}") from exc
    elif field_cfg.get("modulus") is not None:
        modulus = tuple(int(c) for c in field_cfg["modulus"])

    return RunConfig(
        subcommand=args.subcommand,
        p=pick(args.p, field_cfg.get("p"), 2),
        k=pick(args.k, field_cfg.get("k"), 1),
        modulus=modulus,
        n=pick(args.n, file_cfg.get("n"), 2),
        sample=pick(args.sample, file_cfg.get("sample"), None),
        seed=pick(args.seed, file_cfg.get("seed"), 0),
        out=args.out,
        format=args.format,
        sigma=getattr(args, "sigma", 0),
        rho=getattr(args, "rho", None),
        quotient_identity=getattr(args, "quotient_identity", False),
        expr=getattr(args, "expr", None),
        dump=getattr(args, "dump", False),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run(config)
    except FglabError as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error, sort_keys=True), file=sys.stderr)
        return 2
    text = report.to_json() if config.format == "json" else report.to_csv()
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    print(report.summary(), file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
