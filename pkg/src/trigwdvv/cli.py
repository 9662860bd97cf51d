"""Command-line surface: seeded verification suites with JSON reports.

Commands map to the library's check families (WDVV residuals, associativity,
metric structure, block restriction, supersymmetric block) plus two utility
emitters for tensors and normalized configuration documents.  Reports are
deterministic given (seed, run parameters): every check draws from its own
generator keyed by the run seed and the check name, and floats are serialized
with 17 significant digits.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 parse or
precondition error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .configurations import (
    BCnParameters,
    Configuration,
    Partition,
    build_bcn,
    configurations_match,
    constraint_residual,
    restrict_configuration,
)
from .errors import ConfigFormatError, PreconditionError, SamplingError, TrigWdvvError
from .prepotential import (
    DEFAULT_THRESHOLD,
    h_function,
    is_admissible,
    metric_B,
    tensor_generic,
)
from .sampling import DEFAULT_BOX, MAX_ATTEMPTS_PER_POINT, fully_active, rng_for
from .wdvv import (
    CONDITION_CAP,
    commuting_residual,
    generalized_wdvv_residual,
    wdvv_residual,
)
from . import algebra, susy

COMMANDS = (
    "verify-wdvv",
    "verify-associativity",
    "verify-metric",
    "verify-restriction",
    "verify-susy",
    "tensor",
    "build-config",
)


# ---------------------------------------------------------------------------
# run specification and report types


@dataclass
class RunSpec:
    """Everything a verification run depends on; echoed verbatim in the report."""

    command: str
    config_source: dict | str
    samples: int = 50
    seed: int = 0
    tolerance: float = 1e-8
    box: tuple[float, float] = DEFAULT_BOX
    threshold: float = DEFAULT_THRESHOLD
    step: float = 1e-3

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        if self.samples < 1:
            raise PreconditionError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        lo, hi = self.box
        if not lo < hi:
            raise PreconditionError(f"box ({lo}, {hi}) must satisfy lo < hi")
        if not self.tolerance > 0.0:
            raise PreconditionError(f"tolerance must be > 0, got {self.tolerance}")
        if not self.threshold > 0.0:
            raise PreconditionError(f"threshold must be > 0, got {self.threshold}")
        if not self.step > 0.0:
            raise PreconditionError(f"step must be > 0, got {self.step}")

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "config_source": self.config_source,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "box": list(self.box),
            "threshold": self.threshold,
            "step": self.step,
        }


@dataclass
class CheckResult:
    name: str
    max_residual: float
    mean_residual: float
    worst_point: list[float] | None
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "worst_point": self.worst_point,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    run: RunSpec
    checks: list[CheckResult] = field(default_factory=list)
    discarded_points: int = 0
    version: str = __version__

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "run": self.run.to_json_dict(),
            "checks": [c.to_json_dict() for c in self.checks],
            "discarded_points": self.discarded_points,
            "version": self.version,
        }


def dumps_17g(obj) -> str:
    """JSON with floats rendered at 17 significant digits, insertion order kept."""
    if isinstance(obj, dict):
        items = ",".join(f"{json.dumps(str(k))}:{dumps_17g(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps_17g(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    if obj is None:
        return "null"
    return json.dumps(obj)


# ---------------------------------------------------------------------------
# configuration documents


def parse_config_document(doc: dict) -> BCnParameters | Configuration:
    """Parse a configuration document; missing fields raise ConfigFormatError."""
    if not isinstance(doc, dict):
        raise ConfigFormatError("configuration document must be a JSON object")
    if "family" in doc:
        if doc["family"] != "bcn":
            raise ConfigFormatError(f"unknown family {doc['family']!r}; expected 'bcn'")
        for key in ("n", "r", "s", "q", "m"):
            if key not in doc:
                raise ConfigFormatError(f"family document is missing field {key!r}")
        try:
            return BCnParameters(
                n=int(doc["n"]),
                r=float(doc["r"]),
                s=float(doc["s"]),
                q=float(doc["q"]),
                m=tuple(float(v) for v in doc["m"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigFormatError(f"invalid family parameters: {exc}") from exc
    if "explicit" in doc:
        body = doc["explicit"]
        if not isinstance(body, dict):
            raise ConfigFormatError("'explicit' must be an object")
        for key in ("dimension", "members"):
            if key not in body:
                raise ConfigFormatError(f"explicit document is missing field {key!r}")
        members = []
        for i, entry in enumerate(body["members"]):
            if not isinstance(entry, dict) or "vector" not in entry or "multiplicity" not in entry:
                raise ConfigFormatError(
                    f"member {i} must be an object with fields 'vector' and 'multiplicity'"
                )
            members.append((tuple(float(v) for v in entry["vector"]), float(entry["multiplicity"])))
        try:
            return Configuration(int(body["dimension"]), members)
        except TrigWdvvError as exc:
            raise ConfigFormatError(f"invalid explicit configuration: {exc}") from exc
    raise ConfigFormatError("configuration document needs a 'family' or 'explicit' field")


def load_config_source(source: dict | str) -> BCnParameters | Configuration:
    if isinstance(source, str):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigFormatError(f"configuration file not found: {source}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigFormatError(f"configuration file is not valid JSON: {exc}") from exc
        return parse_config_document(doc)
    return parse_config_document(source)


def config_document(parsed: BCnParameters | Configuration) -> dict:
    """Normalized explicit-configuration document for any parsed source."""
    config = build_bcn(parsed) if isinstance(parsed, BCnParameters) else parsed
    return {
        "explicit": {
            "dimension": config.dimension,
            "members": [
                {"vector": list(mem.vector), "multiplicity": mem.multiplicity}
                for mem in config.members
            ],
        }
    }


# ---------------------------------------------------------------------------
# sampling helpers


def _require_family(parsed, command: str) -> BCnParameters:
    if not isinstance(parsed, BCnParameters):
        raise PreconditionError(f"{command} requires family parameters (--family bcn ...)")
    return parsed


def _draw_admissible(rng, pattern: Configuration, spec: RunSpec) -> np.ndarray:
    lo, hi = spec.box
    for _ in range(MAX_ATTEMPTS_PER_POINT):
        x = rng.uniform(lo, hi, pattern.dimension)
        if is_admissible(pattern, x, spec.threshold):
            return x
    raise SamplingError(
        f"no admissible point in box ({lo}, {hi}) at threshold {spec.threshold} "
        f"after {MAX_ATTEMPTS_PER_POINT} attempts"
    )


class _Collector:
    def __init__(self, name: str):
        self.name = name
        self.values: list[float] = []
        self.worst: list[float] | None = None
        self._worst_val = -1.0

    def add(self, value: float, point=None) -> None:
        v = float(value)
        self.values.append(v)
        if v > self._worst_val:
            self._worst_val = v
            self.worst = None if point is None else [float(t) for t in np.atleast_1d(point)]

    def result(self, tolerance: float) -> CheckResult:
        mx = max(self.values) if self.values else 0.0
        mean = float(np.mean(self.values)) if self.values else 0.0
        return CheckResult(self.name, mx, mean, self.worst, mx < tolerance)


# ---------------------------------------------------------------------------
# command drivers


def _run_wdvv(spec: RunSpec, parsed) -> VerificationReport:
    config = build_bcn(parsed) if isinstance(parsed, BCnParameters) else parsed
    pattern = fully_active(config)
    n = config.dimension
    report = VerificationReport(run=spec)
    pair = _Collector("wdvv_pair_residual")
    gen = _Collector("generalized_wdvv_residual")
    rng = rng_for(spec.seed, f"{spec.command}/points")
    accepted = 0
    while accepted < spec.samples:
        if report.discarded_points > MAX_ATTEMPTS_PER_POINT:
            raise SamplingError("condition-number cap discarded too many points")
        x = _draw_admissible(rng, pattern, spec)
        T = tensor_generic(config, x, spec.threshold)
        B = metric_B(T, x)
        conds = [np.linalg.cond(B)] + [np.linalg.cond(T[k]) for k in range(n)]
        if max(conds) > CONDITION_CAP:
            report.discarded_points += 1
            continue
        accepted += 1
        for i in range(n):
            for j in range(i + 1, n):
                pair.add(wdvv_residual(T, B, i, j, x).residual, x)
        for k in range(n):
            for i in range(n):
                for j in range(i + 1, n):
                    gen.add(generalized_wdvv_residual(T, i, j, k, x).residual, x)
    report.checks.append(pair.result(spec.tolerance))
    if n >= 2:
        report.checks.append(gen.result(spec.tolerance))
    return report


def _run_associativity(spec: RunSpec, parsed) -> VerificationReport:
    config = build_bcn(parsed) if isinstance(parsed, BCnParameters) else parsed
    pattern = fully_active(config)
    n = config.dimension
    report = VerificationReport(run=spec)
    col = _Collector("associativity_residual")
    rng = rng_for(spec.seed, f"{spec.command}/points")
    for _ in range(spec.samples):
        x = _draw_admissible(rng, pattern, spec)
        ctx = algebra.ProductContext(config, x, spec.threshold)
        u, v, w = (rng.standard_normal(n) for _ in range(3))
        col.add(algebra.associativity_residual(ctx, u, v, w), x)
    report.checks.append(col.result(spec.tolerance))
    return report


def _run_metric(spec: RunSpec, parsed) -> VerificationReport:
    params = _require_family(parsed, spec.command)
    config = build_bcn(params)
    pattern = fully_active(config)
    delta = constraint_residual(params)
    report = VerificationReport(run=spec)
    offdiag = _Collector("metric_offdiagonal")
    diag_id = _Collector("metric_diagonal_identity")
    rng = rng_for(spec.seed, f"{spec.command}/points")
    m = params.m_array
    for _ in range(spec.samples):
        x = _draw_admissible(rng, pattern, spec)
        T = tensor_generic(config, x, spec.threshold)
        B = metric_B(T, x)
        scale = max(1.0, float(np.abs(B).max()))
        off = B - np.diag(np.diag(B))
        offdiag.add(float(np.abs(off).max()) / scale, x)
        expected = m * (h_function(params, x) + delta * np.cosh(2.0 * x))
        diag_id.add(float(np.abs(np.diag(B) - expected).max()) / scale, x)
    report.checks.append(offdiag.result(spec.tolerance))
    report.checks.append(diag_id.result(spec.tolerance))
    return report


def _run_restriction(spec: RunSpec, parsed) -> VerificationReport:
    params = _require_family(parsed, spec.command)
    blocks = []
    for mi in params.m:
        if abs(mi - round(mi)) > 0.0 or round(mi) < 1:
            raise PreconditionError(
                f"{spec.command} requires positive integer m (block sizes), got {params.m}"
            )
        blocks.append(int(round(mi)))
    part = Partition(N=sum(blocks), blocks=tuple(blocks))
    report = VerificationReport(run=spec)

    match = _Collector("restriction_config_match")
    projected = restrict_configuration(part.N, params.r, params.s, params.q, part)
    rebuilt = build_bcn(params)
    if configurations_match(projected, rebuilt, coord_tol=1e-12, mult_tol=1e-12):
        dev = 0.0
        for pm, bm in zip(projected.members, rebuilt.members):
            dev = max(
                dev,
                max(abs(a - b) for a, b in zip(pm.vector, bm.vector)),
                abs(pm.multiplicity - bm.multiplicity),
            )
        match.add(dev)
    else:
        match.add(float("inf"))
    report.checks.append(match.result(spec.tolerance))

    closure = _Collector("restricted_closure")
    two_path = _Collector("structure_constants_two_path")
    tangency = _Collector("tangency_residual")
    h_b = _Collector("h_b_decomposition")
    pattern = fully_active(projected)
    rng = rng_for(spec.seed, f"{spec.command}/points")
    F_basis = part.block_indicators()
    has_subsystem = any(b > 1 for b in blocks)
    for _ in range(spec.samples):
        xt = _draw_admissible(rng, pattern, spec)
        rctx = algebra.RestrictionContext(params.r, params.s, params.q, part, xt, spec.threshold)

        ut, vt = rng.standard_normal(part.n), rng.standard_normal(part.n)
        u, v = F_basis.T @ ut, F_basis.T @ vt
        prod = algebra.restricted_multiply(rctx, u, v)
        dev = 0.0
        for k in range(part.n):
            block = prod[F_basis[k] == 1.0]
            dev = max(dev, float(block.max() - block.min()))
        closure.add(dev / max(1.0, float(np.abs(prod).max())), xt)

        C = algebra.structure_constants(rctx)
        Ft = tensor_generic(rctx.projected_config, xt, spec.threshold)
        expected = np.einsum("ijk,k->ijk", Ft, 1.0 / rctx.m)
        scale = max(1.0, float(np.abs(expected).max()))
        two_path.add(float(np.abs(C - expected).max()) / scale, xt)

        if has_subsystem:
            worst = 0.0
            for alpha in rctx.subsystem_members():
                worst = max(worst, algebra.tangency_residual(rctx, u, v, alpha))
            tangency.add(worst, xt)

        h_b.add(algebra.h_b_decomposition_residual(rctx), xt)
    report.checks.append(closure.result(spec.tolerance))
    report.checks.append(two_path.result(spec.tolerance))
    if has_subsystem:
        report.checks.append(tangency.result(spec.tolerance))
    report.checks.append(h_b.result(spec.tolerance))
    return report


def _run_susy(spec: RunSpec, parsed) -> VerificationReport:
    params = _require_family(parsed, spec.command)
    hat = susy.build_hat_configuration(params)
    pattern = fully_active(hat.config)
    n = params.n
    report = VerificationReport(run=spec)

    anti = _Collector("fermionic_anticommutation")
    fs = susy.build_fermionic_space(n)
    modes = [(a, j) for a in range(2) for j in range(n)]
    eye = np.eye(fs.dim)
    worst = 0.0
    for a, j in modes:
        for b, k in modes:
            worst = max(
                worst,
                float(np.abs(susy.anticommutator(fs.psi[a][j], fs.psi[b][k])).max()),
                float(np.abs(susy.anticommutator(fs.psibar[a][j], fs.psibar[b][k])).max()),
            )
            expected = -0.5 * eye if (a == b and j == k) else 0.0
            dev = susy.anticommutator(fs.psi[a][j], fs.psibar[b][k]) - expected
            worst = max(worst, float(np.abs(dev).max()))
    anti.add(worst)
    report.checks.append(anti.result(spec.tolerance))

    two_path = _Collector("hat_tensor_two_path")
    commuting = _Collector("hat_commuting_residual")
    metric_id = _Collector("hat_metric_identity")
    rng = rng_for(spec.seed, f"{spec.command}/points")
    inv_sqrt = 1.0 / np.sqrt(params.m_array)
    for _ in range(spec.samples):
        xh = _draw_admissible(rng, pattern, spec)
        T = susy.hat_tensor(params, xh, spec.threshold)
        T2 = susy.hat_tensor_from_base(params, xh, spec.threshold)
        scale = max(1.0, float(np.abs(T2).max()))
        two_path.add(float(np.abs(T - T2).max()) / scale, xh)
        worst = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                worst = max(worst, commuting_residual(T, i, j))
        commuting.add(worst, xh)
        x = xh * inv_sqrt
        h = h_function(params, x)
        Bh = susy.hat_metric(params, T, xh)
        metric_id.add(float(np.abs(Bh - h * np.eye(n)).max()) / max(1.0, abs(h)), xh)
    report.checks.append(two_path.result(spec.tolerance))
    report.checks.append(commuting.result(spec.tolerance))
    report.checks.append(metric_id.result(spec.tolerance))

    gauge = _Collector("gauge_residual")
    rng_g = rng_for(spec.seed, f"{spec.command}/gauge")
    for _ in range(spec.samples):
        xh = _draw_admissible(rng_g, pattern, spec)
        fields = {
            "gaussian": susy.gaussian_field(xh + 0.2),
            "sinh_product": susy.sinh_product_field(),
            "polynomial": susy.polynomial_field(),
        }
        for phi in fields.values():
            gauge.add(susy.gauge_residual(hat, xh, phi, spec.step, spec.threshold), xh)
    report.checks.append(gauge.result(spec.tolerance))
    return report


def run(spec: RunSpec) -> VerificationReport:
    """Execute a verification command; deterministic given (seed, spec)."""
    spec.validate()
    parsed = load_config_source(spec.config_source)
    driver = {
        "verify-wdvv": _run_wdvv,
        "verify-associativity": _run_associativity,
        "verify-metric": _run_metric,
        "verify-restriction": _run_restriction,
        "verify-susy": _run_susy,
    }.get(spec.command)
    if driver is None:
        raise PreconditionError(f"{spec.command} is not a verification command")
    return driver(spec, parsed)


def emit_tensor(spec: RunSpec, point) -> dict:
    """Tensor document {"point", "F", "B", "h"} at an explicit point.

    ``h`` is present for family sources and null for explicit configurations.
    """
    parsed = load_config_source(spec.config_source)
    if isinstance(parsed, BCnParameters):
        config = build_bcn(parsed)
        params = parsed
    else:
        config, params = parsed, None
    x = np.asarray(point, dtype=float)
    F = tensor_generic(config, x, spec.threshold)
    B = metric_B(F, x)
    return {
        "point": [float(v) for v in x],
        "F": F.tolist(),
        "B": B.tolist(),
        "h": h_function(params, x) if params is not None else None,
    }


# ---------------------------------------------------------------------------
# argument parsing and entry point


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise PreconditionError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigwdvv",
        description="Construct BC_n-type trigonometric prepotentials and verify their WDVV structure.",
    )
    parser.add_argument("command", choices=COMMANDS)
    src = parser.add_argument_group("configuration source")
    src.add_argument("--config", metavar="PATH", help="JSON configuration document")
    src.add_argument("--family", choices=["bcn"], help="inline family selector")
    src.add_argument("--n", type=int, help="family dimension")
    src.add_argument("--r", type=float, help="short-covector multiplicity parameter")
    src.add_argument("--s", type=float, help="doubled-covector multiplicity parameter")
    src.add_argument("--q", type=float, help="pair-covector multiplicity parameter")
    src.add_argument("--m", metavar="a,b,c", help="comma-separated m values")
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--seed", type=int, default=None, help="defaults to $WDVV_SEED or 0")
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--box", metavar="lo,hi", default=None)
    parser.add_argument("--theta", type=float, default=DEFAULT_THRESHOLD)
    parser.add_argument("--step", type=float, default=1e-3)
    parser.add_argument("--point", metavar="x1,x2,...", help="evaluation point for the tensor command")
    parser.add_argument("--json", action="store_true", help="single JSON document on stdout")
    return parser


def _config_source_from_args(args) -> dict | str:
    if args.config is not None:
        return args.config
    if args.family is not None:
        missing = [k for k in ("n", "r", "s", "q", "m") if getattr(args, k) is None]
        if missing:
            raise PreconditionError(f"--family bcn requires --{', --'.join(missing)}")
        return {
            "family": "bcn",
            "n": args.n,
            "r": args.r,
            "s": args.s,
            "q": args.q,
            "m": list(_parse_floats(args.m)),
        }
    raise PreconditionError("a configuration source is required: --config PATH or --family bcn ...")


def _spec_from_args(args) -> RunSpec:
    seed = args.seed
    if seed is None:
        raw = os.environ.get("WDVV_SEED", "0")
        try:
            seed = int(raw)
        except ValueError as exc:
            raise PreconditionError(f"WDVV_SEED must be an integer, got {raw!r}") from exc
    box = DEFAULT_BOX if args.box is None else _parse_floats(args.box)
    if len(box) != 2:
        raise PreconditionError(f"--box needs exactly two numbers, got {args.box!r}")
    spec = RunSpec(
        command=args.command,
        config_source=_config_source_from_args(args),
        samples=args.samples,
        seed=seed,
        tolerance=args.tol,
        box=(float(box[0]), float(box[1])),
        threshold=args.theta,
        step=args.step,
    )
    spec.validate()
    return spec


def _print_report(report: VerificationReport, as_json: bool) -> None:
    if as_json:
        print(dumps_17g(report.to_json_dict()))
        return
    spec = report.run
    print(f"trigwdvv {report.version} :: {spec.command} (seed={spec.seed}, samples={spec.samples}, tol={spec.tolerance:g})")
    for check in report.checks:
        verdict = "PASS" if check.passed else "FAIL"
        print(
            f"  {check.name:32s} max={check.max_residual:.3e} mean={check.mean_residual:.3e} {verdict}"
        )
    if report.discarded_points:
        print(f"  discarded points (conditioning): {report.discarded_points}")
    print("OK" if report.all_passed else "FAILED")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _spec_from_args(args)
        if args.command == "tensor":
            if args.point is None:
                raise PreconditionError("the tensor command requires --point x1,x2,...")
            doc = emit_tensor(spec, _parse_floats(args.point))
            print(dumps_17g(doc))
            return 0
        if args.command == "build-config":
            parsed = load_config_source(spec.config_source)
            print(dumps_17g(config_document(parsed)))
            return 0
        report = run(spec)
    except TrigWdvvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _print_report(report, args.json)
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
