"""Experiment harness: one entry point, eight subcommands, JSON reports.

Every run echoes its configuration (with per-key provenance: flag, config
file, or default), emits one (name, value, bound, passed) row per check,
and exits 0 only when every check passed.  Reports are bit-identical across
runs with the same configuration and seed, except for the wall-clock entry
kept in a separate "meta" section.

Config files use one key=value pair per line ('#' starts a comment); flags
override file values; unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import __version__
from .core import LatticePoint, is_prime
from .growth import GrowthFunction, parse_growth, validate_growth
from .parallel import Parallelism, default_threads

_USAGE_EXIT = 2


class ConfigError(Exception):
    """Bad flag/file input; maps to exit status 2."""


def _prime_type(text: str) -> int:
    value = int(text)
    if not is_prime(value):
        raise argparse.ArgumentTypeError(f"{value} is not prime")
    return value


def _growth_type(text: str) -> GrowthFunction:
    try:
        w = parse_growth(text)
        validate_growth(w)
        return w
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


@dataclass(frozen=True)
class Opt:
    name: str
    type: Callable
    default: object
    help: str


_COMMON = [
    Opt("seed", int, 0, "master RNG seed (echoed in the report)"),
    Opt("threads", int, 0, "worker threads; 0 means SIDONLAB_THREADS or 1"),
    Opt("out", str, "", "path for the JSON report (default: stdout)"),
]

_SUBCOMMANDS: dict[str, list[Opt]] = {
    "verify-qi": [
        Opt("input", str, "", "JSON file with the points to test"),
        Opt("n-max", int, 24, "cap on the number of elements"),
    ],
    "theorem1": [
        Opt("nu-max", int, 7, "build blocks 1..nu_max"),
        Opt("export-dir", str, "", "write matrix CSVs and the construction JSON here"),
    ],
    "mesh-report": [
        Opt("input", str, "", "JSON file with lambda, meshes and the bound"),
        Opt("csv", str, "", "optional CSV summary path"),
        Opt("cap", int, 10**7, "enumeration cap"),
    ],
    "select": [
        Opt("p", _prime_type, 2, "prime modulus"),
        Opt("nu", int, 16, "dimension"),
        Opt("ell", int, 4, "density parameter"),
        Opt("trials", int, 1000, "Monte Carlo trials"),
        Opt("max-retries", int, 10**4, "certified search retry budget"),
    ],
    "theorem2": [
        Opt("p", _prime_type, 3, "prime modulus"),
        Opt("blocks", int, 6, "last block index L (blocks 2..L)"),
        Opt("nu-cap", int, 24, "desk cap on block sizes"),
        Opt("w", _growth_type, parse_growth("doublelog:1"), "growth function"),
        Opt("mesh-count", int, 500, "sampled meshes"),
        Opt("k-max", int, 6, "max mesh rank"),
        Opt("h-max", int, 2, "max mesh height"),
        Opt("export", str, "", "write the construction JSON here"),
    ],
    "theorem3": [
        Opt("blocks", int, 4, "number of blocks J"),
        Opt("w", _growth_type, parse_growth("doublelog:2500"), "growth function"),
        Opt("mesh-count", int, 500, "sampled meshes"),
        Opt("k-max", int, 5, "max mesh rank"),
        Opt("h-max", int, 3, "max mesh height"),
        Opt("export", str, "", "write the construction JSON here"),
    ],
    "analyticity-demo": [
        Opt("nu", int, 22, "dimension of (Z/2Z)^nu"),
        Opt("ell", int, 40000, "density parameter (> 400)"),
        Opt("rho", int, -1, "number of characters; -1 means the default rule"),
        Opt("max-retries", int, 20, "flat-sample retry budget"),
        Opt("csv", str, "", "optional CSV of top spectrum magnitudes"),
        Opt("top", int, 32, "rows in the spectrum CSV"),
    ],
    "appendix-check": [
        Opt("alpha-points", int, 99, "alpha grid size"),
        Opt("u-points", int, 1001, "u samples per alpha"),
        Opt("trials", int, 10**4, "Monte Carlo trials beyond the exact range"),
    ],
}


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    params: dict
    seed: int
    threads: int
    out: str
    provenance: dict


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    bound: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "passed": bool(self.passed),
        }


@dataclass(frozen=True)
class Report:
    config: ExperimentConfig
    checks: tuple[Check, ...]
    artifacts: dict
    runtime_seconds: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        params = {
            k: (v.describe() if isinstance(v, GrowthFunction) else v)
            for k, v in self.config.params.items()
        }
        return {
            "version": __version__,
            "subcommand": self.config.subcommand,
            "seed": self.config.seed,
            "config": params,
            "provenance": self.config.provenance,
            "checks": [c.to_dict() for c in self.checks],
            "all_passed": self.all_passed,
            "artifacts": self.artifacts,
            "meta": {"runtime_seconds": self.runtime_seconds},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _read_config_file(path: str, allowed: dict[str, Opt]) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, text = line.partition("=")
            key = key.strip().replace("_", "-")
            if key not in allowed:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = allowed[key].type(text.strip())
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return values


def parse_config(argv: Sequence[str]) -> ExperimentConfig:
    """Parse flags (and an optional config file); flags win, unknown keys
    are rejected, and every resolved key records its provenance."""
    parser = argparse.ArgumentParser(
        prog="sidonlab",
        description="reproduction harness for the mesh / selection experiments",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, opts in _SUBCOMMANDS.items():
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", type=str, default=None, help="key=value file")
        for opt in opts + _COMMON:
            sub.add_argument(f"--{opt.name}", type=opt.type, default=None, help=opt.help)
    ns = parser.parse_args(list(argv))

    opts = {o.name: o for o in _SUBCOMMANDS[ns.subcommand] + _COMMON}
    file_values = {}
    if ns.config:
        file_values = _read_config_file(ns.config, opts)

    params: dict = {}
    provenance: dict = {}
    for name, opt in opts.items():
        flag_value = getattr(ns, name.replace("-", "_"))
        if flag_value is not None:
            params[name], provenance[name] = flag_value, "flag"
        elif name in file_values:
            params[name], provenance[name] = file_values[name], "file"
        else:
            params[name], provenance[name] = opt.default, "default"

    seed = params.pop("seed")
    threads = params.pop("threads") or default_threads()
    out = params.pop("out")
    return ExperimentConfig(
        subcommand=ns.subcommand,
        params=params,
        seed=seed,
        threads=threads,
        out=out,
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def _points_from_json(data) -> list[LatticePoint]:
    points = data["points"] if isinstance(data, dict) else data
    out = []
    for item in points:
        if isinstance(item, (int, str)):
            out.append(LatticePoint.from_int(int(item)))
        else:
            out.append(LatticePoint(tuple(int(c) for c in item)))
    return out


def _run_verify_qi(params, seed, pool):
    from .verify import verify_qi_exhaustive

    if not params["input"]:
        raise ConfigError("verify-qi requires --input")
    with open(params["input"]) as fh:
        points = _points_from_json(json.load(fh))
    qi, witness = verify_qi_exhaustive(points, n_max=params["n-max"])
    checks = [Check("quasi-independent", float(qi), 1.0, qi)]
    artifacts = {
        "n": len(points),
        "witness": list(witness.eps.signs) if witness else None,
    }
    return checks, artifacts


def _run_theorem1(params, seed, pool):
    from .construction import build_matrix, embed_theorem1, n_nu, theorem1_witness, witness_counts
    from .verify import verify_qi_exhaustive, verify_qi_structural

    nu_max = params["nu-max"]
    checks = []
    table = {}
    for nu in range(1, nu_max + 1):
        m = build_matrix(nu)
        table[nu] = m.cols
        ok = m.entries.shape == (2**nu, n_nu(nu)) and verify_qi_structural(m)
        checks.append(Check(f"matrix-shape-and-structure nu={nu}", float(ok), 1.0, ok))
    for nu in range(1, min(3, nu_max) + 1):
        qi, _ = verify_qi_exhaustive(build_matrix(nu).columns_as_points())
        checks.append(Check(f"columns-exhaustively-qi nu={nu}", float(qi), 1.0, qi))

    construction = embed_theorem1(nu_max)
    ks = range(2, 2 ** (nu_max + 1))
    counts = witness_counts(construction, ks)
    worst = math.inf
    for k in ks:
        mesh, claimed = theorem1_witness(k, construction)
        if counts[k] != claimed:
            worst = -math.inf
            break
        worst = min(worst, counts[k] - 0.25 * k * math.log2(k))
    checks.append(Check("witness-count-margin all k", worst, 0.0, worst >= 0))
    worst_pow2 = min(
        counts[2**nu] - 0.5 * (2**nu) * nu for nu in range(1, nu_max + 1) if 2**nu >= 2
    )
    checks.append(Check("power-of-two-half-bound", worst_pow2, 0.0, worst_pow2 >= 0))

    if params["export-dir"]:
        import os

        os.makedirs(params["export-dir"], exist_ok=True)
        for nu in range(1, nu_max + 1):
            build_matrix(nu).to_csv(os.path.join(params["export-dir"], f"matrix_{nu}.csv"))
        construction.to_json(os.path.join(params["export-dir"], "construction.json"))
    return checks, {"column_counts": table, "lambda_size": len(construction.lambda_points)}


def _bound_from_json(data) -> "BoundSpec":
    from .mesh import BoundSpec

    kind = data["kind"]
    w = parse_growth(data["w"]) if "w" in data else None
    return BoundSpec(kind=kind, w=w, C=data.get("C"))


def _run_mesh_report(params, seed, pool):
    from .mesh import Box, ExplicitList, Mesh, check_mesh_condition

    if not params["input"]:
        raise ConfigError("mesh-report requires --input")
    with open(params["input"]) as fh:
        data = json.load(fh)
    lam = _points_from_json(data["lambda"])
    meshes = []
    for spec in data["meshes"]:
        basis = tuple(_points_from_json(spec["basis"]))
        if "height" in spec:
            domain = Box(int(spec["height"]))
        else:
            domain = ExplicitList(tuple(tuple(row) for row in spec["coeffs"]))
        meshes.append(Mesh(basis, domain))
    bound = _bound_from_json(data["bound"])
    reports = check_mesh_condition(lam, meshes, bound, cap=params["cap"], parallelism=pool)
    checks = [
        Check(f"mesh[{i}] k={r.k}", float(r.count), r.bound, r.passed)
        for i, r in enumerate(reports)
    ]
    if params["csv"]:
        import csv as _csv

        with open(params["csv"], "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["k", "height", "domain_size", "count", "bound", "passed"])
            for r in reports:
                writer.writerow([r.k, r.height, r.domain_size, r.count, r.bound, r.passed])
    return checks, {"reports": [r.to_dict() for r in reports]}


def _run_select(params, seed, pool):
    from .selection import (
        SelectionConfig,
        SelectionError,
        estimate_tied_probability,
        lemma_search,
        sample_lambda,
    )

    from .selection import SAMPLING_CAP_DEFAULT

    cfg = SelectionConfig(
        p=params["p"], nu=params["nu"], ell=params["ell"], seed=seed,
        trials=params["trials"],
    )
    checks = []
    artifacts: dict = {}

    # The Monte-Carlo statistics sample every point of the space, so they
    # only run below the pointwise cap; the certified search still works
    # beyond it (direct mode).
    pointwise = cfg.space_size <= SAMPLING_CAP_DEFAULT
    if pointwise:
        sizes = list(pool.map(lambda t: len(sample_lambda(cfg, t)), range(cfg.trials)))
        mean = sum(sizes) / len(sizes)
        expected = cfg.space_size * cfg.alpha
        se = math.sqrt(expected * (1 - cfg.alpha)) / math.sqrt(cfg.trials)
        checks.append(
            Check("mean-size-within-5-se", abs(mean - expected), 5 * se,
                  abs(mean - expected) <= 5 * se)
        )

        lo, hi = cfg.ell * cfg.nu, 3 * cfg.ell * cfg.nu
        freq = sum(1 for s in sizes if lo <= s <= hi) / len(sizes)
        q = 1 - 2 * math.exp(-cfg.ell * cfg.nu / 16)
        slack = 3 * math.sqrt(q * (1 - q) / cfg.trials)
        checks.append(Check("size-window-frequency", freq, q - slack, freq >= q - slack))

        try:
            estimate, bound = estimate_tied_probability(cfg)
            checks.append(Check("tied-probability", estimate, bound, True))
        except SelectionError:
            checks.append(Check("tied-probability", 1.0, cfg.p ** (-cfg.nu / 2), False))
        artifacts["mean_size"] = mean
        artifacts["window_frequency"] = freq
    else:
        artifacts["statistics"] = "skipped: p^nu exceeds the pointwise sampling cap"

    try:
        cert = lemma_search(cfg, max_retries=params["max-retries"])
        ok = cert.verify()
        checks.append(Check("certificate-reverify", float(ok), 1.0, ok))
        artifacts["certificate"] = {
            "size": len(cert.Lambda),
            "checked_subset_size": cert.checked_subset_size,
            "mode": cert.mode,
            "trial_found": cert.trial_found,
            "K": cert.K,
        }
    except Exception as exc:  # search failure is reported, not fatal
        checks.append(Check("certificate-reverify", 0.0, 1.0, False))
        artifacts["search_error"] = str(exc)
    return checks, artifacts


def _run_theorem2(params, seed, pool):
    from .blocks import build_theorem2_prefix, pisier_ratio, theorem2_mesh_reports

    w = params["w"]
    bc = build_theorem2_prefix(
        p=params["p"], w=w, L=params["blocks"], seed=seed, nu_cap=params["nu-cap"]
    )
    checks = []
    for b in bc.blocks:
        ratio = float(pisier_ratio(bc, b.ell))
        checks.append(Check(f"pisier-ratio ell={b.ell}", ratio, float(b.ell), ratio >= b.ell))
        ok = b.certificate.verify()
        checks.append(Check(f"certificate-reverify ell={b.ell}", float(ok), 1.0, ok))
    reports = theorem2_mesh_reports(
        bc,
        w,
        count=params["mesh-count"],
        seed=seed,
        k_choices=tuple(range(1, params["k-max"] + 1)),
        heights=tuple(range(1, params["h-max"] + 1)),
        parallelism=pool,
    )
    violations = sum(0 if r.passed else 1 for r in reports)
    checks.append(Check("mesh-bound-violations", float(violations), 0.0, violations == 0))
    if params["export"]:
        bc.to_json(params["export"])
    artifacts = {
        "blocks": [
            {"ell": b.ell, "nu": b.nu, "size": b.size, "cap_bound": b.cap_bound}
            for b in bc.blocks
        ],
        "meshes_checked": len(reports),
    }
    return checks, artifacts


def _run_theorem3(params, seed, pool):
    from .spread import (
        build_theorem3_prefix,
        pick_independent_subset,
        theorem3_mesh_reports,
        v_p_size,
        well_spread_check,
    )

    w = params["w"]
    system = build_theorem3_prefix(w=w, J=params["blocks"], seed=seed)
    checks = []
    for b in system.blocks:
        checks.append(
            Check(f"4*ell<p j={b.j}", float(4 * b.ell), float(b.p), 4 * b.ell < b.p)
        )
    ok = system.structurally_well_spread()
    checks.append(Check("beta-growth-distinctness", float(ok), 1.0, ok))
    enum_cap = 3 * 10**5
    for b in system.blocks:
        basis = system.block_basis(b.j)
        # deepest prefix enumerable at the block's own prime; blocks whose
        # prime already exceeds the cap are enumerated at q = 37 instead
        depth = 0
        while b.p ** (depth + 1) <= enum_cap and depth < len(basis):
            depth += 1
        if depth >= 1:
            ok = well_spread_check(basis[:depth], b.p, cap=enum_cap)
            checks.append(
                Check(f"well-spread-prefix j={b.j} q=p_j depth={depth}", float(ok), 1.0, ok)
            )
        ok = well_spread_check(basis[:3], 37, cap=enum_cap)
        checks.append(Check(f"well-spread-prefix j={b.j} q=37 depth=3", float(ok), 1.0, ok))
    for b in system.blocks:
        for p_small in (3, 5):
            for size in (2, 4):
                subset = pick_independent_subset(b, size)
                got = v_p_size(subset, p_small)
                want = p_small**size
                checks.append(
                    Check(f"spread-identity j={b.j} p={p_small} size={size}",
                          float(got), float(want), got == want)
                )
    reports = theorem3_mesh_reports(
        system,
        w,
        count=params["mesh-count"],
        seed=seed,
        k_choices=tuple(range(1, params["k-max"] + 1)),
        heights=tuple(range(1, params["h-max"] + 1)),
        parallelism=pool,
    )
    violations = sum(0 if r.passed else 1 for r in reports)
    checks.append(Check("mesh-bound-violations", float(violations), 0.0, violations == 0))
    if params["export"]:
        system.to_json(params["export"])
    artifacts = {
        "schedule": {
            "ell": list(system.schedule.ells),
            "nu": list(system.schedule.nus),
            "p": list(system.schedule.ps),
        },
        "conditions_checked": len(system.conditions),
        "meshes_checked": len(reports),
    }
    return checks, artifacts


def _run_analyticity(params, seed, pool):
    import numpy as np

    from .spectral import analyticity_witness, sample_flat_lambda

    nu, ell = params["nu"], params["ell"]
    sample = sample_flat_lambda(nu, ell, seed=seed, max_retries=params["max-retries"])
    rho = None if params["rho"] < 0 else params["rho"]
    report = analyticity_witness(sample, rho=rho)

    checks = [
        Check("flat-sample-retries", float(sample.retries_used),
              float(params["max-retries"]), sample.retries_used <= params["max-retries"]),
        Check("spectrum-flatness", sample.sup_offpeak, sample.flatness_threshold,
              sample.sup_offpeak <= sample.flatness_threshold),
        Check("lower-bound-vs-target", report.lower_bound, report.target,
              report.lower_bound >= report.target),
        Check("lower-bound-vs-chain", report.lower_bound, report.chain_bound - 1e-9,
              report.lower_bound >= report.chain_bound - 1e-9),
    ]
    if params["csv"]:
        import csv as _csv

        mags = np.abs(sample.spectrum.values)
        top = np.argsort(mags)[::-1][: params["top"]]
        with open(params["csv"], "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["mask", "magnitude"])
            for y in top:
                writer.writerow([int(y), float(mags[y])])
    artifacts = {"witness": report.to_dict()}
    return checks, artifacts


def _run_appendix(params, seed, pool):
    import numpy as np

    from .tails import (
        binomial_subgaussian_spec,
        binomial_tail_exact,
        check_mgf_inequality,
        concavity_margin,
        difference_tail_check,
        subgaussian_tail_bound,
    )

    alpha_grid = np.linspace(0.01, 0.99, params["alpha-points"])
    checks = []
    violation = check_mgf_inequality(alpha_grid, params["u-points"])
    checks.append(Check("mgf-inequality-max-violation", violation, 1e-12, violation <= 1e-12))
    concavity = concavity_margin(alpha_grid, params["u-points"])
    checks.append(Check("concavity-quadratic-max", concavity, 1e-12, concavity <= 1e-12))

    tail = binomial_tail_exact(1024, 0.25, 128)
    bound = 2 * math.exp(-1024 * 0.25 / 32)
    checks.append(Check("half-mean-deviation N=1024", tail, bound, tail <= bound))

    for N in (10, 50, 200, 1024):
        for alpha in (0.1, 0.25, 0.3, 0.5):
            spec = binomial_subgaussian_spec(N, alpha)
            for lam in (0.5, 1.0, 2.0, 4.0):
                one, two, ok = subgaussian_tail_bound(lam, spec)
                if not ok:
                    continue
                t = 2 * lam * math.sqrt(N * alpha * (1 - alpha))
                tail = binomial_tail_exact(N, alpha, t)
                checks.append(
                    Check(f"binomial-tail N={N} a={alpha} lam={lam}", tail, two, tail <= two)
                )
    for N in (100, 400, 2000):
        for alpha in (0.1, 0.3, 0.5):
            window = (
                math.inf
                if alpha == 0.5
                else math.sqrt(N * alpha * (1 - alpha) / abs(1 - 2 * alpha))
            )
            for lam in (0.5, 1.0, 2.0):
                if lam >= window:
                    continue
                r = difference_tail_check(N, alpha, lam, trials=params["trials"], seed=seed)
                checks.append(
                    Check(f"difference-tail N={N} a={alpha} lam={lam}", r.tail, r.bound, r.passed)
                )
    return checks, {"grid": {"alpha_points": params["alpha-points"], "u_points": params["u-points"]}}


_HANDLERS = {
    "verify-qi": _run_verify_qi,
    "theorem1": _run_theorem1,
    "mesh-report": _run_mesh_report,
    "select": _run_select,
    "theorem2": _run_theorem2,
    "theorem3": _run_theorem3,
    "analyticity-demo": _run_analyticity,
    "appendix-check": _run_appendix,
}


def run(config: ExperimentConfig) -> Report:
    """Dispatch to the owning module and assemble the report."""
    pool = Parallelism(config.threads)
    t0 = time.perf_counter()
    checks, artifacts = _HANDLERS[config.subcommand](config.params, config.seed, pool)
    return Report(
        config=config,
        checks=tuple(checks),
        artifacts=artifacts,
        runtime_seconds=time.perf_counter() - t0,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"sidonlab: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    try:
        report = run(config)
    except (ConfigError, ValueError, MemoryError, OverflowError, OSError) as exc:
        # bad parameters, violated caps, unreadable inputs: usage-level errors
        print(f"sidonlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    text = report.to_json()
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
