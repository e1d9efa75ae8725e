"""Command-line experiment runner: every analysis writes CSV/JSON artifacts plus a manifest."""

import argparse
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import structlog

from src.channels.channel import validate_channel
from src.channels.decomposition import decompose_modes
from src.channels.steady import convergence_rate, steady_state
from src.cli.io import (
    ArtifactWriter,
    encode_matrix,
    load_channel,
    load_correlation,
    load_model,
    load_tensor,
)
from src.core.correlation import CorrelationMatrix
from src.core.errors import InvariantViolation, UsageError
from src.core.spectrum import entanglement_spectrum
from src.graph.workflow import TensorAudit
from src.models.pip import PipLattice, check_cut_spectrum, cut_spectrum, pip_ground_state, pip_model
from src.momentum.bands import classify_bands
from src.momentum.channel import build_brickwall
from src.momentum.decay import realspace_decay
from src.momentum.spectrum import bulk_spectrum
from src.momentum.steady import steady_state_k
from src.oracle.circuit import cat_state, isospectral_check, product_state, random_circuit
from src.oracle.fock import gaussian_consistency
from src.topology.chern import chern_number
from src.topology.edge import edge_mode_count
from src.topology.projector import cylinder_projectors, model_projector
from src.topology.quasidiag import quasidiagonality
from src.utils.config import ConfigLoader, Settings

logger = structlog.get_logger()

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2

ORACLE_TOL = 1e-10

# (passed, checks) from every command
Outcome = Tuple[bool, Dict[str, Any]]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gfiso",
        description="Gaussian-fermion channels, isometric tensors and their entanglement spectra.",
    )
    parser.add_argument("--output-dir", dest="output_dir", type=Path)
    parser.add_argument("--config", dest="config_path", type=Path, help="YAML overriding config/settings.yaml")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--n-jobs", dest="n_jobs", type=int)

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("validate-channel", help="CPTP and isometry check of a channel file")
    p.add_argument("file", type=Path)

    p = sub.add_parser("steady-state", help="Mode decomposition, steady state and relaxation rate")
    p.add_argument("file", type=Path)
    p.add_argument("--boundary", type=Path, help="initial correlation matrix (vacuum if omitted)")
    p.add_argument("--t-max", dest="t_max", type=int)

    p = sub.add_parser("brickwall-spectrum", help="Bulk entanglement spectrum of a brick-wall circuit")
    p.add_argument("file", type=Path)
    p.add_argument("--grid", type=int)

    p = sub.add_parser("decay", help="Real-space correlation decay against 1/ln(1/r)")
    p.add_argument("file", type=Path)
    p.add_argument("--grid", type=int)

    p = sub.add_parser("tensor-audit", help="Validate, classify and certify an isometric tensor")
    p.add_argument("file", type=Path)
    p.add_argument("--grid", type=int)

    p = sub.add_parser("pip-spectrum", help="k-resolved entanglement spectrum of the p+ip superconductor")
    p.add_argument("--lx", type=int)
    p.add_argument("--ly", type=int)
    p.add_argument("--ycut", type=int)
    p.add_argument("--mu", type=float)

    p = sub.add_parser("chern", help="Chern number against the edge-mode count")
    p.add_argument("--model", required=True, help="'pip' or a model JSON file")
    p.add_argument("--mu", type=float)
    p.add_argument("--nq", type=int)
    p.add_argument("--ly", type=int)
    p.add_argument("--nqx", type=int)

    p = sub.add_parser("oracle-check", help="Dense isospectral and Gaussian-consistency checks")
    p.add_argument("--circuits", type=int)

    return parser


def _pick(value: Any, config: ConfigLoader, key: str) -> Any:
    return value if value is not None else config.get(key)


def _validate_channel(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    channel, _ = load_channel(args.file)
    report = validate_channel(channel.A, channel.B)
    out.write_json("channel_report.json", report.model_dump(mode="json"))
    print(f"isometric: {str(report.isometric).lower()}")
    return report.passed, {"isometric": report.isometric, "cptp_excess": report.cptp_excess}


def _steady_state(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    channel, _ = load_channel(args.file)
    if not channel.is_square:
        raise UsageError(f"steady states need a square channel, got {channel.out_modes}x{channel.in_modes}")
    if args.boundary is not None:
        gamma0 = load_correlation(args.boundary)
    elif channel.in_modes % 2:
        raise UsageError(f"an odd channel ({channel.in_modes} Majoranas) needs an explicit --boundary")
    else:
        gamma0 = CorrelationMatrix.vacuum(channel.in_modes)
    if gamma0.n_modes != channel.in_modes:
        raise UsageError(f"boundary has {gamma0.n_modes} modes, channel expects {channel.in_modes}")

    dec = decompose_modes(channel)
    steady = steady_state(channel, dec, gamma0)
    t_max = int(_pick(args.t_max, config, "channels.steady.t_max"))
    rate = convergence_rate(channel, gamma0, t_max, dec=dec)

    spectrum = entanglement_spectrum(steady)
    out.write_json("steady_state.json", {
        "gamma": encode_matrix(steady.data),
        "preserved_count": dec.preserved_count,
        "odd_preserved": dec.odd_preserved,
        "spectral_radius": dec.r,
        "lemma_residual": dec.lemma_residual,
    })
    out.write_json("convergence.json", rate.model_dump(mode="json"))
    out.write_csv("steady_spectrum.csv", [
        {"index": i, "lambda": float(lam), "epsilon": float(eps)}
        for i, (lam, eps) in enumerate(zip(spectrum.lambdas, spectrum.energies))
    ])
    return rate.passed, {
        "preserved_count": dec.preserved_count,
        "spectral_radius": dec.r,
        "slope": rate.slope,
        "bound": rate.bound,
    }


def _brickwall_steady(args, config: ConfigLoader, grid_key: str):
    two_site, declared = load_channel(args.file)
    grid = int(_pick(args.grid, config, grid_key))
    if grid < 4 or grid % 2:
        raise UsageError(f"--grid must be an even number ≥ 4, got {grid}")
    mc = build_brickwall(two_site, grid)
    bands = classify_bands(mc, n_jobs=args.n_jobs)
    steady = steady_state_k(mc, bands=bands, n_jobs=args.n_jobs)
    return bands, steady, declared


def _brickwall_spectrum(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    bands, steady, _ = _brickwall_steady(args, config, "momentum.spectrum_grid")
    spectrum, continuity = bulk_spectrum(
        steady,
        overlap_threshold=config.get("momentum.overlap_threshold"),
        jump_factor=config.get("momentum.jump_factor"),
        isolation_ratio=config.get("momentum.isolation_ratio"),
    )
    out.write_csv("bulk_spectrum.csv", spectrum.to_rows())
    out.write_json("continuity.json", continuity.model_dump(mode="json"))
    return continuity.certified, {
        "generic_preserved_dimension": bands.generic_dimension,
        "exceptions": bands.exceptions,
        "spectral_radius": bands.r,
        "certified": continuity.certified,
    }


def _decay(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    bands, steady, declared = _brickwall_steady(args, config, "momentum.decay_grid")
    r = bands.r if declared is None else declared
    if declared is not None:
        logger.info("Using declared spectral radius", declared=declared, measured=bands.r)
    report = realspace_decay(
        steady,
        r=r,
        fit_tol=config.get("momentum.decay.fit_tol"),
        floor=config.get("momentum.decay.floor"),
    )
    out.write_csv("decay.csv", report.to_rows())
    out.write_json("decay_report.json", report.model_dump(mode="json"))
    return report.passed, {"xi": report.xi, "bound": report.bound, "spectral_radius": r}


def _tensor_audit(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    tensor = load_tensor(args.file)
    grid = int(_pick(args.grid, config, "momentum.spectrum_grid"))
    state = TensorAudit(grid=grid, n_jobs=args.n_jobs).invoke(tensor)
    report = state["report"]
    out.write_json("audit_report.json", report)
    spectrum = state.get("spectrum")
    if spectrum is not None and report.get("kind") == "lightlike":
        out.write_csv("bulk_spectrum.csv", spectrum.to_rows())
    return bool(report["passed"]), {
        "kind": report.get("kind"),
        "spectral_radius": report.get("spectral_radius"),
        "correlation_length_bound": report.get("correlation_length_bound"),
    }


def _pip_spectrum(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    lattice = PipLattice(
        lx=int(_pick(args.lx, config, "models.pip.lx")),
        ly=int(_pick(args.ly, config, "models.pip.ly")),
        mu=float(_pick(args.mu, config, "models.pip.mu")),
    )
    y_cut = int(_pick(args.ycut, config, "models.pip.y_cut"))
    try:
        state = pip_ground_state(lattice, n_jobs=args.n_jobs)
        spectrum = cut_spectrum(state, lattice.ly, y_cut)
    except ValueError as e:
        raise UsageError(str(e)) from e
    report = check_cut_spectrum(spectrum, y_cut, crossing_tol=config.get("models.pip.crossing_tol"))
    out.write_csv("pip_spectrum.csv", spectrum.to_rows())
    out.write_json("pip_report.json", report.model_dump(mode="json"))
    return report.passed, {
        "unique_ground_state": state.unique,
        "branches": report.branches,
        "antisymmetry_defect": report.antisymmetry_defect,
        "crossing_k": report.crossing_k,
        "crossing_abs_epsilon": report.crossing_abs_epsilon,
    }


def _chern(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    if args.model == "pip":
        model = pip_model(mu=float(_pick(args.mu, config, "models.pip.mu")))
    else:
        model = load_model(Path(args.model))
    nq = int(_pick(args.nq, config, "topology.chern_grid"))
    ly = int(_pick(args.ly, config, "topology.cylinder_rows"))
    nqx = int(_pick(args.nqx, config, "topology.cylinder_grid"))
    gap_tol = config.get("topology.gap_tol")

    nu = chern_number(model_projector(model, nq, gap_tol=gap_tol, n_jobs=args.n_jobs), gap_tol=gap_tol)
    cylinder = cylinder_projectors(model, ly, nqx, n_jobs=args.n_jobs)
    edge = edge_mode_count(
        cylinder,
        jump_threshold=config.get("topology.jump_threshold"),
        ambiguity_tol=config.get("topology.ambiguity_tol"),
    )
    local = quasidiagonality(cylinder, alpha=config.get("topology.quasidiagonal_alpha"))

    out.write_csv("trace_curve.csv", edge.to_rows())
    out.write_json("topology_report.json", {
        "nu": nu,
        "nu_edge": edge.nu_edge,
        "edge": edge.model_dump(mode="json", exclude={"qx", "trace"}),
        "quasidiagonality": local.model_dump(mode="json"),
    })
    passed = nu == edge.nu_edge and edge.passed and local.passed
    if not passed:
        logger.warning("Topology check failed", nu=nu, nu_edge=edge.nu_edge, ambiguous=edge.ambiguous)
    return passed, {"nu": nu, "nu_edge": edge.nu_edge, "quasidiagonal": local.passed}


def _oracle_check(args, config: ConfigLoader, out: ArtifactWriter) -> Outcome:
    rng = np.random.default_rng(args.seed)
    sites = int(config.get("oracle.sites"))
    d = int(config.get("oracle.qudit_dim"))
    steps = int(config.get("oracle.steps"))
    count = int(_pick(args.circuits, config, "oracle.circuits"))

    # every circuit sees a random product input and the entangled cat input
    cat = cat_state(sites, d)
    rows: List[Dict[str, Any]] = []
    for i in range(count):
        circuit = random_circuit(rng, sites, d, steps)
        inputs = {"product": product_state(rng, sites, d), "cat": cat}
        t0 = int(rng.integers(0, steps + 1))
        for name, state in inputs.items():
            report = isospectral_check(circuit, state, t0)
            rows.append({"circuit": i, "input": name, "t0": t0, "mismatch": report.mismatch,
                         "complement_mismatch": report.complement_mismatch})
    gaussian = gaussian_consistency(rng, system_fermions=2, env_fermions=1)

    out.write_csv("isospectral.csv", rows)
    worst = max((max(r["mismatch"], r["complement_mismatch"]) for r in rows), default=0.0)
    out.write_json("oracle_report.json", {"isospectral_worst": worst, "gaussian_mismatch": gaussian})
    return worst <= ORACLE_TOL and gaussian <= ORACLE_TOL, {
        "isospectral_worst": worst,
        "gaussian_mismatch": gaussian,
    }


COMMANDS: Dict[str, Callable[[argparse.Namespace, ConfigLoader, ArtifactWriter], Outcome]] = {
    "validate-channel": _validate_channel,
    "steady-state": _steady_state,
    "brickwall-spectrum": _brickwall_spectrum,
    "decay": _decay,
    "tensor-audit": _tensor_audit,
    "pip-spectrum": _pip_spectrum,
    "chern": _chern,
    "oracle-check": _oracle_check,
}


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 when every check passed, 2 on an invariant violation or a failed
        check, 1 on a usage error or missing input file.
    """
    try:
        args = _build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")

        settings = Settings()
        config = ConfigLoader(user_path=str(args.config_path) if args.config_path else None)
        config.load()
        args.seed = settings.seed if args.seed is None else args.seed
        args.n_jobs = settings.n_jobs if args.n_jobs is None else args.n_jobs
        logging.getLogger().setLevel((args.log_level or settings.log_level).upper())

        output_dir = args.output_dir or Path(settings.output_dir)
        out = ArtifactWriter(output_dir)
        logger.info("Command started", command=args.command, output_dir=str(output_dir), seed=args.seed)

        passed, checks = COMMANDS[args.command](args, config, out)
        out.write_manifest(args.command, passed, checks)
    except UsageError as e:
        logger.error("Usage error", error=str(e))
        print(f"error: {e}")
        return EXIT_USAGE
    except (FileNotFoundError, OSError, ValueError) as e:
        logger.error("Invalid input", error=str(e))
        print(f"error: {e}")
        return EXIT_USAGE
    except InvariantViolation as e:
        logger.error("Invariant violated", invariant=e.invariant, magnitude=e.magnitude, error=str(e))
        print(f"invariant violated: {e.invariant} (residual {e.magnitude:.3e})")
        return EXIT_VIOLATION

    logger.info("Command finished", command=args.command, passed=passed)
    return EXIT_PASS if passed else EXIT_VIOLATION
