"""
Main application entry point for the N-Poincare-Weyl toolkit.
Handles CLI interface, signal handling, and dispatches the subcommands.

Exit codes: 0 success, 1 a verification failed, 2 invalid input or I/O error.
"""

import sys
import logging
import signal

import numpy as np
from pydantic import ValidationError

from src.algebra import build_2n_generators, build_n2_generators
from src.basis import anti_rep, build_utility_basis
from src.config import RunConfig, build_run_config, get_log_level, parse_arguments
from src.errors import DimensionError, NPWError
from src.file_manager import ArtifactManager
from src.geometry import Event, TransformParams, build_transform, interval, transform_event
from src.momentum import (build_combined, parse_rep_spec, solve_momentum, verify_momentum_solution)
from src.structure import compute_structure_constants
from src.verifier import VerificationSuite


# Configure logging
logging.basicConfig(level=get_log_level(), format='%(asctime)s - %(levelname)s - %(message)s')

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID_INPUT = 2

# Global flag for graceful shutdown
shutdown_requested = False
active_suite = None


def signal_handler(signum, frame):
    """Handle CTRL+C and other termination signals gracefully."""
    global shutdown_requested
    shutdown_requested = True
    logging.info("\n🛑 Shutdown requested. Waiting for running checks to complete...")
    if active_suite is not None:
        active_suite.set_shutdown_flag(True)


def setup_signal_handlers():
    """Register signal handlers for graceful shutdown."""
    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)


def cmd_generate(config: RunConfig) -> int:
    """Write basis, anti-basis, structure constants and both generator sets."""
    logging.info(f"🚀 Generating N={config.n} algebra (eps_p={config.eps_p:+d})")
    basis = build_utility_basis(config.n)
    sc = compute_structure_constants(basis)
    g2n = build_2n_generators(basis, config.eps_p)
    gn2 = build_n2_generators(sc, config.eps_p)

    manager = ArtifactManager()
    doc = manager.generate_document(basis, anti_rep(basis), sc, g2n, gn2)
    manager.save_document(doc, config.output_path)
    print(f"🎉 Wrote {basis.dim} basis matrices and structure constants to {config.output_path}")
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    """Run every identity family and write the report."""
    global active_suite
    logging.info(f"🚀 Verifying N={config.n} (eps_p={config.eps_p:+d}, tol={config.tolerance:g}, "
                 f"seed={config.seed}, trials={config.trials})")
    suite = VerificationSuite(config.n, config.eps_p, config.tolerance, config.seed, config.trials,
                              inject_fault=config.inject_fault)
    active_suite = suite
    try:
        report = suite.run(max_workers=config.max_workers)
    finally:
        active_suite = None

    manager = ArtifactManager()
    doc = manager.report_document(report, config.n, config.eps_p, config.tolerance, config.seed, config.trials)
    manager.save_document(doc, config.output_path)

    groups = {}
    for record in report.records:
        groups.setdefault(record.identity.split(".")[0], []).append(record)
    for group, records in groups.items():
        worst = max(record.residual for record in records)
        mark = "✅" if all(record.passed for record in records) else "❌"
        print(f"{mark} {group}: {len(records)} identities, max residual {worst:.3e}")

    failures = report.failures()
    logging.info(f"📊 {len(report.records)} identities checked, {len(failures)} failed, "
                 f"max residual {report.max_residual:.3e}")
    for record in failures:
        logging.warning(f"⚠️  {record.identity}: residual {record.residual:.3e} > {record.tolerance:.1e}")

    if shutdown_requested:
        print("⏸️  Verification interrupted; the report is incomplete.")
        return EXIT_VERIFICATION_FAILED
    if failures:
        print(f"❌ {len(failures)} identities failed. Report saved to {config.output_path}")
        return EXIT_VERIFICATION_FAILED
    print(f"🎉 All {len(report.records)} identities hold. Report saved to {config.output_path}")
    return EXIT_OK


def cmd_transform(config: RunConfig, theta, phi, x) -> int:
    """Apply D = exp(i phi.k) exp(i theta.j) to one event."""
    dim = config.n * config.n
    theta = np.zeros(dim) if theta is None else np.asarray(theta)
    phi = np.zeros(dim) if phi is None else np.asarray(phi)
    for name, values in (("theta", theta), ("phi", phi), ("x", x)):
        if len(values) != dim:
            raise DimensionError(f"--{name} needs {dim} values for N={config.n}, got {len(values)}")

    sc = compute_structure_constants(build_utility_basis(config.n))
    gn2 = build_n2_generators(sc, config.eps_p)
    d = build_transform(gn2, TransformParams(theta=theta, phi=phi, eps_p=config.eps_p))
    event = Event(x)
    moved = transform_event(d, event)

    print("x' = " + ", ".join(f"{value:.12g}" for value in moved.x))
    print(f"interval change: {interval(moved) - interval(event):.6e}")
    print(f"time change: {moved.time - event.time:.6e}")
    print(f"distance^2 change: {moved.distance_squared - event.distance_squared:.6e}")

    if config.output_path:
        manager = ArtifactManager()
        manager.save_document(manager.transform_document(d, event, moved, config.n, config.eps_p),
                              config.output_path)
    return EXIT_OK


def cmd_momentum(config: RunConfig, rep_spec: str, side: str) -> int:
    """Solve for momentum matrices of a combined representation."""
    pair_ab, pair_cd = parse_rep_spec(rep_spec, config.eps_p)
    basis = build_utility_basis(config.n)
    sc = compute_structure_constants(basis)
    rep_ab = build_combined(pair_ab, basis, sc, config.tolerance)
    rep_cd = build_combined(pair_cd, basis, sc, config.tolerance)
    logging.info(f"🚀 Solving momentum equations for {rep_ab.name}+{rep_cd.name} "
                 f"(N={config.n}, eps_p={config.eps_p:+d}, {side} block)")

    solution = solve_momentum(rep_ab, rep_cd, sc, config.eps_p, side, config.tolerance)
    report = verify_momentum_solution(solution, rep_ab, rep_cd, sc, config.tolerance)

    manager = ArtifactManager()
    manager.save_document(manager.momentum_document(solution, rep_spec, config.n, report), config.output_path)

    if solution.basis_dim == 0:
        print(f"📭 No momentum matrices exist for {rep_ab.name}+{rep_cd.name} ({side} block)")
        return EXIT_OK
    print(f"basis_dim = {solution.basis_dim}")
    for record in report.records:
        print(f"  {record.identity}: {record.residual:.3e}")
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def main(argv=None) -> int:
    """Main application entry point."""
    setup_signal_handlers()
    args = parse_arguments(argv)

    try:
        config = build_run_config(args)
        if config.command == "generate":
            return cmd_generate(config)
        if config.command == "verify":
            return cmd_verify(config)
        if config.command == "transform":
            return cmd_transform(config, args.theta, args.phi, args.x)
        return cmd_momentum(config, args.rep, args.side)

    except KeyboardInterrupt:
        logging.info("🛑 Process interrupted by user")
        return EXIT_VERIFICATION_FAILED
    except (NPWError, ValidationError, ValueError) as e:
        logging.error(f"💥 Invalid input: {e}")
        return EXIT_INVALID_INPUT
    except OSError as e:
        logging.error(f"💥 Could not write output: {e}")
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
