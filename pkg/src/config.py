"""
Configuration module for the N-Poincare-Weyl toolkit.
Contains numeric defaults, environment overrides and command line parsing.
"""

import os
import argparse
from typing import Optional, Sequence, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

load_dotenv()

# ==============================================================================
# ARTIFACT FORMAT
# ==============================================================================

SCHEMA_VERSION = "npw-v1"
BASIS_ORDERING = ("plus", "minus", "diag", "time")

# Default output file per subcommand; {n} is the algebra size
DEFAULT_OUTPUT_TEMPLATES = {
    "generate": "npw_n{n}.json",
    "verify": "npw_report_n{n}.json",
    "momentum": "npw_momentum_n{n}.json",
}

# ==============================================================================
# NUMERIC TOLERANCES
# ==============================================================================

# Residual bound for identity checks
LIBRARY_TOLERANCE = 1e-10

# Imaginary residue allowed when extracting real coefficients
STRICT_TOLERANCE = 1e-12

# Singular value ratio for the Clebsch-Gordan rank-one test
FACTORIZATION_TOLERANCE = 1e-8

# Smallest interval change accepted as a non-invariance witness
WITNESS_THRESHOLD = 1e-3

# ==============================================================================
# RUN DEFAULTS
# ==============================================================================

DEFAULT_N = 2
DEFAULT_EPS_P = 1
DEFAULT_SEED = 20240101
DEFAULT_TRIALS = 100
DEFAULT_MAX_WORKERS = 4
RNG_NAME = "numpy.random.PCG64"

# Largest N for which the verifier solves the momentum equations
MOMENTUM_SUITE_MAX_N = 4
# Largest N for which the verifier runs random basis changes
BASIS_CHANGE_SUITE_MAX_N = 3
BASIS_CHANGE_TRIALS = 10

# Named factor representations accepted in --rep
REP_FACTORS = ("trivial", "fund", "antifund", "sym2", "antisym2", "sym2bar", "antisym2bar")

# ==============================================================================
# ENVIRONMENT OVERRIDES
# ==============================================================================


def get_default_tolerance() -> float:
    """Tolerance from NPW_TOL, or the library default."""
    raw = os.getenv('NPW_TOL')
    return float(raw) if raw else LIBRARY_TOLERANCE


def get_default_seed() -> int:
    raw = os.getenv('NPW_SEED')
    return int(raw) if raw else DEFAULT_SEED


def get_default_workers() -> int:
    raw = os.getenv('NPW_MAX_WORKERS')
    return int(raw) if raw else DEFAULT_MAX_WORKERS


def get_log_level() -> str:
    return os.getenv('NPW_LOG_LEVEL', 'INFO').upper()


# ==============================================================================
# RUN CONFIGURATION
# ==============================================================================


class RunConfig(BaseModel):
    """Validated settings shared by every subcommand."""

    command: str
    n: int = Field(DEFAULT_N, ge=1)
    eps_p: int = DEFAULT_EPS_P
    tolerance: float = Field(LIBRARY_TOLERANCE, gt=0.0)
    seed: int = Field(DEFAULT_SEED, ge=0)
    trials: int = Field(DEFAULT_TRIALS, ge=1)
    max_workers: int = Field(DEFAULT_MAX_WORKERS, ge=1)
    output_path: Optional[str] = None
    inject_fault: bool = False

    @field_validator('eps_p')
    @classmethod
    def _check_eps_p(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError(f"eps_p must be +1 or -1, got {value}")
        return value


def parse_eps(text: str) -> int:
    """Parse '+1', '1' or '-1'."""
    value = text.strip()
    if value in ('+1', '1'):
        return 1
    if value == '-1':
        return -1
    raise argparse.ArgumentTypeError(f"eps_p must be +1 or -1, got {text!r}")


def parse_real_tuple(text: str) -> Tuple[float, ...]:
    """Parse a comma separated list of reals such as '0,0,1.5,0'."""
    try:
        return tuple(float(part) for part in text.split(',') if part.strip() != '')
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated reals, got {text!r}") from e


def _add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--n", type=int, default=DEFAULT_N, help="Size N of the algebra (default: 2)")
    parser.add_argument("--eps-p", type=parse_eps, default=DEFAULT_EPS_P,
                        help="Momentum family: +1 or -1 (default: +1)")
    parser.add_argument("--tol", type=float, default=None,
                        help="Residual tolerance (default: NPW_TOL or 1e-10)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default: NPW_SEED or 20240101)")
    parser.add_argument("--out", type=str, default=None, help="Output JSON path")


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        description="Build and verify N-Poincare-Weyl algebras, transforms and momentum representations")
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser("generate", help="Write basis, structure constants and generators")
    _add_common_arguments(generate)

    verify = subparsers.add_parser("verify", help="Run every identity check and write a report")
    _add_common_arguments(verify)
    verify.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help="Random trials for parameterized checks (default: 100)")
    verify.add_argument("--workers", type=int, default=None,
                        help="Worker threads (default: NPW_MAX_WORKERS or 4)")
    verify.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    transform = subparsers.add_parser(
        "transform", help="Apply a rotation/boost to an event (use --theta=-1,... for leading minus)")
    _add_common_arguments(transform)
    transform.add_argument("--theta", type=parse_real_tuple, default=None, help="Rotation parameters, N^2 reals")
    transform.add_argument("--phi", type=parse_real_tuple, default=None, help="Boost parameters, N^2 reals")
    transform.add_argument("--x", type=parse_real_tuple, required=True, help="Event coordinates, N^2 reals")

    momentum = subparsers.add_parser("momentum", help="Solve for momentum matrices of a combined representation")
    _add_common_arguments(momentum)
    momentum.add_argument("--rep", type=str, required=True,
                          help="'C,D' (with the default A,B) or 'A,B:C,D'; factors: " + ", ".join(REP_FACTORS))
    momentum.add_argument("--side", choices=["upper", "lower"], default="upper",
                          help="Block holding the momentum matrices (default: upper)")

    return parser.parse_args(argv)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Resolve CLI arguments and environment defaults into a RunConfig."""
    tolerance = args.tol if args.tol is not None else get_default_tolerance()
    seed = args.seed if args.seed is not None else get_default_seed()
    workers = getattr(args, 'workers', None)
    output_path = args.out
    if output_path is None and args.command in DEFAULT_OUTPUT_TEMPLATES:
        output_path = DEFAULT_OUTPUT_TEMPLATES[args.command].format(n=args.n)
    return RunConfig(
        command=args.command,
        n=args.n,
        eps_p=args.eps_p,
        tolerance=tolerance,
        seed=seed,
        trials=getattr(args, 'trials', DEFAULT_TRIALS),
        max_workers=workers if workers is not None else get_default_workers(),
        output_path=output_path,
        inject_fault=getattr(args, 'inject_fault', False),
    )
