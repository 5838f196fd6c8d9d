"""
N-Poincare-Weyl toolkit - builds the hermitian utility basis of the N x N
matrices, its structure constants, the 2N- and N^2-representations of the
N-Poincare-Weyl algebra, finite transforms on N^2-dimensional spacetime and
momentum matrices of combined representations, and verifies every identity.
"""

__version__ = "1.0.0"

from .config import SCHEMA_VERSION, LIBRARY_TOLERANCE, STRICT_TOLERANCE, RunConfig, parse_arguments
from .errors import NPWError
from .basis import HermitianBasis, BasisLabel, BasisChange, build_utility_basis, anti_rep
from .structure import StructureConstants, compute_structure_constants
from .algebra import GeneratorSet2N, GeneratorSetN2, build_2n_generators, build_n2_generators, extract_copycat
from .geometry import Event, TransformParams, build_transform, transform_event
from .momentum import CombinedRep, MomentumSolution, combine_reps, solve_momentum
from .report import VerificationRecord, VerificationReport
from .verifier import VerificationSuite
from .file_manager import ArtifactManager

__all__ = [
    'HermitianBasis',
    'BasisLabel',
    'BasisChange',
    'build_utility_basis',
    'anti_rep',
    'StructureConstants',
    'compute_structure_constants',
    'GeneratorSet2N',
    'GeneratorSetN2',
    'build_2n_generators',
    'build_n2_generators',
    'extract_copycat',
    'Event',
    'TransformParams',
    'build_transform',
    'transform_event',
    'CombinedRep',
    'MomentumSolution',
    'combine_reps',
    'solve_momentum',
    'VerificationRecord',
    'VerificationReport',
    'VerificationSuite',
    'ArtifactManager',
    'NPWError',
    # Configuration exports
    'SCHEMA_VERSION',
    'LIBRARY_TOLERANCE',
    'STRICT_TOLERANCE',
    'RunConfig',
    'parse_arguments',
]
