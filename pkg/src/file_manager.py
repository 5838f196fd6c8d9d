"""
Artifact management: JSON encoding of bases, structure constants, generators,
momentum solutions and verification reports, and decoding them back.

Complex matrices are nested lists of [re, im] pairs; real tensors are nested
lists of reals. Every document carries the schema version.
"""

import os
import json
import logging
from typing import Optional, Tuple

import numpy as np

from .algebra import GeneratorSet2N, GeneratorSetN2, check_eps_p
from .basis import BasisLabel, HermitianBasis
from .config import BASIS_ORDERING, RNG_NAME, SCHEMA_VERSION
from .errors import SchemaError
from .geometry import Event
from .momentum import MomentumSolution
from .report import VerificationRecord, VerificationReport
from .structure import StructureConstants

logger = logging.getLogger(__name__)


# Index conventions written next to every tensor
STRUCTURE_INDEX_ORDER = "f[a][b][c], d[a][b][c]: [h^a, h^b] = i f^abc h^c, {h^a, h^b} = d^abc h^c"
GENERATOR_INDEX_ORDER = "stack[generator][row][col]"
SOLUTION_INDEX_ORDER = "solutions[k][mu][row][col]"


def encode_complex(array) -> list:
    """Nested lists ending in [re, im] pairs."""
    arr = np.asarray(array, dtype=np.complex128)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def decode_complex(nested) -> np.ndarray:
    arr = np.asarray(nested, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise SchemaError(f"complex data must end in [re, im] pairs, got shape {arr.shape}")
    out = np.empty(arr.shape[:-1], dtype=np.complex128)
    out.real = arr[..., 0]
    out.imag = arr[..., 1]
    return out


def encode_real(array) -> list:
    return np.asarray(array, dtype=np.float64).tolist()


def decode_real(nested) -> np.ndarray:
    return np.asarray(nested, dtype=np.float64)


def encode_scalar(value: complex) -> list:
    return [float(np.real(value)), float(np.imag(value))]


def decode_scalar(pair) -> complex:
    if len(pair) != 2:
        raise SchemaError(f"complex scalar must be [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _section(doc: dict, key: str):
    try:
        return doc[key]
    except (KeyError, TypeError):
        raise SchemaError(f"document section {key!r} is missing") from None


def encode_basis(basis: HermitianBasis) -> dict:
    return {
        "n": basis.n,
        "kind": basis.kind,
        "ordering": list(BASIS_ORDERING),
        "labels": [label.to_json() for label in basis.labels],
        "matrices": encode_complex(basis.matrices),
    }


def decode_basis(doc: dict) -> HermitianBasis:
    labels = tuple(BasisLabel.from_json(label) for label in _section(doc, "labels"))
    return HermitianBasis(n=int(_section(doc, "n")), matrices=decode_complex(_section(doc, "matrices")),
                          labels=labels, kind=doc.get("kind", "utility"))


def encode_structure_constants(sc: StructureConstants) -> dict:
    return {"n": sc.n, "utility_rep": sc.utility_rep, "index_order": STRUCTURE_INDEX_ORDER,
            "f": encode_real(sc.f), "d": encode_real(sc.d)}


def decode_structure_constants(doc: dict) -> StructureConstants:
    return StructureConstants(n=int(_section(doc, "n")), f=decode_real(_section(doc, "f")),
                              d=decode_real(_section(doc, "d")), utility_rep=bool(doc.get("utility_rep", True)))


def encode_generators_2n(g2n: GeneratorSet2N) -> dict:
    return {
        "eps_p": g2n.eps_p,
        "index_order": GENERATOR_INDEX_ORDER,
        "J": encode_complex(g2n.j2n),
        "K": encode_complex(g2n.k2n),
        "P_plus": encode_complex(g2n.p_plus),
        "P_minus": encode_complex(g2n.p_minus),
        "c_plus": encode_scalar(g2n.c_plus),
        "c_minus": encode_scalar(g2n.c_minus),
    }


def decode_generators_2n(doc: dict, basis: HermitianBasis) -> GeneratorSet2N:
    """2N-rep generators; the basis comes from the same document."""
    return GeneratorSet2N(basis=basis, eps_p=check_eps_p(int(_section(doc, "eps_p"))),
                          j2n=decode_complex(_section(doc, "J")), k2n=decode_complex(_section(doc, "K")),
                          p_plus=decode_complex(_section(doc, "P_plus")),
                          p_minus=decode_complex(_section(doc, "P_minus")),
                          c_plus=decode_scalar(_section(doc, "c_plus")),
                          c_minus=decode_scalar(_section(doc, "c_minus")))


def encode_generators_n2(gn2: GeneratorSetN2) -> dict:
    return {"n": gn2.n, "eps_p": gn2.eps_p, "index_order": GENERATOR_INDEX_ORDER,
            "j": encode_complex(gn2.j), "k": encode_complex(gn2.k)}


def decode_generators_n2(doc: dict) -> GeneratorSetN2:
    j = decode_complex(_section(doc, "j"))
    n = int(doc.get("n", round(np.sqrt(j.shape[0]))))
    return GeneratorSetN2(n=n, eps_p=check_eps_p(int(_section(doc, "eps_p"))), j=j,
                          k=decode_complex(_section(doc, "k")))


def encode_momentum_solution(solution: MomentumSolution) -> dict:
    return {
        "block_side": solution.block_side,
        "eps_p": solution.eps_p,
        "basis_dim": solution.basis_dim,
        "dims": list(solution.dims),
        "shape": list(solution.solutions.shape),
        "index_order": SOLUTION_INDEX_ORDER,
        "solutions": [encode_complex(p) for p in solution.solutions],
    }


def decode_momentum_solution(doc: dict) -> MomentumSolution:
    shape = tuple(int(size) for size in _section(doc, "shape"))
    encoded = _section(doc, "solutions")
    if len(encoded) != shape[0]:
        raise SchemaError(f"momentum document lists {len(encoded)} solutions but its shape says {shape[0]}")
    solutions = np.zeros(shape, dtype=np.complex128)
    for i, p in enumerate(encoded):
        solutions[i] = decode_complex(p)
    return MomentumSolution(solutions=solutions, block_side=_section(doc, "block_side"),
                            eps_p=check_eps_p(int(_section(doc, "eps_p"))),
                            dims=tuple(int(size) for size in _section(doc, "dims")))


def encode_event(event: Event) -> list:
    return encode_real(event.x)


def decode_event(nested) -> Event:
    return Event(decode_real(nested))


class ArtifactManager:
    """Reads and writes JSON artifacts."""

    def __init__(self, output_dir: Optional[str] = None):
        """Initialize with an optional directory for relative output paths."""
        self.output_dir = output_dir

    def resolve(self, path: str) -> str:
        if self.output_dir and not os.path.isabs(path):
            return os.path.join(self.output_dir, path)
        return path

    def document(self, kind: str, **sections) -> dict:
        """Top-level document with schema header."""
        return {"schema": SCHEMA_VERSION, "kind": kind, **sections}

    def save_document(self, doc: dict, path: str) -> str:
        """Write doc as JSON; raises OSError when the path cannot be written."""
        target = self.resolve(path)
        directory = os.path.dirname(target)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(target, 'w', encoding='utf-8') as f:
            json.dump(doc, f, indent=1)
            f.write('\n')
        logger.info(f"💾 Saved {doc.get('kind', 'artifact')} to {target}")
        return target

    def load_document(self, path: str, kind: Optional[str] = None) -> dict:
        with open(self.resolve(path), 'r', encoding='utf-8') as f:
            doc = json.load(f)
        if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_VERSION:
            raise SchemaError(f"{path} does not carry schema {SCHEMA_VERSION}")
        if kind is not None and doc.get("kind") != kind:
            raise SchemaError(f"{path} holds {doc.get('kind')!r}, expected {kind!r}")
        return doc

    def generate_document(self, basis: HermitianBasis, anti: HermitianBasis, sc: StructureConstants,
                          g2n: GeneratorSet2N, gn2: GeneratorSetN2) -> dict:
        return self.document(
            "generate",
            n=basis.n,
            eps_p=g2n.eps_p,
            basis=encode_basis(basis),
            anti_basis=encode_basis(anti),
            structure_constants=encode_structure_constants(sc),
            generators_2n=encode_generators_2n(g2n),
            generators_n2=encode_generators_n2(gn2),
        )

    def report_document(self, report: VerificationReport, n: int, eps_p: int, tolerance: float,
                        seed: int, trials: int) -> dict:
        """Deterministic report: identical inputs give byte-identical files."""
        return self.document(
            "verify",
            n=n,
            eps_p=eps_p,
            tolerance=tolerance,
            seed=seed,
            rng=RNG_NAME,
            trials=trials,
            passed=report.passed,
            records=report.to_json(),
        )

    def load_report(self, path: str) -> VerificationReport:
        doc = self.load_document(path, kind="verify")
        return VerificationReport(records=[VerificationRecord.model_validate(r) for r in doc["records"]])

    def momentum_document(self, solution: MomentumSolution, rep_spec: str, n: int,
                          report: VerificationReport) -> dict:
        return self.document(
            "momentum",
            n=n,
            rep=rep_spec,
            solution=encode_momentum_solution(solution),
            records=report.to_json(),
        )

    def transform_document(self, d: np.ndarray, event: Event, moved: Event, n: int, eps_p: int) -> dict:
        return self.document("transform", n=n, eps_p=eps_p, transform=encode_real(d),
                             event=encode_event(event), event_prime=encode_event(moved))

    def load_generate(self, path: str) -> Tuple[HermitianBasis, HermitianBasis, StructureConstants,
                                                GeneratorSet2N, GeneratorSetN2]:
        """Basis, anti-basis, structure constants and both generator sets of a generate document."""
        doc = self.load_document(path, kind="generate")
        basis = decode_basis(_section(doc, "basis"))
        return (basis, decode_basis(_section(doc, "anti_basis")),
                decode_structure_constants(_section(doc, "structure_constants")),
                decode_generators_2n(_section(doc, "generators_2n"), basis),
                decode_generators_n2(_section(doc, "generators_n2")))

    def load_momentum(self, path: str) -> Tuple[MomentumSolution, VerificationReport]:
        doc = self.load_document(path, kind="momentum")
        records = [VerificationRecord.model_validate(r) for r in _section(doc, "records")]
        return decode_momentum_solution(_section(doc, "solution")), VerificationReport(records=records)

    def load_transform(self, path: str) -> Tuple[np.ndarray, Event, Event]:
        doc = self.load_document(path, kind="transform")
        return (decode_real(_section(doc, "transform")), decode_event(_section(doc, "event")),
                decode_event(_section(doc, "event_prime")))
