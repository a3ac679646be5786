"""Key exchange over extensions of (semi)groups by a cyclic group of endomorphisms."""

from .algebra import GRMatrix, GroupRingElem, Perm5, mat_aug, mat_mul
from .paramgen import generate_params, sample_exponent
from .platforms import MatrixParams, ToyParams, matrix_closed_form, toy_closed_form
from .semidirect import Endomorphism, ProtocolSession, Role, SdElement, derive_shared, sd_mul, sd_pow

__all__ = [
    "Endomorphism",
    "GRMatrix",
    "GroupRingElem",
    "MatrixParams",
    "Perm5",
    "ProtocolSession",
    "Role",
    "SdElement",
    "ToyParams",
    "derive_shared",
    "generate_params",
    "mat_aug",
    "mat_mul",
    "matrix_closed_form",
    "sample_exponent",
    "sd_mul",
    "sd_pow",
    "toy_closed_form",
]
