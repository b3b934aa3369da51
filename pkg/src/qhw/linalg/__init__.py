"""Exact linear algebra kernel: fields, matrices, complexes, Smith form."""

from .fields import QQ, GF, PrimeField, RationalField, parse_field
from .matrix import Matrix, span_contains, span_rank, coordinates_in_basis
from .sparse import SparseMatrix
from .complexes import BoundedComplex, CohomologyResult
from .snf import SmithResult, smith_normal_form, int_det, mat_mul_int

__all__ = [
    "QQ",
    "GF",
    "PrimeField",
    "RationalField",
    "parse_field",
    "Matrix",
    "SparseMatrix",
    "BoundedComplex",
    "CohomologyResult",
    "SmithResult",
    "smith_normal_form",
    "int_det",
    "mat_mul_int",
    "span_contains",
    "span_rank",
    "coordinates_in_basis",
]
