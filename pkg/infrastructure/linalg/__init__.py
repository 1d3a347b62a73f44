"""F_p 上的精確線性代數"""
from infrastructure.linalg.gf_linalg import (
    batch_invertible_mod,
    inverse_mod,
    is_invertible_mod,
    matmul_mod,
    mod_p,
    nullspace_mod,
    rank_mod,
    rref_mod,
    solve_mod,
    span_basis_mod,
)

__all__ = [
    "batch_invertible_mod",
    "inverse_mod",
    "is_invertible_mod",
    "matmul_mod",
    "mod_p",
    "nullspace_mod",
    "rank_mod",
    "rref_mod",
    "solve_mod",
    "span_basis_mod",
]
