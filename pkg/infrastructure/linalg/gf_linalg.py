"""
F_p 上的稠密矩陣運算（numpy int64）

所有函數都回傳新陣列，不修改輸入。
"""
from typing import List, Optional, Tuple

import numpy as np

_INT64_SAFE = 1 << 62


def mod_p(A, p: int) -> np.ndarray:
    return np.asarray(np.asarray(A, dtype=np.int64) % p, dtype=np.int64)


def inv_mod_scalar(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("0 在 F_p 中不可逆")
    return pow(a, p - 2, p)


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """矩陣乘法 mod p；乘積可能溢位時改用 Python 整數"""
    A = mod_p(A, p)
    B = mod_p(B, p)
    inner = A.shape[1] if A.ndim == 2 else 1
    if (p - 1) * (p - 1) * max(inner, 1) < _INT64_SAFE:
        return (A @ B) % p
    product = A.astype(object) @ B.astype(object)
    return np.asarray(product % p, dtype=np.int64)


def rref_mod(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """簡化列梯形 (RREF)，回傳 (R, 樞紐行)"""
    R = mod_p(A, p).copy()
    if R.ndim != 2:
        raise ValueError("rref_mod 需要二維矩陣")
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.nonzero(R[r:, c])[0]
        if nonzero.size == 0:
            continue
        piv = r + int(nonzero[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * inv_mod_scalar(R[r, c], p)) % p
        factors = R[:, c].copy()
        factors[r] = 0
        mask = factors != 0
        if mask.any():
            R[mask] = (R[mask] - np.outer(factors[mask], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    _, pivots = rref_mod(A, p)
    return len(pivots)


def nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """右零空間的基底，以行向量排列 (n × k)"""
    A = mod_p(A, p)
    if A.ndim != 2:
        raise ValueError("nullspace_mod 需要二維矩陣")
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_mod(A, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-R[row, f]) % p
    return basis


def solve_mod(A: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """解 A x = b；無解時回傳 None（自由變數取 0）"""
    A = mod_p(A, p)
    b = mod_p(b, p).reshape(-1, 1)
    n = A.shape[1]
    R, pivots = rref_mod(np.concatenate([A, b], axis=1), p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, n]
    return x


def inverse_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan 求逆；奇異矩陣拋出 ValueError"""
    A = mod_p(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("只有方陣可以求逆")
    R, pivots = rref_mod(np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("矩陣在 F_p 上不可逆")
    return R[:, n:].copy()


def is_invertible_mod(A: np.ndarray, p: int) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    if A.shape[0] == 0:
        return True
    return rank_mod(A, p) == A.shape[0]


def _pow_mod_array(base: np.ndarray, exponent: int, p: int) -> np.ndarray:
    result = np.ones_like(base)
    base = base % p
    while exponent:
        if exponent & 1:
            result = (result * base) % p
        base = (base * base) % p
        exponent >>= 1
    return result


def batch_invertible_mod(stack: np.ndarray, p: int) -> np.ndarray:
    """一批 n × n 矩陣 (B × n × n) 各自是否在 F_p 上可逆，回傳布林陣列"""
    A = mod_p(stack, p).copy()
    if A.ndim != 3:
        raise ValueError("batch_invertible_mod 需要三維陣列")
    batch, n, m = A.shape
    if n != m:
        return np.zeros(batch, dtype=bool)
    ok = np.ones(batch, dtype=bool)
    rows = np.arange(batch)
    for c in range(n):
        nonzero = A[:, c:, c] != 0
        ok &= nonzero.any(axis=1)
        piv = c + nonzero.argmax(axis=1)
        pivot_rows = A[rows, piv].copy()
        A[rows, piv] = A[:, c]
        A[:, c] = pivot_rows
        inv = _pow_mod_array(A[:, c, c], p - 2, p)
        A[:, c] = (A[:, c] * inv[:, None]) % p
        factors = A[:, :, c].copy()
        factors[:, c] = 0
        A = (A - factors[:, :, None] * A[:, c][:, None, :]) % p
    return ok


def span_basis_mod(vectors: np.ndarray, p: int) -> np.ndarray:
    """行向量張成空間的基底（以列向量回傳，k × n）"""
    V = mod_p(vectors, p)
    if V.size == 0:
        return np.zeros((0, V.shape[1] if V.ndim == 2 else 0), dtype=np.int64)
    R, pivots = rref_mod(V, p)
    return R[: len(pivots)].copy()
