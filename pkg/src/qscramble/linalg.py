"""Dense complex linear algebra and tensor-reshaping primitives.

Conventions (normative for every module in this package):

* Composite spaces are ordered left-to-right, slow-to-fast: for a bipartite
  space the basis index is ``i = a * d_b + b``, so ``X_A (x) X_B`` places the
  A factor on the left of every Kronecker product.
* Vectorization is row-stacking: ``vec(|i><j|) = |i> (x) |j>``, i.e.
  ``vec(M)[i * cols + j] = M[i, j]``.  Under this convention
  ``vec(A X B) = (A (x) B^T) vec(X)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITICITY_ATOL = 1e-10
PSD_EIG_FLOOR = -1e-10
SUPPORT_CLAMP = 1e-12


@dataclass(frozen=True)
class BipartiteSpace:
    """Dimensions and index conventions of a bipartition H = H_A (x) H_B."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise ValueError(f"subsystem dimensions must be >= 1, got ({self.d_a}, {self.d_b})")

    @property
    def d(self) -> int:
        return self.d_a * self.d_b

    @property
    def dims(self) -> tuple[int, int]:
        return (self.d_a, self.d_b)

    def composite_index(self, a: int, b: int) -> int:
        """Basis index of |a>|b| under the A-slow convention."""
        return a * self.d_b + b


def kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor on the slow index."""
    return np.kron(x, y)


def vectorize(m: np.ndarray) -> np.ndarray:
    """Row-stack a matrix into a vector: vec(M)[i*cols + j] = M[i, j]."""
    return np.asarray(m).reshape(-1)


def devectorize(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v)
    if cols is None:
        cols = rows
    if v.size != rows * cols:
        raise ValueError(f"cannot devectorize length {v.size} into {rows}x{cols}")
    return v.reshape(rows, cols)


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``m`` is a square matrix over the tensor product of factors with the given
    ``dims`` (slow-to-fast ordering).  The kept factors retain their relative
    order.  The trace is preserved: Tr(result) = Tr(m).
    """
    dims = [int(x) for x in dims]
    n = len(dims)
    total = math.prod(dims)
    m = np.asarray(m)
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match factor dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")

    t = m.reshape(*dims, *dims)
    src = list(range(2 * n))
    for j in range(n):
        if j not in keep:
            src[n + j] = src[j]
    out = [src[j] for j in keep] + [src[n + j] for j in keep]
    d_keep = math.prod(dims[j] for j in keep) if keep else 1
    return np.einsum(t, src, out).reshape(d_keep, d_keep)


def _assert_hermitian(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> None:
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian: max |M - M^dag| = {dev:.3e} > {atol:.1e}")


def herm_eig(m: np.ndarray, atol: float = HERMITICITY_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Returns ``(w, v)`` with ``m = v @ diag(w) @ v^dag``.  Raises ``ValueError``
    if the input fails the Hermiticity check.
    """
    m = np.asarray(m)
    _assert_hermitian(m, atol)
    w, v = np.linalg.eigh(m)
    return w, v


def log_psd(m: np.ndarray, clamp: float = SUPPORT_CLAMP) -> tuple[np.ndarray, np.ndarray]:
    """Matrix logarithm of a positive-semidefinite matrix on its support.

    Eigenvalues below ``clamp`` are treated as exactly zero and excluded from
    the logarithm (the corresponding directions get a 0 entry, honouring the
    0*ln(0) = 0 convention).  Returns ``(log_m, support)`` where ``support`` is
    the boolean mask of in-support eigenvalues in ascending eigenvalue order.
    Raises ``ValueError`` if any eigenvalue is below the PSD floor.
    """
    w, v = herm_eig(m)
    if w.min() < PSD_EIG_FLOOR:
        raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {w.min():.3e}")
    support = w > clamp
    log_w = np.where(support, np.log(np.where(support, w, 1.0)), 0.0)
    return (v * log_w) @ v.conj().T, support


# Pade approximant data for the scaling-and-squaring matrix exponential
# (diagonal approximants of orders 3..13 with the standard 1-norm thresholds).
_PADE_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}
_PADE_COEFFS = {
    3: [120.0, 60.0, 12.0, 1.0],
    5: [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
    7: [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
    9: [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0],
    13: [64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
         960960.0, 16380.0, 182.0, 1.0],
}


def _pade_lowdeg(a: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE_COEFFS[order]
    n = a.shape[0]
    eye = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    powers = [eye, a2]
    for _ in range((order - 1) // 2 - 1):
        powers.append(powers[-1] @ a2)
    u = np.zeros_like(a)
    v = np.zeros_like(a)
    for k, p in enumerate(powers):
        u += b[2 * k + 1] * p
        v += b[2 * k] * p
    return a @ u, v


def _pade_13(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE_COEFFS[13]
    n = a.shape[0]
    eye = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye)
    return u, v


def expm(m: np.ndarray, max_squarings: int = 64) -> np.ndarray:
    """Matrix exponential by scaling and squaring with diagonal Pade approximants.

    Works for general (non-Hermitian, non-normal) square matrices such as
    Lindbladian superoperators.  Raises ``OverflowError`` if the required
    number of squarings exceeds ``max_squarings``.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expm requires a square matrix, got shape {m.shape}")
    a = m.astype(complex, copy=True)
    norm = np.linalg.norm(a, 1) if a.size else 0.0
    if norm == 0.0:
        return np.eye(a.shape[0], dtype=complex)

    for order in (3, 5, 7, 9):
        if norm <= _PADE_THETA[order]:
            u, v = _pade_lowdeg(a, order)
            return np.linalg.solve(v - u, v + u)

    s = max(0, int(math.ceil(math.log2(norm / _PADE_THETA[13]))))
    if s > max_squarings:
        raise OverflowError(
            f"expm scaling exponent {s} exceeds max_squarings={max_squarings} "
            f"(1-norm {norm:.3e})")
    a /= 2.0 ** s
    u, v = _pade_13(a)
    f = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        f = f @ f
    return f


def haar_unitary(dim: int, rng: int | np.random.Generator | None = None) -> np.ndarray:
    """Haar-distributed random unitary via QR of a complex Ginibre matrix.

    The R-diagonal phase correction makes the distribution exactly Haar.
    Deterministic for a fixed integer seed.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    z = (gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def apply_factorwise(map_matrix: np.ndarray, target: np.ndarray, copy: int) -> np.ndarray:
    """Apply a vectorized d^2 x d^2 operator map to one tensor slot of ``target``.

    ``target`` is an operator on H (x) H' with dim(H) = dim(H') = d, written as
    a d^2 x d^2 matrix; decomposing ``target = sum_k P_k (x) Q_k``, the result
    is ``sum_k map(P_k) (x) Q_k`` for ``copy=1`` and ``sum_k P_k (x) map(Q_k)``
    for ``copy=2``.  Costs one d^2 x d^2 matrix product plus index reshuffles;
    the dense two-copy map ``map (x) map`` is never materialized.
    """
    map_matrix = np.asarray(map_matrix)
    target = np.asarray(target)
    d2 = map_matrix.shape[0]
    d = math.isqrt(d2)
    if map_matrix.shape != (d2, d2) or d * d != d2:
        raise ValueError(f"map must be d^2 x d^2, got shape {map_matrix.shape}")
    if target.shape != (d2, d2):
        raise ValueError(f"target shape {target.shape} does not match map dimension {d2}")
    if copy not in (1, 2):
        raise ValueError(f"copy must be 1 or 2, got {copy}")

    t4 = target.reshape(d, d, d, d)  # axes (row_H, row_H', col_H, col_H')
    if copy == 1:
        r = t4.transpose(0, 2, 1, 3).reshape(d2, d2)
        r = map_matrix @ r
        return r.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d2, d2)
    r = t4.transpose(1, 3, 0, 2).reshape(d2, d2)
    r = map_matrix @ r
    return r.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d2, d2)
