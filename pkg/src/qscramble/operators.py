"""Spin, bosonic, and site-embedded operators for the model Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import kron

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)

_LOCALS = {
    "x": PAULI_X,
    "y": PAULI_Y,
    "z": PAULI_Z,
    "+": SIGMA_PLUS,
    "-": SIGMA_MINUS,
}


@dataclass(frozen=True)
class SpinJOperators:
    """Collective angular momentum matrices for pseudospin length j.

    Basis ordering is m = j, j-1, ..., -j, so jz = diag(j, ..., -j) and the
    lowering operator jm populates the subdiagonal.  The lowest-energy state
    of a Hamiltonian +w*jz (w > 0) is therefore the last basis vector.
    """

    j: float
    jz: np.ndarray
    jp: np.ndarray
    jm: np.ndarray
    jx: np.ndarray

    @property
    def dim(self) -> int:
        return self.jz.shape[0]


@dataclass(frozen=True)
class BosonOperators:
    """Truncated Fock-space ladder operators with cutoff dimension n_max.

    [a, a_dag] = I holds everywhere except the last diagonal entry, which
    equals 1 - n_max (truncation artifact).
    """

    n_max: int
    a: np.ndarray
    a_dag: np.ndarray
    num: np.ndarray


@dataclass(frozen=True)
class SiteOperator:
    """A 2x2 operator embedded at one site of an N-spin chain (site 1 slowest)."""

    n_sites: int
    site: int
    local: np.ndarray
    embedded: np.ndarray


def collective_spin(j: float) -> SpinJOperators:
    """Angular momentum operators for pseudospin length j (2j a non-negative integer).

    <j, m-1| jm |j, m> = sqrt(j(j+1) - m(m-1)).
    """
    two_j = round(2 * j)
    if two_j < 0 or abs(2 * j - two_j) > 1e-12:
        raise ValueError(f"j must be a non-negative half-integer, got {j}")
    j = two_j / 2.0
    dim = two_j + 1
    m = j - np.arange(dim)
    jz = np.diag(m).astype(complex)
    jm = np.zeros((dim, dim), dtype=complex)
    for k in range(dim - 1):
        jm[k + 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] - 1))
    jp = jm.conj().T
    return SpinJOperators(j=j, jz=jz, jp=jp, jm=jm, jx=(jp + jm) / 2)


def boson_ops(n_max: int) -> BosonOperators:
    """Annihilation, creation, and number operators truncated to n_max Fock states."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    a = np.zeros((n_max, n_max), dtype=complex)
    for n in range(1, n_max):
        a[n - 1, n] = np.sqrt(n)
    a_dag = a.conj().T
    return BosonOperators(n_max=n_max, a=a, a_dag=a_dag, num=a_dag @ a)


def pauli_site(n_sites: int, site: int, which: str) -> SiteOperator:
    """Pauli or ladder operator acting on one site of an N-spin chain.

    ``which`` is one of x, y, z, +, -.  Sites are numbered 1..N with site 1 on
    the slow (leftmost) Kronecker factor.
    """
    if which not in _LOCALS:
        raise ValueError(f"unknown operator {which!r}; expected one of {sorted(_LOCALS)}")
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    local = _LOCALS[which]
    embedded = np.eye(1, dtype=complex)
    for k in range(1, n_sites + 1):
        embedded = kron(embedded, local if k == site else np.eye(2, dtype=complex))
    return SiteOperator(n_sites=n_sites, site=site, local=local, embedded=embedded)
