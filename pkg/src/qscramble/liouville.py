"""Vectorized Lindbladian superoperators and their time propagators.

Both pictures of the GKSL master equation are provided as d^2 x d^2 matrices
acting on row-stacked operators:

* adjoint (Heisenberg) picture, generating dO/dt = i[H, O] + dissipators
  with L^dag O L ordering; its propagator exp(t L_adj) is unital;
* state (Schrodinger) picture, generating drho/dt = -i[H, rho] + dissipators
  with L rho L^dag ordering; its propagator is trace preserving.

The two matrices are Hilbert-Schmidt adjoints of each other (conjugate
transposes), which the duality identity Tr[(L_adj O)^dag rho] = Tr[O^dag L rho]
pins down.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import expm, herm_eig, kron
from .models import ModelSpec

TRACE_PRESERVATION_ATOL = 1e-8
CHOI_EIG_FLOOR = -1e-8


@dataclass(frozen=True)
class Superoperator:
    """A d^2 x d^2 generator acting on row-stacked d x d operators."""

    dim: int
    matrix: np.ndarray
    picture: str  # "adjoint" | "state"

    def __post_init__(self):
        d2 = self.dim * self.dim
        if self.matrix.shape != (d2, d2):
            raise ValueError(
                f"superoperator matrix shape {self.matrix.shape} does not match "
                f"dim {self.dim} (expected {d2}x{d2})")
        if self.picture not in ("adjoint", "state"):
            raise ValueError(f"unknown picture {self.picture!r}")


@dataclass(frozen=True)
class PropagatorFamily:
    """Time-indexed propagator matrices exp(t_i * L) of one superoperator."""

    times: np.ndarray
    maps: np.ndarray  # shape (n_times, d^2, d^2)
    dim: int
    picture: str

    def __post_init__(self):
        if len(self.times) != self.maps.shape[0]:
            raise ValueError("times and maps lengths differ")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly ascending")


def _commutator_part(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0], dtype=complex)
    return kron(h, eye) - kron(eye, h.T)


def _dissipator_adjoint(op: np.ndarray, rate: float) -> np.ndarray:
    eye = np.eye(op.shape[0], dtype=complex)
    oo = op.conj().T @ op
    return rate * (kron(op.conj().T, op.T)
                   - 0.5 * (kron(oo, eye) + kron(eye, oo.T)))


def _dissipator_state(op: np.ndarray, rate: float) -> np.ndarray:
    eye = np.eye(op.shape[0], dtype=complex)
    oo = op.conj().T @ op
    return rate * (kron(op, op.conj())
                   - 0.5 * (kron(oo, eye) + kron(eye, oo.T)))


def build_adjoint_liouvillian(model: ModelSpec) -> Superoperator:
    """Heisenberg-picture generator: devec(L vec(O)) = i[H,O] + sum_k dissipators."""
    mat = 1j * _commutator_part(model.hamiltonian)
    for op, rate in model.jumps:
        mat = mat + _dissipator_adjoint(op, rate)
    return Superoperator(dim=model.space.d, matrix=mat, picture="adjoint")


def build_state_liouvillian(model: ModelSpec) -> Superoperator:
    """Schrodinger-picture generator: devec(L vec(rho)) = -i[H,rho] + sum_k dissipators."""
    mat = -1j * _commutator_part(model.hamiltonian)
    for op, rate in model.jumps:
        mat = mat + _dissipator_state(op, rate)
    return Superoperator(dim=model.space.d, matrix=mat, picture="state")


def propagate(super_op: Superoperator, times: np.ndarray) -> PropagatorFamily:
    """Propagators exp(t_i * L) on an ascending time grid (t_i >= 0).

    Uniform grids are propagated by accumulating powers of the single-step
    map exp(dt * L); other grids fall back to one matrix exponential per time.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if times[0] < 0:
        raise ValueError("times must be non-negative")
    d2 = super_op.dim ** 2
    n = len(times)
    maps = np.empty((n, d2, d2), dtype=complex)

    steps = np.diff(times)
    uniform = n > 1 and np.allclose(steps, steps[0], rtol=1e-12, atol=1e-12)
    if uniform:
        e_step = expm(steps[0] * super_op.matrix)
        current = np.eye(d2, dtype=complex) if times[0] == 0.0 \
            else expm(times[0] * super_op.matrix)
        for i in range(n):
            maps[i] = current
            if i + 1 < n:
                current = current @ e_step
    else:
        for i, t in enumerate(times):
            maps[i] = np.eye(d2, dtype=complex) if t == 0.0 \
                else expm(t * super_op.matrix)
    return PropagatorFamily(times=times, maps=maps, dim=super_op.dim,
                            picture=super_op.picture)


def unitary_adjoint_propagators(h: np.ndarray, times: np.ndarray) -> PropagatorFamily:
    """Adjoint propagators of closed dynamics, O -> U^dag O U with U = exp(-iHt).

    Computed from the Hermitian eigendecomposition of H (exact at every time),
    not by exponentiating the zero-rate Lindbladian.
    """
    times = np.asarray(times, dtype=float)
    w, v = herm_eig(h)
    d = h.shape[0]
    maps = np.empty((len(times), d * d, d * d), dtype=complex)
    for i, t in enumerate(times):
        u = (v * np.exp(-1j * w * t)) @ v.conj().T
        maps[i] = kron(u.conj().T, u.T)
    return PropagatorFamily(times=times, maps=maps, dim=d, picture="adjoint")


@dataclass
class CptpReport:
    """Structural checks of a propagator family at sampled times."""

    times: np.ndarray
    identity_errors: np.ndarray       # adjoint unitality / state trace preservation
    choi_min_eigs: np.ndarray         # state-picture Choi positivity
    choi_herm_errors: np.ndarray
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _choi_matrix(state_map: np.ndarray, d: int) -> np.ndarray:
    # state_map[(i,j),(k,l)] carries |k><l| -> E(|k><l|)[i,j]; the Choi matrix
    # C[(k,i),(l,j)] = E(|k><l|)[i,j] is an index permutation of it.
    return state_map.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)


def check_cptp(super_op: Superoperator, t_samples: np.ndarray,
               atol: float = TRACE_PRESERVATION_ATOL,
               choi_floor: float = CHOI_EIG_FLOOR) -> CptpReport:
    """Verify unitality / trace preservation and Choi positivity at sampled times.

    Failures are collected in the report, never raised.
    """
    t_samples = np.asarray(t_samples, dtype=float)
    d = super_op.dim
    vec_eye = np.eye(d, dtype=complex).reshape(-1)
    id_errors = np.empty(len(t_samples))
    choi_mins = np.empty(len(t_samples))
    choi_herm = np.empty(len(t_samples))
    failures: list[str] = []

    for i, t in enumerate(t_samples):
        e_t = expm(t * super_op.matrix)
        if super_op.picture == "adjoint":
            id_errors[i] = np.max(np.abs(e_t @ vec_eye - vec_eye))
            state_map = e_t.conj().T
            kind = "unitality"
        else:
            id_errors[i] = np.max(np.abs(vec_eye.conj() @ e_t - vec_eye))
            state_map = e_t
            kind = "trace preservation"
        if id_errors[i] > atol:
            failures.append(f"t={t}: {kind} violated by {id_errors[i]:.3e}")

        choi = _choi_matrix(state_map, d)
        choi_herm[i] = np.max(np.abs(choi - choi.conj().T))
        eigs = np.linalg.eigvalsh((choi + choi.conj().T) / 2)
        choi_mins[i] = eigs.min()
        if choi_mins[i] < choi_floor:
            failures.append(f"t={t}: Choi matrix not positive, min eig {choi_mins[i]:.3e}")
        if choi_herm[i] > 1e-7:
            failures.append(f"t={t}: Choi matrix not Hermitian, deviation {choi_herm[i]:.3e}")

    return CptpReport(times=t_samples, identity_errors=id_errors,
                      choi_min_eigs=choi_mins, choi_herm_errors=choi_herm,
                      failures=failures)
