"""Entropies, entropy production, and correlation entropy.

Two settings are covered:

* a closed system+environment pair evolving unitarily, where entropy
  production is the relative entropy between the evolved joint state and
  the product of the evolved system marginal with the *initial* environment
  state, and the correlation entropy is minus the relative entropy to the
  product of both evolved marginals;
* weakly coupled GKSL dynamics, where entropy production reduces to the
  decrease of the relative entropy to the Gibbs state.

All entropies are in nats.  Relative entropy returns ``math.inf`` when the
first state has support outside the second's ("flagged sentinel"); it is
never silently clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import herm_eig, kron, partial_trace, SUPPORT_CLAMP
from .liouville import build_state_liouvillian, propagate
from .models import ModelSpec

DENSITY_ATOL = 1e-10
SUPPORT_TOL = 1e-8


def validate_density_matrix(rho: np.ndarray, atol: float = DENSITY_ATOL,
                            name: str = "state") -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity; return eigenvalues ascending."""
    rho = np.asarray(rho)
    w, _ = herm_eig(rho, atol=atol)
    tr_dev = abs(np.trace(rho).real - 1.0)
    if tr_dev > atol:
        raise ValueError(f"{name} is not normalized: |Tr - 1| = {tr_dev:.3e}")
    if w.min() < -atol:
        raise ValueError(f"{name} is not positive: min eigenvalue {w.min():.3e}")
    return w


def vn_entropy(rho: np.ndarray, clamp: float = SUPPORT_CLAMP) -> float:
    """Von Neumann entropy -sum(p ln p) with the 0 ln 0 = 0 convention."""
    w = validate_density_matrix(rho)
    w = w[w > clamp]
    return float(-np.sum(w * np.log(w)))


def rel_entropy(rho: np.ndarray, sigma: np.ndarray,
                clamp: float = SUPPORT_CLAMP,
                support_tol: float = SUPPORT_TOL) -> float:
    """Quantum relative entropy Tr[rho (ln rho - ln sigma)].

    Returns ``math.inf`` when rho carries more than ``support_tol`` weight in
    the kernel of sigma.
    """
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"state dimensions differ: {rho.shape} vs {sigma.shape}")
    w_r = validate_density_matrix(rho, name="first state")
    w_s, v_s = herm_eig(sigma)
    validate_density_matrix(sigma, name="second state")

    support = w_s > clamp
    if not np.all(support):
        kernel = v_s[:, ~support]
        kernel_weight = float(np.einsum("ik,ij,jk->", kernel.conj(), rho, kernel).real)
        if kernel_weight > support_tol:
            return math.inf

    w_pos = w_r[w_r > clamp]
    tr_rho_ln_rho = float(np.sum(w_pos * np.log(w_pos)))
    # Tr(rho ln sigma) over sigma's support
    diag = np.einsum("ik,ij,jk->k", v_s.conj(), rho, v_s).real
    tr_rho_ln_sigma = float(np.sum(diag[support] * np.log(w_s[support])))
    return tr_rho_ln_rho - tr_rho_ln_sigma


def gibbs_state(h: np.ndarray, temperature: float) -> np.ndarray:
    """Thermal state exp(-H/T)/Z (k_B = 1); full rank for T > 0."""
    if temperature <= 0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    w, v = herm_eig(h)
    p = np.exp(-(w - w.min()) / temperature)
    p /= p.sum()
    return (v * p) @ v.conj().T


def ground_state_density(h: np.ndarray) -> np.ndarray:
    """Projector onto the lowest eigenvector of a Hermitian Hamiltonian."""
    _, v = herm_eig(h)
    ket = v[:, 0]
    return np.outer(ket, ket.conj())


def default_initial_states(model: ModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Default thermodynamic initial condition: bare-ground system, maximally mixed environment.

    The system half starts in the ground state of the model's bare A-subsystem
    Hamiltonian (``h_system``), the environment half in I/d_B.
    """
    if model.h_system is None:
        raise ValueError(f"model {model.label!r} does not define a bare system Hamiltonian")
    rho_s = ground_state_density(model.h_system)
    rho_e = np.eye(model.space.d_b, dtype=complex) / model.space.d_b
    return rho_s, rho_e


@dataclass(frozen=True)
class ThermoSeries:
    """Entropy production and correlation entropy on a time grid (nats)."""

    times: np.ndarray
    sigma: np.ndarray
    s_corr: np.ndarray

    @property
    def total(self) -> np.ndarray:
        """Pointwise sum sigma + s_corr (equals S(rho_E(t) || rho_E(0)))."""
        return self.sigma + self.s_corr


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def entropy_production_unitary(h: np.ndarray, dims: tuple[int, int],
                               rho_s0: np.ndarray, rho_e0: np.ndarray,
                               times: np.ndarray) -> ThermoSeries:
    """Entropy production and correlation entropy under closed joint evolution.

    The joint state rho_S (x) rho_E evolves as U rho U^dag with U = exp(-iHt);
    per time the series carries

    * sigma  = S(rho_SE(t) || rho_S(t) (x) rho_E(0))
    * s_corr = -S(rho_SE(t) || rho_S(t) (x) rho_E(t))

    Support violations surface as ``inf`` entries, reported per time point.
    """
    d_s, d_e = dims
    if h.shape != (d_s * d_e, d_s * d_e):
        raise ValueError(f"hamiltonian shape {h.shape} does not match dims {dims}")
    validate_density_matrix(rho_s0, name="initial system state")
    validate_density_matrix(rho_e0, name="initial environment state")
    times = np.asarray(times, dtype=float)
    w, v = herm_eig(h)
    rho0 = kron(rho_s0, rho_e0)
    sigma = np.empty(len(times))
    s_corr = np.empty(len(times))
    for i, t in enumerate(times):
        u = (v * np.exp(-1j * w * t)) @ v.conj().T
        rho_se = _hermitize(u @ rho0 @ u.conj().T)
        rho_s = _hermitize(partial_trace(rho_se, dims, keep=(0,)))
        rho_e = _hermitize(partial_trace(rho_se, dims, keep=(1,)))
        sigma[i] = rel_entropy(rho_se, kron(rho_s, rho_e0))
        s_corr[i] = -rel_entropy(rho_se, kron(rho_s, rho_e))
    return ThermoSeries(times=times, sigma=sigma, s_corr=s_corr)


def entropy_production_gksl(model: ModelSpec, rho0: np.ndarray,
                            times: np.ndarray, temperature: float) -> np.ndarray:
    """Weak-coupling entropy production under GKSL dynamics.

    sigma(t) = S(rho(0) || rho_eq) - S(rho(t) || rho_eq) with rho_eq the Gibbs
    state of the model Hamiltonian at the bath temperature.  The Gibbs state
    is full rank for T > 0, so no support violation can occur.
    """
    if not model.jumps:
        raise ValueError("entropy_production_gksl needs a model with nonzero rates")
    validate_density_matrix(rho0, name="initial state")
    rho_eq = gibbs_state(model.hamiltonian, temperature)
    if np.linalg.eigvalsh(rho_eq).min() <= SUPPORT_CLAMP:
        raise ValueError("Gibbs state is numerically rank deficient at this temperature")
    times = np.asarray(times, dtype=float)
    family = propagate(build_state_liouvillian(model), times)
    d = model.space.d
    vec0 = rho0.astype(complex).reshape(-1)
    s0 = rel_entropy(rho0, rho_eq)
    sigma = np.empty(len(times))
    for i in range(len(times)):
        rho_t = _hermitize(family.maps[i].dot(vec0).reshape(d, d))
        sigma[i] = s0 - rel_entropy(rho_t, rho_eq)
    return sigma
