"""Swap operators, Haar-averaged bipartite OTOCs, and operator entanglement.

The bipartite OTOC G(t) is the Haar average over local unitaries V on A and
W on B of the squared commutator norm (1/2d) ||[V_A(t), W_B]||_2^2.  It has
closed forms in terms of replica swap operators:

* closed dynamics:   G = 1 - (1/d^2) Tr(S_AA . U^(x)2 . S_AA . U^dag(x)2)
* open dynamics:     G = (1/d^2) Tr{(S d_B - S_AA) (E^dag (x) E^dag)(S_AA)}

where S swaps the full space H with its replica H' and S_AA swaps only the
A factors.  The two-copy adjoint map is applied factorwise (one copy at a
time), never materialized as a d^4 x d^4 matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (BipartiteSpace, apply_factorwise, devectorize, herm_eig,
                     haar_unitary, kron, partial_trace, vectorize)
from .liouville import PropagatorFamily

OTOC_ZERO_ATOL = 1e-10
OTOC_IMAG_ATOL = 1e-10
OTOC_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class SwapSet:
    """Replica swap operators on H (x) H' for one bipartition.

    Basis ordering is (A, B, A', B') with A slowest.  ``full`` exchanges
    H with H', ``aa`` exchanges only A with A', ``bb`` only B with B'.
    All three are 0/1 permutation matrices squaring to the identity, with
    full = aa @ bb = bb @ aa; the row permutations are kept alongside for
    O(d^2) products with these operators.
    """

    space: BipartiteSpace
    full: np.ndarray
    aa: np.ndarray
    bb: np.ndarray
    full_perm: np.ndarray
    aa_perm: np.ndarray
    bb_perm: np.ndarray


def build_swaps(space: BipartiteSpace) -> SwapSet:
    """Construct the swap operators S, S_AA', S_BB' for the given bipartition."""
    d_a, d_b = space.d_a, space.d_b
    dd = space.d ** 2
    index = np.arange(dd).reshape(d_a, d_b, d_a, d_b)
    # row r = (a, b, a', b') maps to column perm[r] per swap:
    #   full: (a', b', a, b);  aa: (a', b, a, b');  bb: (a, b', a', b)
    perms = {
        "full": index.transpose(2, 3, 0, 1).reshape(-1),
        "aa": index.transpose(2, 1, 0, 3).reshape(-1),
        "bb": index.transpose(0, 3, 2, 1).reshape(-1),
    }
    mats = {}
    rows = np.arange(dd)
    for name, perm in perms.items():
        m = np.zeros((dd, dd))
        m[rows, perm] = 1.0
        mats[name] = m
    return SwapSet(space=space, full=mats["full"], aa=mats["aa"], bb=mats["bb"],
                   full_perm=perms["full"], aa_perm=perms["aa"], bb_perm=perms["bb"])


@dataclass(frozen=True)
class OtocSeries:
    """A bipartite OTOC time series with values in [0, 1].

    ``kind`` is one of "unitary", "open", "haar_mc"; Monte-Carlo series carry
    the per-time standard error of the mean and the sample count.
    """

    times: np.ndarray
    values: np.ndarray
    kind: str
    stderr: np.ndarray | None = None
    n_samples: int | None = None

    def __post_init__(self):
        if self.kind not in ("unitary", "open", "haar_mc"):
            raise ValueError(f"unknown OTOC kind {self.kind!r}")
        if len(self.times) != len(self.values):
            raise ValueError("times and values lengths differ")
        if len(self.times) and self.times[0] == 0.0 \
                and abs(self.values[0]) > OTOC_ZERO_ATOL:
            raise ValueError(f"OTOC at t=0 must vanish, got {self.values[0]:.3e}")
        if len(self.values) and (self.values.min() < -OTOC_RANGE_SLACK
                                 or self.values.max() > 1 + OTOC_RANGE_SLACK):
            raise ValueError(
                f"OTOC values outside [0, 1]: range "
                f"[{self.values.min():.3e}, {self.values.max():.3e}]")


def _real_checked(value: complex, context: str) -> float:
    if abs(value.imag) > OTOC_IMAG_ATOL:
        raise ValueError(f"{context}: imaginary residue {value.imag:.3e} exceeds "
                         f"{OTOC_IMAG_ATOL:.1e}")
    return value.real


def _unitary_at(w: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def otoc_unitary(h: np.ndarray, space: BipartiteSpace,
                 times: np.ndarray) -> OtocSeries:
    """Bipartite OTOC of closed dynamics U_t = exp(-iHt) via the swap closed form."""
    if h.shape != (space.d, space.d):
        raise ValueError(f"hamiltonian shape {h.shape} does not match d = {space.d}")
    times = np.asarray(times, dtype=float)
    w, v = herm_eig(h)
    swaps = build_swaps(space)
    d2 = space.d ** 2
    values = np.empty(len(times))
    for i, t in enumerate(times):
        u2 = kron(*(2 * (_unitary_at(w, v, t),)))
        # Tr(S_AA U2 S_AA U2^dag) as Tr[(S_AA U2)(S_AA U2^dag)] with S_AA a
        # row permutation; the product trace is an elementwise contraction.
        left = u2[swaps.aa_perm]
        right = u2.conj().T[swaps.aa_perm]
        tr = np.sum(left * right.T)
        values[i] = _real_checked(1 - tr / d2, f"otoc_unitary at t={t}")
    return OtocSeries(times=times, values=values, kind="unitary")


def _trace_perm_product(perm: np.ndarray, x: np.ndarray) -> complex:
    # Tr(P X) with P[i, perm[i]] = 1 equals sum_i X[perm[i], i].
    return x[perm, np.arange(x.shape[0])].sum()


def otoc_open(props: PropagatorFamily, space: BipartiteSpace) -> OtocSeries:
    """Bipartite OTOC of open dynamics from adjoint-picture propagators.

    Per time: apply the adjoint map factorwise to both replica copies of
    S_AA, then evaluate (1/d^2) Tr[(S d_B - S_AA) X].  Matches the unitary
    closed form when all rates vanish.
    """
    if props.picture != "adjoint":
        raise ValueError(f"otoc_open needs adjoint-picture propagators, "
                         f"got {props.picture!r}")
    if props.dim != space.d:
        raise ValueError(f"propagator dimension {props.dim} does not match "
                         f"space dimension {space.d}")
    swaps = build_swaps(space)
    d, d_b = space.d, space.d_b
    s_aa = swaps.aa.astype(complex)
    values = np.empty(len(props.times))
    for i in range(len(props.times)):
        e_t = props.maps[i]
        x = apply_factorwise(e_t, s_aa, copy=1)
        x = apply_factorwise(e_t, x, copy=2)
        tr = d_b * _trace_perm_product(swaps.full_perm, x) \
            - _trace_perm_product(swaps.aa_perm, x)
        values[i] = _real_checked(tr / d ** 2, f"otoc_open at t={props.times[i]}")
    return OtocSeries(times=props.times, values=values, kind="open")


def otoc_haar_mc(props: PropagatorFamily, space: BipartiteSpace,
                 n_pairs: int = 200,
                 rng: int | np.random.Generator | None = None) -> OtocSeries:
    """Monte-Carlo estimate of the bipartite OTOC from Haar-sampled unitary pairs.

    Each sample draws independent Haar unitaries V on A and W on B, embeds
    them as V (x) I_B and I_A (x) W, and evaluates
    (1/2d) || [E^dag(V_A), W_B] ||_2^2 under the adjoint propagator.  The same
    sample set is reused across the time grid; the series carries the mean
    and the standard error of the mean.
    """
    if props.picture != "adjoint":
        raise ValueError(f"otoc_haar_mc needs adjoint-picture propagators, "
                         f"got {props.picture!r}")
    if props.dim != space.d:
        raise ValueError(f"propagator dimension {props.dim} does not match "
                         f"space dimension {space.d}")
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    d, d_a, d_b = space.d, space.d_a, space.d_b
    eye_a = np.eye(d_a, dtype=complex)
    eye_b = np.eye(d_b, dtype=complex)
    pairs = [(kron(haar_unitary(d_a, gen), eye_b), kron(eye_a, haar_unitary(d_b, gen)))
             for _ in range(n_pairs)]

    values = np.empty(len(props.times))
    stderr = np.empty(len(props.times))
    samples = np.empty(n_pairs)
    for i in range(len(props.times)):
        e_t = props.maps[i]
        for k, (v_a, w_b) in enumerate(pairs):
            evolved = devectorize(e_t @ vectorize(v_a), d)
            comm = evolved @ w_b - w_b @ evolved
            samples[k] = np.sum(np.abs(comm) ** 2) / (2 * d)
        values[i] = samples.mean()
        stderr[i] = samples.std(ddof=1) / math.sqrt(n_pairs) if n_pairs > 1 else 0.0
    return OtocSeries(times=props.times, values=values, kind="haar_mc",
                      stderr=stderr, n_samples=n_pairs)


def operator_entanglement(h: np.ndarray, space: BipartiteSpace,
                          times: np.ndarray) -> OtocSeries:
    """Linear entropy of the evolution operator across the AA'|BB' replica cut.

    |U> = (U (x) I)|psi+> with |psi+> the maximally entangled state pairing
    the composite AB index with its replica; the B and B' factors are traced
    out and E_op = 1 - Tr(sigma_U^2) is returned.  Coincides pointwise with
    the unitary bipartite OTOC.
    """
    if h.shape != (space.d, space.d):
        raise ValueError(f"hamiltonian shape {h.shape} does not match d = {space.d}")
    times = np.asarray(times, dtype=float)
    w, v = herm_eig(h)
    d, d_a, d_b = space.d, space.d_a, space.d_b
    psi = np.eye(d, dtype=complex).reshape(-1) / math.sqrt(d)  # sum_j |j>|j> / sqrt(d)
    eye = np.eye(d, dtype=complex)
    values = np.empty(len(times))
    for i, t in enumerate(times):
        ket = kron(_unitary_at(w, v, t), eye) @ psi
        rho = np.outer(ket, ket.conj())
        sigma_u = partial_trace(rho, (d_a, d_b, d_a, d_b), keep=(0, 2))
        purity = np.sum(np.abs(sigma_u) ** 2)  # Tr(sigma^2) for Hermitian sigma
        values[i] = 1.0 - float(purity)
    return OtocSeries(times=times, values=values, kind="unitary")
