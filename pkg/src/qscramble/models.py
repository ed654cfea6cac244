"""Model Hamiltonians and their Lindblad jump-operator sets.

Three families are provided: the Dicke model (N two-level atoms coupled to a
single bosonic mode, counter-rotating terms included), the Tavis-Cummings
model (rotating-wave version of the same), and an open-boundary Ising chain
in a tilted magnetic field.  The atomic / left-block subsystem is always the
A factor of the bipartition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import BipartiteSpace, kron
from .operators import boson_ops, collective_spin, pauli_site

_H_ATOL = 1e-10


@dataclass(frozen=True)
class BathSpec:
    """A thermal bath: coupling rate, temperature (k_B = 1), and transition frequency."""

    rate: float
    temperature: float
    transition_frequency: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"bath rate must be >= 0, got {self.rate}")
        if self.temperature < 0:
            raise ValueError(f"bath temperature must be >= 0, got {self.temperature}")
        if self.transition_frequency <= 0:
            raise ValueError(
                f"transition frequency must be > 0, got {self.transition_frequency}")

    @property
    def n_thermal(self) -> float:
        """Mean thermal occupation 1/(exp(w/T) - 1); exactly 0 at T = 0."""
        if self.temperature == 0.0:
            return 0.0
        return 1.0 / math.expm1(self.transition_frequency / self.temperature)


@dataclass(frozen=True)
class ModelSpec:
    """A Hamiltonian with its dissipative jump operators on a bipartite space.

    ``jumps`` holds (operator, rate) pairs, each operator acting on the full
    composite space; zero-rate jumps are omitted by the builders.  ``h_system``
    is the bare A-subsystem Hamiltonian that the local baths reference; its
    ground state is the default initial system state for the thermodynamic
    observables.
    """

    space: BipartiteSpace
    hamiltonian: np.ndarray
    jumps: tuple[tuple[np.ndarray, float], ...]
    label: str
    h_system: np.ndarray | None = None

    def __post_init__(self):
        d = self.space.d
        h = self.hamiltonian
        if h.shape != (d, d):
            raise ValueError(f"hamiltonian shape {h.shape} does not match d = {d}")
        dev = np.max(np.abs(h - h.conj().T))
        if dev > _H_ATOL:
            raise ValueError(f"hamiltonian is not Hermitian: max deviation {dev:.3e}")
        for op, rate in self.jumps:
            if op.shape != (d, d):
                raise ValueError(f"jump operator shape {op.shape} does not match d = {d}")
            if rate < 0:
                raise ValueError(f"jump rate must be >= 0, got {rate}")


@dataclass(frozen=True)
class IsingParams:
    """Parameters of the tilted-field Ising chain.

    ``theta`` tilts the field from longitudinal (0) to transverse (pi/2).
    ``split`` is the number of leading chain sites forming subsystem A.
    ``bath_topology`` selects which sites couple to baths: every site
    ("uniform") or only the first and last ("boundary"); ``temperatures`` then
    lists one value per acted-upon site (a single value is broadcast for the
    uniform topology).  Every spin has transition frequency 2 * field.
    ``boundary_bond_scale`` rescales the coupling of the bond crossing the
    A|B cut (weak system-environment coupling scenarios).
    """

    n_sites: int
    field: float
    theta: float
    coupling: float
    split: int = 1
    bath_topology: str = "uniform"
    temperatures: tuple[float, ...] = (0.0,)
    boundary_bond_scale: float = 1.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if not 0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not 1 <= self.split < self.n_sites:
            raise ValueError(
                f"split must satisfy 1 <= split < n_sites, got {self.split}")
        if self.bath_topology not in ("uniform", "boundary"):
            raise ValueError(f"unknown bath topology {self.bath_topology!r}")
        n_acted = self.n_sites if self.bath_topology == "uniform" else 2
        n_temp = len(self.temperatures)
        if n_temp not in (1, n_acted):
            raise ValueError(
                f"{self.bath_topology!r} topology needs 1 or {n_acted} temperatures, "
                f"got {n_temp}")

    @property
    def site_temperatures(self) -> tuple[tuple[int, float], ...]:
        """(site, temperature) pairs for the bath-coupled sites, 1-based."""
        if self.bath_topology == "uniform":
            sites = tuple(range(1, self.n_sites + 1))
        else:
            sites = (1, self.n_sites)
        temps = self.temperatures
        if len(temps) == 1:
            temps = temps * len(sites)
        return tuple(zip(sites, temps))


def _atom_field_parts(n_atoms: int, n_max: int):
    spin = collective_spin(n_atoms / 2.0)
    boson = boson_ops(n_max)
    space = BipartiteSpace(spin.dim, n_max)
    eye_a = np.eye(spin.dim, dtype=complex)
    eye_b = np.eye(n_max, dtype=complex)
    return spin, boson, space, eye_a, eye_b


def _atom_field_jumps(spin, boson, eye_a, eye_b, gamma, kappa,
                      temp_a, temp_b, omega0, omega_c):
    bath_a = BathSpec(gamma, temp_a, omega0)
    bath_b = BathSpec(kappa, temp_b, omega_c)
    n_a, n_b = bath_a.n_thermal, bath_b.n_thermal
    candidates = [
        (kron(spin.jm, eye_b), gamma * (n_a + 1)),
        (kron(spin.jp, eye_b), gamma * n_a),
        (kron(eye_a, boson.a), kappa * (n_b + 1)),
        (kron(eye_a, boson.a_dag), kappa * n_b),
    ]
    return tuple((op, rate) for op, rate in candidates if rate > 0)


def _validate_atom_field(omega0, omega_c, coupling, n_atoms, n_max):
    if omega0 <= 0 or omega_c <= 0:
        raise ValueError(f"frequencies must be > 0, got omega0={omega0}, omega_c={omega_c}")
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    del coupling  # any real value is admissible


def build_dicke(omega0: float, omega_c: float, coupling: float,
                n_atoms: int = 2, n_max: int = 3,
                gamma: float = 0.0, kappa: float = 0.0,
                temp_a: float = 0.0, temp_b: float = 0.0) -> ModelSpec:
    """Dicke model: H = omega0*Jz + omega_c*n + (coupling/sqrt(N)) Jx (a + a^dag).

    The atomic pseudospin (length N/2) is subsystem A, the truncated field
    mode is subsystem B.  Dissipation: collective emission/absorption with
    rates gamma*(n_th+1), gamma*n_th and cavity decay/pumping with rates
    kappa*(n_th+1), kappa*n_th; thermal occupations use the subsystem
    transition frequencies omega0 and omega_c.
    """
    _validate_atom_field(omega0, omega_c, coupling, n_atoms, n_max)
    spin, boson, space, eye_a, eye_b = _atom_field_parts(n_atoms, n_max)
    h = (omega0 * kron(spin.jz, eye_b)
         + omega_c * kron(eye_a, boson.num)
         + (coupling / math.sqrt(n_atoms)) * kron(spin.jx, boson.a + boson.a_dag))
    jumps = _atom_field_jumps(spin, boson, eye_a, eye_b, gamma, kappa,
                              temp_a, temp_b, omega0, omega_c)
    return ModelSpec(space=space, hamiltonian=h, jumps=jumps, label="dicke",
                     h_system=omega0 * spin.jz)


def build_tc(omega0: float, omega_c: float, coupling: float,
             n_atoms: int = 2, n_max: int = 3,
             gamma: float = 0.0, kappa: float = 0.0,
             temp_a: float = 0.0, temp_b: float = 0.0) -> ModelSpec:
    """Tavis-Cummings model: the Dicke model without counter-rotating terms.

    H = omega0*Jz + omega_c*n + (coupling/(2 sqrt(N))) (J+ a + J- a^dag);
    the total excitation number n + Jz is conserved.  Dissipators as in
    :func:`build_dicke`.
    """
    _validate_atom_field(omega0, omega_c, coupling, n_atoms, n_max)
    spin, boson, space, eye_a, eye_b = _atom_field_parts(n_atoms, n_max)
    h = (omega0 * kron(spin.jz, eye_b)
         + omega_c * kron(eye_a, boson.num)
         + (coupling / (2 * math.sqrt(n_atoms)))
         * (kron(spin.jp, boson.a) + kron(spin.jm, boson.a_dag)))
    jumps = _atom_field_jumps(spin, boson, eye_a, eye_b, gamma, kappa,
                              temp_a, temp_b, omega0, omega_c)
    return ModelSpec(space=space, hamiltonian=h, jumps=jumps, label="tc",
                     h_system=omega0 * spin.jz)


def build_ising(params: IsingParams, gamma: float) -> ModelSpec:
    """Tilted-field Ising chain with open boundaries and local spin baths.

    H = field * sum_i (sin(theta) sx_i + cos(theta) sz_i)
        + coupling * sum_{i=1}^{N-1} sz_i sz_{i+1},
    with the bond crossing the A|B cut rescaled by ``boundary_bond_scale``.
    Each bath-coupled site j contributes jumps sigma-_j with rate
    gamma*(n_th+1) and sigma+_j with rate gamma*n_th, where n_th is evaluated
    at the spin transition frequency 2 * field.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if params.field <= 0:
        raise ValueError(f"field must be > 0, got {params.field}")
    n = params.n_sites
    dim = 2 ** n
    h = np.zeros((dim, dim), dtype=complex)
    sin_t, cos_t = math.sin(params.theta), math.cos(params.theta)
    for i in range(1, n + 1):
        h += params.field * (sin_t * pauli_site(n, i, "x").embedded
                             + cos_t * pauli_site(n, i, "z").embedded)
    for i in range(1, n):
        scale = params.boundary_bond_scale if i == params.split else 1.0
        h += scale * params.coupling * (pauli_site(n, i, "z").embedded
                                        @ pauli_site(n, i + 1, "z").embedded)

    jumps = []
    omega = 2.0 * params.field
    for site, temp in params.site_temperatures:
        n_th = BathSpec(gamma, temp, omega).n_thermal
        for which, rate in (("-", gamma * (n_th + 1)), ("+", gamma * n_th)):
            if rate > 0:
                jumps.append((pauli_site(n, site, which).embedded, rate))

    k = params.split
    h_sys = np.zeros((2 ** k, 2 ** k), dtype=complex)
    for i in range(1, k + 1):
        h_sys += params.field * pauli_site(k, i, "z").embedded
    space = BipartiteSpace(2 ** k, 2 ** (n - k))
    return ModelSpec(space=space, hamiltonian=h, jumps=tuple(jumps), label="ising",
                     h_system=h_sys)
