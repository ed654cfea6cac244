"""Built-in invariant and oracle checks for the `check` CLI command.

A condensed, fast subset of the test suite: structural identities that must
hold for any correct build, runnable without pytest in an installed
environment.  Each check prints one ok/FAIL line.
"""

from __future__ import annotations

import numpy as np

from .linalg import (BipartiteSpace, apply_factorwise, devectorize, expm,
                     kron, vectorize)
from .liouville import (build_adjoint_liouvillian, build_state_liouvillian,
                        check_cptp, propagate, unitary_adjoint_propagators)
from .models import IsingParams, build_dicke, build_ising, build_tc
from .scrambling import build_swaps, operator_entanglement, otoc_open, otoc_unitary


def _models():
    dicke = build_dicke(2.0, 2.0, 1.0, gamma=0.05, kappa=0.05)
    tc = build_tc(2.0, 2.0, 1.0, gamma=0.05, kappa=0.05)
    ising = build_ising(IsingParams(n_sites=3, field=0.5, theta=7 * np.pi / 16,
                                    coupling=0.5, temperatures=(1.0,)), gamma=0.05)
    return [dicke, tc, ising]


def _check_swap_algebra() -> tuple[bool, str]:
    for d_a, d_b in ((2, 2), (2, 3), (3, 3)):
        s = build_swaps(BipartiteSpace(d_a, d_b))
        d = d_a * d_b
        eye = np.eye(d * d)
        if not (np.array_equal(s.aa @ s.bb, s.full)
                and np.array_equal(s.bb @ s.aa, s.full)
                and np.array_equal(s.full @ s.full, eye)
                and np.array_equal(s.aa @ s.aa, eye)
                and np.array_equal(s.bb @ s.bb, eye)
                and s.full.trace() == d
                and s.aa.trace() == d_a * d_b ** 2):
            return False, f"swap identities broken at ({d_a},{d_b})"
    return True, "swap algebra exact at (2,2), (2,3), (3,3)"


def _check_vec_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(11)
    worst = 0.0
    for dim in (2, 3, 4):
        for _ in range(20):
            a, x, b = (rng.standard_normal((dim, dim))
                       + 1j * rng.standard_normal((dim, dim)) for _ in range(3))
            lhs = vectorize(a @ x @ b)
            rhs = kron(a, b.T) @ vectorize(x)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst < 1e-12, f"vec(AXB) = (A (x) B^T) vec(X), worst dev {worst:.1e}"


def _check_expm() -> tuple[bool, str]:
    rng = np.random.default_rng(5)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    dev = float(np.max(np.abs(expm(m) @ expm(-m) - np.eye(12))))
    return dev < 1e-8, f"expm(M) expm(-M) = I, dev {dev:.1e}"


def _check_duality() -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    worst = 0.0
    for model in _models():
        d = model.space.d
        l_adj = build_adjoint_liouvillian(model).matrix
        l_state = build_state_liouvillian(model).matrix
        for _ in range(5):
            o = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            rho = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            lhs = np.trace(devectorize(l_adj @ vectorize(o), d).conj().T @ rho)
            rhs = np.trace(o.conj().T @ devectorize(l_state @ vectorize(rho), d))
            worst = max(worst, abs(lhs - rhs))
    return worst < 1e-10, f"adjoint/state duality, worst dev {worst:.1e}"


def _check_unitality() -> tuple[bool, str]:
    worst = 0.0
    for model in _models():
        d = model.space.d
        vec_eye = np.eye(d).reshape(-1)
        worst = max(worst, float(np.max(np.abs(
            build_adjoint_liouvillian(model).matrix @ vec_eye))))
        worst = max(worst, float(np.max(np.abs(
            vec_eye @ build_state_liouvillian(model).matrix))))
    return worst < 1e-10, f"adjoint unitality / state trace preservation, worst {worst:.1e}"


def _check_zero_rate_reduction() -> tuple[bool, str]:
    model = build_dicke(2.0, 2.0, 1.0)
    times = np.linspace(0.0, 3.0, 7)
    props = propagate(build_adjoint_liouvillian(model), times)
    g_open = otoc_open(props, model.space)
    g_unitary = otoc_unitary(model.hamiltonian, model.space, times)
    dev = float(np.max(np.abs(g_open.values - g_unitary.values)))
    return dev < 1e-8, f"zero-rate open OTOC equals unitary OTOC, dev {dev:.1e}"


def _check_otoc_zero() -> tuple[bool, str]:
    worst = 0.0
    for model in _models():
        props = propagate(build_adjoint_liouvillian(model), np.array([0.0, 0.5]))
        worst = max(worst, abs(otoc_open(props, model.space).values[0]))
    return worst < 1e-10, f"G(0) = 0 for all models, worst {worst:.1e}"


def _check_op_entanglement() -> tuple[bool, str]:
    model = build_ising(IsingParams(n_sites=3, field=0.5, theta=7 * np.pi / 16,
                                    coupling=0.5), gamma=0.0)
    times = np.linspace(0.0, 5.0, 11)
    g = otoc_unitary(model.hamiltonian, model.space, times)
    e_op = operator_entanglement(model.hamiltonian, model.space, times)
    dev = float(np.max(np.abs(g.values - e_op.values)))
    return dev < 1e-10, f"operator entanglement equals unitary OTOC, dev {dev:.1e}"


def _check_cptp_models() -> tuple[bool, str]:
    for model in _models():
        report = check_cptp(build_state_liouvillian(model), np.array([0.5, 2.0]))
        if not report.passed:
            return False, f"CPTP checks failed for {model.label}: {report.failures[:1]}"
    return True, "trace preservation and Choi positivity for all models"


def _check_factorwise_dense() -> tuple[bool, str]:
    rng = np.random.default_rng(17)
    space = BipartiteSpace(2, 2)
    d = space.d
    m = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
    target = build_swaps(space).aa.astype(complex)
    seq = apply_factorwise(m, apply_factorwise(m, target, 1), 2)
    t4 = target.reshape(d, d, d, d)
    r = t4.transpose(0, 2, 1, 3).reshape(d * d * d * d)
    dense = (kron(m, m) @ r).reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    dev = float(np.max(np.abs(seq - dense)))
    return dev < 1e-10, f"factorwise two-copy map equals dense oracle, dev {dev:.1e}"


def fock_convergence(coupling: float = 1.5, n_max: int = 3,
                     t_max: float = 10.0, points: int = 40) -> float:
    """Sup-norm change of the open Dicke OTOC when the Fock cutoff doubles."""
    times = np.linspace(0.0, t_max, points)
    values = []
    for cutoff in (n_max, 2 * n_max):
        model = build_dicke(2.0, 2.0, coupling, n_max=cutoff, gamma=0.05, kappa=0.05)
        props = propagate(build_adjoint_liouvillian(model), times)
        values.append(otoc_open(props, model.space).values)
    return float(np.max(np.abs(values[0] - values[1])))


CHECKS = [
    ("swap-algebra", _check_swap_algebra),
    ("vectorization-identity", _check_vec_identity),
    ("expm-inverse", _check_expm),
    ("adjoint-state-duality", _check_duality),
    ("unitality-trace-preservation", _check_unitality),
    ("zero-rate-reduction", _check_zero_rate_reduction),
    ("otoc-vanishes-at-t0", _check_otoc_zero),
    ("operator-entanglement-identity", _check_op_entanglement),
    ("cptp-structure", _check_cptp_models),
    ("factorwise-dense-oracle", _check_factorwise_dense),
]


def run_checks(fock: bool = False, coupling: float = 1.5) -> bool:
    """Run all checks, print one line each; returns overall success."""
    ok = True
    for name, fn in CHECKS:
        passed, detail = fn()
        ok &= passed
        print(f"[{'ok' if passed else 'FAIL'}] {name}: {detail}")
    if fock:
        delta = fock_convergence(coupling=coupling)
        print(f"[info] fock-cutoff-convergence: doubling n_max changes the "
              f"coupling={coupling} Dicke OTOC by {delta:.3e} (sup norm)")
    return ok
