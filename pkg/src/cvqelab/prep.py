"""Trapezoidal and guiding-state preparation.

The discretized adiabatic product applies, right to left on |phi0>:

    exp(-i H / 2 hbar_omega) * prod_{k=K-1..1} exp(-i H(k/K) / hbar_omega)

so the interpolation parameter eta climbs 1/K, 2/K, ..., (K-1)/K and ends
with the half-step at eta = 1.  The pure-model half-step is omitted (global
phase on the starting determinant).  The trapezoidal state uses exact
per-step exponentials; the guiding state replaces each exponential with an
ordered product of single-term Pauli rotations (first-order splitting, one
slice per step).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, PauliSum, interpolate, prune, to_dense
from .statevector import (
    StateVector,
    apply_propagator,
    apply_pauli_rotation,
    compile_pauli_action,
    exponential_propagator,
    init_fock,
)

TERM_ORDERS = ("magnitude_desc", "magnitude_asc", "canonical", "canonical_reversed")
CONDITION_MARGIN = 0.5


@dataclass(frozen=True)
class PrepSchedule:
    steps: tuple[tuple[float, float], ...]  # (eta, scale 1/Hartree), application order
    K: int
    hbar_omega: float


@dataclass(frozen=True)
class TrotterConfig:
    term_order: str = "magnitude_desc"
    prune_threshold: float = 0.0   # Hartree
    drop_diagonal: bool = False

    def __post_init__(self):
        if self.term_order not in TERM_ORDERS:
            raise ValueError(f"term_order must be one of {TERM_ORDERS}")


@dataclass(frozen=True)
class ConditionReport:
    left_ratio: float       # (hbar_omega / K) / hbar_omega0
    right_ratio: float      # hbar_omega0 / hbar_omega
    left_satisfied: bool
    right_satisfied: bool
    margin: float = CONDITION_MARGIN


@dataclass(frozen=True)
class CircuitStats:
    term_count_per_step: tuple[int, ...]
    total_rotations: int
    cnot_estimate: int
    depth_proxy: int


def build_schedule(K: int, hbar_omega: float) -> PrepSchedule:
    """K-step schedule: K-1 full steps at eta = k/K plus the final half-step."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if hbar_omega <= 0:
        raise ValueError("hbar_omega must be positive")
    steps = [(k / K, 1.0 / hbar_omega) for k in range(1, K)]
    steps.append((1.0, 0.5 / hbar_omega))
    return PrepSchedule(steps=tuple(steps), K=K, hbar_omega=hbar_omega)


def prepare_trapezoidal(
    h0: PauliSum, h: PauliSum, schedule: PrepSchedule, phi0: int
) -> StateVector:
    """Exact-exponential staircase from |phi0>; the pTD source state."""
    if h0.n_qubits != h.n_qubits:
        raise ValueError("qubit count mismatch")
    state = init_fock(phi0, h.n_qubits)
    h0_dense = to_dense(h0)
    h_dense = to_dense(h)
    for eta, scale in schedule.steps:
        mat = (1.0 - eta) * h0_dense + eta * h_dense
        evals, evecs = exponential_propagator(mat)
        state = apply_propagator(state, evals, evecs, scale)
    return state


def ordered_terms(h: PauliSum, order: str) -> list[tuple[PauliString, float]]:
    items = list(h.items())
    if order == "magnitude_desc":
        items.sort(key=lambda kv: (-abs(kv[1]), kv[0].ops))
    elif order == "magnitude_asc":
        items.sort(key=lambda kv: (abs(kv[1]), kv[0].ops))
    elif order == "canonical":
        items.sort(key=lambda kv: kv[0].ops)
    elif order == "canonical_reversed":
        items.sort(key=lambda kv: kv[0].ops, reverse=True)
    else:
        raise ValueError(f"unknown term order {order!r}")
    return items


def prepare_guiding(
    h0: PauliSum,
    h: PauliSum,
    schedule: PrepSchedule,
    phi0: int,
    trotter: TrotterConfig = TrotterConfig(),
    _compiled_cache: dict | None = None,
) -> StateVector:
    """First-order-split staircase (one slice per step); the pGD source state."""
    if h0.n_qubits != h.n_qubits:
        raise ValueError("qubit count mismatch")
    state = init_fock(phi0, h.n_qubits)
    cache = _compiled_cache if _compiled_cache is not None else {}
    identity = PauliString.identity(h.n_qubits)
    for eta, scale in schedule.steps:
        step_h = prune(
            interpolate(h0, h, eta), trotter.prune_threshold, trotter.drop_diagonal
        )
        for string, coeff in ordered_terms(step_h, trotter.term_order):
            angle = coeff * scale
            if string == identity:
                state = StateVector(
                    np.exp(-1j * angle) * state.amplitudes, state.n_qubits
                )
                continue
            compiled = cache.get(string)
            if compiled is None:
                compiled = compile_pauli_action(string)
                cache[string] = compiled
            state = apply_pauli_rotation(state, string, angle, compiled=compiled)
    return state


def check_conditions(
    K: int, hbar_omega: float, omega0: float, margin: float = CONDITION_MARGIN
) -> ConditionReport:
    """Numeric report on the two discretized adiabatic ratios (never blocks)."""
    if K < 1 or hbar_omega <= 0 or omega0 <= 0:
        raise ValueError("K, hbar_omega and omega0 must be positive")
    left = (hbar_omega / K) / omega0
    right = omega0 / hbar_omega
    return ConditionReport(
        left_ratio=left,
        right_ratio=right,
        left_satisfied=left < margin,
        right_satisfied=right < margin,
        margin=margin,
    )


def circuit_stats(
    h: PauliSum,
    schedule: PrepSchedule,
    trotter: TrotterConfig = TrotterConfig(),
    h0: PauliSum | None = None,
) -> CircuitStats:
    """Rotation/CNOT ladder estimate over surviving terms.

    Each weight-w rotation costs 2*(w-1) CNOTs in the standard ladder
    decomposition; depth_proxy adds one rotation layer per term.  When h0 is
    given the per-step counts follow the interpolated Hamiltonians, otherwise
    every step reuses h.
    """
    per_step = []
    rotations = 0
    cnots = 0
    for eta, _scale in schedule.steps:
        step_h = interpolate(h0, h, eta) if h0 is not None else h
        step_h = prune(step_h, trotter.prune_threshold, trotter.drop_diagonal)
        count = 0
        for string, _coeff in step_h.items():
            w = string.weight
            if w == 0:
                continue  # global phase, no gate
            count += 1
            if w >= 2:
                cnots += 2 * (w - 1)
        per_step.append(count)
        rotations += count
    return CircuitStats(
        term_count_per_step=tuple(per_step),
        total_rotations=rotations,
        cnot_estimate=cnots,
        depth_proxy=rotations + cnots,
    )
