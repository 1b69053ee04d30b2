"""Dense statevector simulation: Fock states, Pauli rotations, exact
Hamiltonian exponentials, Born probabilities, shot sampling, and a
distribution-level noise knob.

Amplitudes are stored contiguously indexed by the Fock integer; qubit 0 is
the least-significant bit.  All stochastic draws use the counter-based
Philox generator keyed by an explicit 64-bit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, PauliSum, ResourceLimitError, to_dense

NORM_TOL = 1e-10
EXACT_EXP_DENSE_CAP = 12
KRYLOV_TOL = 1e-12

DISTRIBUTION_LABELS = ("pTD", "pGD", "sGD", "pOD", "pGndD")


@dataclass
class StateVector:
    amplitudes: np.ndarray  # complex, length 2^Q
    n_qubits: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude array length must be 2^Q")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.n_qubits)


@dataclass(frozen=True)
class SampleCounts:
    counts: dict[int, int]
    shots: int
    seed: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to the shot total")

    def empirical_distribution(self, label: str = "sGD") -> "Distribution":
        return Distribution(
            probs={n: c / self.shots for n, c in self.counts.items()}, label=label
        )


@dataclass(frozen=True)
class Distribution:
    probs: dict[int, float]
    label: str = ""

    def __post_init__(self):
        total = sum(self.probs.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if any(p < -1e-12 or p > 1 + 1e-12 for p in self.probs.values()):
            raise ValueError("probabilities outside [0, 1]")

    def probability(self, n: int) -> float:
        return self.probs.get(n, 0.0)

    def support(self, cutoff: float = 1e-12) -> set[int]:
        return {n for n, p in self.probs.items() if p > cutoff}

    def relabeled(self, label: str) -> "Distribution":
        return Distribution(probs=dict(self.probs), label=label)


def rng_from_seed(seed: int) -> np.random.Generator:
    """Counter-based Philox generator with an explicit 64-bit key."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def init_fock(n: int, n_qubits: int) -> StateVector:
    """Computational-basis state |n>."""
    dim = 1 << n_qubits
    if not 0 <= n < dim:
        raise ValueError(f"Fock index {n} outside [0, 2^{n_qubits})")
    amp = np.zeros(dim, dtype=complex)
    amp[n] = 1.0
    return StateVector(amp, n_qubits)


def compile_pauli_action(string: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Permutation and phase arrays so (P psi)[perm[n]] = phase[n] * psi[n]."""
    dim = 1 << string.n_qubits
    idx = np.arange(dim)
    perm = idx.copy()
    phase = np.ones(dim, dtype=complex)
    for q, op in enumerate(string.ops):
        bits = (idx >> q) & 1
        if op == "X":
            perm ^= 1 << q
        elif op == "Y":
            perm ^= 1 << q
            phase = phase * np.where(bits == 0, 1j, -1j)
        elif op == "Z":
            phase = phase * np.where(bits == 0, 1.0, -1.0)
    return perm, phase


def pauli_action(state: StateVector, string: PauliString) -> np.ndarray:
    perm, phase = compile_pauli_action(string)
    out = np.empty_like(state.amplitudes)
    out[perm] = phase * state.amplitudes
    return out


def apply_pauli_rotation(
    state: StateVector,
    string: PauliString,
    angle: float,
    compiled: tuple[np.ndarray, np.ndarray] | None = None,
) -> StateVector:
    """exp(-i * angle * P) |psi> = cos(angle)|psi> - i sin(angle) P|psi>."""
    if string.n_qubits != state.n_qubits:
        raise ValueError("qubit count mismatch")
    perm, phase = compiled if compiled is not None else compile_pauli_action(string)
    p_psi = np.empty_like(state.amplitudes)
    p_psi[perm] = phase * state.amplitudes
    amp = np.cos(angle) * state.amplitudes - 1j * np.sin(angle) * p_psi
    return StateVector(amp, state.n_qubits)


def expectation(state: StateVector, h: PauliSum) -> float:
    """<psi|H|psi> for Hermitian H (real by construction)."""
    total = 0.0 + 0.0j
    for string, coeff in h.items():
        total += coeff * np.vdot(state.amplitudes, pauli_action(state, string))
    return float(total.real)


def apply_exact_exponential(
    state: StateVector,
    h: PauliSum,
    scale: float,
    dense_cap: int = EXACT_EXP_DENSE_CAP,
    allow_iterative: bool = True,
) -> StateVector:
    """exp(-i * scale * H) |psi> without Trotter error.

    Uses a full Hermitian eigendecomposition up to dense_cap qubits and a
    Lanczos/Krylov action above it.
    """
    if h.n_qubits != state.n_qubits:
        raise ValueError("qubit count mismatch")
    if not h.terms:
        return state.copy()
    if h.n_qubits <= dense_cap:
        mat = to_dense(h, cap=dense_cap)
        return _apply_exponential_dense(state, mat, scale)
    if not allow_iterative:
        raise ResourceLimitError(
            f"{h.n_qubits} qubits exceeds the dense cap {dense_cap} "
            "and the iterative path is disabled"
        )
    return _apply_exponential_lanczos(state, h, scale)


def _apply_exponential_dense(state: StateVector, mat: np.ndarray, scale: float) -> StateVector:
    evals, evecs = np.linalg.eigh(mat)
    coeffs = evecs.conj().T @ state.amplitudes
    amp = evecs @ (np.exp(-1j * scale * evals) * coeffs)
    return StateVector(amp, state.n_qubits)


def exponential_propagator(h_dense: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition reusable across repeated exponentials of one matrix."""
    evals, evecs = np.linalg.eigh(h_dense)
    return evals, evecs


def apply_propagator(
    state: StateVector, evals: np.ndarray, evecs: np.ndarray, scale: float
) -> StateVector:
    coeffs = evecs.conj().T @ state.amplitudes
    amp = evecs @ (np.exp(-1j * scale * evals) * coeffs)
    return StateVector(amp, state.n_qubits)


def _apply_exponential_lanczos(
    state: StateVector, h: PauliSum, scale: float, max_krylov: int = 120
) -> StateVector:
    compiled = [(c, compile_pauli_action(s)) for s, c in h.items()]

    def matvec(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        for coeff, (perm, phase) in compiled:
            tmp = np.empty_like(v)
            tmp[perm] = phase * v
            out += coeff * tmp
        return out

    v0 = state.amplitudes
    beta0 = np.linalg.norm(v0)
    basis = [v0 / beta0]
    alphas: list[float] = []
    betas: list[float] = []
    prev_result = None
    for k in range(max_krylov):
        w = matvec(basis[k])
        alpha = float(np.vdot(basis[k], w).real)
        alphas.append(alpha)
        w = w - alpha * basis[k] - (betas[-1] * basis[k - 1] if k > 0 else 0.0)
        # full reorthogonalization keeps the small Krylov basis clean
        for b in basis:
            w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        t = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = np.linalg.eigh(t)
        small = evecs @ (np.exp(-1j * scale * evals) * evecs.conj().T[:, 0])
        result = sum(c * b for c, b in zip(small, basis)) * beta0
        if prev_result is not None and np.linalg.norm(result - prev_result) < KRYLOV_TOL:
            return StateVector(result, state.n_qubits)
        prev_result = result
        if beta < 1e-14:
            return StateVector(result, state.n_qubits)
        betas.append(beta)
        basis.append(w / beta)
    return StateVector(prev_result, state.n_qubits)


def probabilities(state: StateVector, label: str = "") -> Distribution:
    """Born-rule distribution; entries below 1e-16 are omitted."""
    p = np.abs(state.amplitudes) ** 2
    total = p.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"state norm^2 = {total}, not normalized")
    p = p / total
    return Distribution(
        probs={int(n): float(p[n]) for n in np.nonzero(p > 1e-16)[0]}, label=label
    )


def sample(state: StateVector, shots: int, seed: int) -> SampleCounts:
    """Multinomial draw over the Born distribution; deterministic per seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = probabilities(state)
    return sample_distribution(dist, shots, seed)


def sample_distribution(dist: Distribution, shots: int, seed: int) -> SampleCounts:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    indices = np.array(sorted(dist.probs))
    p = np.array([dist.probs[n] for n in indices])
    p = p / p.sum()
    rng = rng_from_seed(seed)
    draws = rng.multinomial(shots, p)
    counts = {int(n): int(c) for n, c in zip(indices, draws) if c > 0}
    return SampleCounts(counts=counts, shots=shots, seed=seed)


def mix_noise(dist: Distribution, lam: float, n_qubits: int) -> Distribution:
    """Convex mix with the uniform distribution: p <- (1-lam) p + lam / 2^Q."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"noise weight {lam} outside [0, 1]")
    if lam == 0.0:
        return dist
    dim = 1 << n_qubits
    floor = lam / dim
    probs = {n: (1.0 - lam) * dist.probability(n) + floor for n in range(dim)}
    return Distribution(probs=probs, label=dist.label)
