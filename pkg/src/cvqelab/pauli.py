"""Pauli-string algebra: weighted sums of tensor products of I, X, Y, Z.

A PauliString is a length-Q tuple over {I, X, Y, Z}; qubit 0 is the leftmost
letter in the tuple and the least-significant bit of a Fock index.  PauliSums
keep real coefficients (Hermitian operators only) in a canonically sorted map
so iteration order is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COEFF_FLOOR = 1e-12
DENSE_QUBIT_CAP = 14

_LETTERS = ("I", "X", "Y", "Z")

# single-qubit product table: (a, b) -> (phase, c) with sigma_a sigma_b = phase * sigma_c
_PRODUCT = {}
for _a in _LETTERS:
    _PRODUCT[("I", _a)] = (1.0, _a)
    _PRODUCT[(_a, "I")] = (1.0, _a)
    _PRODUCT[(_a, _a)] = (1.0, "I")
_PRODUCT[("X", "Y")] = (1j, "Z")
_PRODUCT[("Y", "X")] = (-1j, "Z")
_PRODUCT[("Y", "Z")] = (1j, "X")
_PRODUCT[("Z", "Y")] = (-1j, "X")
_PRODUCT[("Z", "X")] = (1j, "Y")
_PRODUCT[("X", "Z")] = (-1j, "Y")

_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class ResourceLimitError(RuntimeError):
    """Dense construction requested beyond the configured qubit cap."""


@dataclass(frozen=True, order=True)
class PauliString:
    ops: tuple[str, ...]

    def __post_init__(self):
        if any(o not in _LETTERS for o in self.ops):
            raise ValueError(f"invalid Pauli letters in {self.ops}")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a letter string, qubit 0 first: 'XZI' = X on qubit 0, Z on qubit 1."""
        return cls(tuple(label.upper()))

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(("I",) * n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> "PauliString":
        ops = ["I"] * n_qubits
        ops[qubit] = letter
        return cls(tuple(ops))

    @property
    def n_qubits(self) -> int:
        return len(self.ops)

    @property
    def weight(self) -> int:
        return sum(o != "I" for o in self.ops)

    def is_diagonal(self) -> bool:
        """True for strings over {I, Z} only (phase action on Fock states)."""
        return all(o in ("I", "Z") for o in self.ops)

    def label(self) -> str:
        return "".join(self.ops)

    def __mul__(self, other: "PauliString") -> tuple[complex, "PauliString"]:
        if len(self.ops) != len(other.ops):
            raise ValueError("qubit count mismatch")
        phase = 1.0 + 0.0j
        out = []
        for a, b in zip(self.ops, other.ops):
            ph, c = _PRODUCT[(a, b)]
            phase *= ph
            out.append(c)
        return phase, PauliString(tuple(out))

    def apply_to_index(self, n: int) -> tuple[complex, int]:
        """Amplitude transfer <m|P|n> for the unique m with nonzero element."""
        phase = 1.0 + 0.0j
        m = n
        for q, op in enumerate(self.ops):
            bit = (n >> q) & 1
            if op == "X":
                m ^= 1 << q
            elif op == "Y":
                m ^= 1 << q
                phase *= 1j if bit == 0 else -1j
            elif op == "Z":
                phase *= 1.0 if bit == 0 else -1.0
        return phase, m


@dataclass(frozen=True)
class PauliSum:
    """Hermitian operator: map from PauliString to real coefficient (Hartree)."""

    terms: dict[PauliString, float]
    n_qubits: int

    @classmethod
    def from_terms(cls, terms: dict[PauliString, float], n_qubits: int) -> "PauliSum":
        cleaned = {}
        for string, coeff in terms.items():
            if string.n_qubits != n_qubits:
                raise ValueError(f"{string} does not act on {n_qubits} qubits")
            c = float(coeff)
            if abs(c) >= COEFF_FLOOR:
                cleaned[string] = c
        ordered = dict(sorted(cleaned.items(), key=lambda kv: kv[0].ops))
        return cls(terms=ordered, n_qubits=n_qubits)

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(terms={}, n_qubits=n_qubits)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, string: PauliString) -> float:
        return self.terms.get(string, 0.0)

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum.from_terms(
            {s: c * factor for s, c in self.terms.items()}, self.n_qubits
        )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        merged = dict(self.terms)
        for s, c in other.terms.items():
            merged[s] = merged.get(s, 0.0) + c
        return PauliSum.from_terms(merged, self.n_qubits)

    def items(self):
        return self.terms.items()

    def dumps(self) -> str:
        """One term per line: coefficient, letter string (qubit 0 first)."""
        lines = [f"{c:+.16e} {s.label()}" for s, c in self.terms.items()]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def loads(cls, text: str, n_qubits: int | None = None) -> "PauliSum":
        terms = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            coeff_str, label = line.split()
            string = PauliString.from_label(label)
            terms[string] = terms.get(string, 0.0) + float(coeff_str)
        if not terms and n_qubits is None:
            raise ValueError("empty dump needs an explicit qubit count")
        q = n_qubits if n_qubits is not None else next(iter(terms)).n_qubits
        return cls.from_terms(terms, q)


def interpolate(h0: PauliSum, h: PauliSum, eta: float) -> PauliSum:
    """(1 - eta) * h0 + eta * h, merged term by term."""
    if h0.n_qubits != h.n_qubits:
        raise ValueError("qubit count mismatch")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta = {eta} outside [0, 1]")
    return h0.scaled(1.0 - eta) + h.scaled(eta)


def prune(h: PauliSum, threshold: float, drop_diagonal: bool = False) -> PauliSum:
    """Remove weak interactions: terms with |coefficient| < threshold, and
    optionally every {I, Z}-only string (pure phases when executed first)."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    kept = {
        s: c
        for s, c in h.terms.items()
        if abs(c) >= threshold and not (drop_diagonal and s.is_diagonal())
    }
    return PauliSum.from_terms(kept, h.n_qubits)


def to_dense(h: PauliSum, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense 2^Q x 2^Q matrix; qubit 0 is the least-significant basis-index bit."""
    if h.n_qubits > cap:
        raise ResourceLimitError(f"{h.n_qubits} qubits exceeds dense cap {cap}")
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    for string, coeff in h.terms.items():
        phases = np.ones(dim, dtype=complex)
        targets = idx.copy()
        for q, op in enumerate(string.ops):
            bits = (idx >> q) & 1
            if op == "X":
                targets ^= 1 << q
            elif op == "Y":
                targets ^= 1 << q
                phases *= np.where(bits == 0, 1j, -1j)
            elif op == "Z":
                phases *= np.where(bits == 0, 1.0, -1.0)
        out[targets, idx] += coeff * phases
    return out


def number_operator(n_qubits: int) -> PauliSum:
    """Total particle number: sum_q (I - Z_q)/2."""
    terms = {PauliString.identity(n_qubits): n_qubits / 2.0}
    for q in range(n_qubits):
        terms[PauliString.single(n_qubits, q, "Z")] = -0.5
    return PauliSum.from_terms(terms, n_qubits)


def sz_operator(n_qubits: int) -> PauliSum:
    """Total Sz for interleaved spin ordering (even qubits up, odd down)."""
    terms: dict[PauliString, float] = {}
    n_even = (n_qubits + 1) // 2
    n_odd = n_qubits // 2
    if n_even != n_odd:
        terms[PauliString.identity(n_qubits)] = 0.25 * (n_even - n_odd)
    for q in range(n_qubits):
        sign = 1.0 if q % 2 == 0 else -1.0
        terms[PauliString.single(n_qubits, q, "Z")] = -0.25 * sign
    return PauliSum.from_terms(terms, n_qubits)
