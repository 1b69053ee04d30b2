"""Second quantization and the Jordan-Wigner fermion-to-qubit mapping.

Spin-orbital indexing is interleaved: spin orbital q = 2*(i-1) + s for
spatial MO i (1-based) and spin s (0 = up, 1 = down).  Qubit q is the
q-th least-significant bit of a Fock index, so the Hartree-Fock determinant
for (n_alpha, n_beta) = (2, 1) occupies qubits {0, 1, 2} = index 7.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, PauliSum
from .scf import ModelHamiltonian, MOIntegrals


@dataclass(frozen=True)
class SecondQuantizedHamiltonian:
    """H = constant + sum h1[P,Q] a+_P a_Q + (1/4) sum h2[P,Q,R,S] a+_P a+_Q a_S a_R.

    h2 is the antisymmetrized spin-orbital tensor <PQ||RS>; spin-forbidden
    entries are exact zeros.
    """

    one_body: np.ndarray   # (Q, Q), Hartree
    two_body: np.ndarray   # (Q, Q, Q, Q), antisymmetrized, Hartree
    constant: float        # Hartree (nuclear repulsion)
    n_spin_orbitals: int


def spin_orbital_index(mo_index: int, spin: int) -> int:
    """Spin-orbital/qubit index for 1-based spatial MO and spin (0 up, 1 down)."""
    return 2 * (mo_index - 1) + spin


def hf_fock_index(n_alpha: int, n_beta: int) -> int:
    """Fock index of the aufbau HF determinant in the interleaved layout."""
    index = 0
    for i in range(n_alpha):
        index |= 1 << (2 * i)
    for i in range(n_beta):
        index |= 1 << (2 * i + 1)
    return index


def second_quantize(mo: MOIntegrals) -> SecondQuantizedHamiltonian:
    """Expand spatial-MO integrals over interleaved spin orbitals."""
    n = mo.n_mo
    q = 2 * n
    h1 = np.zeros((q, q))
    for i in range(n):
        for j in range(n):
            for s in range(2):
                h1[2 * i + s, 2 * j + s] = mo.h_mo[i, j]

    # <PQ|RS> = (pr|qs) delta(sP,sR) delta(sQ,sS), then antisymmetrize
    coulomb = np.zeros((q, q, q, q))
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    v = mo.g_mo[i, k, j, l]
                    if abs(v) < 1e-15:
                        continue
                    for s1 in range(2):
                        for s2 in range(2):
                            coulomb[2*i+s1, 2*j+s2, 2*k+s1, 2*l+s2] = v
    h2 = coulomb - coulomb.transpose(0, 1, 3, 2)
    return SecondQuantizedHamiltonian(
        one_body=h1, two_body=h2, constant=mo.e_nuc, n_spin_orbitals=q
    )


def _jw_ladder(q_tot: int, mode: int, dagger: bool) -> dict[PauliString, complex]:
    """a_mode or a+_mode as a two-string Pauli sum with the Z parity tail."""
    ops_x = ["Z"] * mode + ["X"] + ["I"] * (q_tot - mode - 1)
    ops_y = ["Z"] * mode + ["Y"] + ["I"] * (q_tot - mode - 1)
    sign = -1j if dagger else 1j
    return {
        PauliString(tuple(ops_x)): 0.5,
        PauliString(tuple(ops_y)): 0.5 * sign,
    }


def _multiply_sums(
    a: dict[PauliString, complex], b: dict[PauliString, complex]
) -> dict[PauliString, complex]:
    out: dict[PauliString, complex] = {}
    for sa, ca in a.items():
        for sb, cb in b.items():
            phase, s = sa * sb
            out[s] = out.get(s, 0.0) + ca * cb * phase
    return out


def jordan_wigner(sq: SecondQuantizedHamiltonian) -> PauliSum:
    """Map the second-quantized Hamiltonian to a real-coefficient PauliSum."""
    q = sq.n_spin_orbitals
    acc: dict[PauliString, complex] = {PauliString.identity(q): sq.constant}

    ladders_dag = [_jw_ladder(q, m, True) for m in range(q)]
    ladders = [_jw_ladder(q, m, False) for m in range(q)]

    for p in range(q):
        for r in range(q):
            coeff = sq.one_body[p, r]
            if abs(coeff) < 1e-15:
                continue
            for s, c in _multiply_sums(ladders_dag[p], ladders[r]).items():
                acc[s] = acc.get(s, 0.0) + coeff * c

    for p in range(q):
        for r in range(q):
            pair_pr = _multiply_sums(ladders_dag[p], ladders_dag[r])
            for s_, t in ((s_, t) for s_ in range(q) for t in range(q)):
                coeff = 0.25 * sq.two_body[p, r, t, s_]
                if abs(coeff) < 1e-15:
                    continue
                prod = _multiply_sums(pair_pr, _multiply_sums(ladders[s_], ladders[t]))
                for s, c in prod.items():
                    acc[s] = acc.get(s, 0.0) + coeff * c

    terms: dict[PauliString, float] = {}
    for s, c in acc.items():
        if abs(c.imag) > 1e-9:
            raise ValueError(f"non-Hermitian JW coefficient {c} for {s.label()}")
        terms[s] = c.real
    return PauliSum.from_terms(terms, q)


def model_pauli(model: ModelHamiltonian) -> PauliSum:
    """Diagonal model operator sum_p eps_p n_p + shift as a PauliSum."""
    q = len(model.eps_spin)
    terms = {
        PauliString.identity(q): model.shift + 0.5 * float(np.sum(model.eps_spin))
    }
    for p, eps in enumerate(model.eps_spin):
        terms[PauliString.single(q, p, "Z")] = -0.5 * float(eps)
    return PauliSum.from_terms(terms, q)
