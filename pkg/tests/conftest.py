import numpy as np
import pytest

from cvqelab.fci import enumerate_sector, ground_distribution, solve_fci
from cvqelab.fermion import jordan_wigner, model_pauli, second_quantize
from cvqelab.geometry import load_geometry, parse_geometry
from cvqelab.integrals import compute_integrals
from cvqelab.scf import model_hamiltonian, run_scf, transform_to_mo

TABLE_STATES = (7, 13, 19, 22, 25, 28, 37, 49, 52, 193, 196, 208)


class WellSystem:
    """Everything downstream tests need for the four-hydrogen well geometry."""

    def __init__(self):
        self.geometry = load_geometry("well")
        self.integrals = compute_integrals(self.geometry)
        self.scf = run_scf(self.integrals, 2, 1)
        self.mo = transform_to_mo(self.integrals, self.scf)
        self.sq = second_quantize(self.mo)
        self.h_pauli = jordan_wigner(self.sq)
        self.model = model_hamiltonian(self.scf)
        self.h0_pauli = model_pauli(self.model)
        self.fci = solve_fci(enumerate_sector(8, 2, 1), self.sq)
        self.ground = ground_distribution(self.fci)
        self.phi0 = 7


@pytest.fixture(scope="session")
def well():
    return WellSystem()


@pytest.fixture(scope="session")
def h2_system():
    geometry = parse_geometry("H 0 0 0\nH 0 0 0.741760049618", label="h2")
    integrals = compute_integrals(geometry)
    scf = run_scf(integrals, 1, 1)
    return geometry, integrals, scf


def random_cluster(rng: np.random.Generator, n_atoms: int) -> str:
    """Well-separated random hydrogen cluster in XYZ text (Angstrom)."""
    while True:
        pos = rng.uniform(-1.6, 1.6, size=(n_atoms, 3))
        ok = all(
            np.linalg.norm(pos[i] - pos[j]) > 0.55
            for i in range(n_atoms)
            for j in range(i + 1, n_atoms)
        )
        if ok:
            break
    return "\n".join(f"H {x:.10f} {y:.10f} {z:.10f}" for x, y, z in pos)
