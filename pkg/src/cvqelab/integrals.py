"""STO-6G one- and two-electron integrals for hydrogen clusters.

Only s-type contracted Gaussians appear, so every integral reduces to closed
forms involving the zeroth Boys function

    F0(T) = (1/2) sqrt(pi/T) erf(sqrt(T)),    F0(0) = 1.

All quantities are in Hartree/Bohr.  Two-electron integrals are stored as the
full rank-4 tensor in chemists' notation (pq|rs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .constants import STO6G_H_COEFFS, STO6G_H_EXPONENTS
from .geometry import Geometry, nuclear_repulsion

OVERLAP_CONDITION_FLOOR = 1e-10


class IllConditionedBasisError(ValueError):
    """Overlap matrix is numerically singular (near-linear dependence)."""


@dataclass(frozen=True)
class IntegralSet:
    """AO-basis integrals: overlap, core Hamiltonian (T + V_ne), ERIs, nuclear repulsion."""

    n_ao: int
    overlap: np.ndarray   # (n_ao, n_ao)
    core: np.ndarray      # (n_ao, n_ao), Hartree
    eri: np.ndarray       # (n_ao,)*4, chemists' (pq|rs), Hartree
    e_nuc: float          # Hartree


def boys0(t: np.ndarray | float) -> np.ndarray:
    """F0(T), elementwise; series branch near T=0 avoids 0/0."""
    t = np.asarray(t, dtype=float)
    small = t < 1e-12
    safe = np.where(small, 1.0, t)
    with np.errstate(invalid="ignore"):
        val = 0.5 * np.sqrt(np.pi / safe) * erf(np.sqrt(safe))
    return np.where(small, 1.0 - t / 3.0, val)


def _contracted_basis(geometry: Geometry) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-AO arrays: exponents (n_ao, 6), normalized coefficients (n_ao, 6), centers (n_ao, 3)."""
    alpha = np.array(STO6G_H_EXPONENTS)
    d = np.array(STO6G_H_COEFFS)
    # unit-normalize primitives, then renormalize the contraction to <chi|chi> = 1
    c = d * (2.0 * alpha / np.pi) ** 0.75
    ab = alpha[:, None] + alpha[None, :]
    s_prim = (np.pi / ab) ** 1.5
    norm = np.einsum("i,j,ij->", c, c, s_prim)
    c = c / np.sqrt(norm)

    n = geometry.n_atoms
    centers = geometry.positions_bohr()
    return (
        np.tile(alpha, (n, 1)),
        np.tile(c, (n, 1)),
        centers,
    )


def compute_integrals(geometry: Geometry) -> IntegralSet:
    """All STO-6G integral blocks for a hydrogen-cluster geometry (deterministic)."""
    alpha, coef, centers = _contracted_basis(geometry)
    n_ao = geometry.n_atoms
    charges = geometry.charges()

    overlap = np.empty((n_ao, n_ao))
    kinetic = np.empty((n_ao, n_ao))
    nuclear = np.empty((n_ao, n_ao))

    for p in range(n_ao):
        for q in range(p + 1):
            a = alpha[p][:, None]
            b = alpha[q][None, :]
            cc = coef[p][:, None] * coef[q][None, :]
            ab = a + b
            mu = a * b / ab
            r2 = float(np.dot(centers[p] - centers[q], centers[p] - centers[q]))
            s_prim = (np.pi / ab) ** 1.5 * np.exp(-mu * r2)
            t_prim = mu * (3.0 - 2.0 * mu * r2) * s_prim

            # Gaussian product center, one per primitive pair
            pc = (a[..., None] * centers[p] + b[..., None] * centers[q]) / ab[..., None]
            v_prim = np.zeros_like(s_prim)
            for k, nuc in enumerate(centers):
                t_arg = ab * np.sum((pc - nuc) ** 2, axis=-1)
                v_prim -= charges[k] * (2.0 * np.pi / ab) * np.exp(-mu * r2) * boys0(t_arg)

            overlap[p, q] = overlap[q, p] = float(np.sum(cc * s_prim))
            kinetic[p, q] = kinetic[q, p] = float(np.sum(cc * t_prim))
            nuclear[p, q] = nuclear[q, p] = float(np.sum(cc * v_prim))

    eig_min = float(np.linalg.eigvalsh(overlap)[0])
    if eig_min < OVERLAP_CONDITION_FLOOR:
        raise IllConditionedBasisError(
            f"overlap matrix min eigenvalue {eig_min:.3e} below {OVERLAP_CONDITION_FLOOR}"
        )

    eri = _electron_repulsion(alpha, coef, centers)
    return IntegralSet(
        n_ao=n_ao,
        overlap=overlap,
        core=kinetic + nuclear,
        eri=eri,
        e_nuc=nuclear_repulsion(geometry) if n_ao > 1 else 0.0,
    )


def _electron_repulsion(alpha: np.ndarray, coef: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Full (pq|rs) tensor via the s-Gaussian closed form, filled by 8-fold symmetry."""
    n_ao = alpha.shape[0]
    eri = np.zeros((n_ao, n_ao, n_ao, n_ao))

    pairs = [(p, q) for p in range(n_ao) for q in range(p + 1)]
    # Precompute per-pair primitive data: exponent sums, prefactors, product centers.
    pair_data = []
    for p, q in pairs:
        a = alpha[p][:, None]
        b = alpha[q][None, :]
        cc = (coef[p][:, None] * coef[q][None, :]).ravel()
        zeta = (a + b).ravel()
        r2 = float(np.dot(centers[p] - centers[q], centers[p] - centers[q]))
        pref = (np.exp(-(a * b / (a + b)) * r2)).ravel()
        pc = ((a[..., None] * centers[p] + b[..., None] * centers[q]) / (a + b)[..., None])
        pair_data.append((cc * pref, zeta, pc.reshape(-1, 3)))

    for i, (p, q) in enumerate(pairs):
        cp, zp, rp = pair_data[i]
        for j in range(i + 1):
            r, s = pairs[j]
            cq, zq, rq = pair_data[j]
            zsum = zp[:, None] + zq[None, :]
            rho = zp[:, None] * zq[None, :] / zsum
            d2 = np.sum((rp[:, None, :] - rq[None, :, :]) ** 2, axis=-1)
            kern = (
                2.0 * np.pi ** 2.5
                / (zp[:, None] * zq[None, :] * np.sqrt(zsum))
                * boys0(rho * d2)
            )
            val = float(np.einsum("i,j,ij->", cp, cq, kern))
            for a_, b_ in ((p, q), (q, p)):
                for c_, d_ in ((r, s), (s, r)):
                    eri[a_, b_, c_, d_] = val
                    eri[c_, d_, a_, b_] = val
    return eri
