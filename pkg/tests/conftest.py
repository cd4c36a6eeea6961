"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.optimize

import areaholonomy as ah
from areaholonomy.liecore import expm_raw


def flux_rep(n: int, k: int) -> ah.YangMillsRep:
    """Genus-1 abelian sector representative: Lambda = 2 pi i diag(k, 0, ...)."""
    weights = np.zeros(n)
    weights[0] = k
    lam = ah.SkewHermitian(2j * np.pi * np.diag(weights))
    eye = ah.Unitary(np.eye(n))
    return ah.YangMillsRep(1, n, [eye], [eye], lam)


def quaternion_rep(genus: int) -> ah.YangMillsRep:
    """Exact nonabelian rep: [X, Y] = -I with X, Y the quaternion units.

    Works for any genus >= 1 by putting the noncommuting pair in the first
    slot and identities elsewhere; Lambda = i pi I is central.
    """
    x = ah.Unitary([[0, 1], [-1, 0]])
    y = ah.Unitary([[1j, 0], [0, -1j]])
    eye = ah.Unitary(np.eye(2))
    a = [x] + [eye] * (genus - 1)
    b = [y] + [eye] * (genus - 1)
    return ah.YangMillsRep(genus, 2, a, b, ah.SkewHermitian(1j * np.pi * np.eye(2)))


def _skew_basis(n: int) -> list[np.ndarray]:
    basis = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1j
        basis.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1.0, -1.0
            basis.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1j, 1j
            basis.append(m)
    return basis


def solved_genus2_rep(seed: int = 0, n: int = 2) -> ah.YangMillsRep:
    """Random genus-2 rep found by root-finding on the relator equation.

    Parameterizes A_i = exp(X_i), B_i = exp(Y_i) over u(n) coordinates and
    solves prod [A_i, B_i] = exp(i pi I) by least squares from a random
    start.
    """
    rng = np.random.default_rng(seed)
    basis = _skew_basis(n)
    dim = len(basis)
    target = expm_raw(1j * np.pi * np.eye(n))

    def mats(params):
        out = []
        for idx in range(4):
            coeff = params[idx * dim: (idx + 1) * dim]
            out.append(expm_raw(sum(c * b for c, b in zip(coeff, basis))))
        return out

    def residual(params):
        a1, b1, a2, b2 = mats(params)
        rel = (a1 @ b1 @ a1.conj().T @ b1.conj().T) @ (a2 @ b2 @ a2.conj().T @ b2.conj().T)
        diff = rel - target
        return np.concatenate([diff.real.ravel(), diff.imag.ravel()])

    result = scipy.optimize.least_squares(
        residual, rng.normal(scale=0.8, size=4 * dim), xtol=1e-15, ftol=1e-15, gtol=1e-15
    )
    assert np.linalg.norm(result.fun) < 1e-10, "relator solve did not converge"
    a1, b1, a2, b2 = (ah.Unitary(m) for m in mats(result.x))
    return ah.YangMillsRep(2, n, [a1, a2], [b1, b2], ah.SkewHermitian(1j * np.pi * np.eye(n)))


def random_field(mesh: ah.SurfaceMesh, n: int, rng: np.random.Generator, scale: float = 0.3) -> ah.GaugeField:
    shape = (len(mesh.edges), n, n)
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    skew = (a - a.conj().swapaxes(-1, -2)) / 2.0
    return ah.GaugeField(mesh, expm_raw(scale * skew))


@pytest.fixture(scope="session")
def torus4() -> ah.SurfaceMesh:
    return ah.build_torus_mesh(4)


@pytest.fixture(scope="session")
def torus8() -> ah.SurfaceMesh:
    return ah.build_torus_mesh(8)


@pytest.fixture(scope="session")
def sphere1() -> ah.SurfaceMesh:
    return ah.build_sphere_mesh(1)


@pytest.fixture(scope="session")
def sphere2() -> ah.SurfaceMesh:
    return ah.build_sphere_mesh(2)
