"""Numerics for the unitary group U(n) and its Lie algebra u(n).

Matrix exponential and principal logarithm are eigendecomposition based:
unitary and skew-Hermitian matrices are normal, so spectral methods give
exactly unitary (resp. skew-Hermitian) results up to roundoff and a clean
principal branch.  Dimensions stay small (n <= 8), robustness beats speed.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .policy import DEFAULT_POLICY, NumericPolicy


class DimensionMismatchError(ValueError):
    """Operands have incompatible matrix dimensions."""


class BranchCutError(ArithmeticError):
    """An eigenvalue sits too close to -1 for a principal logarithm.

    For plaquette logs this means the loop is too large for a well-defined
    curvature; refine the mesh or reduce the flux.
    """


def _as_complex_matrix(entries) -> np.ndarray:
    mat = np.array(entries, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
    return mat


class SkewHermitian:
    """An element of u(n): X + X* = 0 (validated at construction)."""

    __slots__ = ("mat",)

    def __init__(self, entries, *, policy: NumericPolicy = DEFAULT_POLICY):
        mat = _as_complex_matrix(entries)
        residual = np.linalg.norm(mat + mat.conj().T)
        if residual > policy.skew_tol:
            raise ValueError(f"matrix is not skew-Hermitian: ||X + X*|| = {residual:.3e}")
        mat.setflags(write=False)
        self.mat = mat

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"SkewHermitian(n={self.n})"


class Unitary:
    """An element of U(n): U U* = I and |det U| = 1 (validated)."""

    __slots__ = ("mat",)

    def __init__(self, entries, *, policy: NumericPolicy = DEFAULT_POLICY):
        mat = _as_complex_matrix(entries)
        n = mat.shape[0]
        residual = np.linalg.norm(mat @ mat.conj().T - np.eye(n))
        if residual > policy.unitary_tol:
            raise ValueError(f"matrix is not unitary: ||U U* - I|| = {residual:.3e}")
        if abs(abs(np.linalg.det(mat)) - 1.0) > policy.unitary_tol:
            raise ValueError("matrix determinant does not have modulus 1")
        mat.setflags(write=False)
        self.mat = mat

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"Unitary(n={self.n})"


# ---------------------------------------------------------------------------
# raw-array kernels (shared with the lattice hot path; no wrapper overhead)

def expm_raw(x: np.ndarray) -> np.ndarray:
    """exp of skew-Hermitian arrays, batched over leading axes."""
    if x.shape[-1] == 1:
        return np.exp(1j * x.imag)
    herm = -1j * x
    w, v = np.linalg.eigh(herm)
    phase = np.exp(1j * w)
    return (v * phase[..., None, :]) @ v.conj().swapaxes(-1, -2)


def logm_raw(u: np.ndarray, *, eps_branch: float = DEFAULT_POLICY.eps_branch) -> np.ndarray:
    """Principal log of one unitary matrix via complex Schur form.

    The Schur form of a normal matrix is diagonal, so this is a spectral
    decomposition with an orthonormal eigenbasis even for degenerate spectra.
    """
    n = u.shape[0]
    if n == 1:
        theta = float(np.angle(u[0, 0]))
        if np.pi - abs(theta) < eps_branch:
            raise BranchCutError("eigenvalue within eps_branch of -1")
        return np.array([[1j * theta]], dtype=np.complex128)
    t, q = scipy.linalg.schur(u, output="complex")
    theta = np.angle(np.diagonal(t))
    if np.min(np.pi - np.abs(theta)) < eps_branch:
        raise BranchCutError("eigenvalue within eps_branch of -1")
    x = (q * (1j * theta)[None, :]) @ q.conj().T
    return (x - x.conj().T) / 2.0


def plaquette_angles(u: np.ndarray, *, eps_branch: float = DEFAULT_POLICY.eps_branch) -> np.ndarray:
    """Principal phases of a batch of 1x1 unitaries (fast abelian path)."""
    theta = np.angle(u[..., 0, 0])
    if np.min(np.pi - np.abs(theta)) < eps_branch:
        raise BranchCutError("eigenvalue within eps_branch of -1")
    return theta


# ---------------------------------------------------------------------------
# public operations

def expm(x: SkewHermitian) -> Unitary:
    """Matrix exponential u(n) -> U(n); exact on diagonal input."""
    return Unitary(expm_raw(x.mat))


def logm_principal(u: Unitary, *, policy: NumericPolicy = DEFAULT_POLICY) -> SkewHermitian:
    """Inverse of expm with all eigenvalue arguments in (-pi, pi).

    Raises BranchCutError when an eigenvalue lies within policy.eps_branch
    of -1, instead of silently picking a branch.
    """
    return SkewHermitian(logm_raw(u.mat, eps_branch=policy.eps_branch))


def inner(x: SkewHermitian, y: SkewHermitian, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Invariant inner product tr(X Y*) on u(n); real for skew-Hermitian input."""
    if x.n != y.n:
        raise DimensionMismatchError(f"dimension mismatch: {x.n} vs {y.n}")
    value = np.trace(x.mat @ y.mat.conj().T)
    if abs(value.imag) > policy.inner_imag_tol * max(1.0, abs(value.real)):
        raise ValueError(f"inner product has imaginary leakage {value.imag:.3e}")
    return float(value.real)


def commutant_dimension(mats: list[Unitary], *, policy: NumericPolicy = DEFAULT_POLICY) -> int:
    """Real dimension of {X in u(n) : X M = M X for all M}.

    The commutant of a set of unitaries is a *-subalgebra, so its
    skew-Hermitian part has real dimension equal to the complex nullity of
    the stacked commutator system; that nullity is counted by singular
    values below policy.commutant_svd_tol.  Value 1 certifies
    irreducibility (only scalars commute).
    """
    if not mats:
        raise ValueError("commutant_dimension needs a nonempty list")
    n = mats[0].n
    eye = np.eye(n)
    rows = []
    for m in mats:
        if m.n != n:
            raise DimensionMismatchError("matrices have mixed dimensions")
        # vec(XM - MX) = (M^T kron I - I kron M) vec(X)
        rows.append(np.kron(m.mat.T, eye) - np.kron(eye, m.mat))
    system = np.vstack(rows)
    # system has >= n^2 rows, so svd returns all n^2 singular values
    sigma = np.linalg.svd(system, compute_uv=False)
    return int(np.sum(sigma <= policy.commutant_svd_tol))


def conjugacy_residual(u: Unitary, v: Unitary) -> float:
    """Max angular gap between the sorted eigenphase multisets of U and V.

    Phases are taken in (-pi, pi], sorted ascending, and compared entrywise
    on the circle; the comparison is minimized over cyclic shifts so that a
    spectrum straddling the -1 branch point does not produce a spurious gap.
    Zero (up to roundoff) iff U and V are conjugate in U(n).
    """
    if u.n != v.n:
        raise DimensionMismatchError(f"dimension mismatch: {u.n} vs {v.n}")
    a = np.sort(np.angle(np.linalg.eigvals(u.mat)))
    b = np.sort(np.angle(np.linalg.eigvals(v.mat)))
    n = len(a)
    best = np.inf
    for shift in range(n):
        rolled = np.concatenate([b[shift:], b[:shift] + 2 * np.pi])
        gap = np.abs(a - rolled)
        gap = np.minimum(gap, 2 * np.pi - gap)
        best = min(best, float(np.max(gap)))
    return best


# ---------------------------------------------------------------------------
# helpers

def random_skew_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> SkewHermitian:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return SkewHermitian(scale * (a - a.conj().T) / 2.0)


def random_unitary(rng: np.random.Generator, n: int) -> Unitary:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(a)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))[None, :]
    return Unitary(q)


def matrix_to_json(mat: np.ndarray) -> dict:
    """Matrix JSON encoding used across the repo: n plus real/imag row-major arrays."""
    m = np.asarray(mat, dtype=np.complex128)
    return {"n": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    n = int(obj["n"])
    mat = np.array(obj["re"], dtype=np.float64) + 1j * np.array(obj["im"], dtype=np.float64)
    if mat.shape != (n, n):
        raise ValueError(f"matrix JSON claims n={n} but arrays have shape {mat.shape}")
    return mat
