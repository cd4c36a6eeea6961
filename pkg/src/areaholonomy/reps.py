"""Homomorphisms from the area-quotient group into U(n).

A representation stores images A_i, B_i of the surface-group generators
plus the curvature generator Lambda of the central one-parameter subgroup;
validity means the relator product equals exp(Lambda) and Lambda commutes
with every generator image.  Genus 0 has no generators: the data is just
Lambda with integer spectrum / 2 pi i, and the classification by weight
vectors is exact integer combinatorics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .liecore import (
    SkewHermitian,
    Unitary,
    commutant_dimension,
    expm,
    expm_raw,
    inner,
    matrix_from_json,
    matrix_to_json,
)
from .policy import DEFAULT_POLICY, NumericPolicy
from .words import GammaRElement, GenusMismatchError


class InvalidRepError(ValueError):
    """The representation violates the relator or centrality constraint."""


@dataclass(frozen=True)
class RepDiagnostics:
    relator_residual: float
    centrality_residual: float
    ok: bool


@dataclass(frozen=True)
class WeightVector:
    """Weakly decreasing integer tuple: winding weights of U(1) -> U(n)."""

    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        if any(k[i] < k[i + 1] for i in range(len(k) - 1)):
            raise ValueError("weight vector entries must be weakly decreasing")
        object.__setattr__(self, "k", k)

    @property
    def n(self) -> int:
        return len(self.k)


class YangMillsRep:
    """Generator images plus the central curvature generator Lambda.

    Construction checks shapes and entrywise invariants only; the value
    constraints (relator, centrality, genus-0 quantization) are computed by
    validate_rep and cached.
    """

    __slots__ = ("genus", "n", "A", "B", "Lambda", "_diag")

    def __init__(
        self,
        genus: int,
        n: int,
        A: Sequence[Unitary],
        B: Sequence[Unitary],
        Lambda: SkewHermitian,
    ):
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        if len(A) != genus or len(B) != genus:
            raise InvalidRepError(f"need {genus} images per generator family")
        if Lambda.n != n or any(m.n != n for m in A) or any(m.n != n for m in B):
            raise InvalidRepError("matrix dimensions do not match n")
        self.genus = genus
        self.n = n
        self.A = tuple(A)
        self.B = tuple(B)
        self.Lambda = Lambda
        self._diag: Optional[RepDiagnostics] = None

    def __repr__(self) -> str:
        return f"YangMillsRep(genus={self.genus}, n={self.n})"


def relator_image(rep: YangMillsRep) -> np.ndarray:
    """Product of commutators [A_i, B_i] in generator order."""
    out = np.eye(rep.n, dtype=np.complex128)
    for a, b in zip(rep.A, rep.B):
        out = out @ a.mat @ b.mat @ a.mat.conj().T @ b.mat.conj().T
    return out


def validate_rep(rep: YangMillsRep, *, policy: NumericPolicy = DEFAULT_POLICY) -> RepDiagnostics:
    """Residuals of the two defining constraints.

    relator_residual is ||prod [A_i, B_i] - exp(Lambda)||_F; for genus 0 it
    also enforces integer quantization of the Lambda spectrum (exp(Lambda)
    must be the identity), reported as the larger of the two violations.
    """
    target = expm_raw(rep.Lambda.mat)
    relator_res = float(np.linalg.norm(relator_image(rep) - target))
    if rep.genus == 0:
        phases = np.linalg.eigvalsh(-1j * rep.Lambda.mat) / (2 * np.pi)
        quant = float(np.max(np.abs(phases - np.round(phases)))) if len(phases) else 0.0
        relator_res = max(relator_res, quant)
    cent = 0.0
    for m in rep.A + rep.B:
        cent = max(cent, float(np.linalg.norm(rep.Lambda.mat @ m.mat - m.mat @ rep.Lambda.mat)))
    diag = RepDiagnostics(relator_res, cent, relator_res <= policy.rep_tol and cent <= policy.rep_tol)
    if policy is DEFAULT_POLICY:
        rep._diag = diag
    return diag


def _require_valid(rep: YangMillsRep, policy: NumericPolicy) -> None:
    diag = rep._diag if (rep._diag is not None and policy is DEFAULT_POLICY) else validate_rep(rep, policy=policy)
    if not diag.ok:
        raise InvalidRepError(
            f"invalid representation: relator residual {diag.relator_residual:.3e}, "
            f"centrality residual {diag.centrality_residual:.3e}"
        )


def evaluate(
    rep: YangMillsRep,
    x: GammaRElement,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Unitary:
    """Apply the holonomy homomorphism to a group element.

    Returns the word image times exp(t Lambda); independence of the word
    representative follows from the validated constraints.
    """
    _require_valid(rep, policy)
    if x.genus != rep.genus:
        raise GenusMismatchError(f"element genus {x.genus} does not match rep genus {rep.genus}")
    out = expm_raw(x.t * rep.Lambda.mat)
    word = np.eye(rep.n, dtype=np.complex128)
    for letter in x.word.letters:
        idx = abs(letter)
        mat = rep.A[idx - 1].mat if idx <= rep.genus else rep.B[idx - rep.genus - 1].mat
        if letter < 0:
            mat = mat.conj().T
        word = word @ mat
    return Unitary(word @ out)


def irreducible(rep: YangMillsRep, *, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
    """True iff only scalars commute with the image of the representation.

    The probe set is the generator images together with the midpoint
    exp(Lambda / 2) of the central one-parameter subgroup.  For an
    irreducible representation Lambda is then forced to be a scalar
    i*lambda*I; this is checked defensively.
    """
    _require_valid(rep, policy)
    mats = list(rep.A + rep.B) + [expm(SkewHermitian(0.5 * rep.Lambda.mat))]
    if commutant_dimension(mats, policy=policy) != 1:
        return False
    scalar = np.trace(rep.Lambda.mat) / rep.n
    if np.linalg.norm(rep.Lambda.mat - scalar * np.eye(rep.n)) > policy.rep_tol:
        raise AssertionError("irreducible rep with non-scalar Lambda (constraint violation)")
    return True


def ym_action_value(rep: YangMillsRep, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Yang-Mills action of the constant-curvature connection: ||Lambda||^2.

    The curvature density is constant and the total area is normalized to
    1, so the action integral collapses to the inner product of Lambda with
    itself.
    """
    _require_valid(rep, policy)
    return inner(rep.Lambda, rep.Lambda, policy=policy)


def enumerate_sphere_classes(n: int, kmax: int) -> list[WeightVector]:
    """All weight vectors with entries in [-kmax, kmax], lex descending.

    The count is the multiset number C(n + 2 kmax, n); together with the
    integer action values this exhibits the discreteness of the genus-0
    classification.
    """
    if n < 1 or kmax < 0:
        raise ValueError("need n >= 1 and kmax >= 0")
    values = range(kmax, -kmax - 1, -1)
    out = [WeightVector(k) for k in itertools.combinations_with_replacement(values, n)]
    assert len(out) == math.comb(n + 2 * kmax, n)
    return out


def sphere_rep(k: WeightVector | Sequence[int]) -> YangMillsRep:
    """Genus-0 representation of a weight vector: Lambda = 2 pi i diag(k).

    Evaluation traces the closed geodesic t -> diag(exp(2 pi i k_j t)),
    returning to the identity at t = 1.
    """
    if not isinstance(k, WeightVector):
        k = WeightVector(tuple(k))
    lam = SkewHermitian(2j * np.pi * np.diag(np.array(k.k, dtype=np.float64)))
    return YangMillsRep(0, k.n, [], [], lam)


def direct_sum(r1: YangMillsRep, r2: YangMillsRep) -> YangMillsRep:
    """Block-diagonal combination; the action values add."""
    if r1.genus != r2.genus:
        raise GenusMismatchError("direct sum needs matching genus")
    a = [Unitary(scipy.linalg.block_diag(x.mat, y.mat)) for x, y in zip(r1.A, r2.A)]
    b = [Unitary(scipy.linalg.block_diag(x.mat, y.mat)) for x, y in zip(r1.B, r2.B)]
    lam = SkewHermitian(scipy.linalg.block_diag(r1.Lambda.mat, r2.Lambda.mat))
    return YangMillsRep(r1.genus, r1.n + r2.n, a, b, lam)


# ---------------------------------------------------------------------------
# JSON

def rep_to_json(rep: YangMillsRep) -> dict:
    return {
        "genus": rep.genus,
        "n": rep.n,
        "A": [matrix_to_json(m.mat) for m in rep.A],
        "B": [matrix_to_json(m.mat) for m in rep.B],
        "Lambda": matrix_to_json(rep.Lambda.mat),
    }


def rep_from_json(obj: dict) -> YangMillsRep:
    return YangMillsRep(
        int(obj["genus"]),
        int(obj["n"]),
        [Unitary(matrix_from_json(m)) for m in obj["A"]],
        [Unitary(matrix_from_json(m)) for m in obj["B"]],
        SkewHermitian(matrix_from_json(obj["Lambda"])),
    )
