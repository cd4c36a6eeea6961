"""Discrete connections: edge unitaries, curvature, action, gradient flow.

The action is log-based, sum over faces of ||log plaquette||^2 / area: its
critical points have exactly constant curvature density, which is what the
holonomy-area verification needs (no O(a^2) distortion as with the Wilson
action).  Holonomies multiply in traversal order, so the product over a
concatenated loop is the product of the holonomies; gauge transforms act
as U_e -> g(tail) U_e g(head)^-1 and conjugate based holonomies by the
value at the basepoint.

Gradient sweeps are bulk-synchronous: all edge gradients are computed from
one field snapshot, then all edges are updated.  Fields are value-semantic
snapshots and never mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .liecore import (
    BranchCutError,
    SkewHermitian,
    Unitary,
    expm_raw,
    logm_raw,
    matrix_from_json,
    matrix_to_json,
    plaquette_angles,
)
from .policy import DEFAULT_POLICY, NumericPolicy
from .reps import InvalidRepError, YangMillsRep, validate_rep
from .surfaces import (
    MeshLoop,
    SurfaceMesh,
    TorusGrid,
    UnsupportedMeshError,
    clip_steps,
    enclosed_area,
    loop_concat,
    loop_reverse,
    mesh_from_json,
    mesh_to_json,
    validate_loop,
)


class NotConvergedError(RuntimeError):
    """Gradient flow hit its iteration or step-halving budget above tolerance."""

    def __init__(self, message: str, report: "FlowReport", field: "GaugeField"):
        super().__init__(message)
        self.report = report
        self.field = field


@dataclass(frozen=True)
class StepPolicy:
    """Backtracking line-search parameters; the step resets every iteration.

    initial_step None picks min(face_areas)/4, matching the 1/area scale of
    the action Hessian so the first trial is already near the stable range.
    """

    initial_step: Optional[float] = None
    shrink: float = 0.5
    max_halvings: int = 40


@dataclass
class FlowReport:
    """Flow summary: recorded actions are nonincreasing up to a few ulps of
    the action value (the flow keeps contracting the gradient after action
    differences fall below evaluation precision)."""

    iterations: int
    final_action: float
    final_gradient_norm: float
    step_history: Optional[list[tuple[int, float, float]]] = None
    seed: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_action": self.final_action,
            "final_gradient_norm": self.final_gradient_norm,
            "step_history": (
                None
                if self.step_history is None
                else [[i, a, g] for i, a, g in self.step_history]
            ),
            "seed": self.seed,
        }

    @staticmethod
    def from_json(obj: dict) -> "FlowReport":
        history = obj.get("step_history")
        return FlowReport(
            int(obj["iterations"]),
            float(obj["final_action"]),
            float(obj["final_gradient_norm"]),
            None if history is None else [(int(i), float(a), float(g)) for i, a, g in history],
            obj.get("seed"),
        )


class GaugeField:
    """One unitary per undirected edge, in the edge's canonical orientation."""

    __slots__ = ("mesh", "n", "U")

    def __init__(self, mesh: SurfaceMesh, values: np.ndarray, *, policy: NumericPolicy = DEFAULT_POLICY):
        values = np.array(values, dtype=np.complex128)
        if values.ndim != 3 or values.shape != (len(mesh.edges), values.shape[1], values.shape[1]):
            raise ValueError("field values must have shape (E, n, n)")
        eye = np.eye(values.shape[1])
        residual = np.linalg.norm(values @ values.conj().swapaxes(-1, -2) - eye, axis=(1, 2))
        if np.max(residual) > policy.unitary_tol:
            raise ValueError(f"edge matrices are not unitary (worst residual {np.max(residual):.3e})")
        values.setflags(write=False)
        self.mesh = mesh
        self.n = values.shape[1]
        self.U = values

    @staticmethod
    def identity(mesh: SurfaceMesh, n: int) -> "GaugeField":
        values = np.broadcast_to(np.eye(n, dtype=np.complex128), (len(mesh.edges), n, n)).copy()
        return GaugeField(mesh, values)

    def __repr__(self) -> str:
        return f"GaugeField(edges={len(self.mesh.edges)}, n={self.n})"


class GaugeTransform:
    """One unitary per vertex."""

    __slots__ = ("g",)

    def __init__(self, values: np.ndarray, *, policy: NumericPolicy = DEFAULT_POLICY):
        values = np.array(values, dtype=np.complex128)
        eye = np.eye(values.shape[-1])
        residual = np.linalg.norm(values @ values.conj().swapaxes(-1, -2) - eye, axis=(1, 2))
        if np.max(residual) > policy.unitary_tol:
            raise ValueError("gauge transform entries must be unitary")
        values.setflags(write=False)
        self.g = values


# ---------------------------------------------------------------------------
# mesh engine: batched plaquette / log / gradient kernels

class _Engine:
    def __init__(self, mesh: SurfaceMesh):
        self.mesh = mesh
        self.areas = np.asarray(mesh.face_areas, dtype=np.float64)
        by_len: dict[int, list[int]] = {}
        for f_idx, face in enumerate(mesh.faces):
            by_len.setdefault(len(face), []).append(f_idx)
        self.groups = []
        for m, faces in sorted(by_len.items()):
            edge_idx = np.array([[e for e, _ in mesh.faces[f]] for f in faces], dtype=np.intp)
            signs = np.array([[s for _, s in mesh.faces[f]] for f in faces], dtype=np.int8)
            self.groups.append((np.array(faces, dtype=np.intp), edge_idx, signs))

    @staticmethod
    def _gather(U: np.ndarray, edges: np.ndarray, signs: np.ndarray) -> np.ndarray:
        w = U[edges]
        flipped = w.conj().swapaxes(-1, -2)
        return np.where((signs < 0)[:, None, None], flipped, w)

    def plaquettes(self, U: np.ndarray) -> np.ndarray:
        n = U.shape[-1]
        out = np.empty((len(self.mesh.faces), n, n), dtype=np.complex128)
        for faces, edge_idx, signs in self.groups:
            acc = self._gather(U, edge_idx[:, 0], signs[:, 0])
            for j in range(1, edge_idx.shape[1]):
                acc = acc @ self._gather(U, edge_idx[:, j], signs[:, j])
            out[faces] = acc
        return out

    def logs(self, U: np.ndarray, eps_branch: float) -> np.ndarray:
        p = self.plaquettes(U)
        n = U.shape[-1]
        if n == 1:
            return (1j * plaquette_angles(p, eps_branch=eps_branch))[:, None, None]
        x = np.empty_like(p)
        for i in range(p.shape[0]):
            x[i] = logm_raw(p[i], eps_branch=eps_branch)
        return x

    def action_from_logs(self, x: np.ndarray) -> float:
        norms = np.sum(np.abs(x) ** 2, axis=(1, 2))
        return float(np.sum(norms / self.areas))

    def gradient_from_logs(self, U: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Riemannian gradient: d/ds S(exp(sZ) U_e) = <G_e, Z>.

        Pairing against log H kills the dexp factor (they commute), so each
        occurrence of an edge in a face boundary contributes the face log
        transported to that edge's frame by the boundary prefix.
        """
        n = U.shape[-1]
        grad = np.zeros((U.shape[0], n, n), dtype=np.complex128)
        eye = np.eye(n, dtype=np.complex128)
        for faces, edge_idx, signs in self.groups:
            xg = x[faces]
            coeff = 2.0 / self.areas[faces]
            prefix = np.broadcast_to(eye, (len(faces), n, n))
            for j in range(edge_idx.shape[1]):
                w = self._gather(U, edge_idx[:, j], signs[:, j])
                nxt = prefix @ w
                q = np.where((signs[:, j] > 0)[:, None, None], prefix, nxt)
                contrib = q.conj().swapaxes(-1, -2) @ xg @ q
                contrib = contrib * (signs[:, j] * coeff)[:, None, None]
                np.add.at(grad, edge_idx[:, j], contrib)
                prefix = nxt
        return grad


def _engine_for(mesh: SurfaceMesh) -> _Engine:
    engine = getattr(mesh, "_lattice_engine", None)
    if engine is None:
        engine = _Engine(mesh)
        mesh._lattice_engine = engine
    return engine


def _unitarize(values: np.ndarray) -> np.ndarray:
    if values.shape[-1] == 1:
        return values / np.abs(values)
    w, _, vh = np.linalg.svd(values)
    return w @ vh


# ---------------------------------------------------------------------------
# observables

def plaquette_holonomy(field: GaugeField, face: int) -> Unitary:
    """Ordered product of edge unitaries around the face boundary."""
    if not (0 <= face < len(field.mesh.faces)):
        raise ValueError(f"face index {face} out of range")
    out = np.eye(field.n, dtype=np.complex128)
    for e, s in field.mesh.faces[face]:
        out = out @ (field.U[e] if s > 0 else field.U[e].conj().T)
    return Unitary(out)


def face_curvature(field: GaugeField, face: int, *, policy: NumericPolicy = DEFAULT_POLICY) -> SkewHermitian:
    """Curvature density log(plaquette)/area; principal branch required."""
    p = plaquette_holonomy(field, face)
    x = logm_raw(p.mat, eps_branch=policy.eps_branch)
    return SkewHermitian(x / field.mesh.face_areas[face])


def ym_action(field: GaugeField, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Sum over faces of area * ||curvature density||^2; zero iff flat."""
    engine = _engine_for(field.mesh)
    return engine.action_from_logs(engine.logs(field.U, policy.eps_branch))


def ym_gradient(field: GaugeField, *, policy: NumericPolicy = DEFAULT_POLICY) -> list[SkewHermitian]:
    """Per-edge Riemannian gradient of the action (left-invariant frame)."""
    engine = _engine_for(field.mesh)
    grad = engine.gradient_from_logs(field.U, engine.logs(field.U, policy.eps_branch))
    skew = (grad - grad.conj().swapaxes(-1, -2)) / 2.0
    return [SkewHermitian(skew[e]) for e in range(len(field.mesh.edges))]


def gradient_norm(field: GaugeField, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    engine = _engine_for(field.mesh)
    grad = engine.gradient_from_logs(field.U, engine.logs(field.U, policy.eps_branch))
    return float(np.sqrt(np.sum(np.abs(grad) ** 2)))


def total_flux(field: GaugeField, *, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Sum of plaquette log phases; integer multiple of 2 pi for n = 1."""
    engine = _engine_for(field.mesh)
    x = engine.logs(field.U, policy.eps_branch)
    return float(np.sum(np.trace(x, axis1=1, axis2=2).imag))


# ---------------------------------------------------------------------------
# gradient flow

def gradient_flow(
    field: GaugeField,
    step_policy: Optional[StepPolicy] = None,
    tol: float = 1e-9,
    max_iter: int = 20000,
    *,
    record_history: bool = False,
    seed: Optional[int] = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[GaugeField, FlowReport]:
    """Descend U_e <- exp(-eta G_e) U_e until the gradient norm reaches tol.

    Backtracking halves eta (reset each iteration) until the action
    decreases; BranchCut during a trial step is treated like an increase.
    Once action differences fall below evaluation precision the gate
    switches to requiring a strict gradient-norm decrease, which stays
    resolvable down to the requested tolerance.  The returned action never
    exceeds the input action beyond roundoff.  Raises NotConverged with the
    partial report when the halving or iteration budget runs out.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    sp = step_policy or StepPolicy()
    engine = _engine_for(field.mesh)
    u = field.U
    x = engine.logs(u, policy.eps_branch)
    action = engine.action_from_logs(x)
    grad = engine.gradient_from_logs(u, x)
    gnorm = float(np.sqrt(np.sum(np.abs(grad) ** 2)))
    history: Optional[list[tuple[int, float, float]]] = (
        [(0, action, gnorm)] if record_history else None
    )
    if gnorm <= tol:
        return field, FlowReport(0, action, gnorm, history, seed)

    eye = np.eye(field.n, dtype=np.complex128)
    eta0 = sp.initial_step if sp.initial_step is not None else 0.25 * float(np.min(engine.areas))
    for iteration in range(1, max_iter + 1):
        eta = eta0
        accepted = False
        moved = True
        grad_trial = None
        # Action differences below this are evaluation noise; in that
        # regime a step must strictly decrease the gradient norm instead.
        slack = 64 * np.finfo(np.float64).eps * max(1.0, abs(action))
        for _ in range(sp.max_halvings + 1):
            step = expm_raw(-eta * grad)
            if np.all(step == eye):
                # step underflowed to the identity: nothing can move
                trial, x_trial, action_trial = u, x, action
                accepted, moved = True, False
                break
            trial = _unitarize(step @ u)
            try:
                x_trial = engine.logs(trial, policy.eps_branch)
            except BranchCutError:
                eta *= sp.shrink
                continue
            action_trial = engine.action_from_logs(x_trial)
            if action_trial < action - slack:
                accepted = True
                break
            if action_trial <= action + slack:
                grad_trial = engine.gradient_from_logs(trial, x_trial)
                gnorm_trial = float(np.sqrt(np.sum(np.abs(grad_trial) ** 2)))
                if gnorm_trial < gnorm:
                    accepted = True
                    break
                grad_trial = None
            eta *= sp.shrink
        report = FlowReport(iteration - 1, action, gnorm, history, seed)
        if not accepted:
            raise NotConvergedError(
                "line search exhausted its halving budget", report, GaugeField(field.mesh, u)
            )
        u, x, action = trial, x_trial, action_trial
        grad = grad_trial if grad_trial is not None else engine.gradient_from_logs(u, x)
        gnorm = float(np.sqrt(np.sum(np.abs(grad) ** 2)))
        if record_history:
            history.append((iteration, action, gnorm))
        if gnorm <= tol:
            return GaugeField(field.mesh, u), FlowReport(iteration, action, gnorm, history, seed)
        if not moved:
            # machine-precision stall: no representable step makes progress
            break
    report = FlowReport(iteration, action, gnorm, history, seed)
    raise NotConvergedError(
        f"gradient norm {gnorm:.3e} above tol {tol:.3e} after {iteration} iterations",
        report,
        GaugeField(field.mesh, u),
    )


# ---------------------------------------------------------------------------
# gauge action and holonomy

def apply_gauge(field: GaugeField, transform: GaugeTransform) -> GaugeField:
    """Change of vertex frames: U_e <- g(tail) U_e g(head)^-1.

    Composes with traversal-order holonomy so that based loop holonomies
    are conjugated by the transform at the basepoint.
    """
    if transform.g.shape != (field.mesh.vertex_count, field.n, field.n):
        raise ValueError("gauge transform size does not match the field")
    tails = np.array([t for t, _ in field.mesh.edges], dtype=np.intp)
    heads = np.array([h for _, h in field.mesh.edges], dtype=np.intp)
    values = transform.g[tails] @ field.U @ transform.g[heads].conj().swapaxes(-1, -2)
    return GaugeField(field.mesh, values)


def random_gauge_transform(mesh: SurfaceMesh, n: int, rng: np.random.Generator) -> GaugeTransform:
    a = rng.normal(size=(mesh.vertex_count, n, n)) + 1j * rng.normal(size=(mesh.vertex_count, n, n))
    return GaugeTransform(_unitarize(a))


def loop_holonomy(field: GaugeField, loop: MeshLoop) -> Unitary:
    """Parallel transport around a loop, in traversal order.

    Steps are freely reduced first, so retraced pieces cancel exactly and
    a loop followed by its reversal gives the identity matrix bit for bit.
    """
    validate_loop(field.mesh, loop)
    out = np.eye(field.n, dtype=np.complex128)
    for e, s in clip_steps(loop.steps):
        out = out @ (field.U[e] if s > 0 else field.U[e].conj().T)
    return Unitary(out)


def verify_area_property(
    field: GaugeField,
    loop1: MeshLoop,
    loop2: MeshLoop,
    Lambda: Optional[SkewHermitian] = None,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> float:
    """Residual of the defining property of critical connections.

    For homotopic based loops the holonomies must differ exactly by
    exp(DeltaA * Lambda) where DeltaA is the oriented area between them;
    the Frobenius norm of the mismatch is returned.  Lambda defaults to the
    curvature density of face 0.
    """
    mesh = field.mesh
    if loop1.base != mesh.basepoint or loop2.base != mesh.basepoint:
        raise ValueError("both loops must be based at the mesh basepoint")
    delta = enclosed_area(mesh, loop_concat(loop1, loop_reverse(loop2)))
    lam = Lambda.mat if Lambda is not None else face_curvature(field, 0, policy=policy).mat
    h1 = loop_holonomy(field, loop1).mat
    h2 = loop_holonomy(field, loop2).mat
    return float(np.linalg.norm(h1 - expm_raw(delta * lam) @ h2))


def shrinking_loop_curvature(
    field: GaugeField,
    block_sizes: Optional[Sequence[int]] = None,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> list[tuple[float, float]]:
    """Convergence table for the shrinking-loop curvature limit.

    For square blocks of k x k faces at the basepoint corner the holonomy
    H_s of the boundary satisfies (H_s - I)/s -> curvature density as the
    enclosed area s shrinks; rows are (s, ||(H_s - I)/s - F||) for
    descending k.  Needs a torus grid with N >= 4.
    """
    mesh = field.mesh
    if not isinstance(mesh.grid, TorusGrid):
        raise UnsupportedMeshError("shrinking loops need a torus grid mesh")
    n_grid = mesh.grid.N
    if n_grid < 4:
        raise UnsupportedMeshError("mesh too coarse: needs N >= 4")
    if block_sizes is None:
        block_sizes = []
        k = n_grid // 2
        while k >= 1:
            block_sizes.append(k)
            k //= 2
    if any(not (1 <= k <= n_grid - 1) for k in block_sizes) or list(block_sizes) != sorted(
        block_sizes, reverse=True
    ):
        raise ValueError("block sizes must be strictly within the grid and descending")
    lam = face_curvature(field, mesh.grid.face(0, 0), policy=policy).mat
    eye = np.eye(field.n)
    rows = []
    for k in block_sizes:
        loop = _block_loop(mesh.grid, mesh.basepoint, k)
        area = enclosed_area(mesh, loop)
        h = loop_holonomy(field, loop).mat
        rows.append((float(area), float(np.linalg.norm((h - eye) / area - lam))))
    return rows


def _block_loop(grid: TorusGrid, base: int, k: int) -> MeshLoop:
    steps: list[tuple[int, int]] = []
    steps += [(grid.h_edge(i, 0), 1) for i in range(k)]
    steps += [(grid.v_edge(k, j), 1) for j in range(k)]
    steps += [(grid.h_edge(i, k), -1) for i in range(k - 1, -1, -1)]
    steps += [(grid.v_edge(0, j), -1) for j in range(k - 1, -1, -1)]
    return MeshLoop(base, tuple(steps))


# ---------------------------------------------------------------------------
# constant-curvature fields from representations

def build_ym_field_from_rep(
    mesh: SurfaceMesh,
    rep: YangMillsRep,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> GaugeField:
    """Explicit field with curvature density Lambda on every face.

    Torus: horizontal edges are the identity except the seam column, which
    carries A with a row-graded central correction; vertical edges are
    column-graded powers of exp(Lambda/N^2) with B on the seam row.  The
    assignment closes exactly because Lambda commutes with A, B and the
    commutator [A, B] equals exp(Lambda).  Sphere: the matching abelian
    flux problem is solved per eigencomponent of Lambda on the face
    incidence system.
    """
    diag = validate_rep(rep, policy=policy)
    if not diag.ok:
        raise InvalidRepError("representation does not satisfy the defining constraints")
    if rep.genus != mesh.genus:
        raise UnsupportedMeshError("mesh genus does not match representation genus")
    if mesh.genus == 1:
        if not isinstance(mesh.grid, TorusGrid):
            raise UnsupportedMeshError("genus-1 construction needs a torus grid mesh")
        return _torus_field(mesh, rep)
    return _sphere_field(mesh, rep, policy)


def _torus_field(mesh: SurfaceMesh, rep: YangMillsRep) -> GaugeField:
    grid: TorusGrid = mesh.grid
    n_grid = grid.N
    lam = rep.Lambda.mat
    a = rep.A[0].mat
    b = rep.B[0].mat
    values = np.broadcast_to(
        np.eye(rep.n, dtype=np.complex128), (len(mesh.edges), rep.n, rep.n)
    ).copy()
    for y in range(n_grid):
        values[grid.h_edge(n_grid - 1, y)] = a @ expm_raw(-(y / n_grid) * lam)
    for y in range(n_grid):
        for x in range(n_grid):
            v = expm_raw((x / n_grid**2) * lam)
            if y == n_grid - 1:
                v = v @ b
            values[grid.v_edge(x, y)] = v
    return GaugeField(mesh, values)


def _sphere_field(mesh: SurfaceMesh, rep: YangMillsRep, policy: NumericPolicy) -> GaugeField:
    mu, w = np.linalg.eigh(-1j * rep.Lambda.mat)  # Lambda = w diag(i mu) w*
    if np.max(np.abs(mu) * np.max(mesh.face_areas)) >= np.pi:
        raise UnsupportedMeshError("flux per face exceeds the principal branch; refine the mesh")
    n_faces, n_edges = len(mesh.faces), len(mesh.edges)
    incidence = np.zeros((n_faces, n_edges))
    for f_idx, face in enumerate(mesh.faces):
        for e, s in face:
            incidence[f_idx, e] += s
    thetas = np.zeros((n_edges, rep.n))
    for j, m_j in enumerate(mu):
        k_j = m_j / (2 * np.pi)
        target = m_j * np.asarray(mesh.face_areas)
        target[0] -= 2 * np.pi * np.round(k_j)
        theta, *_ = np.linalg.lstsq(incidence, target, rcond=None)
        thetas[:, j] = theta
    diag_values = np.exp(1j * thetas)  # (E, n) diagonal phases
    values = np.einsum("ij,ej,kj->eik", w, diag_values, w.conj())
    return GaugeField(mesh, _unitarize(values))


def perturb_field(field: GaugeField, rng: np.random.Generator, eps: float) -> GaugeField:
    """Left-multiply every edge by exp(eps X) with X standard Gaussian skew."""
    n = field.n
    a = rng.normal(size=(len(field.mesh.edges), n, n)) + 1j * rng.normal(
        size=(len(field.mesh.edges), n, n)
    )
    skew = (a - a.conj().swapaxes(-1, -2)) / 2.0
    return GaugeField(field.mesh, expm_raw(eps * skew) @ field.U)


# ---------------------------------------------------------------------------
# JSON

def field_to_json(field: GaugeField) -> dict:
    return {
        "mesh": mesh_to_json(field.mesh),
        "n": field.n,
        "edges": [matrix_to_json(field.U[e]) for e in range(len(field.mesh.edges))],
    }


def field_from_json(
    obj: dict,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    base_dir: Optional[str] = None,
) -> GaugeField:
    """Load a field snapshot; "mesh" may be inline JSON or a file path
    (resolved against base_dir when given)."""
    mesh_obj = obj["mesh"]
    if isinstance(mesh_obj, str):
        import json
        import os

        path = mesh_obj if base_dir is None else os.path.join(base_dir, mesh_obj)
        with open(path) as handle:
            mesh_obj = json.load(handle)
    mesh = mesh_from_json(mesh_obj, policy=policy)
    n = int(obj["n"])
    values = np.stack([matrix_from_json(m) for m in obj["edges"]])
    if values.shape[1] != n:
        raise ValueError("field dimension does not match its edge matrices")
    return GaugeField(mesh, values, policy=policy)
