"""Discrete oriented surfaces with a normalized area form.

Two mesh families are built here: periodic N x N torus grids (genus 1) and
subdivided-octahedron spheres (genus 0).  Enclosed area of a loop is a
purely combinatorial winding-number computation: dual spanning-tree
propagation on the sphere, universal-cover lift on the torus.  No
floating-point geometry is involved; winding numbers are exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .policy import DEFAULT_POLICY, NumericPolicy


class MalformedLoopError(ValueError):
    """Loop steps are not head-to-tail composable, or the base is wrong."""


class NotNullHomotopicError(ValueError):
    """A genus-1 loop with nonzero period winding where a contractible one is required."""

    def __init__(self, message: str, windings: tuple[int, int]):
        super().__init__(message)
        self.windings = windings


class UnsupportedMeshError(ValueError):
    """Operation needs a recognized torus-grid or sphere mesh structure."""


def wrap_mod1(t: float) -> float:
    """Canonical representative of t mod 1 in the half-open interval (-1/2, 1/2]."""
    r = math.remainder(t, 1.0)
    if r <= -0.5:
        r += 1.0
    return r


@dataclass(frozen=True)
class TorusGrid:
    """Grid structure of a builder torus mesh: edge index -> (kind, x, y)."""

    N: int

    def edge_info(self, edge: int) -> tuple[str, int, int]:
        n = self.N
        if edge < n * n:
            return ("h", edge % n, edge // n)
        e = edge - n * n
        return ("v", e % n, e // n)

    def h_edge(self, x: int, y: int) -> int:
        n = self.N
        return (x % n) + n * (y % n)

    def v_edge(self, x: int, y: int) -> int:
        n = self.N
        return n * n + (x % n) + n * (y % n)

    def vertex(self, x: int, y: int) -> int:
        n = self.N
        return (x % n) + n * (y % n)

    def vertex_xy(self, v: int) -> tuple[int, int]:
        return (v % self.N, v // self.N)

    def face(self, x: int, y: int) -> int:
        n = self.N
        return (x % n) + n * (y % n)


@dataclass(frozen=True)
class SphereGrid:
    subdiv: int


@dataclass(frozen=True)
class MeshLoop:
    """A closed combinatorial path: (edge index, +-1) steps from a base vertex."""

    base: int
    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((int(e), int(s)) for e, s in self.steps))
        if any(s not in (-1, 1) for _, s in self.steps):
            raise MalformedLoopError("step signs must be +1 or -1")


class SurfaceMesh:
    """Oriented closed 2-complex with face areas summing to 1.

    Faces are stored as cyclic step lists (edge index, traversal sign),
    rotated so each boundary starts at its lowest-index vertex.  Every
    undirected edge occurs in exactly two face boundaries with opposite
    signs; this is validated at construction together with the Euler
    characteristic and the area normalization.
    """

    def __init__(
        self,
        genus: int,
        vertex_count: int,
        edges: list[tuple[int, int]],
        faces: list[tuple[tuple[int, int], ...]],
        face_areas,
        basepoint: int,
        *,
        grid: Optional[TorusGrid | SphereGrid] = None,
        policy: NumericPolicy = DEFAULT_POLICY,
    ):
        if genus not in (0, 1):
            raise ValueError("only genus 0 and 1 meshes are supported")
        self.genus = genus
        self.vertex_count = int(vertex_count)
        self.edges = tuple((int(t), int(h)) for t, h in edges)
        self.faces = tuple(tuple((int(e), int(s)) for e, s in f) for f in faces)
        self.face_areas = np.array(face_areas, dtype=np.float64)
        self.face_areas.setflags(write=False)
        self.basepoint = int(basepoint)
        self.grid = grid
        self._adjacency: Optional[list[list[tuple[int, int, int]]]] = None
        self._validate(policy)

    # -- derived queries ---------------------------------------------------

    def step_endpoints(self, edge: int, sign: int) -> tuple[int, int]:
        tail, head = self.edges[edge]
        return (tail, head) if sign > 0 else (head, tail)

    def face_vertices(self, face: int) -> tuple[int, ...]:
        return tuple(self.step_endpoints(e, s)[0] for e, s in self.faces[face])

    def face_start_vertex(self, face: int) -> int:
        e, s = self.faces[face][0]
        return self.step_endpoints(e, s)[0]

    def vertex_steps(self) -> list[list[tuple[int, int, int]]]:
        """Adjacency: per vertex, outgoing (edge, sign, neighbor) steps."""
        if self._adjacency is None:
            adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.vertex_count)]
            for e, (t, h) in enumerate(self.edges):
                adj[t].append((e, 1, h))
                adj[h].append((e, -1, t))
            self._adjacency = adj
        return self._adjacency

    # -- validation ---------------------------------------------------------

    def _validate(self, policy: NumericPolicy) -> None:
        v, e, f = self.vertex_count, len(self.edges), len(self.faces)
        if v - e + f != 2 - 2 * self.genus:
            raise ValueError(
                f"Euler characteristic {v - e + f} does not match genus {self.genus}"
            )
        if len(self.face_areas) != f or np.any(self.face_areas <= 0):
            raise ValueError("face_areas must be positive, one per face")
        if abs(float(np.sum(self.face_areas)) - 1.0) > policy.area_sum_tol:
            raise ValueError("face areas must sum to 1")
        if not (0 <= self.basepoint < v):
            raise ValueError("basepoint out of range")
        seen: dict[int, list[int]] = {}
        for face in self.faces:
            here = self.step_endpoints(*face[0])[0]
            for e_idx, s in face:
                tail, head = self.step_endpoints(e_idx, s)
                if tail != here:
                    raise ValueError("face boundary steps are not composable")
                here = head
                seen.setdefault(e_idx, []).append(s)
            if here != self.step_endpoints(*face[0])[0]:
                raise ValueError("face boundary does not close")
        for e_idx in range(e):
            signs = seen.get(e_idx, [])
            if sorted(signs) != [-1, 1]:
                raise ValueError(
                    f"edge {e_idx} must appear in exactly two faces with opposite signs"
                )


# ---------------------------------------------------------------------------
# builders

def _rotate_to_lowest_vertex(mesh_edges, steps: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    def start(e, s):
        tail, head = mesh_edges[e]
        return tail if s > 0 else head

    starts = [start(e, s) for e, s in steps]
    k = starts.index(min(starts))
    return tuple(steps[k:] + steps[:k])


def build_torus_mesh(
    N: int,
    face_areas=None,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> SurfaceMesh:
    """Periodic N x N square grid: N^2 vertices, 2N^2 edges, N^2 faces.

    Horizontal edge h(x,y) points in +x, vertical edge v(x,y) in +y; the
    face at (x,y) is the counterclockwise square with corner (x,y).  The
    two period cycles through the basepoint (0,0) are available via
    alpha_loop (horizontal) and beta_loop (vertical).
    """
    if N < 2:
        raise ValueError("torus grid needs N >= 2")
    grid = TorusGrid(N)
    edges = []
    for y in range(N):
        for x in range(N):
            edges.append((grid.vertex(x, y), grid.vertex(x + 1, y)))
    for y in range(N):
        for x in range(N):
            edges.append((grid.vertex(x, y), grid.vertex(x, y + 1)))
    faces = []
    for y in range(N):
        for x in range(N):
            steps = [
                (grid.h_edge(x, y), 1),
                (grid.v_edge(x + 1, y), 1),
                (grid.h_edge(x, y + 1), -1),
                (grid.v_edge(x, y), -1),
            ]
            faces.append(_rotate_to_lowest_vertex(edges, steps))
    if face_areas is None:
        face_areas = np.full(N * N, 1.0 / (N * N))
    return SurfaceMesh(1, N * N, edges, faces, face_areas, 0, grid=grid, policy=policy)


def alpha_loop(mesh: SurfaceMesh) -> MeshLoop:
    """Horizontal period cycle through the basepoint of a torus grid."""
    grid = _require_torus(mesh)
    return MeshLoop(mesh.basepoint, tuple((grid.h_edge(x, 0), 1) for x in range(grid.N)))


def beta_loop(mesh: SurfaceMesh) -> MeshLoop:
    """Vertical period cycle through the basepoint of a torus grid."""
    grid = _require_torus(mesh)
    return MeshLoop(mesh.basepoint, tuple((grid.v_edge(0, y), 1) for y in range(grid.N)))


_OCTAHEDRON_AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def build_sphere_mesh(
    subdiv: int,
    face_areas=None,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> SurfaceMesh:
    """Octahedron with each triangular face subdivided subdiv^2 times.

    Vertices are identified across parent faces through their integer
    coordinates i*A + j*B + k*C (i+j+k = subdiv) on the unit octahedron, so
    the result is a closed oriented sphere: V = 4s^2 + 2, E = 12s^2,
    F = 8s^2, all faces of area 1/(8 s^2) unless overridden.
    """
    if subdiv < 1:
        raise ValueError("sphere mesh needs subdiv >= 1")
    s = subdiv
    vertex_ids: dict[tuple[int, int, int], int] = {}
    triangles: list[tuple[int, int, int]] = []

    def vid(key: tuple[int, int, int]) -> int:
        if key not in vertex_ids:
            vertex_ids[key] = len(vertex_ids)
        return vertex_ids[key]

    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                corners = [
                    tuple(s1 * c for c in _OCTAHEDRON_AXES[0]),
                    tuple(s2 * c for c in _OCTAHEDRON_AXES[1]),
                    tuple(s3 * c for c in _OCTAHEDRON_AXES[2]),
                ]
                if s1 * s2 * s3 < 0:
                    corners = [corners[0], corners[2], corners[1]]
                a, b, c = corners

                def point(i: int, j: int) -> int:
                    w0 = s - i - j
                    key = tuple(w0 * a[m] + i * b[m] + j * c[m] for m in range(3))
                    return vid(key)  # type: ignore[arg-type]

                for i in range(s):
                    for j in range(s - i):
                        triangles.append((point(i, j), point(i + 1, j), point(i, j + 1)))
                        if i + j <= s - 2:
                            triangles.append(
                                (point(i + 1, j), point(i + 1, j + 1), point(i, j + 1))
                            )

    edge_ids: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []

    def eid(u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        if key not in edge_ids:
            edge_ids[key] = len(edges)
            edges.append(key)
        return edge_ids[key]

    faces = []
    for u, v, w in triangles:
        steps = []
        for a_, b_ in ((u, v), (v, w), (w, u)):
            steps.append((eid(a_, b_), 1 if a_ < b_ else -1))
        faces.append(_rotate_to_lowest_vertex(edges, steps))

    f = len(faces)
    if face_areas is None:
        face_areas = np.full(f, 1.0 / f)
    return SurfaceMesh(
        0, len(vertex_ids), edges, faces, face_areas, 0, grid=SphereGrid(s), policy=policy
    )


def _require_torus(mesh: SurfaceMesh) -> TorusGrid:
    if mesh.genus != 1 or not isinstance(mesh.grid, TorusGrid):
        raise UnsupportedMeshError("operation needs a torus grid mesh")
    return mesh.grid


# ---------------------------------------------------------------------------
# loop utilities

def validate_loop(mesh: SurfaceMesh, loop: MeshLoop) -> list[int]:
    """Check composability and closure; return the visited vertex path."""
    if not (0 <= loop.base < mesh.vertex_count):
        raise MalformedLoopError("loop base vertex out of range")
    here = loop.base
    path = [here]
    for e, s in loop.steps:
        if not (0 <= e < len(mesh.edges)):
            raise MalformedLoopError(f"edge index {e} out of range")
        tail, head = mesh.step_endpoints(e, s)
        if tail != here:
            raise MalformedLoopError("loop steps are not head-to-tail composable")
        here = head
        path.append(here)
    if here != loop.base:
        raise MalformedLoopError("loop does not return to its base vertex")
    return path


def clip_steps(steps) -> tuple[tuple[int, int], ...]:
    """Delete adjacent (edge, s)(edge, -s) pairs until none remain.

    The result is independent of deletion order (free reduction is
    confluent), so a single stack pass suffices.
    """
    out: list[tuple[int, int]] = []
    for e, s in steps:
        if out and out[-1][0] == e and out[-1][1] == -s:
            out.pop()
        else:
            out.append((e, s))
    return tuple(out)


def loop_concat(l1: MeshLoop, l2: MeshLoop) -> MeshLoop:
    """Traverse l1, then l2 (both based at the same vertex)."""
    if l1.base != l2.base:
        raise MalformedLoopError("cannot concatenate loops at different base vertices")
    return MeshLoop(l1.base, l1.steps + l2.steps)


def loop_reverse(loop: MeshLoop) -> MeshLoop:
    return MeshLoop(loop.base, tuple((e, -s) for e, s in reversed(loop.steps)))


def face_boundary_loop(mesh: SurfaceMesh, face: int) -> MeshLoop:
    return MeshLoop(mesh.face_start_vertex(face), tuple(mesh.faces[face]))


def torus_windings(mesh: SurfaceMesh, loop: MeshLoop) -> tuple[int, int]:
    """Period winding numbers (p, q): signed crossings of the two cut cycles."""
    grid = _require_torus(mesh)
    validate_loop(mesh, loop)
    dx = dy = 0
    for e, s in loop.steps:
        kind, _, _ = grid.edge_info(e)
        if kind == "h":
            dx += s
        else:
            dy += s
    return (dx // grid.N, dy // grid.N)


# ---------------------------------------------------------------------------
# enclosed area

def enclosed_area(
    mesh: SurfaceMesh,
    loop: MeshLoop,
    *,
    tree_seed: Optional[int] = None,
) -> float:
    """Area-weighted winding number sum of a closed loop.

    Genus 0: dual-graph spanning-tree integration of the crossing counts;
    the result is a class mod 1, returned as its canonical representative
    in (-1/2, 1/2].  Genus 1: winding numbers are computed for the lift of
    the loop to the universal cover (loop must be null-homotopic).  The
    spanning tree used for propagation can be varied through tree_seed;
    the result does not depend on it.
    """
    validate_loop(mesh, loop)
    if mesh.genus == 0:
        return _enclosed_area_sphere(mesh, loop, tree_seed)
    return _enclosed_area_torus(mesh, loop, tree_seed)


def _neighbor_order(count: int, tree_seed: Optional[int]) -> list[int]:
    order = list(range(count))
    if tree_seed is not None:
        np.random.default_rng(tree_seed).shuffle(order)
    return order


def _enclosed_area_sphere(mesh: SurfaceMesh, loop: MeshLoop, tree_seed: Optional[int]) -> float:
    crossings = [0] * len(mesh.edges)
    for e, s in loop.steps:
        crossings[e] += s

    # dual adjacency: edge -> [(face, boundary sign)]
    edge_faces: list[list[tuple[int, int]]] = [[] for _ in mesh.edges]
    for f_idx, face in enumerate(mesh.faces):
        for e, s in face:
            edge_faces[e].append((f_idx, s))

    winding = [None] * len(mesh.faces)
    root = 0 if tree_seed is None else int(np.random.default_rng(tree_seed).integers(len(mesh.faces)))
    winding[root] = 0
    queue = [root]
    dual: list[list[tuple[int, int, int]]] = [[] for _ in mesh.faces]
    for e, pair in enumerate(edge_faces):
        (f1, s1), (f2, s2) = pair
        dual[f1].append((f2, e, s1))
        dual[f2].append((f1, e, s2))
    while queue:
        f = queue.pop()
        for k in _neighbor_order(len(dual[f]), tree_seed):
            g, e, sign_f = dual[f][k]
            # w_f * sign_f + w_g * (-sign_f) = crossings[e]
            value = winding[f] - sign_f * crossings[e]
            if winding[g] is None:
                winding[g] = value
                queue.append(g)
            elif winding[g] != value:
                raise MalformedLoopError("inconsistent winding numbers (loop chain is not closed)")
    total = float(np.dot(np.array(winding, dtype=np.float64), mesh.face_areas))
    return wrap_mod1(total)


def _enclosed_area_torus(mesh: SurfaceMesh, loop: MeshLoop, tree_seed: Optional[int]) -> float:
    grid = _require_torus(mesh)
    n = grid.N
    bx, by = grid.vertex_xy(loop.base)
    x, y = bx, by
    # net rightward crossings of horizontal segments / upward of vertical ones
    c_h: dict[tuple[int, int], int] = {}
    c_v: dict[tuple[int, int], int] = {}
    for e, s in loop.steps:  # composability was checked by validate_loop
        kind, _, _ = grid.edge_info(e)
        if kind == "h":
            if s == 1:
                c_h[(x, y)] = c_h.get((x, y), 0) + 1
                x += 1
            else:
                c_h[(x - 1, y)] = c_h.get((x - 1, y), 0) - 1
                x -= 1
        else:
            if s == 1:
                c_v[(x, y)] = c_v.get((x, y), 0) + 1
                y += 1
            else:
                c_v[(x, y - 1)] = c_v.get((x, y - 1), 0) - 1
                y -= 1
    if (x, y) != (bx, by):
        p, q = (x - bx) // n, (y - by) // n
        raise NotNullHomotopicError(
            f"loop has period windings ({p}, {q}); enclosed area needs a null-homotopic loop",
            (p, q),
        )

    cells: set[tuple[int, int]] = set()
    for (a, b) in c_h:  # horizontal segment (a,b)-(a+1,b): cells below/above
        cells.add((a, b - 1))
        cells.add((a, b))
    for (a, b) in c_v:  # vertical segment (a,b)-(a,b+1): cells left/right
        cells.add((a - 1, b))
        cells.add((a, b))
    if not cells:
        return 0.0
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = min(ys) - 1, max(ys) + 1

    winding: dict[tuple[int, int], int] = {}
    start = (x0, y0)
    winding[start] = 0  # margin ring is outside the support of the lift
    queue = [start]
    while queue:
        cx, cy = queue.pop()
        w = winding[(cx, cy)]
        neighbors = (
            # crossing vertical segment at (cx+1, cy): w(left) = w(right) + c_v
            ((cx + 1, cy), -c_v.get((cx + 1, cy), 0)),
            ((cx - 1, cy), +c_v.get((cx, cy), 0)),
            # crossing horizontal segment: w(above) = w(below) + c_h
            ((cx, cy + 1), +c_h.get((cx, cy + 1), 0)),
            ((cx, cy - 1), -c_h.get((cx, cy), 0)),
        )
        for k in _neighbor_order(4, tree_seed):
            (nx, ny), delta = neighbors[k]
            if not (x0 <= nx <= x1 and y0 <= ny <= y1):
                continue
            value = w + delta
            if (nx, ny) not in winding:
                winding[(nx, ny)] = value
                queue.append((nx, ny))
            elif winding[(nx, ny)] != value:
                raise MalformedLoopError("inconsistent winding numbers in the cover patch")

    per_face = [0] * len(mesh.faces)
    for (cx, cy), w in winding.items():
        if w:
            per_face[grid.face(cx, cy)] += w
    return float(np.dot(np.array(per_face, dtype=np.float64), mesh.face_areas))


# ---------------------------------------------------------------------------
# random loops (tests and the CLI's --random pair source)

def random_loop(
    mesh: SurfaceMesh,
    rng: np.random.Generator,
    n_steps: int = 12,
    windings: Optional[tuple[int, int]] = None,
) -> MeshLoop:
    """Random closed walk from the basepoint.

    On a torus grid the loop is closed in the universal cover so its period
    windings equal exactly the requested pair (default (0, 0)).  On a
    sphere the walk is closed through spanning-tree ancestors of the 1-skeleton.
    """
    if mesh.genus == 1:
        return _random_torus_loop(mesh, rng, n_steps, windings or (0, 0))
    if windings not in (None, (0, 0)):
        raise UnsupportedMeshError("period windings only make sense on the torus")
    return _random_sphere_loop(mesh, rng, n_steps)


def _random_torus_loop(mesh, rng, n_steps, windings) -> MeshLoop:
    grid = _require_torus(mesh)
    n = grid.N
    p, q = windings
    bx, by = grid.vertex_xy(mesh.basepoint)
    x, y = bx, by
    steps: list[tuple[int, int]] = []
    moves = ((1, 0), (-1, 0), (0, 1), (0, -1))
    for _ in range(n_steps):
        dx, dy = moves[rng.integers(4)]
        steps.append(_torus_step(grid, x, y, dx, dy))
        x += dx
        y += dy
    tx, ty = bx + p * n, by + q * n
    while x != tx:
        dx = 1 if tx > x else -1
        steps.append(_torus_step(grid, x, y, dx, 0))
        x += dx
    while y != ty:
        dy = 1 if ty > y else -1
        steps.append(_torus_step(grid, x, y, 0, dy))
        y += dy
    return MeshLoop(mesh.basepoint, clip_steps(steps))


def _torus_step(grid: TorusGrid, x: int, y: int, dx: int, dy: int) -> tuple[int, int]:
    if dx == 1:
        return (grid.h_edge(x, y), 1)
    if dx == -1:
        return (grid.h_edge(x - 1, y), -1)
    if dy == 1:
        return (grid.v_edge(x, y), 1)
    return (grid.v_edge(x, y - 1), -1)


def _random_sphere_loop(mesh, rng, n_steps) -> MeshLoop:
    adj = mesh.vertex_steps()
    # spanning tree of the 1-skeleton, parents pointing toward the basepoint
    parent: dict[int, tuple[int, int, int]] = {mesh.basepoint: (-1, 0, -1)}
    frontier = [mesh.basepoint]
    while frontier:
        v = frontier.pop(0)
        for e, s, w in adj[v]:
            if w not in parent:
                parent[w] = (e, -s, v)  # step taking w back to v
                frontier.append(w)
    here = mesh.basepoint
    steps: list[tuple[int, int]] = []
    for _ in range(n_steps):
        e, s, w = adj[here][rng.integers(len(adj[here]))]
        steps.append((e, s))
        here = w
    while here != mesh.basepoint:
        e, s, v = parent[here]
        steps.append((e, s))
        here = v
    return MeshLoop(mesh.basepoint, clip_steps(steps))


def random_homotopic_pair(
    mesh: SurfaceMesh,
    rng: np.random.Generator,
    n_steps: int = 12,
    winding_range: int = 1,
) -> tuple[MeshLoop, MeshLoop]:
    """Two independent random loops in the same homotopy class."""
    if mesh.genus == 1:
        w = (
            int(rng.integers(-winding_range, winding_range + 1)),
            int(rng.integers(-winding_range, winding_range + 1)),
        )
        return (
            random_loop(mesh, rng, n_steps, windings=w),
            random_loop(mesh, rng, n_steps, windings=w),
        )
    return (random_loop(mesh, rng, n_steps), random_loop(mesh, rng, n_steps))


# ---------------------------------------------------------------------------
# JSON encoding (mesh and loop schemas used by the CLI files)

def mesh_to_json(mesh: SurfaceMesh) -> dict:
    """Faces are encoded as 1-based signed edge indices (sign = traversal)."""
    return {
        "genus": mesh.genus,
        "vertices": mesh.vertex_count,
        "edges": [[t, h] for t, h in mesh.edges],
        "faces": [[s * (e + 1) for e, s in face] for face in mesh.faces],
        "face_areas": mesh.face_areas.tolist(),
        "basepoint": mesh.basepoint,
    }


def mesh_from_json(obj: dict, *, policy: NumericPolicy = DEFAULT_POLICY) -> SurfaceMesh:
    faces = [
        tuple((abs(k) - 1, 1 if k > 0 else -1) for k in face)
        for face in obj["faces"]
    ]
    mesh = SurfaceMesh(
        int(obj["genus"]),
        int(obj["vertices"]),
        [(int(t), int(h)) for t, h in obj["edges"]],
        faces,
        obj["face_areas"],
        int(obj["basepoint"]),
        grid=None,
        policy=policy,
    )
    mesh.grid = _detect_grid(mesh)
    return mesh


def _detect_grid(mesh: SurfaceMesh) -> Optional[TorusGrid | SphereGrid]:
    """Recognize builder meshes by exact topological comparison."""
    try:
        if mesh.genus == 1:
            n = math.isqrt(mesh.vertex_count)
            reference = build_torus_mesh(n)
        else:
            s = math.isqrt(len(mesh.faces) // 8)
            reference = build_sphere_mesh(max(s, 1))
    except (ValueError, ZeroDivisionError):
        return None
    if (
        reference.vertex_count == mesh.vertex_count
        and reference.edges == mesh.edges
        and reference.faces == mesh.faces
        and reference.basepoint == mesh.basepoint
    ):
        return reference.grid
    return None


def loop_to_json(loop: MeshLoop) -> dict:
    return {"base": loop.base, "steps": [[e, s] for e, s in loop.steps]}


def loop_from_json(obj: dict) -> MeshLoop:
    return MeshLoop(int(obj["base"]), tuple((int(e), int(s)) for e, s in obj["steps"]))
