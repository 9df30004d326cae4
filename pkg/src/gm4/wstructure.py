"""Combinatorial W-structure of a 4-dimensional graph-manifold.

Every directed edge ``w`` carries the boundary lattice ``L_w = Z^3`` with the
ordered Waldhausen basis ``(z_w, f1_w, f2_w)``; the fiber group of the source
block is the span of the last two vectors.  Gluing matrices follow one fixed
reading: the columns of ``g_w`` are the coordinates of ``(z_-w, f1_-w, f2_-w)``
in the basis ``(z_w, f1_w, f2_w)``.  Only the matrix of the stored direction
is kept; the opposite direction always uses its exact inverse.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple, Sequence

from . import lattice as lt
from .errors import InvalidBasisChange, InvalidManifold, NotUnimodular
from .lattice import IntMatrix, IntVector, Lattice


@dataclass(frozen=True)
class BlockSpec:
    """A block ``Phi_v x T^2`` recorded by the genus and boundary count of ``Phi_v``."""

    id: str
    genus: int
    boundary: int

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary


@dataclass(frozen=True)
class GluingMatrix:
    m: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "m", lt.as_matrix(self.m))

    @property
    def a(self) -> int:
        return self.m[0][0]

    @property
    def b(self) -> IntVector:
        return self.m[0][1:]

    @property
    def c(self) -> IntVector:
        return (self.m[1][0], self.m[2][0])

    @property
    def d(self) -> IntMatrix:
        return (self.m[1][1:], self.m[2][1:])

    @property
    def det(self) -> int:
        return lt.det(self.m)

    def violations(self) -> list[tuple[str, str]]:
        out = []
        if len(self.m) != 3 or any(len(r) != 3 for r in self.m):
            return [("matrix_shape", "gluing matrix must be 3x3")]
        d = self.det
        if d != -1:
            out.append(("determinant", f"determinant is {d}, expected -1"))
        if not any(self.b):
            out.append(("fiber_identified", "b-row is zero, the gluing identifies the fiber tori"))
        return out

    def transpose(self) -> "GluingMatrix":
        return GluingMatrix(lt.transpose(self.m))


def reverse(gm: GluingMatrix) -> GluingMatrix:
    """Gluing matrix of the opposite direction (the exact integer inverse)."""
    if abs(gm.det) != 1:
        raise NotUnimodular(f"gluing matrix {gm.m} has determinant {gm.det}")
    return GluingMatrix(lt.unimodular_inverse(gm.m))


class DirectedEdge(NamedTuple):
    """Edge ``edge`` traversed along the stored direction (``forward``) or against it."""

    edge: str
    forward: bool = True

    def __neg__(self) -> "DirectedEdge":
        return DirectedEdge(self.edge, not self.forward)

    def __str__(self) -> str:
        return self.edge if self.forward else f"-{self.edge}"


@dataclass(frozen=True)
class Edge:
    id: str
    source: tuple[str, int]
    target: tuple[str, int]
    gluing: GluingMatrix


@dataclass(frozen=True)
class GraphManifold:
    blocks: tuple[BlockSpec, ...]
    edges: tuple[Edge, ...]
    metadata: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_edge_index", {e.id: e for e in self.edges})
        object.__setattr__(self, "_block_index", {b.id: b for b in self.blocks})

    # -- lookups -------------------------------------------------------------

    def vertex_ids(self) -> list[str]:
        return [b.id for b in self.blocks]

    def block(self, v: str) -> BlockSpec:
        return self._block_index[v]

    def edge(self, e: str) -> Edge:
        return self._edge_index[e]

    def directed_edges(self) -> Iterator[DirectedEdge]:
        for e in self.edges:
            yield DirectedEdge(e.id, True)
            yield DirectedEdge(e.id, False)

    def source(self, w: DirectedEdge) -> str:
        e = self._edge_index[w.edge]
        return (e.source if w.forward else e.target)[0]

    def target(self, w: DirectedEdge) -> str:
        return self.source(-w)

    def slot(self, w: DirectedEdge) -> int:
        e = self._edge_index[w.edge]
        return (e.source if w.forward else e.target)[1]

    def gluing(self, w: DirectedEdge) -> GluingMatrix:
        gm = self._edge_index[w.edge].gluing
        return gm if w.forward else reverse(gm)

    def boundary(self, v: str) -> list[DirectedEdge]:
        """Directed edges leaving ``v`` ordered by boundary slot."""
        out = [w for w in self.directed_edges() if self.source(w) == v]
        return sorted(out, key=self.slot)

    def with_gluings(self, matrices: Mapping[str, Sequence[Sequence[int]]], metadata=None) -> "GraphManifold":
        """Copy with the stored matrices of the named edges replaced."""
        edges = tuple(Edge(e.id, e.source, e.target, GluingMatrix(matrices[e.id]))
                      if e.id in matrices else e for e in self.edges)
        return GraphManifold(self.blocks, edges, dict(self.metadata if metadata is None else metadata))

    def matrices(self) -> dict[str, IntMatrix]:
        return {e.id: e.gluing.m for e in self.edges}


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    rule: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{v.rule} at {v.location}: {v.message}" for v in self.violations)

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "violations": [{"rule": v.rule, "location": v.location, "message": v.message}
                               for v in self.violations]}


def validate(g: GraphManifold) -> ValidationReport:
    """Collect every broken rule; an empty report means the manifold is valid."""
    out: list[Violation] = []
    seen = set()
    for b in g.blocks:
        if b.id in seen:
            out.append(Violation("duplicate_id", b.id, "block id used twice"))
        seen.add(b.id)
        if b.genus < 0:
            out.append(Violation("genus", b.id, f"negative genus {b.genus}"))
        if b.boundary < 1:
            out.append(Violation("boundary_count", b.id, "a block needs at least one boundary torus"))
        elif b.euler_characteristic >= 0:
            shape = "disk" if b.boundary == 1 else "annulus"
            out.append(Violation("euler_characteristic", b.id,
                                 f"base surface is a {shape} (Euler characteristic {b.euler_characteristic})"))

    used: dict[tuple[str, int], list[str]] = defaultdict(list)
    seen_edges = set()
    for e in g.edges:
        if e.id in seen_edges:
            out.append(Violation("duplicate_id", e.id, "edge id used twice"))
        seen_edges.add(e.id)
        for end in (e.source, e.target):
            v, s = end
            if v not in g._block_index:
                out.append(Violation("unknown_vertex", e.id, f"unknown block {v!r}"))
                continue
            if not 0 <= s < g.block(v).boundary:
                out.append(Violation("slot_pairing", e.id, f"slot {s} out of range for block {v}"))
                continue
            used[end].append(e.id)
        for rule, msg in e.gluing.violations():
            out.append(Violation(rule, e.id, msg))

    for b in g.blocks:
        for s in range(max(b.boundary, 0)):
            n = len(used.get((b.id, s), ()))
            if n != 1:
                out.append(Violation("slot_pairing", f"{b.id}[{s}]",
                                     f"boundary slot used by {n} edge ends, expected 1"))

    if g.blocks and not _connected(g):
        out.append(Violation("connectivity", "graph", "the graph is not connected"))
    if not g.blocks:
        out.append(Violation("connectivity", "graph", "no blocks"))
    return ValidationReport(tuple(out))


def _connected(g: GraphManifold) -> bool:
    adj = defaultdict(set)
    for e in g.edges:
        a, b = e.source[0], e.target[0]
        adj[a].add(b)
        adj[b].add(a)
    start = g.blocks[0].id
    seen = {start}
    stack = [start]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen >= set(g.vertex_ids())


def require_valid(g: GraphManifold) -> None:
    report = validate(g)
    if not report.ok:
        raise InvalidManifold(report)


# ---------------------------------------------------------------------------
# Waldhausen basis changes


@dataclass(frozen=True)
class BasisChange:
    """An element of the basis transformation group.

    ``eps[v]`` and ``sigma[v]`` act at every edge leaving ``v``; ``n[w]`` is
    the fiber shift of ``z_w``.  Missing entries mean identity / zero.
    """

    eps: Mapping[str, int] = field(default_factory=dict)
    sigma: Mapping[str, IntMatrix] = field(default_factory=dict)
    n: Mapping[DirectedEdge, IntVector] = field(default_factory=dict)

    def eps_at(self, v: str) -> int:
        return self.eps.get(v, 1)

    def sigma_at(self, v: str) -> IntMatrix:
        return lt.as_matrix(self.sigma.get(v, lt.identity(2)))

    def n_at(self, w: DirectedEdge) -> IntVector:
        return tuple(self.n.get(w, (0, 0)))

    def matrix(self, g: GraphManifold, w: DirectedEdge) -> IntMatrix:
        """``h_w = [[eps, 0], [n_w, sigma]]``; its columns are the new basis in old coordinates."""
        v = g.source(w)
        e, s, n = self.eps_at(v), self.sigma_at(v), self.n_at(w)
        return ((e, 0, 0), (n[0], s[0][0], s[0][1]), (n[1], s[1][0], s[1][1]))

    def problems(self, g: GraphManifold) -> list[str]:
        out = []
        for v in g.vertex_ids():
            e, s = self.eps_at(v), self.sigma_at(v)
            if e not in (1, -1):
                out.append(f"eps at {v} is {e}")
            if e * lt.det(s) != 1:
                out.append(f"eps*det(sigma) at {v} is {e * lt.det(s)}, expected 1")
            total = [0, 0]
            for w in g.boundary(v):
                n = self.n_at(w)
                total[0] += n[0]
                total[1] += n[1]
            if total != [0, 0]:
                out.append(f"fiber shifts at {v} sum to {tuple(total)}")
        return out

    def inverse(self, g: GraphManifold) -> "BasisChange":
        sigma_inv = {v: lt.unimodular_inverse(self.sigma_at(v)) for v in g.vertex_ids()}
        n = {}
        for w in g.directed_edges():
            v = g.source(w)
            m = lt.mat_vec(sigma_inv[v], self.n_at(w))
            n[w] = tuple(-self.eps_at(v) * x for x in m)
        return BasisChange({v: self.eps_at(v) for v in g.vertex_ids()}, sigma_inv, n)

    def compose(self, other: "BasisChange", g: GraphManifold) -> "BasisChange":
        """The change equivalent to applying ``self`` and then ``other``."""
        eps, sigma, n = {}, {}, {}
        for v in g.vertex_ids():
            eps[v] = self.eps_at(v) * other.eps_at(v)
            sigma[v] = lt.mat_mul(self.sigma_at(v), other.sigma_at(v))
        for w in g.directed_edges():
            v = g.source(w)
            shifted = lt.mat_vec(self.sigma_at(v), other.n_at(w))
            base = self.n_at(w)
            n[w] = tuple(other.eps_at(v) * base[i] + shifted[i] for i in range(2))
        return BasisChange(eps, sigma, n)

    def to_json(self, g: GraphManifold) -> dict:
        return {
            "vertices": [{"id": v, "eps": self.eps_at(v), "sigma": [list(r) for r in self.sigma_at(v)]}
                         for v in sorted(g.vertex_ids())],
            "shifts": [{"edge": str(w), "n": list(self.n_at(w))}
                       for w in sorted(g.directed_edges(), key=lambda d: (d.edge, not d.forward))],
        }


def apply_basis_change(g: GraphManifold, h: BasisChange) -> GraphManifold:
    """Rewrite every gluing matrix in the new Waldhausen basis: ``h_w^-1 g_w h_-w``."""
    problems = h.problems(g)
    if problems:
        raise InvalidBasisChange("; ".join(problems))
    new = {}
    for e in g.edges:
        w = DirectedEdge(e.id, True)
        hw_inv = lt.unimodular_inverse(h.matrix(g, w))
        new[e.id] = lt.mat_mul(lt.mat_mul(hw_inv, e.gluing.m), h.matrix(g, -w))
    return g.with_gluings(new)


# ---------------------------------------------------------------------------
# fiber lattices


FIBER_IN_L = lt.hnf([(0, 1, 0), (0, 0, 1)])


def fiber_lattice_at(g: GraphManifold, w: DirectedEdge) -> tuple[Lattice, Lattice]:
    """``(F_w, F_-w)`` in the coordinates of ``L_w``."""
    return FIBER_IN_L, far_fiber(g.gluing(w))


def far_fiber(gm: GluingMatrix) -> Lattice:
    cols = lt.transpose(gm.m)
    return lt.hnf([cols[1], cols[2]])


def embed_fiber(v: Sequence[int]) -> IntVector:
    return (0, int(v[0]), int(v[1]))


def drop_z(v: Sequence[int]):
    """Fiber coordinates of a vector of ``L_w`` lying in ``F_w``."""
    if v[0] != 0:
        raise ValueError(f"{tuple(v)} has a nonzero z-coordinate")
    return (v[1], v[2])
