"""Intersection lattices, parallelism, type, and the two intersection numbers.

All lattices attached to a directed edge ``w`` live in ``L_w`` coordinates;
lattices attached to a vertex live in the fiber coordinates ``(f1_v, f2_v)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lattice as lt
from .errors import InternalAssertionError, RankViolation, TypeTooLarge
from .lattice import Lattice
from .wstructure import (
    FIBER_IN_L,
    DirectedEdge,
    GluingMatrix,
    GraphManifold,
    drop_z,
    far_fiber,
    require_valid,
)


def intersection_lattice(g: GraphManifold, w: DirectedEdge) -> Lattice:
    """``P_|w| = F_w ∩ F_-w`` in ``L_w`` coordinates (always rank 1 on valid input)."""
    p = lt.saturate(lt.intersect(FIBER_IN_L, far_fiber(g.gluing(w))))
    if p.rank != 1:
        raise RankViolation(f"intersection lattice of {w} has rank {p.rank}")
    return p


def fiber_generator(p: Lattice) -> tuple[int, int]:
    """Canonical primitive generator of a rank-1 lattice of ``L_w`` lying in ``F_w``, in fiber coordinates."""
    return drop_z(p.generator())


def side_lattice(g: GraphManifold, w: DirectedEdge) -> Lattice:
    """The intersection lattice of ``w`` viewed inside the fiber group of the source of ``w``."""
    return lt.hnf([fiber_generator(intersection_lattice(g, w))])


def intersection_number(gm: GluingMatrix) -> int:
    """gcd of the b-row."""
    return lt.content(gm.b)


def fiber_join_index(gm: GluingMatrix) -> int:
    """Index of ``<F_w, F_-w>`` in ``L_w``."""
    return lt.index(lt.join(FIBER_IN_L, far_fiber(gm)), lt.full_lattice(3))


def index_characterization(g: GraphManifold, e: str) -> tuple[int, int]:
    """``(i_e, (L_e : F_e))``, which must agree for every valid edge."""
    gm = g.edge(e).gluing
    i, idx = intersection_number(gm), fiber_join_index(gm)
    if i != idx:
        raise InternalAssertionError(f"edge {e}: gcd of b-row is {i} but (L_e:F_e) = {idx}")
    return i, idx


@dataclass(frozen=True)
class EdgeInvariants:
    edge: str
    i: int
    P_w: Lattice
    P_in_Fv_from: Lattice
    P_in_Fu_to: Lattice
    F_e_index: int

    def to_json(self) -> dict:
        return {"id": self.edge, "i": self.i, "P_w": self.P_w.to_json(),
                "P_from": self.P_in_Fv_from.to_json(), "P_to": self.P_in_Fu_to.to_json(),
                "F_e_index": self.F_e_index}


def edge_invariants(g: GraphManifold, e: str) -> EdgeInvariants:
    w = DirectedEdge(e, True)
    i, idx = index_characterization(g, e)
    return EdgeInvariants(e, i, intersection_lattice(g, w), side_lattice(g, w), side_lattice(g, -w), idx)


@dataclass(frozen=True)
class VertexInvariants:
    vertex: str
    classes: tuple[tuple[Lattice, tuple[DirectedEdge, ...]], ...]
    P_v: Lattice
    j: int

    @property
    def type(self) -> int:
        return len(self.classes)

    @property
    def parallel_classes(self) -> tuple[tuple[DirectedEdge, ...], ...]:
        return tuple(ws for _, ws in self.classes)

    @property
    def P1(self) -> Lattice:
        return self.classes[0][0]

    @property
    def P2(self) -> Lattice | None:
        return self.classes[1][0] if len(self.classes) > 1 else None

    def class_of(self, w: DirectedEdge) -> int:
        """0-based label of the class containing ``w``."""
        for k, (_, ws) in enumerate(self.classes):
            if w in ws:
                return k
        raise KeyError(w)

    def to_json(self) -> dict:
        return {"id": self.vertex, "type": self.type, "j": self.j,
                "classSizes": [len(ws) for _, ws in self.classes],
                "classes": [lat.to_json() for lat, _ in self.classes],
                "P_v": self.P_v.to_json()}


def _class_key(lat: Lattice):
    # descending lexicographic order: the class spanned by f1 (if any) comes first
    return tuple(-x for x in lat.basis[0])


def vertex_invariants(g: GraphManifold, v: str) -> VertexInvariants:
    groups: dict[Lattice, list[DirectedEdge]] = {}
    for w in g.boundary(v):
        groups.setdefault(side_lattice(g, w), []).append(w)
    ordered = sorted(groups.items(), key=lambda kv: _class_key(kv[0]))
    classes = tuple((lat, tuple(ws)) for lat, ws in ordered)
    fv = lt.full_lattice(2)
    if len(classes) == 1:
        p_v = fv
    else:
        p_v = lt.hnf([lat.generator() for lat, _ in classes], 2)
    return VertexInvariants(v, classes, p_v, lt.index(p_v, fv))


def require_type_at_most(vi: VertexInvariants, limit: int = 2) -> None:
    if vi.type > limit:
        raise TypeTooLarge(vi.vertex, vi.type)


def manifold_type(g: GraphManifold) -> int:
    return max(vertex_invariants(g, v).type for v in g.vertex_ids())


@dataclass(frozen=True)
class InvariantReport:
    edges: tuple[EdgeInvariants, ...]
    vertices: tuple[VertexInvariants, ...]
    notes: tuple[str, ...] = ()

    @property
    def manifold_type(self) -> int:
        return max(v.type for v in self.vertices)

    def edge(self, e: str) -> EdgeInvariants:
        return next(x for x in self.edges if x.edge == e)

    def vertex(self, v: str) -> VertexInvariants:
        return next(x for x in self.vertices if x.vertex == v)

    def to_json(self) -> dict:
        return {"manifoldType": self.manifold_type,
                "edges": [e.to_json() for e in self.edges],
                "vertices": [v.to_json() for v in self.vertices],
                "notes": list(self.notes)}


def invariant_report(g: GraphManifold, reading: str = "C1") -> InvariantReport:
    """Per-edge and per-vertex invariants, ordered by id.

    ``reading`` only labels the note attached to the cycle example; the
    matrices of ``g`` are always interpreted in C1.
    """
    require_valid(g)
    edges = tuple(edge_invariants(g, e.id) for e in sorted(g.edges, key=lambda e: e.id))
    vertices = tuple(vertex_invariants(g, v) for v in sorted(g.vertex_ids()))
    notes = []
    example = g.metadata.get("generator") if g.metadata else None
    if example == "cycle-example":
        types = sorted({v.type for v in vertices})
        if types != [2]:
            notes.append("cycle example: every block of this construction is described as type 2, "
                         f"but the computed block types are {types} under the {reading} reading")
    return InvariantReport(edges, vertices, tuple(notes))


def invariant_signature(g: GraphManifold) -> dict:
    """Basis-independent summary: type, i and j values, and the partition of each ∂v."""
    return {
        "type": {v: vertex_invariants(g, v).type for v in g.vertex_ids()},
        "i": {e.id: intersection_number(e.gluing) for e in g.edges},
        "j": {v: vertex_invariants(g, v).j for v in g.vertex_ids()},
        "partition": {v: frozenset(frozenset(ws) for ws in vertex_invariants(g, v).parallel_classes)
                      for v in g.vertex_ids()},
    }
