"""Charge maps, intersection vectors, and the orthogonality criterion.

Real coefficients are modelled exactly with ``Fraction``.  A vector of
``⊕_{w∈∂v} F_-w`` is a tuple with one 2-vector per edge of ``∂v`` (in the
order of :meth:`GraphManifold.boundary`), each written in the fiber
coordinates ``(f1_-w, f2_-w)`` of the far block.

The sign of the canonical intersection orientation is fixed by one rule:
the primitive generator ``p`` of ``P_|w|`` is chosen so that
``det(p, x, y) > 0`` in ``(z_w, f1_w, f2_w)``, where ``x ∈ F_w`` and
``y ∈ F_-w`` satisfy ``p∧x ~ +u_w`` and ``p∧y ~ +u_-w``.  The rule gives
the same line orientation when read from either end of the edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lattice as lt
from .errors import NotApplicable, TypeObstruction
from .invariants import intersection_lattice, intersection_number, vertex_invariants
from .wstructure import DirectedEdge, GraphManifold, drop_z, embed_fiber, require_valid

Vec2 = tuple[Fraction, Fraction]


def _det2(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def projection_D(g: GraphManifold, w: DirectedEdge, q: Sequence) -> Vec2:
    """Map ``F_-w -> F_w`` given by the d-block, i.e. projection along ``z_w``."""
    gm = g.gluing(w)
    via_d = tuple(Fraction(x) for x in lt.mat_vec(gm.d, q))
    in_l = lt.mat_vec(gm.m, (0, q[0], q[1]))
    via_projection = (Fraction(in_l[1]), Fraction(in_l[2]))
    assert via_d == via_projection
    return via_d


@dataclass(frozen=True)
class OrientationEntry:
    """Oriented primitive generator of ``P_|w|`` seen from both sides of ``w``."""

    edge: DirectedEdge
    p: tuple[int, int, int]          # in L_w coordinates
    p_near: tuple[int, int]          # in (f1_w, f2_w)
    p_far: tuple[int, int]           # in (f1_-w, f2_-w)
    x: tuple[int, int, int]
    y: tuple[int, int, int]
    orientation_det: int


def intersection_orientation(g: GraphManifold, w: DirectedEdge) -> OrientationEntry:
    gm = g.gluing(w)
    p0 = intersection_lattice(g, w).generator()
    near = drop_z(p0)
    x = embed_fiber(lt.primitive_completion(near))
    far = drop_z(lt.mat_vec(lt.unimodular_inverse(gm.m), p0))
    y = lt.mat_vec(gm.m, embed_fiber(lt.primitive_completion(far)))
    d = lt.det(lt.transpose((p0, x, y)))
    if d == 0:
        raise AssertionError(f"degenerate orientation frame on {w}")
    if d > 0:
        return OrientationEntry(w, p0, near, far, x, y, d)
    neg = tuple(-c for c in p0)
    # flipping p forces x and y to flip as well, so the determinant changes sign
    return OrientationEntry(w, neg, tuple(-c for c in near), tuple(-c for c in far),
                            tuple(-c for c in x), tuple(-c for c in y), -d)


# ---------------------------------------------------------------------------
# Q_v, A_v, B_v


@dataclass(frozen=True)
class QSpace:
    """Exact basis of ``Q_v``: one ``A_v`` direction per edge plus one direction with ``alpha = 1``."""

    vertex: str
    edges: tuple[DirectedEdge, ...]
    p_far: tuple[tuple[int, int], ...]
    basis: tuple[tuple[Vec2, ...], ...]
    alphas: tuple[Fraction, ...]

    @property
    def dim_Q(self) -> int:
        return lt.rat_rank([_flatten(b) for b in self.basis])

    @property
    def dim_A(self) -> int:
        return lt.rat_rank([_flatten(b) for b, a in zip(self.basis, self.alphas) if a == 0])

    def alpha(self, q: Sequence[Sequence]) -> Fraction | None:
        """Common wedge coefficient of ``q``, or ``None`` if ``q`` is not in ``Q_v``."""
        vals = {Fraction(_det2(qw, p)) for qw, p in zip(q, self.p_far)}
        return vals.pop() if len(vals) == 1 else None


def _flatten(q: Sequence[Sequence]) -> tuple:
    return tuple(x for qw in q for x in qw)


def space_Q(g: GraphManifold, v: str) -> QSpace:
    edges = tuple(g.boundary(v))
    p_far = tuple(intersection_orientation(g, w).p_far for w in edges)
    zero = (Fraction(0), Fraction(0))
    basis, alphas = [], []
    for k, p in enumerate(p_far):
        basis.append(tuple(tuple(map(Fraction, p)) if i == k else zero for i in range(len(edges))))
        alphas.append(Fraction(0))
    # r with det(r, p) = 1 for every edge
    basis.append(tuple(tuple(Fraction(-c) for c in lt.primitive_completion(p)) for p in p_far))
    alphas.append(Fraction(1))
    q = QSpace(v, edges, p_far, tuple(basis), tuple(alphas))
    for b, a in zip(q.basis, q.alphas):
        assert q.alpha(b) == a
    return q


@dataclass(frozen=True)
class IntersectionVectors:
    """``B_v``: ``None`` generator means ``B_v = {0}``."""

    vertex: str
    generator: tuple[Vec2, ...] | None
    coefficients: tuple[int, ...]


def space_B(g: GraphManifold, v: str) -> IntersectionVectors:
    """Generator of ``B_v = Q_v ∩ ⊕ J_-w``; needs every far block of ``∂v`` to have type 2."""
    edges = g.boundary(v)
    parts, cs = [], []
    for w in edges:
        u = g.target(w)
        vu = vertex_invariants(g, u)
        if vu.type != 2:
            raise TypeObstruction(u, vu.type, f"far block {u} of {w} has type {vu.type}, B_{v} undefined")
        other = vu.classes[1 - vu.class_of(-w)][0]
        vbar = other.generator()
        c = _det2(vbar, intersection_orientation(g, w).p_far)
        cs.append(c)
        parts.append(vbar)
    if any(c == 0 for c in cs):
        return IntersectionVectors(v, None, tuple(cs))
    gen = tuple((Fraction(x[0], c), Fraction(x[1], c)) for x, c in zip(parts, cs))
    return IntersectionVectors(v, gen, tuple(cs))


# ---------------------------------------------------------------------------
# the charge map


def apply_K(g: GraphManifold, v: str, q: Sequence[Sequence]) -> Vec2:
    """``Σ_w (1/i_w) D_w(q_-w)`` for a vector of ``⊕_{w∈∂v} F_-w``."""
    total = [Fraction(0), Fraction(0)]
    for w, qw in zip(g.boundary(v), q):
        i = intersection_number(g.gluing(w))
        dq = projection_D(g, w, qw)
        total[0] += dq[0] / i
        total[1] += dq[1] / i
    return (total[0], total[1])


@dataclass(frozen=True)
class ChargeMap:
    vertex: str
    Q: QSpace
    matrix: tuple[tuple[Fraction, ...], ...]   # 2 x dim Q, columns = images of the Q basis
    kernel_basis: tuple[tuple[Vec2, ...], ...]
    kernel_alphas: tuple[Fraction, ...]

    @property
    def charge_vanishing(self) -> bool:
        """The kernel is not contained in ``A_v``."""
        return any(a != 0 for a in self.kernel_alphas)


def charge_map(g: GraphManifold, v: str) -> ChargeMap:
    Q = space_Q(g, v)
    images = [apply_K(g, v, b) for b in Q.basis]
    matrix = tuple(tuple(img[r] for img in images) for r in range(2))
    kernel = []
    alphas = []
    for coeffs in lt.rat_kernel(matrix, len(Q.basis)):
        vec = tuple(
            (sum(c * b[k][0] for c, b in zip(coeffs, Q.basis)), sum(c * b[k][1] for c, b in zip(coeffs, Q.basis)))
            for k in range(len(Q.edges)))
        assert apply_K(g, v, vec) == (0, 0)
        kernel.append(vec)
        alphas.append(sum(c * a for c, a in zip(coeffs, Q.alphas)))
    return ChargeMap(v, Q, matrix, tuple(kernel), tuple(alphas))


@dataclass(frozen=True)
class ChargeData:
    vertex: str
    dim_Q: int
    dim_A: int
    B_generator: tuple[Vec2, ...] | None
    B_defined: bool
    K_of_B: Vec2 | None
    kernel_basis: tuple[tuple[Vec2, ...], ...]
    charge_vanishing: bool

    @property
    def B_in_kernel(self) -> bool | None:
        if not self.B_defined:
            return None
        return self.K_of_B is None or self.K_of_B == (0, 0)


def charge_data(g: GraphManifold, v: str) -> ChargeData:
    km = charge_map(g, v)
    try:
        b = space_B(g, v)
    except TypeObstruction:
        gen, defined, kb = None, False, None
    else:
        gen, defined = b.generator, True
        kb = apply_K(g, v, gen) if gen is not None else None
    return ChargeData(v, km.Q.dim_Q, km.Q.dim_A, gen, defined, kb, km.kernel_basis, km.charge_vanishing)


# ---------------------------------------------------------------------------
# criterion


@dataclass(frozen=True)
class OrthogonalityVerdict:
    passed: bool
    condition: int | None = None
    location: str | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"verdict": "pass" if self.passed else "refuted"}
        if not self.passed:
            out["failing"] = {"condition": self.condition, "location": self.location, "detail": self.detail}
        return out


def orthogonality_criterion(g: GraphManifold) -> OrthogonalityVerdict:
    """Decide orthogonality of a manifold all of whose blocks have type 2.

    Conditions are checked in order: every intersection number is 1, every
    secondary intersection number is 1, and ``B_v ⊆ ker K_v`` at every vertex.
    """
    require_valid(g)
    vis = {v: vertex_invariants(g, v) for v in sorted(g.vertex_ids())}
    for v, vi in vis.items():
        if vi.type != 2:
            raise NotApplicable(v, vi.type)
    for e in sorted(g.edges, key=lambda e: e.id):
        i = intersection_number(e.gluing)
        if i != 1:
            return OrthogonalityVerdict(False, 1, e.id, f"intersection number {i}")
    for v, vi in vis.items():
        if vi.j != 1:
            return OrthogonalityVerdict(False, 2, v, f"secondary intersection number {vi.j}")
    for v in vis:
        b = space_B(g, v)
        if b.generator is None:
            continue
        k = apply_K(g, v, b.generator)
        if k != (0, 0):
            return OrthogonalityVerdict(False, 3, v, f"K_v(B_v) = ({k[0]}, {k[1]}) is nonzero")
    return OrthogonalityVerdict(True)


def charge_report(g: GraphManifold) -> list[dict]:
    """Per-vertex charge summary for the JSON report."""
    require_valid(g)
    out = []
    for v in sorted(g.vertex_ids()):
        cd = charge_data(g, v)
        vi = vertex_invariants(g, v)
        c1 = all(intersection_number(g.gluing(w)) == 1 for w in g.boundary(v))
        c2 = vi.j == 1
        c3 = cd.B_in_kernel
        failing = [name for name, ok in (("c1", c1), ("c2", c2), ("c3", c3)) if ok is False]
        entry = {"id": v, "dimQ": cd.dim_Q, "dimA": cd.dim_A, "chargeVanishing": cd.charge_vanishing,
                 "conditions": {"c1": c1, "c2": c2, "c3": c3}, "failing": failing}
        if cd.K_of_B is not None:
            entry["K_of_B"] = [str(x) for x in cd.K_of_B]
        out.append(entry)
    return out
