"""Constructions on W-structures: adapted bases, re-gluing, orthogonality
witnesses and unwinding of the intersection numbers.

Every construction records the checks it performs in an
:class:`AssertionLedger`.  A failed check raises
:class:`~gm4.errors.InternalAssertionError` carrying the ledger, since it
means either a bug or input the construction should never have accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from . import lattice as lt
from .errors import (
    DegenerateGluing,
    InternalAssertionError,
    PreconditionFailed,
    SecondaryIndexObstruction,
    SplitFailure,
    TypeObstruction,
    TypeTooLarge,
)
from .invariants import (
    fiber_join_index,
    intersection_number,
    side_lattice,
    vertex_invariants,
)
from .lattice import IntMatrix, Lattice
from .wstructure import (
    FIBER_IN_L,
    BasisChange,
    DirectedEdge,
    GraphManifold,
    apply_basis_change,
    embed_fiber,
    require_valid,
    validate,
)


@dataclass
class Check:
    stage: str
    name: str
    location: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"stage": self.stage, "check": self.name, "location": self.location,
                "ok": self.ok, "detail": self.detail}


@dataclass
class AssertionLedger:
    checks: list[Check] = field(default_factory=list)

    def record(self, stage, name, location, ok, detail="") -> bool:
        self.checks.append(Check(stage, name, str(location), bool(ok), detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def raise_if_failed(self, exc_type=InternalAssertionError):
        bad = self.failures()
        if bad:
            c = bad[0]
            raise exc_type(f"{c.stage}: {c.name} failed at {c.location} {c.detail}".rstrip(), self)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


# ---------------------------------------------------------------------------
# adapted bases


def _sigma_from_columns(c1, c2) -> IntMatrix:
    return ((c1[0], c2[0]), (c1[1], c2[1]))


def adapted_basis(g: GraphManifold) -> BasisChange:
    """Basis change putting ``f1_v`` in ``P1_v`` and, at type-2 blocks, ``f2_v`` in ``P2_v``."""
    require_valid(g)
    eps, sigma = {}, {}
    for v in g.vertex_ids():
        vi = vertex_invariants(g, v)
        if vi.type > 2:
            raise TypeTooLarge(v, vi.type)
        if vi.j != 1:
            raise SecondaryIndexObstruction(v, vi.j)
        p1 = vi.P1.generator()
        p2 = vi.P2.generator() if vi.type == 2 else lt.primitive_completion(p1)
        s = _sigma_from_columns(p1, p2)
        sigma[v] = s
        eps[v] = lt.det(s)
    return BasisChange(eps, sigma, {})


def fiber_axis(lat: Lattice) -> int:
    """1 or 2 when a rank-1 fiber lattice is spanned by ``f1`` or ``f2``."""
    gen = lat.generator()
    if gen[1] == 0 and abs(gen[0]) == 1:
        return 1
    if gen[0] == 0 and abs(gen[1]) == 1:
        return 2
    raise ValueError(f"{gen} is not a coordinate axis")


def _z_shift(m: IntMatrix, fiber_col: int, stage: str, where, ledger: AssertionLedger):
    """Shift ``z`` by the fiber part of the column ``fiber_col`` of ``m``.

    Returns ``(T m, delta)`` where ``T(z) = z - delta`` and ``delta`` is
    chosen so that ``beta * column`` is carried onto ``z``.
    """
    col = [row[fiber_col] for row in m]
    beta = col[0]
    ledger.record(stage, "unit z-coefficient", where, beta in (1, -1), f"got {beta}")
    if beta not in (1, -1):
        ledger.raise_if_failed()
    delta = (beta * col[1], beta * col[2])
    shift = ((1, 0, 0), (-delta[0], 1, 0), (-delta[1], 0, 1))
    return lt.mat_mul(shift, m), delta


# ---------------------------------------------------------------------------
# re-gluing


@dataclass
class ReglueResult:
    input_adapted: GraphManifold
    manifold: GraphManifold
    basis_change: BasisChange
    deltas: dict[DirectedEdge, tuple[int, int]]
    ledger: AssertionLedger


def _check_reglue_hypotheses(g: GraphManifold) -> None:
    for e in sorted(g.edges, key=lambda e: e.id):
        i = intersection_number(e.gluing)
        if i != 1:
            raise PreconditionFailed(f"edge {e.id} has intersection number {i}", e.id)
    for v in sorted(g.vertex_ids()):
        vi = vertex_invariants(g, v)
        if vi.type > 2:
            raise TypeTooLarge(v, vi.type)
        if vi.j != 1:
            raise SecondaryIndexObstruction(v, vi.j)


def _lattice_snapshot(g: GraphManifold) -> dict:
    return {
        "P_w": {w: side_lattice(g, w) for w in g.directed_edges()},
        "P_v": {v: vertex_invariants(g, v).P_v for v in g.vertex_ids()},
        "F_e": {e.id: fiber_join_index(e.gluing) for e in g.edges},
        "i": {e.id: intersection_number(e.gluing) for e in g.edges},
        "j": {v: vertex_invariants(g, v).j for v in g.vertex_ids()},
        "type": {v: vertex_invariants(g, v).type for v in g.vertex_ids()},
    }


def reglue(g: GraphManifold) -> ReglueResult:
    """Re-glue every edge so all gluings become signed permutation matrices.

    Needs every intersection number and secondary intersection number to
    be 1 and every block to have type at most 2.  The output is written in
    the adapted basis; the lattices ``P_|w|``, ``P_v`` and ``F_e`` are the
    same as those of the adapted input.
    """
    require_valid(g)
    _check_reglue_hypotheses(g)
    ledger = AssertionLedger()
    h = adapted_basis(g)
    ga = apply_basis_change(g, h)

    new, deltas = {}, {}
    for e in ga.edges:
        w = DirectedEdge(e.id, True)
        a = fiber_axis(side_lattice(ga, w))
        b = fiber_axis(side_lattice(ga, -w))
        # first side: carry the non-matched far fiber vector onto z_w
        m1, deltas[w] = _z_shift(e.gluing.m, 3 - b, "reglue", w, ledger)
        # second side, written from the far end
        r2, deltas[-w] = _z_shift(lt.unimodular_inverse(m1), 3 - a, "reglue", -w, ledger)
        m2 = lt.unimodular_inverse(r2)
        ledger.record("reglue", "signed permutation", e.id, lt.is_signed_permutation(m2), str(m2))
        ledger.record("reglue", "det -1", e.id, lt.det(m2) == -1)
        new[e.id] = m2

    out = ga.with_gluings(new)
    ledger.record("reglue", "output valid", "graph", validate(out).ok, validate(out).summary())
    before, after = _lattice_snapshot(ga), _lattice_snapshot(out)
    for key in before:
        for loc in before[key]:
            ledger.record("reglue", f"{key} preserved", loc, before[key][loc] == after[key][loc])
    ledger.raise_if_failed()
    return ReglueResult(ga, out, h, deltas, ledger)


# ---------------------------------------------------------------------------
# orthogonality witness


@dataclass
class Witness:
    basis_change: BasisChange
    manifold: GraphManifold
    shifts: dict[DirectedEdge, tuple[int, int]]
    ledger: AssertionLedger

    found = True


@dataclass
class Refutation:
    residuals: dict[str, tuple[int, int]]
    shifts: dict[DirectedEdge, tuple[int, int]]

    found = False

    def failing_vertices(self) -> list[str]:
        return sorted(v for v, r in self.residuals.items() if r != (0, 0))


def orthogonality_witness(g: GraphManifold) -> Witness | Refutation:
    """Search for a Waldhausen basis in which every gluing is a signed permutation.

    Works in the adapted basis, where each edge ``w`` has a unique fiber
    shift ``n_w`` sending ``z_w`` onto the far fiber vector not matched by
    ``P_|w|``.  The shifts are independent of the signs chosen for the
    fiber vectors, so a witness exists exactly when they sum to zero at
    every block.
    """
    require_valid(g)
    for v in sorted(g.vertex_ids()):
        vi = vertex_invariants(g, v)
        if vi.type != 2:
            raise TypeObstruction(v, vi.type)
    _check_reglue_hypotheses(g)
    h = adapted_basis(g)
    ga = apply_basis_change(g, h)
    ledger = AssertionLedger()

    shifts = {}
    for w in ga.directed_edges():
        m = ga.gluing(w).m
        b = fiber_axis(side_lattice(ga, -w))
        col = [row[3 - b] for row in m]
        beta = col[0]
        ledger.record("witness", "unit z-coefficient", w, beta in (1, -1), f"got {beta}")
        shifts[w] = (beta * col[1], beta * col[2])
    ledger.raise_if_failed()

    residuals = {}
    for v in sorted(ga.vertex_ids()):
        ws = ga.boundary(v)
        residuals[v] = (sum(shifts[w][0] for w in ws), sum(shifts[w][1] for w in ws))
    if any(r != (0, 0) for r in residuals.values()):
        return Refutation(residuals, shifts)

    total = h.compose(BasisChange({}, {}, shifts), g)
    out = apply_basis_change(g, total)
    for e in out.edges:
        ledger.record("witness", "signed permutation", e.id, lt.is_signed_permutation(e.gluing.m), str(e.gluing.m))
        ledger.record("witness", "det -1", e.id, e.gluing.det == -1)
    ledger.raise_if_failed()
    return Witness(total, out, shifts, ledger)


# ---------------------------------------------------------------------------
# unwinding


@dataclass
class EdgeUnwind:
    edge: str
    A_w: Lattice
    A_minus_w: Lattice
    index: int
    i: int
    j_source: int
    j_target: int
    Z_w: tuple[int, int, int]
    Z_minus_w: tuple[int, int, int]
    gluing: IntMatrix

    @property
    def product_law(self) -> bool:
        """``(L_w : A_w) = j_u * j_v``; holds whenever the intersection number is 1."""
        return self.index == self.j_source * self.j_target


@dataclass
class UnwindResult:
    manifold: GraphManifold          # gluing data of the cover, one representative per edge
    fiber: dict[str, Lattice]        # P_v in the old fiber coordinates
    edges: dict[str, EdgeUnwind]
    J: int
    copies: dict[str, str]
    boundary_components: dict[str, str]
    ledger: AssertionLedger

    def to_json(self) -> dict:
        return {
            "J": self.J,
            "vertices": [{"id": v, "P_v": self.fiber[v].to_json(), "copies": self.copies[v]}
                         for v in sorted(self.fiber)],
            "edges": [{"id": e, "A_w": x.A_w.to_json(), "index": x.index, "i": x.i,
                       "j_source": x.j_source, "j_target": x.j_target,
                       "productLaw": x.product_law, "gluing": [list(r) for r in x.gluing]}
                      for e, x in sorted(self.edges.items())],
            "boundaryComponents": dict(sorted(self.boundary_components.items())),
        }


def _lift_generator(a: Lattice, where, ledger: AssertionLedger, stage="unwind"):
    piv = a.pivots()
    ok = a.rank == 3 and piv[0] == 0 and a.basis[0][0] > 0
    ledger.record(stage, "quotient generator has positive z", where, ok)
    if not ok:
        ledger.raise_if_failed(SplitFailure)
    return a.basis[0]


def unwind(g: GraphManifold) -> UnwindResult:
    """Pass to the lattice data of a finite cover with all i and j equal to 1.

    Each block's fiber group becomes ``P_v``; the boundary lattice of an edge
    becomes ``A_w = <P_v, P_u>``, written in a basis ``(Z_w, P_v basis)``.
    The covering degrees of the base orbifolds stay symbolic (``n_v``).
    """
    require_valid(g)
    ledger = AssertionLedger()
    vis = {v: vertex_invariants(g, v) for v in g.vertex_ids()}
    pb = {v: vi.P_v.basis for v, vi in vis.items()}
    J = prod(vi.j for vi in vis.values())
    z3 = lt.full_lattice(3)

    edges: dict[str, EdgeUnwind] = {}
    new: dict[str, IntMatrix] = {}
    for e in g.edges:
        v, u = e.source[0], e.target[0]
        gm = e.gluing.m
        gi = lt.unimodular_inverse(gm)
        pv_near = lt.hnf([embed_fiber(p) for p in pb[v]])
        pu_far = lt.hnf([lt.mat_vec(gm, embed_fiber(q)) for q in pb[u]])
        pu_near = lt.hnf([embed_fiber(q) for q in pb[u]])
        pv_far = lt.hnf([lt.mat_vec(gi, embed_fiber(p)) for p in pb[v]])
        if pu_far == pv_near:
            raise DegenerateGluing(f"edge {e.id}: transported fiber groups coincide", ledger)
        a_w = lt.join(pv_near, pu_far)
        a_mw = lt.join(pu_near, pv_far)
        ledger.record("unwind", "A_w transports to A_-w", e.id,
                      lt.hnf([lt.mat_vec(gi, x) for x in a_w.basis]) == a_mw)

        i = intersection_number(e.gluing)
        idx = lt.index(a_w, z3)
        jv, ju = vis[v].j, vis[u].j
        ledger.record("unwind", "index (L_w:A_w) = i*j_u*j_v", e.id, idx == i * ju * jv,
                      f"index {idx}, i={i}, j_u={ju}, j_v={jv}")

        split_near = lt.intersect(a_w, FIBER_IN_L) == pv_near
        split_far = lt.intersect(a_mw, FIBER_IN_L) == pu_near
        ledger.record("unwind", "P_v saturated in A_w", e.id, split_near and split_far)
        if not (split_near and split_far):
            ledger.raise_if_failed(SplitFailure)
        z_w = _lift_generator(a_w, e.id, ledger)
        z_mw = _lift_generator(a_mw, f"-{e.id}", ledger)

        near_cols = (z_w,) + tuple(embed_fiber(p) for p in pb[v])
        far_cols = tuple(lt.mat_vec(gm, x) for x in (z_mw,) + tuple(embed_fiber(q) for q in pb[u]))
        coords = lt.mat_mul(lt.rat_inverse(lt.transpose(near_cols)), lt.transpose(far_cols))
        integral = all(Fraction(x).denominator == 1 for row in coords for x in row)
        ledger.record("unwind", "new gluing integral", e.id, integral)
        ledger.raise_if_failed()
        g_new = tuple(tuple(int(x) for x in row) for row in coords)
        ledger.record("unwind", "new gluing det -1", e.id, lt.det(g_new) == -1)
        new[e.id] = g_new
        edges[e.id] = EdgeUnwind(e.id, a_w, a_mw, idx, i, jv, ju, z_w, z_mw, g_new)

    meta = dict(g.metadata)
    meta["unwound"] = True
    model = g.with_gluings(new, meta)
    ledger.record("unwind", "output valid", "graph", validate(model).ok, validate(model).summary())
    ledger.raise_if_failed()

    for e in model.edges:
        i_new = intersection_number(e.gluing)
        ledger.record("unwind", "i' = 1", e.id, i_new == 1 and fiber_join_index(e.gluing) == 1)
    for v in model.vertex_ids():
        vi_new = vertex_invariants(model, v)
        ledger.record("unwind", "j' = 1", v, vi_new.j == 1)
        ledger.record("unwind", "type preserved", v, vi_new.type == vis[v].type)
    for w in model.directed_edges():
        v = model.source(w)
        c = side_lattice(model, w).generator()
        back = tuple(c[0] * pb[v][0][k] + c[1] * pb[v][1][k] for k in range(2))
        ledger.record("unwind", "P'_|w| = P_|w|", w, lt.hnf([back]) == side_lattice(g, w))
    ledger.raise_if_failed()

    copies = {v: f"(N/n_{v})*{J // vis[v].j}" for v in vis}
    boundary = {str(w): f"n_{g.source(w)}/{vis[g.target(w)].j}" for w in g.directed_edges()}
    fiber = {v: vis[v].P_v for v in vis}
    return UnwindResult(model, fiber, edges, J, copies, boundary, ledger)


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class OrthogonalizeResult:
    unwound: UnwindResult
    reglued: ReglueResult

    @property
    def manifold(self) -> GraphManifold:
        return self.reglued.manifold

    @property
    def ledger(self) -> AssertionLedger:
        return AssertionLedger(self.unwound.ledger.checks + self.reglued.ledger.checks)


def orthogonalize(g: GraphManifold) -> OrthogonalizeResult:
    """Unwind to i = j = 1, then re-glue to signed permutation gluings."""
    require_valid(g)
    for v in sorted(g.vertex_ids()):
        vi = vertex_invariants(g, v)
        if vi.type > 2:
            raise TypeTooLarge(v, vi.type)
    un = unwind(g)
    return OrthogonalizeResult(un, reglue(un.manifold))
