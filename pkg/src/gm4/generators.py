"""Example and random W-structures.

Graph shapes are plain ``(vertices, edges)`` pairs where ``edges`` lists
``(source, target)`` vertex pairs; loops and parallel edges are allowed.
Boundary slots are numbered in order of appearance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Callable, Sequence

from . import lattice as lt
from .errors import BadPermutation, BudgetExceeded
from .invariants import intersection_number, vertex_invariants
from .lattice import IntMatrix
from .wstructure import (
    BasisChange,
    BlockSpec,
    DirectedEdge,
    Edge,
    GluingMatrix,
    GraphManifold,
    apply_basis_change,
    validate,
)

Shape = tuple[list[str], list[tuple[str, str]]]

UNIFORM_GLUING: IntMatrix = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
PERTURBED_GLUING: IntMatrix = ((0, 0, 1), (0, 1, 1), (1, 0, 0))


# ---------------------------------------------------------------------------
# shapes


def cycle_shape(k: int) -> Shape:
    vs = [f"v{i}" for i in range(1, k + 1)]
    return vs, [(vs[i], vs[(i + 1) % k]) for i in range(k)]


def theta_shape(path_lengths: Sequence[int] = (1, 1, 1)) -> Shape:
    """Two poles joined by internally disjoint paths with the given edge counts."""
    vs = ["a", "b"]
    es = []
    for p, length in enumerate(path_lengths):
        prev = "a"
        for s in range(1, length):
            mid = f"p{p}_{s}"
            vs.append(mid)
            es.append((prev, mid))
            prev = mid
        es.append((prev, "b"))
    return vs, es


def complete_shape(n: int) -> Shape:
    vs = [f"v{i}" for i in range(1, n + 1)]
    return vs, list(combinations(vs, 2))


def random_shape(rng: random.Random, max_vertices: int = 8, min_degree: int = 1,
                 loops: bool = True) -> Shape:
    """Connected multigraph: a random spanning tree plus extra edges until every degree reaches ``min_degree``."""
    n = rng.randint(1 if loops else 2, max_vertices)
    vs = [f"v{i}" for i in range(1, n + 1)]
    es = [(vs[rng.randrange(i)], vs[i]) for i in range(1, n)]
    for _ in range(rng.randint(0, n)):
        a, b = rng.choice(vs), rng.choice(vs)
        if a != b or loops:
            es.append((a, b))

    def degree(v):
        return sum((a == v) + (b == v) for a, b in es)

    for v in vs:
        while degree(v) < min_degree:
            others = [x for x in vs if x != v]
            if others:
                es.append((v, rng.choice(others)))
            else:
                es.append((v, v))
    return vs, es


def _assemble(shape: Shape, matrices: Sequence[IntMatrix], genus: int | Callable[[int], int] = 1,
              metadata=None) -> GraphManifold:
    vs, es = shape
    slots = {v: 0 for v in vs}
    edges = []
    for k, ((a, b), m) in enumerate(zip(es, matrices)):
        sa = slots[a]
        slots[a] += 1
        sb = slots[b]
        slots[b] += 1
        edges.append(Edge(f"e{k + 1}", (a, sa), (b, sb), GluingMatrix(m)))

    def genus_for(boundary):
        return genus(boundary) if callable(genus) else genus

    blocks = [BlockSpec(v, genus_for(slots[v]), slots[v]) for v in vs]
    return GraphManifold(tuple(blocks), tuple(edges), dict(metadata or {}))


def minimal_genus(boundary: int) -> int:
    """Smallest genus giving a base surface other than a disk or an annulus."""
    return 0 if boundary >= 3 else 1


# ---------------------------------------------------------------------------
# orthogonal gluings


@dataclass(frozen=True)
class PermutationGluing:
    """Gluing sending basis slot ``j`` of the far side to slot ``perm[j]`` with sign ``signs[j]``.

    Slots are ordered ``(z, f1, f2)``.  The reverse direction is the inverse
    permutation automatically, since only the stored matrix is kept.
    """

    perm: tuple[int, int, int]
    signs: tuple[int, int, int] = (1, 1, 1)

    def matrix(self) -> IntMatrix:
        if sorted(self.perm) != [0, 1, 2]:
            raise BadPermutation(f"{self.perm} is not a permutation of (0, 1, 2)")
        if self.perm[0] == 0:
            raise BadPermutation("the permutation must move the z slot")
        signs = list(self.signs)
        m = [[0] * 3 for _ in range(3)]
        for j in range(3):
            m[self.perm[j]][j] = signs[j]
        if lt.det(m) != -1:
            # orientation reversal is part of the data; fix it on the z column
            for r in range(3):
                m[r][0] = -m[r][0]
        return lt.as_matrix(m)


SWAP_Z_F2 = PermutationGluing((2, 1, 0))   # shares f1
SWAP_Z_F1 = PermutationGluing((1, 0, 2))   # shares f2


def matched_gluing(a: int, b: int, signs=(1, 1, 1)) -> PermutationGluing:
    """Orthogonal gluing whose far fiber vector ``f^b`` meets the near fiber vector ``f^a``."""
    perm = [0, 0, 0]
    perm[b] = a
    perm[3 - b] = 0
    perm[0] = 3 - a
    return PermutationGluing(tuple(perm), tuple(signs))


def gen_orthogonal(shape: Shape, gluings: Sequence[PermutationGluing] | None = None,
                   seed: int | None = None, genus=1) -> GraphManifold:
    """Manifold whose gluings are signed permutations; random ones when ``gluings`` is None."""
    rng = random.Random(seed)
    _, es = shape
    if gluings is None:
        perms = [p for p in permutations(range(3)) if p[0] != 0]
        gluings = [PermutationGluing(rng.choice(perms), tuple(rng.choice((1, -1)) for _ in range(3)))
                   for _ in es]
    if len(gluings) != len(es):
        raise ValueError("one gluing per edge is required")
    g = _assemble(shape, [p.matrix() for p in gluings], genus, {"generator": "orthogonal", "seed": seed})
    _assert_unit_intersections(g)
    return g


def alternating_gluings(k: int) -> list[PermutationGluing]:
    """On an even cycle: every block meets one f1-sharing and one f2-sharing edge."""
    return [SWAP_Z_F2 if i % 2 == 0 else SWAP_Z_F1 for i in range(k)]


def gen_type2_orthogonal(shape: Shape, rng: random.Random, genus=1) -> GraphManifold:
    """Orthogonal manifold with every block of type 2 (each block needs degree >= 2)."""
    vs, es = shape
    ends: dict[str, list[tuple[int, int]]] = {v: [] for v in vs}
    for k, (a, b) in enumerate(es):
        ends[a].append((k, 0))
        ends[b].append((k, 1))
    labels: dict[tuple[int, int], int] = {}
    for v, slots in ends.items():
        if len(slots) < 2:
            raise ValueError(f"vertex {v} has degree {len(slots)}; type 2 needs at least 2")
        choice = [rng.choice((1, 2)) for _ in slots]
        if len(set(choice)) == 1:
            choice[rng.randrange(len(choice))] = 3 - choice[0]
        labels.update(zip(slots, choice))
    gluings = [matched_gluing(labels[(k, 0)], labels[(k, 1)], tuple(rng.choice((1, -1)) for _ in range(3)))
               for k in range(len(es))]
    g = _assemble(shape, [p.matrix() for p in gluings], genus, {"generator": "orthogonal-type2"})
    _assert_unit_intersections(g)
    return g


def _assert_unit_intersections(g: GraphManifold) -> None:
    report = validate(g)
    assert report.ok, report.summary()
    for e in g.edges:
        assert intersection_number(e.gluing) == 1
    for v in g.vertex_ids():
        assert vertex_invariants(g, v).j == 1


def gen_cycle_example(k: int = 3, perturbed: bool = False) -> GraphManifold:
    """Cycle of ``k`` blocks over a torus with two holes, glued by the z<->f2 swap.

    With ``perturbed`` the edge from ``v2`` to ``v3`` carries the sheared
    matrix ``[[0,0,1],[0,1,1],[1,0,0]]`` instead.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    mats = [PERTURBED_GLUING if perturbed and i == 1 else UNIFORM_GLUING for i in range(k)]
    meta = {"generator": "cycle-example", "k": k, "perturbed": perturbed}
    g = _assemble(cycle_shape(k), mats, 1, meta)
    _assert_unit_intersections(g)
    return g


# ---------------------------------------------------------------------------
# random data


def random_unimodular(rng: random.Random, n: int, steps: int = 8, bound: int | None = None) -> IntMatrix:
    """Product of random elementary matrices (det +1), entries kept within ``bound``."""
    m = [list(r) for r in lt.identity(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice((-2, -1, 1, 2))
        trial = [row[:] for row in m]
        for r in range(n):
            trial[r][j] += k * trial[r][i]
        if bound is None or all(abs(x) <= bound for row in trial for x in row):
            m = trial
    if rng.random() < 0.5:
        # a column swap with a sign keeps det = 1 while breaking triangular patterns
        i, j = rng.sample(range(n), 2)
        for r in range(n):
            m[r][i], m[r][j] = -m[r][j], m[r][i]
    return lt.as_matrix(m)


def random_gluing_matrix(rng: random.Random, bound: int = 20, steps: int = 10) -> IntMatrix:
    """Random valid gluing matrix (det -1, nonzero b-row) with entries bounded by ``bound``."""
    flip = ((-1, 0, 0), (0, 1, 0), (0, 0, 1))
    while True:
        u = random_unimodular(rng, 3, steps, bound)
        m = lt.mat_mul(u, flip) if rng.random() < 0.5 else lt.mat_mul(flip, u)
        if any(m[0][1:]):
            return m


def random_basis_change(g: GraphManifold, rng: random.Random, bound: int = 3) -> BasisChange:
    eps, sigma, n = {}, {}, {}
    for v in g.vertex_ids():
        s = random_unimodular(rng, 2, 4, bound)
        if rng.random() < 0.5:
            s = lt.mat_mul(s, ((1, 0), (0, -1)))
        sigma[v] = s
        eps[v] = lt.det(s)
        ws = g.boundary(v)
        total = [0, 0]
        for w in ws[:-1]:
            x = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            n[w] = x
            total[0] += x[0]
            total[1] += x[1]
        n[ws[-1]] = (-total[0], -total[1])
    return BasisChange(eps, sigma, n)


def _perturb_type2(g: GraphManifold, rng: random.Random, amount: int) -> GraphManifold:
    """Shear non-z columns by multiples of the column spanning the shared fiber line.

    Column operations of this kind keep det, the b-row, and both fiber
    lattices of the edge, so type, i and j are unchanged; the charge
    condition generally is not.
    """
    new = {}
    for e in g.edges:
        m = [list(r) for r in e.gluing.m]
        w = DirectedEdge(e.id, True)
        # far-side index b of the shared line and its complement
        far_b = _matched_column(m)
        if far_b is not None and rng.random() < 0.7:
            k = rng.randint(-amount, amount)
            for r in range(3):
                m[r][3 - far_b] += k * m[r][far_b]
        inv = [list(r) for r in lt.unimodular_inverse(m)]
        near_a = _matched_column(inv)
        if near_a is not None and rng.random() < 0.7:
            k = rng.randint(-amount, amount)
            for r in range(3):
                inv[r][3 - near_a] += k * inv[r][near_a]
            m = [list(r) for r in lt.unimodular_inverse(inv)]
        new[w.edge] = lt.as_matrix(m)
    return g.with_gluings(new)


def _matched_column(m) -> int | None:
    """Index (1 or 2) of a fiber column lying in the near fiber group, if exactly one does."""
    cols = [k for k in (1, 2) if m[0][k] == 0]
    return cols[0] if len(cols) == 1 else None


def gen_random(shape: Shape | None = None, seed: int = 0, target: str = "i1j1type2",
               max_vertices: int = 8, budget: int = 10000, perturb: float = 0.6) -> GraphManifold:
    """Seeded random manifold.

    ``target="i1j1type2"``: an all-type-2 orthogonal manifold, perturbed
    (with probability ``perturb``) by fiber shears and scrambled by a random
    basis change; kept only if it still has i = j = 1 and type 2 everywhere.
    ``target="unconstrained"``: random bounded gluing matrices on a random
    shape, kept once the result validates.
    """
    rng = random.Random(seed)
    for _ in range(budget):
        if target == "i1j1type2":
            sh = shape or random_shape(rng, max_vertices, min_degree=2)
            g = gen_type2_orthogonal(sh, rng, genus=minimal_genus)
            if rng.random() < perturb:
                g = _perturb_type2(g, rng, 3)
            g = apply_basis_change(g, random_basis_change(g, rng))
            if _is_i1j1type2(g):
                return GraphManifold(g.blocks, g.edges, {"generator": "random", "target": target, "seed": seed})
        elif target == "unconstrained":
            sh = shape or random_shape(rng, max_vertices)
            mats = [random_gluing_matrix(rng, 6, 6) for _ in sh[1]]
            g = _assemble(sh, mats, minimal_genus, {"generator": "random", "target": target, "seed": seed})
            if validate(g).ok:
                return g
        else:
            raise ValueError(f"unknown target {target!r}")
    raise BudgetExceeded(f"no instance found in {budget} attempts")


def _is_i1j1type2(g: GraphManifold) -> bool:
    if not validate(g).ok:
        return False
    if any(intersection_number(e.gluing) != 1 for e in g.edges):
        return False
    for v in g.vertex_ids():
        vi = vertex_invariants(g, v)
        if vi.type != 2 or vi.j != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# prescribed intersection lattices


def _unimodular_with_first_column(p) -> IntMatrix:
    x = lt.primitive_completion(p)
    return ((p[0], x[0]), (p[1], x[1]))


def _block(u2: IntMatrix) -> IntMatrix:
    return ((1, 0, 0), (0, u2[0][0], u2[0][1]), (0, u2[1][0], u2[1][1]))


def gen_prescribed(shape: Shape, fiber_lines: dict[str, Sequence[Sequence[int]]], seed: int = 0,
                   intersection: dict[int, int] | None = None, genus=minimal_genus) -> GraphManifold:
    """Manifold whose blocks have prescribed intersection lattices.

    ``fiber_lines[v]`` lists primitive vectors of ``Z^2``; each edge end at
    ``v`` is assigned one of them (all are used when the degree allows),
    so a block with two lines ``p, q`` gets type 2 and ``j = |det(p, q)|``.
    ``intersection`` optionally maps an edge position to its intersection
    number (default 1).
    """
    rng = random.Random(seed)
    vs, es = shape
    intersection = intersection or {}
    ends: dict[str, list[tuple[int, int]]] = {v: [] for v in vs}
    for k, (a, b) in enumerate(es):
        ends[a].append((k, 0))
        ends[b].append((k, 1))
    line_of: dict[tuple[int, int], tuple[int, int]] = {}
    for v, slots in ends.items():
        lines = [tuple(p) for p in fiber_lines[v]]
        order = list(range(len(slots)))
        rng.shuffle(order)
        for n, idx in enumerate(order):
            line_of[slots[idx]] = lines[n % len(lines)] if n < len(lines) else rng.choice(lines)

    mats = []
    for k in range(len(es)):
        p, q = line_of[(k, 0)], line_of[(k, 1)]
        i = intersection.get(k, 1)
        s = rng.choice((1, -1))
        a = rng.randint(-2, 2)
        c2 = rng.randint(-2, 2)
        # local model: far f1 <-> s*near f1, b-row (0, i), det = -1
        #   [[1, 0, i], [c1, s, d12], [c2, 0, d22]] has det s*(d22 - i*c2)
        d22 = i * c2 - s
        local = ((1, 0, i), (a, s, rng.randint(-2, 2)), (c2, 0, d22))
        assert lt.det(local) == -1
        near = _block(_unimodular_with_first_column(p))
        far = _block(_unimodular_with_first_column(q))
        mats.append(lt.mat_mul(lt.mat_mul(near, local), lt.unimodular_inverse(far)))
    meta = {"generator": "prescribed", "seed": seed}
    return _assemble(shape, mats, genus, meta)


SECONDARY_LINES = {
    1: ((1, 0), (0, 1)),
    2: ((1, 1), (1, -1)),
    3: ((1, 0), (1, 3)),
}


def gen_mixed_secondary(seed: int, max_vertices: int = 7, with_intersections: bool = False) -> GraphManifold:
    """Random type-2 manifold whose secondary intersection numbers range over {1, 2, 3}."""
    rng = random.Random(seed)
    shape = random_shape(rng, max_vertices, min_degree=2)
    lines = {v: SECONDARY_LINES[rng.choice((1, 2, 3))] for v in shape[0]}
    inter = {k: rng.choice((1, 1, 2, 3)) for k in range(len(shape[1]))} if with_intersections else None
    g = gen_prescribed(shape, lines, rng.randrange(2 ** 32), inter)
    g = apply_basis_change(g, random_basis_change(g, rng, 2))
    return GraphManifold(g.blocks, g.edges, {"generator": "mixed-secondary", "seed": seed})


def all_signed_permutation_gluings() -> list[PermutationGluing]:
    """Every orthogonal gluing (z moved, det -1)."""
    out = []
    for perm in permutations(range(3)):
        if perm[0] == 0:
            continue
        for signs in product((1, -1), repeat=3):
            pg = PermutationGluing(perm, signs)
            m = [[0] * 3 for _ in range(3)]
            for j in range(3):
                m[perm[j]][j] = signs[j]
            if lt.det(m) == -1:
                out.append(pg)
    return out
