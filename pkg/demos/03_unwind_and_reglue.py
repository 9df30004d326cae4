# From arbitrary intersection numbers to signed-permutation gluings.
# Run: python demos/03_unwind_and_reglue.py

from gm4 import generators as gen
from gm4 import lattice as lt
from gm4.invariants import intersection_number, vertex_invariants
from gm4.transform import orthogonalize, unwind

g = gen.gen_mixed_secondary(seed=11, max_vertices=5, with_intersections=True)
print("j per block:", {v: vertex_invariants(g, v).j for v in sorted(g.vertex_ids())})
print("i per edge: ", {e.id: intersection_number(e.gluing) for e in g.edges})

u = unwind(g)
print("J =", u.J)
for e, x in sorted(u.edges.items()):
    # the index of A_w picks up the intersection number as well as both j's
    print(f"  {e}: (L:A) = {x.index} = i*j_u*j_v = {x.i}*{x.j_target}*{x.j_source}")
print("after unwinding: i =", {e.id: intersection_number(e.gluing) for e in u.manifold.edges})
print("copies per block:", u.copies)

# %% re-glue the unwound data
r = orthogonalize(g)
print("final gluings signed permutations:",
      all(lt.is_signed_permutation(m) for m in r.manifold.matrices().values()))
print("assertions checked:", len(r.ledger.checks), "failed:", len(r.ledger.failures()))
