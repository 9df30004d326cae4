# The three-block cycle glued by the z <-> f2 swap, with and without the shear on one edge.
# Run: python demos/01_cycle_example.py

from gm4 import generators as gen
from gm4.invariants import invariant_report, vertex_invariants
from gm4.jsonio import dumps_manifold, loads_manifold

plain = gen.gen_cycle_example(3)
sheared = gen.gen_cycle_example(3, perturbed=True)

for name, g in [("plain", plain), ("sheared", sheared)]:
    rep = invariant_report(g)
    print(f"{name}: i = {[e.i for e in rep.edges]}, j = {[v.j for v in rep.vertices]}, "
          f"types = {[v.type for v in rep.vertices]}")

# %% the same matrices read as transposes
for name, g in [("plain", plain), ("sheared", sheared)]:
    t = loads_manifold(dumps_manifold(g), transpose_gluing=True)
    print(f"{name}, transposed reading: types = {[vertex_invariants(t, v).type for v in sorted(t.vertex_ids())]}")

# %% the report carries a note when the computed types are not all 2
for note in invariant_report(sheared).notes:
    print("note:", note)
