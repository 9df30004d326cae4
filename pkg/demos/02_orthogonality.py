# Deciding orthogonality two ways: the three-condition criterion and a constructed basis.
# Run: python demos/02_orthogonality.py

import random

from gm4 import generators as gen
from gm4 import lattice as lt
from gm4.charge import charge_report, orthogonality_criterion
from gm4.transform import orthogonality_witness
from gm4.wstructure import apply_basis_change

rng = random.Random(3)

# an all-type-2 orthogonal manifold on K4, hidden behind a random change of basis
g = gen.gen_type2_orthogonal(gen.complete_shape(4), rng, genus=gen.minimal_genus)
hidden = apply_basis_change(g, gen.random_basis_change(g, rng))
print("scrambled gluing e1:", hidden.edge("e1").gluing.m)
print("criterion:", orthogonality_criterion(hidden).to_json())

w = orthogonality_witness(hidden)
print("recovered gluings are signed permutations:",
      all(lt.is_signed_permutation(m) for m in w.manifold.matrices().values()))

# %% a random instance: the two answers always agree
tally = {True: 0, False: 0}
for seed in range(30):
    h = gen.gen_random(seed=seed)
    verdict = orthogonality_criterion(h).passed
    assert verdict == orthogonality_witness(h).found
    tally[verdict] += 1
print("30 random type-2 instances, orthogonal / not:", tally[True], "/", tally[False])

# %% per-vertex charge data of one refuted instance
for seed in range(30):
    h = gen.gen_random(seed=seed)
    v = orthogonality_criterion(h)
    if not v.passed:
        print("seed", seed, v.detail)
        for row in charge_report(h):
            print("  ", row["id"], row["conditions"], row.get("K_of_B"))
        break
