"""Print the structural condition table for the built-in tower corpus,
followed by the congruence-colength and Fitting-replay summaries.

    python3 scripts/condition_table.py
"""

import time

from exalg import towers
from exalg.cli import _render_condition_table

t0 = time.time()
corpus = towers.tower_corpus()
table = towers.audit_table(corpus)
print(_render_condition_table(table))

print("congruence colengths (all must equal r):")
for t in sorted(corpus, key=lambda t: t.label):
    eta = towers.tower_eta(t)
    print(f"  {t.label:22s} len(O/eta) = {towers.ideal_colength(t.lam, eta)}  r = {t.r}")

print("\nFitting replay (annihilator and Fitting ideal vanish, bound holds):")
for t in sorted(corpus, key=lambda t: t.label):
    rep = towers.fitting_replay(t)
    print(
        f"  {t.label:22s} ann={rep['annihilator_vanishes']} "
        f"fitt={rep['fitting_vanishes']} len(I/I^2)={rep['cotangent_length']} >= {rep['bound']}"
    )
print(f"\n{len(corpus)} towers in {time.time() - t0:.1f}s")
