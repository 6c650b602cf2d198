"""Sweep the numerical criterion over the split-branch family and the
stock no-conclusion ring.

For T = L[x]/(x^2 - t^r x) the cotangent length and the congruence
colength both equal r, so the criterion concludes and the isomorphism
and complete-intersection certificates are verified directly.  The
pinched cubic L[x]/(x^3, tx) mapped onto L has cotangent length 1
against colength 0: the hypothesis fails and the report claims nothing.

    python3 scripts/criterion_sweep.py
"""

from exalg import towers
from exalg.rings import DvrModel, RingMap

for p in (3, 5, 7):
    for r in (1, 2, 3):
        o = DvrModel(p, 1, 16)
        t = towers.branch_algebra(o, r)
        rep = towers.lenstra_check(t.ring, RingMap.identity(t.ring), t)
        print(
            f"p={p} r={r}: len(J/J^2)={rep['cotangent_length']} "
            f"len(O/eta)={rep['eta_colength']} met={rep['criterion_met']} "
            f"iso={rep['isomorphism']} ci={rep['complete_intersection']}"
        )

o = DvrModel(5, 1, 16)
ring, pi = towers.pinched_cubic(o)
rep = towers.lenstra_check(ring, pi, towers.base_algebra(o))
print(
    f"pinched cubic: len(J/J^2)={rep['cotangent_length']} "
    f"len(O/eta)={rep['eta_colength']} met={rep['criterion_met']} "
    f"iso={rep['isomorphism']} ci={rep['complete_intersection']}"
)
