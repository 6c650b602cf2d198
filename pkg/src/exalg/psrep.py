"""Trace/determinant pairs on a finite group and their algebra extensions.

A pair (t, d) models the trace and determinant of a virtual 2-dimensional
representation: d is multiplicative and unit-valued, t(1) = 2, and the pair
satisfies the degree-2 trace identity

    t(g) t(h) = t(gh) + d(h) t(g h^-1).

The pair extends to the group algebra E = A[G]: t linearly, and the
determinant as the quadratic map d~(x) = (t(x)^2 - t(x^2)) / 2, which is
where the odd-characteristic restriction earns its keep.

The kernel of the extended determinant law is computed as the radical of
the trace pairing {x : t(x e) = 0 for all e}.  For a central trace this is
the whole kernel: cyclicity gives t(x g x h) = t(x * (g x h)) = 0 for any x
in the radical, so the quadratic obstructions collapse.  The vanishing of
d~ on the computed radical is still verified element by element and an
InvariantViolation means the input pair was not a pseudorepresentation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebras import AssocAlgebra, group_algebra
from .errors import BudgetExceeded, InputError, InvariantViolation
from .groups import GroupChar, MarkedGroup
from .rings import FiniteRing, RingMap

__all__ = [
    "Pseudorep2",
    "validate_pseudorep",
    "char_poly_at",
    "psrep_from_chars",
    "psrep_base_change",
    "MatrixRep2",
    "psi_of_rep",
    "rep_from_chars",
    "ExtendedPsrep",
    "residual_split",
]


@dataclass(eq=False)
class Pseudorep2:
    """Trace and determinant arrays indexed by group element."""

    group: MarkedGroup
    ring: FiniteRing
    t: np.ndarray  # (m, n)
    d: np.ndarray  # (m, n)
    name: str = "psr"

    def __post_init__(self):
        m, n = self.group.m, self.ring.n
        self.t = np.asarray(self.t, dtype=np.int64).reshape(m, n) % self.ring.char
        self.d = np.asarray(self.d, dtype=np.int64).reshape(m, n) % self.ring.char

    def t_of(self, g: int) -> np.ndarray:
        return self.t[g]

    def d_of(self, g: int) -> np.ndarray:
        return self.d[g]

    def check(self) -> None:
        report = validate_pseudorep(self)
        if not report["ok"]:
            first = report["failures"][0]
            raise InvariantViolation(f"pseudorep law fails: {first}")

    def __repr__(self):
        return f"<{self.name}: {self.group.name} over {self.ring.name}>"


def validate_pseudorep(psr: Pseudorep2, max_failures: int = 10) -> dict:
    """Check every defining law; report witnessed failures instead of raising."""
    grp, r = psr.group, psr.ring
    failures = []

    def bad(law, where, lhs, rhs):
        failures.append(
            {
                "law": law,
                "at": where,
                "lhs": [int(c) for c in np.atleast_1d(lhs)],
                "rhs": [int(c) for c in np.atleast_1d(rhs)],
            }
        )

    e = grp.identity
    two = r.from_int(2)
    if not np.array_equal(psr.t[e], two):
        bad("t(1) = 2", (e,), psr.t[e], two)
    if not np.array_equal(psr.d[e], r.one):
        bad("d(1) = 1", (e,), psr.d[e], r.one)
    inv2 = pow(2, -1, r.char) if r.n else 0
    for g in grp.elements():
        if len(failures) >= max_failures:
            break
        if not r.is_unit(psr.d[g]):
            bad("d unit-valued", (g,), psr.d[g], r.one)
        # d is determined by t in odd characteristic
        want = (inv2 * (r.mul(psr.t[g], psr.t[g]) - psr.t[grp.mul(g, g)])) % r.char
        if not np.array_equal(psr.d[g], want):
            bad("2 d(g) = t(g)^2 - t(g^2)", (g,), psr.d[g], want)
    for g in grp.elements():
        if len(failures) >= max_failures:
            break
        for h in grp.elements():
            if not np.array_equal(psr.d[grp.mul(g, h)], r.mul(psr.d[g], psr.d[h])):
                bad("d(gh) = d(g) d(h)", (g, h), psr.d[grp.mul(g, h)], r.mul(psr.d[g], psr.d[h]))
            if not np.array_equal(psr.t[grp.mul(g, h)], psr.t[grp.mul(h, g)]):
                bad("t(gh) = t(hg)", (g, h), psr.t[grp.mul(g, h)], psr.t[grp.mul(h, g)])
            lhs = r.mul(psr.t[g], psr.t[h])
            rhs = r.add(
                psr.t[grp.mul(g, h)],
                r.mul(psr.d[h], psr.t[grp.mul(g, grp.inv(h))]),
            )
            if not np.array_equal(lhs, rhs):
                bad("t(g)t(h) = t(gh) + d(h) t(gh^-1)", (g, h), lhs, rhs)
            if len(failures) >= max_failures:
                break
    return {"ok": not failures, "failures": failures}


def char_poly_at(psr: Pseudorep2, g: int) -> list[np.ndarray]:
    """Coefficients [c0, c1, c2] of x^2 + c1 x + c0 at g, so c1 = -t, c0 = d."""
    r = psr.ring
    return [psr.d[g].copy(), (-psr.t[g]) % r.char, r.one.copy()]


def psrep_from_chars(chi1: GroupChar, chi2: GroupChar, name: str = "psr") -> Pseudorep2:
    """Sum of two characters defined on the whole group."""
    grp, r = chi1.group, chi1.ring
    if chi2.group is not grp or chi2.ring is not r:
        raise InputError("characters must share group and ring")
    if set(chi1.domain) != set(range(grp.m)) or set(chi2.domain) != set(range(grp.m)):
        raise InputError("characters must be defined on the whole group")
    t = np.array([r.add(chi1(g), chi2(g)) for g in grp.elements()])
    d = np.array([r.mul(chi1(g), chi2(g)) for g in grp.elements()])
    return Pseudorep2(grp, r, t, d, name=name)


def psrep_base_change(psr: Pseudorep2, f: RingMap, name: str | None = None) -> Pseudorep2:
    if f.src is not psr.ring:
        raise InputError("map source must match the coefficient ring")
    t = np.array([f(psr.t[g]) for g in psr.group.elements()])
    d = np.array([f(psr.d[g]) for g in psr.group.elements()])
    return Pseudorep2(psr.group, f.dst, t, d, name=name or psr.name)


# ---- honest matrix representations ----------------------------------


class MatrixRep2:
    """A true 2-dimensional representation, stored as (m, 2, 2, n) images."""

    def __init__(self, group: MarkedGroup, ring: FiniteRing, images, name: str = "rho"):
        self.group, self.ring, self.name = group, ring, name
        self.images = np.asarray(images, dtype=np.int64).reshape(group.m, 2, 2, ring.n) % ring.char

    def of(self, g: int) -> np.ndarray:
        return self.images[g]

    def matmul(self, a, b) -> np.ndarray:
        r = self.ring
        out = np.zeros((2, 2, r.n), dtype=np.int64)
        for i in range(2):
            for j in range(2):
                acc = r.zero()
                for l in range(2):
                    acc = r.add(acc, r.mul(a[i, l], b[l, j]))
                out[i, j] = acc
        return out

    def trace(self, mat) -> np.ndarray:
        return self.ring.add(mat[0, 0], mat[1, 1])

    def det(self, mat) -> np.ndarray:
        r = self.ring
        return r.sub(r.mul(mat[0, 0], mat[1, 1]), r.mul(mat[0, 1], mat[1, 0]))

    @staticmethod
    def from_generators(group: MarkedGroup, ring: FiniteRing, gen_images: dict, name="rho"):
        """Fill the whole group by products, checking consistency along the way."""
        images = {group.identity: MatrixRep2._eye(ring)}
        for g, mat in gen_images.items():
            images[int(g)] = np.asarray(mat, dtype=np.int64).reshape(2, 2, ring.n) % ring.char
        rep = MatrixRep2(group, ring, np.zeros((group.m, 2, 2, ring.n)), name=name)
        frontier = sorted(images)
        while frontier:
            nxt = []
            for a in frontier:
                for b in sorted(gen_images):
                    c = group.mul(a, int(b))
                    prod = rep.matmul(images[a], images[int(b)])
                    if c in images:
                        if not np.array_equal(images[c], prod):
                            raise InvariantViolation(
                                f"inconsistent generator images at element {c}"
                            )
                    else:
                        images[c] = prod
                        nxt.append(c)
            frontier = nxt
        if len(images) != group.m:
            raise InputError("generator images do not generate the group")
        rep.images = np.array([images[g] for g in range(group.m)])
        rep.check()
        return rep

    @staticmethod
    def _eye(ring: FiniteRing) -> np.ndarray:
        out = np.zeros((2, 2, ring.n), dtype=np.int64)
        out[0, 0] = ring.one
        out[1, 1] = ring.one
        return out

    def check(self) -> None:
        grp = self.group
        if not np.array_equal(self.images[grp.identity], self._eye(self.ring)):
            raise InvariantViolation("identity image is not the identity matrix")
        for g in grp.elements():
            if not self.ring.is_unit(self.det(self.images[g])):
                raise InvariantViolation(f"image of {g} is not invertible")
            for h in grp.elements():
                want = self.images[grp.mul(g, h)]
                got = self.matmul(self.images[g], self.images[h])
                if not np.array_equal(want, got):
                    raise InvariantViolation(f"multiplicativity fails at ({g},{h})")


def psi_of_rep(rep: MatrixRep2, name: str | None = None) -> Pseudorep2:
    """Trace and determinant of an honest representation."""
    t = np.array([rep.trace(rep.images[g]) for g in rep.group.elements()])
    d = np.array([rep.det(rep.images[g]) for g in rep.group.elements()])
    return Pseudorep2(rep.group, rep.ring, t, d, name=name or f"psi({rep.name})")


def rep_from_chars(chi1: GroupChar, chi2: GroupChar, name: str = "diag") -> MatrixRep2:
    grp, r = chi1.group, chi1.ring
    images = np.zeros((grp.m, 2, 2, r.n), dtype=np.int64)
    for g in grp.elements():
        images[g, 0, 0] = chi1(g)
        images[g, 1, 1] = chi2(g)
    rep = MatrixRep2(grp, r, images, name=name)
    rep.check()
    return rep


# ---- extension to the group algebra ---------------------------------


class ExtendedPsrep:
    """(t, d) spread over E = A[G], with the trace-form radical."""

    def __init__(self, psr: Pseudorep2, algebra: AssocAlgebra | None = None):
        psr.check()
        self.psr = psr
        self.group, self.base = psr.group, psr.ring
        self.E = algebra if algebra is not None else group_algebra(self.base, self.group)
        a = self.base
        m, e = self.group.m, a.n
        if self.E.n != m * e:
            raise InputError("algebra does not look like the group algebra")
        # t as a Z/p^k-linear map E -> A: basis (g, a_j) -> a_j * t(g)
        tm = np.zeros((self.E.n, a.n), dtype=np.int64)
        for g in range(m):
            for j in range(e):
                basis = np.zeros(e, dtype=np.int64)
                basis[j] = 1
                tm[g * e + j] = a.mul(basis, psr.t[g])
        self.t_matrix = tm
        self._inv2 = pow(2, -1, a.char)

    def t_el(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=np.int64) @ self.t_matrix) % self.base.char

    def d_el(self, x) -> np.ndarray:
        """d~(x) = (t(x)^2 - t(x^2)) / 2."""
        a = self.base
        tx = self.t_el(x)
        tx2 = self.t_el(self.E.mul(x, x))
        return (self._inv2 * (a.mul(tx, tx) - tx2)) % a.char

    def b_d(self, x, y) -> np.ndarray:
        """Polarization of d~: t(x)t(y) - t(xy)."""
        a = self.base
        return (a.mul(self.t_el(x), self.t_el(y)) - self.t_el(self.E.mul(x, y))) % a.char

    def kernel_rows(self) -> np.ndarray:
        """Howell basis of {x : t(x e) = 0 for all e}, verified to kill d~."""
        E, a = self.E, self.base
        cols = []
        for i in range(E.n):
            e = np.zeros(E.n, dtype=np.int64)
            e[i] = 1
            cols.append((E.right_mul_matrix(e) @ self.t_matrix) % a.char)
        big = np.hstack(cols)
        rows = linalg.kernel(big, a.p, a.k)
        # the determinant law must vanish identically on the radical
        for i, u in enumerate(rows):
            if self.d_el(u).any():
                raise InvariantViolation("determinant law does not vanish on the trace radical")
            for v in rows[i + 1 :]:
                if self.b_d(u, v).any():
                    raise InvariantViolation("polarized determinant form survives on the radical")
        # and the radical is a two-sided ideal
        for u in rows:
            for i in range(E.n):
                e = np.zeros(E.n, dtype=np.int64)
                e[i] = 1
                for prod in (E.mul(u, e), E.mul(e, u)):
                    if not linalg.span_contains(rows, prod, a.p, a.k):
                        raise InvariantViolation("trace radical is not an ideal")
        return rows


# ---- residual splitting ---------------------------------------------


def _field_sqrts(f: FiniteRing, x) -> list[np.ndarray]:
    """All square roots of x in a small field, by enumeration."""
    if f.size > 2500:
        raise BudgetExceeded("square-root search field too large")
    return [y for y in f.elements() if np.array_equal(f.mul(y, y), x)]


def _min_generating_set(grp: MarkedGroup) -> list[int]:
    gens: list[int] = []
    closure = {grp.identity}
    for g in sorted(grp.elements(), key=lambda g: (-grp.order_of(g), g)):
        if g in closure:
            continue
        gens.append(g)
        closure = set(grp.subgroup_closure(gens))
        if len(closure) == grp.m:
            break
    if len(closure) != grp.m:
        raise InvariantViolation("failed to generate the group")
    return gens


def residual_split(psr: Pseudorep2) -> dict:
    """Try to write (t, d) over a field as chi1 + chi2 and chi1 * chi2.

    Returns a report dict.  `unsupported` is set both when some element has
    an irreducible characteristic polynomial and when every element splits
    pointwise but no globally multiplicative assignment exists.
    """
    grp, f = psr.group, psr.ring
    if f.k != 1 or not f.is_local or not f.maximal_ideal().is_zero():
        raise InputError("residual splitting expects coefficients in a field")
    psr.check()
    # pointwise roots of x^2 - t x + d
    roots: list[list[np.ndarray]] = []
    inv2 = pow(2, -1, f.char)
    for g in grp.elements():
        disc = f.sub(f.mul(psr.t[g], psr.t[g]), f.smul(4, psr.d[g]))
        sq = _field_sqrts(f, disc)
        if not sq:
            return {
                "split": False,
                "unsupported": True,
                "reason": f"irreducible characteristic polynomial at element {g}",
                "chars": None,
            }
        roots.append([(inv2 * (psr.t[g] + s)) % f.char for s in sq])
    # backtracking over a minimal generating set
    gens = _min_generating_set(grp)
    found: list[tuple[tuple, tuple]] = []

    def words_fill(assign: dict) -> dict | None:
        """Extend chi multiplicatively from generator values; None on clash."""
        chi = {grp.identity: f.one.copy()}
        frontier = [grp.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = grp.mul(a, g)
                    val = f.mul(chi[a], assign[g])
                    if c in chi:
                        if not np.array_equal(chi[c], val):
                            return None
                    else:
                        chi[c] = val
                        nxt.append(c)
            frontier = nxt
        return chi

    import itertools

    for combo in itertools.product(*[range(len(roots[g])) for g in gens]):
        assign = {g: roots[g][i] for g, i in zip(gens, combo)}
        chi = words_fill(assign)
        if chi is None:
            continue
        # partner character from the determinant
        chi2 = {g: f.mul(psr.d[g], f.inv(chi[g])) for g in grp.elements()}
        ok = all(
            np.array_equal(f.add(chi[g], chi2[g]), psr.t[g]) for g in grp.elements()
        )
        if not ok:
            continue
        key1 = tuple(int(c) for g in grp.elements() for c in chi[g])
        key2 = tuple(int(c) for g in grp.elements() for c in chi2[g])
        pair = (min(key1, key2), max(key1, key2))
        if pair not in found:
            found.append(pair)
    if not found:
        return {
            "split": False,
            "unsupported": True,
            "reason": "splits pointwise but admits no multiplicative assignment",
            "chars": None,
        }
    pair = sorted(found)[0]
    n = f.n
    chars = []
    for key in pair:
        vals = {
            g: np.array(key[g * n : (g + 1) * n], dtype=np.int64) for g in grp.elements()
        }
        chi = GroupChar(grp, f, vals, name="chi")
        chi.check()
        chars.append(chi)
    return {"split": True, "unsupported": False, "reason": "", "chars": tuple(chars)}
