"""Cayley-Hamilton quotients and generalized matrix algebra coordinates.

`ch_quotient` kills the two-sided ideal generated by the polarized
Cayley-Hamilton elements

    ch(x, y) = xy + yx - t(x) y - t(y) x + (t(x) t(y) - t(xy)) 1,

which is bilinear, so one pass over basis pairs generates the whole ideal
and a second pass over the quotient must be a fixed point.  In the quotient
every element satisfies its own characteristic polynomial.

The trace has to vanish on that ideal before it can descend.  The pairwise
trace laws do force that (the identity-element instances close the gap,
since 2 is a unit here), but the construction re-checks it anyway and
refuses loudly rather than silently producing a traceless quotient.

With distinct residual characters (or a matrix residual) a pair of
complementary trace-1 idempotents lifts from the residual quotient by
Newton iteration, and the Peirce pieces turn the algebra into a 2x2
generalized matrix algebra over the base: two scalar corners, two pairing
modules B and C, and the reducibility ideal generated by the pairing
values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebras import AlgebraQuotient, AssocAlgebra, quotient_algebra, two_sided_ideal_rows
from .errors import BudgetExceeded, InputError, InvariantViolation
from .groups import GroupChar
from .psrep import ExtendedPsrep, Pseudorep2, _min_generating_set, psrep_base_change, residual_split
from .rings import FiniteRing, Ideal, RingMap, quotient_ring

__all__ = [
    "ChAlgebra",
    "ch_quotient",
    "ch_base_change",
    "lift_idempotents",
    "GmaAlgebra",
    "gma_decompose",
    "abstract_gma",
    "coordinate_maps",
    "split_as_characters",
    "reducibility_ideal",
    "maximal_subideals",
    "reducibility_minimality",
]


@dataclass(eq=False)
class ChAlgebra:
    """A[G] modulo the Cayley-Hamilton ideal, with the descended trace."""

    psr: Pseudorep2
    base: FiniteRing
    E: AssocAlgebra
    algebra: AssocAlgebra
    quot: AlgebraQuotient
    t_matrix: np.ndarray  # (nbar, base.n)
    rho_mat: np.ndarray  # (m, nbar), group images in the quotient

    def __post_init__(self):
        self._inv2 = pow(2, -1, self.base.char)

    @property
    def nbar(self) -> int:
        return self.algebra.n

    def rho(self, g: int) -> np.ndarray:
        return self.rho_mat[g]

    def t_el(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=np.int64) @ self.t_matrix) % self.base.char

    def d_el(self, x) -> np.ndarray:
        a = self.base
        tx = self.t_el(x)
        tx2 = self.t_el(self.algebra.mul(x, x))
        return (self._inv2 * (a.mul(tx, tx) - tx2)) % a.char

    def b_d(self, x, y) -> np.ndarray:
        a = self.base
        return (a.mul(self.t_el(x), self.t_el(y)) - self.t_el(self.algebra.mul(x, y))) % a.char

    def ch_el(self, x, y) -> np.ndarray:
        """Polarized Cayley-Hamilton element; zero in this algebra by construction."""
        al = self.algebra
        out = al.add(al.mul(x, y), al.mul(y, x))
        out = al.sub(out, al.amul(self.t_el(x), y))
        out = al.sub(out, al.amul(self.t_el(y), x))
        return al.add(out, al.scalar(self.b_d(x, y)))

    def ch_at(self, x) -> np.ndarray:
        """x^2 - t(x) x + d(x) 1, the unpolarized identity."""
        al = self.algebra
        out = al.sub(al.mul(x, x), al.amul(self.t_el(x), x))
        return al.add(out, al.scalar(self.d_el(x)))

    def kernel_rows(self) -> np.ndarray:
        """Radical of the trace pairing; the determinant law must die on it."""
        al = self.algebra
        if al.n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        eye = np.eye(al.n, dtype=np.int64)
        cols = [(al.right_mul_matrix(e) @ self.t_matrix) % al.char for e in eye]
        rows = linalg.kernel(np.hstack(cols), al.p, al.k)
        for i, u in enumerate(rows):
            if self.d_el(u).any():
                raise InvariantViolation("determinant law survives on the trace radical")
            for v in rows[i:]:
                if self.b_d(u, v).any():
                    raise InvariantViolation("polarized determinant survives on the trace radical")
        return rows

    def verify(self, rng_seed: int = 0, samples: int = 100) -> None:
        """Identity on basis pairs (bilinearity covers the rest) plus random spot checks."""
        al = self.algebra
        eye = np.eye(al.n, dtype=np.int64)
        for i in range(al.n):
            for j in range(i, al.n):
                if self.ch_el(eye[i], eye[j]).any():
                    raise InvariantViolation(f"polarized identity fails on basis pair ({i},{j})")
        import random

        rng = random.Random(rng_seed)
        for _ in range(samples if al.n else 0):
            x = al.random_element(rng)
            if self.ch_at(x).any():
                raise InvariantViolation("characteristic polynomial fails on a sampled element")
        grp = self.psr.group
        for g in grp.elements():
            for h in grp.elements():
                lhs = al.mul(self.rho_mat[g], self.rho_mat[h])
                if not np.array_equal(lhs, self.rho_mat[grp.mul(g, h)]):
                    raise InvariantViolation("group images fail to multiply in the quotient")

    def __repr__(self):
        return f"<ChAlgebra dim {self.nbar} over {self.base.name} for {self.psr.name}>"


def ch_quotient(psr: Pseudorep2, name: str | None = None) -> ChAlgebra:
    ext = ExtendedPsrep(psr)
    E, a = ext.E, psr.ring
    n = E.n

    def ch_in_e(x, y):
        out = E.add(E.mul(x, y), E.mul(y, x))
        out = E.sub(out, E.amul(ext.t_el(x), y))
        out = E.sub(out, E.amul(ext.t_el(y), x))
        return E.add(out, E.scalar(ext.b_d(x, y)))

    eye = np.eye(n, dtype=np.int64)
    gens = [ch_in_e(eye[i], eye[j]) for i in range(n) for j in range(i, n)]
    rows = two_sided_ideal_rows(E, np.array(gens))
    # the trace must vanish on the full ideal, or it cannot descend
    if rows.shape[0] and ((rows @ ext.t_matrix) % a.char).any():
        raise InvariantViolation("trace does not vanish on the Cayley-Hamilton ideal")
    quot = quotient_algebra(E, rows, name=name or f"CH({psr.name})")
    ebar = quot.algebra
    if ebar.char != E.char:
        # t(1) = 2 is a unit, so the image of 1 keeps full additive order;
        # a characteristic drop would contradict the vanishing check above
        raise InvariantViolation("Cayley-Hamilton quotient dropped the characteristic")
    if ebar.n and linalg.kernel(ebar.base_embed, ebar.p, ebar.k).shape[0]:
        raise InvariantViolation("base does not embed into the quotient")
    tbar = np.zeros((ebar.n, a.n), dtype=np.int64)
    eyebar = np.eye(ebar.n, dtype=np.int64)
    for i in range(ebar.n):
        tbar[i] = ext.t_el(quot.lift(eyebar[i]))
    m = psr.group.m
    rho = np.zeros((m, ebar.n), dtype=np.int64)
    for g in range(m):
        vec = np.zeros(E.n, dtype=np.int64)
        vec[g * a.n : (g + 1) * a.n] = a.one
        rho[g] = quot.proj(vec)
    ch = ChAlgebra(psr, a, E, ebar, quot, tbar, rho)
    ch.verify()
    for g in range(m):
        if not np.array_equal(ch.t_el(rho[g]), psr.t[g]):
            raise InvariantViolation("trace of a group image changed in the quotient")
    return ch


def ch_base_change(ch: ChAlgebra, f: RingMap, name: str | None = None):
    """Rebuild the quotient over the target of f.

    Returns (ChAlgebra over f.dst, connect) where connect maps old quotient
    coordinates to new ones and is verified unital, multiplicative, and
    compatible with the group images.
    """
    if f.src is not ch.base:
        raise InputError("base change map must start at the coefficient ring")
    down = ch_quotient(psrep_base_change(ch.psr, f), name=name)
    a, b = ch.base, f.dst
    m = ch.psr.group.m
    connect = np.zeros((ch.nbar, down.nbar), dtype=np.int64)
    eye = np.eye(ch.nbar, dtype=np.int64)
    for i in range(ch.nbar):
        blocks = ch.quot.lift(eye[i]).reshape(m, a.n)
        mapped = np.array([f(blk) for blk in blocks]).reshape(m * b.n)
        connect[i] = down.quot.proj(mapped)
    dal = down.algebra
    if ch.nbar and not np.array_equal((ch.algebra.one @ connect) % dal.char, dal.one):
        raise InvariantViolation("base change does not preserve 1")
    for i in range(ch.nbar):
        for j in range(ch.nbar):
            lhs = (ch.algebra.mul(eye[i], eye[j]) @ connect) % dal.char
            if not np.array_equal(lhs, dal.mul(connect[i], connect[j])):
                raise InvariantViolation("base change is not multiplicative")
    for g in range(m):
        if not np.array_equal((ch.rho_mat[g] @ connect) % dal.char, down.rho_mat[g]):
            raise InvariantViolation("base change does not intertwine the group images")
    return down, connect


# ---- idempotent lifting ---------------------------------------------


def _trace_one_idempotents(ch: ChAlgebra, budget: int) -> list[np.ndarray]:
    al = ch.algebra
    out = [
        x
        for x in al.elements(limit=budget)
        if np.array_equal(al.mul(x, x), x) and np.array_equal(ch.t_el(x), ch.base.one)
    ]
    return sorted(out, key=lambda v: tuple(map(int, v)))


def _chars_equal(c1: GroupChar, c2: GroupChar) -> bool:
    return set(c1.domain) == set(c2.domain) and all(np.array_equal(c1(g), c2(g)) for g in c1.domain)


def lift_idempotents(
    ch: ChAlgebra,
    prefer_char: GroupChar | None = None,
    budget: int = 400000,
    max_iter: int = 64,
) -> dict:
    """Complementary trace-1 idempotents e1, e2 = 1 - e1 of the quotient.

    Works over a local base.  The residual algebra either splits as two
    characters or is a matrix residual; in both cases a trace-1 idempotent
    is found there (aligned with `prefer_char`, a residual character, when
    one is given) and lifted with the Newton step e <- 3e^2 - 2e^3.  The
    partner 1 - e1 is then idempotent and orthogonal for free.  Equal
    residual characters leave nothing to separate: unsupported flag.
    """
    a = ch.base
    if not a.is_local:
        raise InputError("idempotent lifting expects a local base")
    if ch.nbar == 0:
        return {"supported": False, "reason": "algebra collapsed to zero", "e1": None, "e2": None}
    res_field = a.residue_field()
    ch_res, connect = ch_base_change(ch, res_field.proj, name=f"{ch.algebra.name} res")
    split = residual_split(psrep_base_change(ch.psr, res_field.proj))
    if split["split"]:
        chi1, chi2 = split["chars"]
        if _chars_equal(chi1, chi2):
            return {
                "supported": False,
                "reason": "residual characters coincide; no idempotent separates them",
                "e1": None,
                "e2": None,
                "residual": split,
            }
        if prefer_char is not None:
            others = [c for c in (chi1, chi2) if not _chars_equal(c, prefer_char)]
            if len(others) != 1:
                raise InputError("preferred character does not match either residual character")
            chi1 = prefer_char
            source = "split-characters-aligned"
        else:
            source = "split-characters"
        target = None
        for e in _trace_one_idempotents(ch_res, budget):
            # corner 1 must see the group images through chi1
            ok = all(
                np.array_equal(
                    ch_res.algebra.mul(ch_res.algebra.mul(e, ch_res.rho_mat[g]), e),
                    ch_res.algebra.amul(chi1(g), e),
                )
                for g in ch.psr.group.elements()
            )
            if ok:
                target = e
                break
        if target is None:
            raise InvariantViolation("no residual idempotent matches the split characters")
    else:
        source = "matrix-residual"
        cands = [
            e
            for e in _trace_one_idempotents(ch_res, budget)
            if e.any() and not np.array_equal(e, ch_res.algebra.one)
        ]
        if not cands:
            return {
                "supported": False,
                "reason": "residual algebra has no nontrivial trace-1 idempotent",
                "e1": None,
                "e2": None,
                "residual": split,
            }
        target = cands[0]
    al = ch.algebra
    x = linalg.solve_left(connect, target, al.p, ch_res.algebra.k)
    if x is None:
        raise InvariantViolation("residual idempotent has no preimage")
    x = x % al.char
    iters = 0
    while not np.array_equal(al.mul(x, x), x):
        x2 = al.mul(x, x)
        x = al.sub(al.smul(3, x2), al.smul(2, al.mul(x2, x)))
        iters += 1
        if iters > max_iter:
            raise InvariantViolation("idempotent iteration failed to converge")
    e1 = x
    e2 = al.sub(al.one, e1)
    if not np.array_equal((e1 @ connect) % ch_res.algebra.char, target):
        raise InvariantViolation("lifted idempotent drifted from its residual class")
    if not np.array_equal(ch.t_el(e1), a.one) or not np.array_equal(ch.t_el(e2), a.one):
        raise InvariantViolation("lifted idempotents do not have unit trace")
    return {
        "supported": True,
        "reason": "",
        "e1": e1,
        "e2": e2,
        "source": source,
        "iterations": iters,
        "residual": split,
    }


# ---- generalized matrix algebra coordinates -------------------------


@dataclass(eq=False)
class GmaAlgebra:
    """Peirce data for a fixed pair of complementary idempotents.

    `ch` is set for instances coming out of a Cayley-Hamilton quotient and
    None for hand-built pairing instances, which carry no group.
    """

    algebra: AssocAlgebra
    ch: ChAlgebra | None
    e1: np.ndarray
    e2: np.ndarray
    phi1: np.ndarray  # (n, base.n), corner-1 scalar coordinate
    phi2: np.ndarray
    b_basis: np.ndarray  # Howell basis of e1 E e2, rows in algebra coordinates
    c_basis: np.ndarray  # Howell basis of e2 E e1
    m_table: np.ndarray  # (nb, nc, base.n), pairing values of the basis rows
    p12: np.ndarray  # (n, n): x -> e1 x e2
    p21: np.ndarray

    @property
    def base(self) -> FiniteRing:
        return self.algebra.base

    def phi1_of(self, x) -> np.ndarray:
        return (np.asarray(x) @ self.phi1) % self.base.char

    def phi2_of(self, x) -> np.ndarray:
        return (np.asarray(x) @ self.phi2) % self.base.char

    def trace_of(self, x) -> np.ndarray:
        return (self.phi1_of(x) + self.phi2_of(x)) % self.base.char

    def pairing(self, b_vec, c_vec) -> np.ndarray:
        """m(b, c) in the base, for b in the span of B and c in the span of C."""
        return self.phi1_of(self.algebra.mul(b_vec, c_vec))

    def __repr__(self):
        a = self.base
        nb = linalg.span_log_size(self.b_basis, a.p, a.k)
        nc = linalg.span_log_size(self.c_basis, a.p, a.k)
        return f"<GMA over {a.name}: B log size {nb}, C log size {nc}>"


def _gma_structure(algebra: AssocAlgebra, ch: ChAlgebra | None, e1: np.ndarray) -> GmaAlgebra:
    al, a = algebra, algebra.base
    if al.n == 0:
        raise InputError("cannot decompose the zero algebra")
    e1 = np.asarray(e1, dtype=np.int64) % al.char
    e2 = al.sub(al.one, e1)
    if not np.array_equal(al.mul(e1, e1), e1):
        raise InputError("e1 is not idempotent")
    if al.mul(e1, e2).any() or al.mul(e2, e1).any():
        raise InvariantViolation("complementary idempotents are not orthogonal")
    lm1, rm1 = al.mul_matrix(e1), al.right_mul_matrix(e1)
    lm2, rm2 = al.mul_matrix(e2), al.right_mul_matrix(e2)
    p11 = (lm1 @ rm1) % al.char
    p12 = (lm1 @ rm2) % al.char
    p21 = (lm2 @ rm1) % al.char
    p22 = (lm2 @ rm2) % al.char
    # each scalar corner must be a free rank-1 copy of the base
    eye_a = np.eye(a.n, dtype=np.int64)
    ae1 = np.array([al.amul(row, e1) for row in eye_a])
    ae2 = np.array([al.amul(row, e2) for row in eye_a])
    for mat, corner in ((ae1, p11), (ae2, p22)):
        if linalg.kernel(mat, a.p, a.k).shape[0]:
            raise InvariantViolation("scalar corner is not free of rank one")
        corner_span = linalg.howell_form(corner, a.p, a.k, ncols=al.n)
        scalar_span = linalg.howell_form(mat, a.p, a.k, ncols=al.n)
        if not linalg.span_equal(corner_span, scalar_span):
            raise InvariantViolation("corner does not reduce to base scalars")
    phi1 = np.zeros((al.n, a.n), dtype=np.int64)
    phi2 = np.zeros((al.n, a.n), dtype=np.int64)
    eye = np.eye(al.n, dtype=np.int64)
    for i in range(al.n):
        c1 = linalg.solve_left(ae1, (eye[i] @ p11) % al.char, a.p, a.k)
        c2 = linalg.solve_left(ae2, (eye[i] @ p22) % al.char, a.p, a.k)
        if c1 is None or c2 is None:
            raise InvariantViolation("corner projection escaped the scalar corner")
        phi1[i], phi2[i] = c1 % a.char, c2 % a.char
    b_basis = linalg.howell_form(p12, a.p, a.k, ncols=al.n)
    c_basis = linalg.howell_form(p21, a.p, a.k, ncols=al.n)
    nb, nc = b_basis.shape[0], c_basis.shape[0]
    m_table = np.zeros((nb, nc, a.n), dtype=np.int64)
    for i in range(nb):
        for j in range(nc):
            val = linalg.solve_left(ae1, al.mul(b_basis[i], c_basis[j]), a.p, a.k)
            if val is None:
                raise InvariantViolation("a B*C product escaped the first corner")
            m_table[i, j] = val % a.char
            # the reversed product lands in the other corner with the same value
            swap = linalg.solve_left(ae2, al.mul(c_basis[j], b_basis[i]), a.p, a.k)
            if swap is None or not np.array_equal(swap % a.char, m_table[i, j]):
                raise InvariantViolation("pairing is not symmetric across the corners")
    gma = GmaAlgebra(al, ch, e1, e2, phi1, phi2, b_basis, c_basis, m_table, p12, p21)
    _verify_gma(gma)
    return gma


def gma_decompose(ch: ChAlgebra, e1: np.ndarray) -> GmaAlgebra:
    e1 = np.asarray(e1, dtype=np.int64) % ch.algebra.char
    if not np.array_equal(ch.algebra.mul(e1, e1), e1):
        raise InputError("e1 is not idempotent")
    for e in (e1, ch.algebra.sub(ch.algebra.one, e1)):
        if not np.array_equal(ch.t_el(e), ch.base.one):
            raise InvariantViolation("corner idempotent must have unit trace")
    gma = _gma_structure(ch.algebra, ch, e1)
    # the descended trace splits as the sum of the corner coordinates, exactly
    if not np.array_equal((gma.phi1 + gma.phi2) % ch.base.char, ch.t_matrix % ch.base.char):
        raise InvariantViolation("trace does not split as the sum of the corners")
    return gma


def abstract_gma(base: FiniteRing, mu, name: str | None = None) -> GmaAlgebra:
    """Hand-built 2x2 pairing algebra with B = C = base and m(b, c) = mu*b*c.

    Basis blocks: scalar corner 1, scalar corner 2, B, C.  Useful for
    exercising pairing-side operations without a pseudorepresentation.
    """
    a = base
    mu = np.asarray(mu, dtype=np.int64) % a.char
    n, p, k = a.n, a.p, a.k
    big = 4 * n
    table = np.zeros((big, big, big), dtype=np.int64)

    def blk(b):
        return slice(b * n, (b + 1) * n)

    mm = a.mul_matrix(mu)
    pair = np.einsum("ijm,ml->ijl", a.table, mm) % a.char  # (x y mu) on basis pairs
    # block products: 1*1->1, 2*2->2, 1*B->B, B*2->B, 2*C->C, C*1->C,
    # B*C->1 and C*B->2 through the pairing; everything else is zero
    for bi, bj, bl, vals in (
        (0, 0, 0, a.table),
        (1, 1, 1, a.table),
        (0, 2, 2, a.table),
        (2, 1, 2, a.table),
        (1, 3, 3, a.table),
        (3, 0, 3, a.table),
        (2, 3, 0, pair),
        (3, 2, 1, pair),
    ):
        table[blk(bi), blk(bj), blk(bl)] = vals
    one = np.zeros(big, dtype=np.int64)
    one[blk(0)] = a.one
    one[blk(1)] = a.one
    embed = np.zeros((n, big), dtype=np.int64)
    embed[:, blk(0)] = np.eye(n, dtype=np.int64)
    embed[:, blk(1)] = np.eye(n, dtype=np.int64)
    alg = AssocAlgebra(p, k, table, one, a, embed, name=name or f"pair({a.name})")
    alg.check_algebra()
    e1 = np.zeros(big, dtype=np.int64)
    e1[blk(0)] = a.one
    return _gma_structure(alg, None, e1)


def _verify_gma(gma: GmaAlgebra) -> None:
    al, a = gma.algebra, gma.base
    logs = (
        2 * a.k * a.n
        + linalg.span_log_size(gma.b_basis, a.p, a.k)
        + linalg.span_log_size(gma.c_basis, a.p, a.k)
    )
    if al.k * al.n != logs:
        raise InvariantViolation("Peirce pieces do not fill the algebra")
    inv2 = pow(2, -1, a.char)
    eye = np.eye(al.n, dtype=np.int64)
    for i in range(al.n):
        x = eye[i]
        x12 = (x @ gma.p12) % al.char
        x21 = (x @ gma.p21) % al.char
        parts = (al.amul(gma.phi1_of(x), gma.e1) + x12 + x21 + al.amul(gma.phi2_of(x), gma.e2)) % al.char
        if not np.array_equal(parts, x):
            raise InvariantViolation("Peirce reassembly fails")
        # trace from corner coordinates is central and induces the determinant
        tx, tx2 = gma.trace_of(x), gma.trace_of(al.mul(x, x))
        want = (inv2 * (a.mul(tx, tx) - tx2)) % a.char
        got = (a.mul(gma.phi1_of(x), gma.phi2_of(x)) - gma.pairing(x12, x21)) % a.char
        if not np.array_equal(got, want):
            raise InvariantViolation("determinant does not match its corner formula")
        if gma.ch is not None and not np.array_equal(want, gma.ch.d_el(x)):
            raise InvariantViolation("corner determinant disagrees with the descended one")


def coordinate_maps(gma: GmaAlgebra) -> dict:
    """Group images in Peirce coordinates, with exact reassembly.

    rho11 and rho22 are base scalars; rho12 and rho21 keep algebra
    coordinates inside the B and C spans.
    """
    if gma.ch is None:
        raise InputError("coordinate maps need a pseudorep-backed instance")
    ch, al, a = gma.ch, gma.algebra, gma.base
    m = ch.psr.group.m
    rho11 = np.zeros((m, a.n), dtype=np.int64)
    rho22 = np.zeros((m, a.n), dtype=np.int64)
    rho12 = np.zeros((m, al.n), dtype=np.int64)
    rho21 = np.zeros((m, al.n), dtype=np.int64)
    for g in range(m):
        x = ch.rho_mat[g]
        rho11[g] = gma.phi1_of(x)
        rho22[g] = gma.phi2_of(x)
        rho12[g] = (x @ gma.p12) % al.char
        rho21[g] = (x @ gma.p21) % al.char
        back = (al.amul(rho11[g], gma.e1) + rho12[g] + rho21[g] + al.amul(rho22[g], gma.e2)) % al.char
        if not np.array_equal(back, x):
            raise InvariantViolation(f"coordinates do not reassemble the image of {g}")
        if not linalg.span_contains(gma.b_basis, rho12[g], a.p, a.k):
            raise InvariantViolation("off-diagonal coordinate escapes the B span")
        if not linalg.span_contains(gma.c_basis, rho21[g], a.p, a.k):
            raise InvariantViolation("off-diagonal coordinate escapes the C span")
    return {"rho11": rho11, "rho12": rho12, "rho21": rho21, "rho22": rho22}


# ---- splitting and reducibility -------------------------------------


def split_as_characters(psr: Pseudorep2, budget: int = 200000) -> dict:
    """Try to write (t, d) as chi1 + chi2 over any commutative coefficient ring.

    Candidate chi1 values at each generator are the roots of x^2 - t x + d
    there, extended multiplicatively over the group and then checked against
    the full laws.  Over the zero ring the split is trivial.
    """
    grp, r = psr.group, psr.ring
    if r.is_zero:
        return {"split": True, "trivial": True, "chars": None, "pairs_found": 0}
    gens = _min_generating_set(grp)
    per_gen: list[list[np.ndarray]] = []
    cost = 1
    for g in gens:
        roots = [
            x
            for x in r.elements(limit=budget)
            if not r.add(r.sub(r.mul(x, x), r.mul(psr.t[g], x)), psr.d[g]).any()
        ]
        if not roots:
            return {"split": False, "trivial": False, "chars": None, "pairs_found": 0}
        per_gen.append(roots)
        cost *= len(roots)
        if cost > budget:
            raise BudgetExceeded(f"{cost} root combinations exceed the budget")
    found: list[tuple] = []
    for combo in itertools.product(*per_gen):
        assign = dict(zip(gens, combo))
        chi = {grp.identity: r.one.copy()}
        frontier = [grp.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for aidx in frontier:
                for g in gens:
                    c = grp.mul(aidx, g)
                    val = r.mul(chi[aidx], assign[g])
                    if c in chi:
                        if not np.array_equal(chi[c], val):
                            ok = False
                            break
                    else:
                        chi[c] = val
                        nxt.append(c)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        good = all(
            r.is_unit(chi[g])
            and not r.sub(psr.t[g], r.add(chi[g], r.mul(psr.d[g], r.inv(chi[g])))).any()
            for g in grp.elements()
        )
        if not good:
            continue
        chi2 = {g: r.mul(psr.d[g], r.inv(chi[g])) for g in grp.elements()}
        key1 = tuple(int(c) for g in grp.elements() for c in chi[g])
        key2 = tuple(int(c) for g in grp.elements() for c in chi2[g])
        pair = (min(key1, key2), max(key1, key2))
        if pair not in found:
            found.append(pair)
    if not found:
        return {"split": False, "trivial": False, "chars": None, "pairs_found": 0}
    best = sorted(found)[0]
    n = r.n
    chars = []
    for key in best:
        vals = {g: np.array(key[g * n : (g + 1) * n], dtype=np.int64) for g in grp.elements()}
        c = GroupChar(grp, r, vals, name="chi")
        c.check()
        chars.append(c)
    return {"split": True, "trivial": False, "chars": tuple(chars), "pairs_found": len(found)}


def reducibility_ideal(gma: GmaAlgebra) -> dict:
    """Ideal generated by the pairing values, with a split certificate mod it.

    For pseudorep-backed instances the trace must become a sum of two
    characters over the quotient by this ideal; that certificate is
    computed, not assumed.  Each generator keeps the (B row, C row) indices
    it came from.
    """
    a = gma.base
    gens = gma.m_table.reshape(-1, a.n)
    provenance = [
        {"b_row": i, "c_row": j, "value": [int(c) for c in gma.m_table[i, j]]}
        for i in range(gma.m_table.shape[0])
        for j in range(gma.m_table.shape[1])
    ]
    ideal = Ideal(a, gens)
    q = quotient_ring(a, ideal, name=f"{a.name}/red")
    cert = None
    if gma.ch is not None:
        cert = split_as_characters(psrep_base_change(gma.ch.psr, q.proj))
        if not cert["split"]:
            raise InvariantViolation("trace fails to split modulo the reducibility ideal")
    return {
        "ideal": ideal,
        "generators": provenance,
        "quotient": q,
        "certificate": cert,
    }


def _ideal_elements(a: FiniteRing, ideal: Ideal, budget: int):
    """Every element of the ideal span, one coefficient range per Howell row."""
    rows = ideal.basis
    if rows.shape[0] == 0:
        yield a.zero()
        return
    info = linalg.pivot_info(rows, a.p, a.k)
    spans = [a.p ** (a.k - info[int(np.nonzero(row)[0][0])]) for row in rows]
    total = 1
    for s in spans:
        total *= s
    if total > budget:
        raise BudgetExceeded(f"ideal has {total} elements, budget {budget}")
    for combo in itertools.product(*(range(s) for s in spans)):
        vec = np.zeros(a.n, dtype=np.int64)
        for c, row in zip(combo, rows):
            vec = vec + c * row
        yield vec % a.char


def maximal_subideals(ideal: Ideal, budget: int = 100000) -> list[Ideal]:
    """Maximal proper subideals of a nonzero ideal in a local ring.

    Every maximal subideal contains m*J, so the candidates live in the
    semisimple quotient J / mJ.  Its submodules are the sums of lines (mJ
    plus one element); a sum is maximal exactly when its index in J is the
    residue field size.
    """
    a = ideal.ring
    if not a.is_local:
        raise InputError("subideal enumeration expects a local ring")
    if ideal.is_zero():
        return []
    m = a.maximal_ideal()
    mj = ideal.mul_ideal(m)
    target_log = ideal.log_size() - a.residue_log_size
    lines: list[Ideal] = []
    seen = set()
    for x in _ideal_elements(a, ideal, budget):
        if mj.contains(x):
            continue
        line = mj.add_ideal(Ideal(a, x.reshape(1, -1)))
        if line not in seen:
            seen.add(line)
            lines.append(line)
    lattice = {mj}
    frontier = [mj]
    while frontier:
        nxt = []
        for cur in frontier:
            for line in lines:
                if cur.contains_ideal(line):
                    continue
                new = cur.add_ideal(line)
                if new not in lattice:
                    lattice.add(new)
                    nxt.append(new)
        frontier = nxt
        if len(lattice) > budget:
            raise BudgetExceeded("subideal lattice exceeds the budget")
    return sorted(
        (j for j in lattice if j.log_size() == target_log),
        key=lambda j: j.basis.tobytes(),
    )


def reducibility_minimality(gma: GmaAlgebra, budget: int = 100000) -> dict:
    """Check that no maximal proper subideal already splits the trace."""
    if gma.ch is None:
        raise InputError("minimality needs a pseudorep-backed instance")
    red = reducibility_ideal(gma)
    ideal = red["ideal"]
    if ideal.is_zero():
        return {"minimal": True, "checked": 0, "witness": None, "note": "zero ideal, nothing below"}
    a = gma.base
    checked = 0
    for sub in maximal_subideals(ideal, budget=budget):
        q = quotient_ring(a, sub)
        cert = split_as_characters(psrep_base_change(gma.ch.psr, q.proj), budget=budget)
        checked += 1
        if cert["split"]:
            return {
                "minimal": False,
                "checked": checked,
                "witness": sub,
                "note": "a proper subideal already splits the trace",
            }
    return {"minimal": True, "checked": checked, "witness": None, "note": ""}
