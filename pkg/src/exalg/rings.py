"""Finite commutative rings presented by structure constants over Z/p^k.

A ring here is a free Z/p^k-module with a fixed basis and a rank-3 array of
structure constants.  Elements are int64 coefficient vectors.  The odd-p
restriction keeps 2 invertible, which the degree-2 trace/determinant
machinery upstream relies on.

Local structure (radical, residue field) is derived, not declared: the
radical of the mod-p fibre is the kernel of a high Frobenius power, which is
F_p-linear in characteristic p, and the number of local factors is read off
the Frobenius fixed space of the reduced quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import itertools

import numpy as np

from . import linalg
from .errors import BudgetExceeded, InputError, InvariantViolation, NonFreeQuotientError

__all__ = [
    "FiniteRing",
    "Ideal",
    "RingMap",
    "QuotientRing",
    "zmod_ring",
    "field_ring",
    "truncated_poly_ring",
    "product_ring",
    "zero_ring",
    "quotient_ring",
    "fiber_product",
    "embedding_dimension",
    "gorenstein_test",
    "smith_form",
    "monogenic_generator",
    "all_ring_maps",
    "DvrModel",
]


def smith_form(rows, p: int, k: int, ncols: int):
    """Diagonalize a relation matrix over Z/p^k by row and column operations.

    Returns (exps, w, winv) where exps[c] is the valuation of the diagonal
    relation at new coordinate c (k when there is no relation), and w is the
    ambient coordinate change: rowspan(rows) @ w = span{p^exps[c] * e_c}.
    """
    m = p**k
    a = np.asarray(rows, dtype=np.int64).reshape(-1, ncols) % m
    nr = a.shape[0]
    w = np.eye(ncols, dtype=np.int64)
    winv = np.eye(ncols, dtype=np.int64)
    exps = np.full(ncols, k, dtype=np.int64)
    t = 0
    limit = min(nr, ncols)
    while t < limit:
        sub = a[t:, t:]
        if not sub.any():
            break
        # minimal valuation entry in the remaining block
        best = None
        for i in range(sub.shape[0]):
            for j in range(sub.shape[1]):
                x = int(sub[i, j])
                if x:
                    v = linalg._val(x, p, k)
                    if best is None or v < best[0]:
                        best = (v, i + t, j + t)
                        if v == 0:
                            break
            if best and best[0] == 0:
                break
        v, bi, bj = best
        if bi != t:
            a[[t, bi]] = a[[bi, t]]
        if bj != t:
            a[:, [t, bj]] = a[:, [bj, t]]
            w[:, [t, bj]] = w[:, [bj, t]]
            winv[[t, bj]] = winv[[bj, t]]
        piv = p**v
        unit = int(a[t, t]) // piv
        if unit != 1:
            a[t] = (a[t] * pow(unit, -1, m)) % m
        col = a[:, t].copy()
        col[t] = 0
        if col.any():
            mult = col // piv
            a -= mult[:, None] * a[t][None, :]
            a %= m
        row = a[t].copy()
        row[t] = 0
        if row.any():
            mult = row // piv
            for j in np.nonzero(mult)[0]:
                q = int(mult[j])
                a[:, j] = (a[:, j] - q * a[:, t]) % m
                w[:, j] = (w[:, j] - q * w[:, t]) % m
                winv[t] = (winv[t] + q * winv[j]) % m
        exps[t] = v
        t += 1
    return exps, w % m, winv % m


@dataclass(eq=False)
class FiniteRing:
    """Commutative algebra over Z/p^k given by basis and structure constants."""

    p: int
    k: int
    table: np.ndarray
    one: np.ndarray
    name: str = "R"

    def __post_init__(self):
        linalg.check_modulus(self.p, self.k)
        self.table = np.asarray(self.table, dtype=np.int64) % self.char
        self.one = np.asarray(self.one, dtype=np.int64) % self.char
        n = self.n
        if self.table.shape != (n, n, n):
            raise InputError(f"structure constants must be ({n},{n},{n})")

    # ---- basic data -------------------------------------------------

    @property
    def char(self) -> int:
        return self.p**self.k

    @property
    def n(self) -> int:
        return self.one.shape[0]

    @property
    def size(self) -> int:
        return self.char**self.n

    @property
    def is_zero(self) -> bool:
        return self.n == 0

    def __repr__(self):
        return f"<{self.name}: dim {self.n} over Z/{self.p}^{self.k}>"

    def same_presentation(self, other: "FiniteRing") -> bool:
        return (
            self.p == other.p
            and self.k == other.k
            and self.n == other.n
            and np.array_equal(self.table, other.table)
            and np.array_equal(self.one, other.one)
        )

    # ---- element arithmetic ----------------------------------------

    def el(self, coeffs) -> np.ndarray:
        v = np.asarray(coeffs, dtype=np.int64) % self.char
        if v.shape != (self.n,):
            raise InputError(f"element must have {self.n} coordinates")
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.n, dtype=np.int64)

    def from_int(self, c: int) -> np.ndarray:
        return (c * self.one) % self.char

    def add(self, x, y) -> np.ndarray:
        return (x + y) % self.char

    def sub(self, x, y) -> np.ndarray:
        return (x - y) % self.char

    def neg(self, x) -> np.ndarray:
        return (-x) % self.char

    def smul(self, c: int, x) -> np.ndarray:
        return (int(c) * x) % self.char

    def mul(self, x, y) -> np.ndarray:
        if self.n == 0:
            return self.zero()
        return np.einsum("i,j,ijl->l", x, y, self.table) % self.char

    def mul_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Row-wise products of two stacks of elements."""
        if self.n == 0:
            return np.zeros((len(xs), 0), dtype=np.int64)
        return np.einsum("bi,bj,ijl->bl", xs, ys, self.table) % self.char

    def pow_el(self, x, e: int) -> np.ndarray:
        r = self.one.copy()
        b = x.copy()
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def mul_matrix(self, x) -> np.ndarray:
        """Matrix M with y @ M = x*y."""
        if self.n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.einsum("i,ijl->jl", x, self.table) % self.char

    def is_unit(self, x) -> bool:
        if self.n == 0:
            return True  # zero ring: 0 = 1 is invertible
        return linalg.solve_left(self.mul_matrix(x), self.one, self.p, self.k) is not None

    def inv(self, x) -> np.ndarray:
        y = linalg.solve_left(self.mul_matrix(x), self.one, self.p, self.k)
        if y is None:
            raise InputError("element is not a unit")
        return y

    def is_nilpotent(self, x) -> bool:
        if self.n == 0:
            return True
        y = x % self.p
        mat = np.einsum("i,ijl->jl", y, self.table) % self.p
        power = np.eye(self.n, dtype=np.int64)
        for _ in range(self.n):
            power = (power @ mat) % self.p
        return not power.any()

    def elements(self, limit: int | None = 2_000_000):
        if limit is not None and self.size > limit:
            raise BudgetExceeded(f"ring has {self.size} elements, limit {limit}")
        ranges = [range(self.char)] * self.n
        for tup in itertools.product(*ranges):
            yield np.array(tup, dtype=np.int64)

    def random_element(self, rng) -> np.ndarray:
        return np.array([rng.randrange(self.char) for _ in range(self.n)], dtype=np.int64)

    def random_unit(self, rng, tries: int = 200) -> np.ndarray:
        for _ in range(tries):
            x = self.random_element(rng)
            if self.is_unit(x):
                return x
        raise BudgetExceeded("no unit found; ring may be zero")

    # ---- verification ----------------------------------------------

    def check_ring(self, rng_seed: int = 0, full_limit: int = 20) -> None:
        n = self.n
        if n == 0:
            return
        t = self.table
        for i in range(n):
            e = np.zeros(n, dtype=np.int64)
            e[i] = 1
            if not np.array_equal(self.mul(self.one, e), e):
                raise InvariantViolation(f"one fails on basis {i}")
        if not np.array_equal(t, t.transpose(1, 0, 2)):
            raise InvariantViolation("structure constants are not commutative")
        if n <= full_limit:
            left = np.einsum("ijx,xlm->ijlm", t, t) % self.char
            right = np.einsum("jlx,ixm->ijlm", t, t) % self.char
            if not np.array_equal(left, right):
                raise InvariantViolation("associativity fails")
        else:
            import random

            rng = random.Random(rng_seed)
            for _ in range(200):
                a, b, c = (self.random_element(rng) for _ in range(3))
                if not np.array_equal(
                    self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))
                ):
                    raise InvariantViolation("associativity fails on sample")

    # ---- local structure -------------------------------------------

    @cached_property
    def _local_data(self):
        n = self.n
        if n == 0:
            return {"radical": np.zeros((0, 0), dtype=np.int64), "local": False,
                    "residue_log": 0, "factors": 0}
        # Frobenius power with p^m >= n kills exactly the nilpotents mod p
        mm = 1
        while self.p**mm < n:
            mm += 1
        tp = self.table % self.p

        def mulp(x, y):
            return np.einsum("i,j,ijl->l", x, y, tp) % self.p

        frob = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            e = np.zeros(n, dtype=np.int64)
            e[i] = 1
            acc = e
            for _ in range(mm):
                # x -> x^p by square and multiply
                out = self.one % self.p
                b = acc
                ee = self.p
                while ee:
                    if ee & 1:
                        out = mulp(out, b)
                    b = mulp(b, b)
                    ee >>= 1
                acc = out
            frob[i] = acc
        nil_modp = linalg.kernel(frob, self.p, 1)
        # lift to Z/p^k: radical = preimage of nil(R/p), contains p itself
        rows = [nil_modp % self.char] if nil_modp.shape[0] else []
        if self.k > 1:
            rows.append(self.p * np.eye(n, dtype=np.int64))
        rad = (
            linalg.howell_form(np.vstack(rows), self.p, self.k, ncols=n)
            if rows
            else np.zeros((0, n), dtype=np.int64)
        )
        # reduced quotient mod p, then count local factors by Frobenius fixed space
        quot = _QuotientPresentation.build(self.p, 1, tp, self.one % self.p, nil_modp)
        q = quot.ring
        if q.n == 0:
            raise InvariantViolation("reduced quotient is zero for a nonzero ring")
        frobq = np.zeros((q.n, q.n), dtype=np.int64)
        for i in range(q.n):
            e = np.zeros(q.n, dtype=np.int64)
            e[i] = 1
            frobq[i] = q.pow_el(e, q.p)
        fixed = linalg.kernel((frobq - np.eye(q.n, dtype=np.int64)) % q.p, q.p, 1)
        factors = fixed.shape[0]
        return {
            "radical": rad,
            "local": factors == 1,
            "residue_log": q.n if factors == 1 else 0,
            "factors": factors,
        }

    @property
    def is_local(self) -> bool:
        return self._local_data["local"]

    @property
    def local_factor_count(self) -> int:
        return self._local_data["factors"]

    def radical_rows(self) -> np.ndarray:
        return self._local_data["radical"]

    def radical_ideal(self) -> "Ideal":
        return Ideal(self, self.radical_rows())

    def maximal_ideal(self) -> "Ideal":
        if not self.is_local:
            raise InputError("ring is not local")
        return Ideal(self, self.radical_rows())

    @property
    def residue_log_size(self) -> int:
        """log_p of the residue field size (local rings only)."""
        if not self.is_local:
            raise InputError("ring is not local")
        return self._local_data["residue_log"]

    def residue_field(self):
        """(field, projection) for a local ring."""
        if not self.is_local:
            raise InputError("ring is not local")
        return quotient_ring(self, self.maximal_ideal())

    def radical_nilpotency_class(self) -> int:
        """Least c with rad^c = 0."""
        rad = self.radical_ideal()
        cur = rad
        c = 1
        while not cur.is_zero():
            cur = cur.mul_ideal(rad)
            c += 1
            if c > self.n * self.k + 2:
                raise InvariantViolation("radical power chain does not terminate")
        return c


class Ideal:
    """Ideal of a FiniteRing, stored as the Howell basis of its additive span."""

    def __init__(self, ring: FiniteRing, gens, _closed: bool = False):
        self.ring = ring
        rows = np.asarray(gens, dtype=np.int64).reshape(-1, ring.n) % ring.char
        self.gens = rows
        if _closed:
            self.basis = linalg.howell_form(rows, ring.p, ring.k, ncols=ring.n)
        else:
            self.basis = self._close(rows)

    def _close(self, rows: np.ndarray) -> np.ndarray:
        r = self.ring
        if r.n == 0 or rows.shape[0] == 0:
            return np.zeros((0, r.n), dtype=np.int64)
        h = linalg.howell_form(rows, r.p, r.k, ncols=r.n)
        while True:
            if h.shape[0] == 0:
                return h
            prods = np.einsum("ri,ijl->rjl", h, r.table).reshape(-1, r.n) % r.char
            h2 = linalg.howell_form(np.vstack([h, prods]), r.p, r.k, ncols=r.n)
            if linalg.span_equal(h, h2):
                return h
            h = h2

    # ---- predicates -------------------------------------------------

    def contains(self, x) -> bool:
        return linalg.span_contains(self.basis, x, self.ring.p, self.ring.k)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(row) for row in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Ideal)
            and self.ring is other.ring
            and linalg.span_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((id(self.ring), self.basis.tobytes()))

    def is_zero(self) -> bool:
        return self.basis.shape[0] == 0

    def is_unit_ideal(self) -> bool:
        return self.contains(self.ring.one)

    def log_size(self) -> int:
        return linalg.span_log_size(self.basis, self.ring.p, self.ring.k)

    # ---- arithmetic -------------------------------------------------

    def add_ideal(self, other: "Ideal") -> "Ideal":
        rows = np.vstack([self.basis, other.basis]) if self.basis.size or other.basis.size else self.basis
        return Ideal(self.ring, rows, _closed=True)

    def mul_ideal(self, other: "Ideal") -> "Ideal":
        r = self.ring
        if self.is_zero() or other.is_zero():
            return Ideal(r, np.zeros((0, r.n), dtype=np.int64), _closed=True)
        prods = np.einsum("ai,bj,ijl->abl", self.basis, other.basis, r.table)
        return Ideal(r, prods.reshape(-1, r.n) % r.char, _closed=True)

    def power(self, e: int) -> "Ideal":
        if e < 1:
            raise InputError("power must be >= 1")
        out = self
        for _ in range(e - 1):
            out = out.mul_ideal(self)
        return out

    def annihilator(self) -> "Ideal":
        """{r : r * x = 0 for all x in the ideal}."""
        r = self.ring
        if r.n == 0:
            return Ideal(r, np.zeros((0, 0), dtype=np.int64), _closed=True)
        if self.is_zero():
            return Ideal(r, np.eye(r.n, dtype=np.int64), _closed=True)
        mats = [r.mul_matrix(b) for b in self.basis]
        stacked = np.hstack(mats)
        kern = linalg.kernel(stacked, r.p, r.k)
        return Ideal(r, kern, _closed=True)

    def __repr__(self):
        return f"<Ideal of {self.ring.name}, log size {self.log_size()}>"


@dataclass(eq=False)
class RingMap:
    """Additive map between rings recorded by basis images; checked as a hom."""

    src: FiniteRing
    dst: FiniteRing
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.src.p != self.dst.p:
            raise InputError("ring maps require a common base prime")
        if self.dst.k > self.src.k:
            raise InputError("target modulus must divide source modulus")
        self.matrix = np.asarray(self.matrix, dtype=np.int64) % self.dst.char
        if self.matrix.shape != (self.src.n, self.dst.n):
            raise InputError("matrix shape mismatch")

    def __call__(self, x) -> np.ndarray:
        if self.src.n == 0:
            return self.dst.zero()
        return (np.asarray(x, dtype=np.int64) @ self.matrix) % self.dst.char

    def check_hom(self) -> None:
        s, d = self.src, self.dst
        if d.n == 0:
            return
        if not np.array_equal(self(s.one), d.one):
            raise InvariantViolation("map does not preserve 1")
        if s.n == 0:
            return
        imgs = self.matrix
        lhs = np.einsum("ijx,xl->ijl", s.table, imgs) % d.char
        rhs = np.einsum("ix,jy,xyl->ijl", imgs, imgs, d.table) % d.char
        if not np.array_equal(lhs, rhs):
            raise InvariantViolation("map is not multiplicative")

    def kernel_ideal(self) -> Ideal:
        rows = linalg.kernel_mod(self.matrix, self.src.p, self.src.k, self.dst.k)
        return Ideal(self.src, rows, _closed=True)

    def is_injective(self) -> bool:
        return self.kernel_ideal().is_zero()

    def is_surjective(self) -> bool:
        if self.dst.n == 0:
            return True
        h = linalg.howell_form(self.matrix, self.dst.p, self.dst.k, ncols=self.dst.n)
        return linalg.span_log_size(h, self.dst.p, self.dst.k) == self.dst.k * self.dst.n

    def then(self, other: "RingMap") -> "RingMap":
        if other.src is not self.dst:
            raise InputError("composition mismatch")
        mat = (self.matrix @ other.matrix) % other.dst.char
        return RingMap(self.src, other.dst, mat, name=f"{other.name}.{self.name}")

    @staticmethod
    def identity(r: FiniteRing) -> "RingMap":
        return RingMap(r, r, np.eye(r.n, dtype=np.int64), name="id")


class _QuotientPresentation:
    """Coordinates for R/I via a Smith basis of the relation span."""

    def __init__(self, p, k, exps, w, winv, surviving, new_k, ring):
        self.p, self.k = p, k
        self.exps, self.w, self.winv = exps, w, winv
        self.surviving = surviving
        self.new_k = new_k
        self.ring = ring

    @staticmethod
    def build(p, k, table, one, rel_rows, name="quot"):
        n = one.shape[0]
        h = linalg.howell_form(rel_rows, p, k, ncols=n)
        exps, w, winv = smith_form(h, p, k, n)
        nonzero = sorted({int(e) for e in exps if e > 0})
        if len(nonzero) > 1:
            raise NonFreeQuotientError(
                f"quotient has mixed additive torsion, exponents {sorted(set(map(int, exps)))}"
            )
        surviving = [c for c in range(n) if exps[c] > 0]
        new_k = nonzero[0] if nonzero else 1
        mq = p**new_k
        nn = len(surviving)

        def proj_vec(x):
            y = (np.asarray(x, dtype=np.int64) @ w) % (p**k)
            return y[surviving] % mq

        def lift_vec(c):
            y = np.zeros(n, dtype=np.int64)
            y[surviving] = np.asarray(c, dtype=np.int64) % mq
            return (y @ winv) % (p**k)

        lifts = np.array([lift_vec(row) for row in np.eye(nn, dtype=np.int64)]) if nn else np.zeros((0, n), dtype=np.int64)
        if nn:
            prods = np.einsum("ai,bj,ijl->abl", lifts, lifts, table) % (p**k)
            new_table = np.zeros((nn, nn, nn), dtype=np.int64)
            for a in range(nn):
                for b in range(nn):
                    new_table[a, b] = proj_vec(prods[a, b])
            new_one = proj_vec(one)
        else:
            new_table = np.zeros((0, 0, 0), dtype=np.int64)
            new_one = np.zeros(0, dtype=np.int64)
        ring = FiniteRing(p, new_k, new_table, new_one, name=name)
        pres = _QuotientPresentation(p, k, exps, w, winv, surviving, new_k, ring)
        pres._proj_vec = proj_vec
        pres._lift_vec = lift_vec
        pres.lifts = lifts
        return pres

    def proj(self, x):
        return self._proj_vec(x)

    def lift(self, c):
        return self._lift_vec(c)

    def proj_matrix(self, n):
        return np.array([self.proj(row) for row in np.eye(n, dtype=np.int64)]) if n else np.zeros((0, len(self.surviving)), dtype=np.int64)


@dataclass(eq=False)
class QuotientRing:
    """Result bundle for quotient_ring."""

    ring: FiniteRing
    proj: RingMap
    pres: _QuotientPresentation

    def lift(self, x) -> np.ndarray:
        return self.pres.lift(x)


def quotient_ring(r: FiniteRing, ideal: Ideal, name: str | None = None) -> QuotientRing:
    """R/I with projection; raises NonFreeQuotientError on mixed torsion."""
    if ideal.ring is not r:
        raise InputError("ideal belongs to a different ring")
    label = name or f"{r.name}/I"
    pres = _QuotientPresentation.build(r.p, r.k, r.table, r.one, ideal.basis, name=label)
    proj = RingMap(r, pres.ring, pres.proj_matrix(r.n), name="proj")
    proj.check_hom()
    pres.ring.check_ring()
    # lifting then projecting is the identity on the quotient
    for i in range(pres.ring.n):
        e = np.zeros(pres.ring.n, dtype=np.int64)
        e[i] = 1
        if not np.array_equal(pres.proj(pres.lift(e)), e):
            raise InvariantViolation("quotient lift/proj mismatch")
    return QuotientRing(pres.ring, proj, pres)


def fiber_product(f: RingMap, g: RingMap, name: str | None = None):
    """A x_C B for surjections f: A -> C, g: B -> C.

    Returns (ring, proj_a, proj_b).  The underlying module is the kernel of
    (a, b) -> f(a) - g(b); it must be free over Z/p^k to be representable.
    """
    a_ring, b_ring, c_ring = f.src, g.src, f.dst
    if g.dst is not c_ring:
        raise InputError("fiber product maps must share a target")
    if a_ring.p != b_ring.p or a_ring.k != b_ring.k:
        raise InputError("fiber product factors must share Z/p^k")
    if not f.is_surjective() or not g.is_surjective():
        raise InputError("fiber product requires surjective maps")
    p, k = a_ring.p, a_ring.k
    na, nb = a_ring.n, b_ring.n
    big = np.vstack([f.matrix, (-g.matrix) % c_ring.char])
    sub_rows = linalg.kernel_mod(big, p, k, c_ring.k)
    exps, w, winv = smith_form(sub_rows, p, k, na + nb)
    # submodule structure: invariant factors p^(k - exps[c]) for exps[c] < k
    if any(0 < int(e) < k for e in exps):
        raise NonFreeQuotientError("fiber product module is not free over Z/p^k")
    basis = winv[[c for c in range(na + nb) if exps[c] == 0]] % (p**k)
    nn = basis.shape[0]

    def mul_pair(x, y):
        xa, xb = x[:na], x[na:]
        ya, yb = y[:na], y[na:]
        return np.concatenate([a_ring.mul(xa, ya), b_ring.mul(xb, yb)])

    table = np.zeros((nn, nn, nn), dtype=np.int64)
    for i in range(nn):
        for j in range(i, nn):
            prod = mul_pair(basis[i], basis[j])
            coeff = linalg.solve_left(basis, prod, p, k)
            if coeff is None:
                raise InvariantViolation("fiber product basis is not multiplicatively closed")
            table[i, j] = coeff
            table[j, i] = coeff
    one_pair = np.concatenate([a_ring.one, b_ring.one])
    one = linalg.solve_left(basis, one_pair, p, k)
    if one is None:
        raise InvariantViolation("fiber product does not contain 1")
    ring = FiniteRing(p, k, table, one, name=name or f"{a_ring.name}x{b_ring.name}")
    ring.check_ring()
    proj_a = RingMap(ring, a_ring, basis[:, :na], name="pr1")
    proj_b = RingMap(ring, b_ring, basis[:, na:], name="pr2")
    proj_a.check_hom()
    proj_b.check_hom()
    ring._embedding = basis  # rows: images in A x B coordinates
    ring._embedding_split = (a_ring, b_ring, na)
    return ring, proj_a, proj_b


# ---- derived ring invariants ---------------------------------------


def embedding_dimension(r: FiniteRing) -> int:
    """dim of m/m^2 over the residue field, for local r."""
    m = r.maximal_ideal()
    m2 = m.mul_ideal(m)
    dlog = m.log_size() - m2.log_size()
    res = r.residue_log_size
    if dlog % res:
        raise InvariantViolation("m/m^2 size is not a residue field power")
    return dlog // res


def gorenstein_test(r: FiniteRing) -> bool:
    """Socle criterion for an Artinian local ring: dim soc = 1."""
    if r.is_zero:
        raise InputError("zero ring has no Gorenstein type")
    m = r.maximal_ideal()
    if m.is_zero():
        return True  # field
    soc = m.annihilator()
    dlog = soc.log_size()
    res = r.residue_log_size
    if dlog % res:
        raise InvariantViolation("socle size is not a residue field power")
    return dlog // res == 1


# ---- constructors ---------------------------------------------------


def zmod_ring(p: int, k: int, name: str | None = None) -> FiniteRing:
    table = np.ones((1, 1, 1), dtype=np.int64)
    return FiniteRing(p, k, table, np.array([1]), name=name or f"Z{p}^{k}")


def zero_ring(p: int, k: int = 1) -> FiniteRing:
    return FiniteRing(p, k, np.zeros((0, 0, 0), dtype=np.int64), np.zeros(0, dtype=np.int64), name="0")


def _find_irreducible(p: int, e: int) -> list[int]:
    """Monic irreducible of degree e over F_p, lexicographically first.

    Degree <= 3 is enough here, where having no root is equivalent to
    irreducibility (except for e = 1, handled trivially).
    """
    if e == 1:
        return [0, 1]
    if e > 3:
        raise InputError("residue extensions of degree > 3 are not supported")
    for tail in itertools.product(range(p), repeat=e):
        coeffs = list(tail) + [1]
        if coeffs[0] == 0:
            continue
        has_root = any(
            sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0 for x in range(p)
        )
        if not has_root:
            return coeffs
    raise InvariantViolation("no irreducible polynomial found")


def field_ring(p: int, e: int = 1, name: str | None = None) -> FiniteRing:
    """F_{p^e} with power basis of a root of the first irreducible polynomial."""
    if e == 1:
        return zmod_ring(p, 1, name=name or f"F{p}")
    poly = _find_irreducible(p, e)
    # reduction of x^a mod the polynomial, coefficients mod p
    reds = []
    cur = [1] + [0] * (e - 1)
    for a in range(2 * e - 1):
        reds.append(list(cur))
        cur = [0] + cur
        if len(cur) > e:
            lead = cur.pop()
            cur = [(c - lead * poly[i]) % p for i, c in enumerate(cur)]
    table = np.zeros((e, e, e), dtype=np.int64)
    for i in range(e):
        for j in range(e):
            table[i, j] = np.array(reds[i + j]) % p
    one = np.zeros(e, dtype=np.int64)
    one[0] = 1
    r = FiniteRing(p, 1, table, one, name=name or f"F{p**e}")
    r._field_poly = poly
    return r


def truncated_poly_ring(base: FiniteRing, trunc: int, name: str | None = None) -> FiniteRing:
    """base[t]/(t^trunc) with basis t^i * (base basis)."""
    e = base.n
    n = trunc * e
    table = np.zeros((n, n, n), dtype=np.int64)
    for i1 in range(trunc):
        for j1 in range(e):
            for i2 in range(trunc):
                for j2 in range(e):
                    if i1 + i2 >= trunc:
                        continue
                    prod = base.table[j1, j2]
                    blk = (i1 + i2) * e
                    table[i1 * e + j1, i2 * e + j2, blk : blk + e] = prod
    one = np.zeros(n, dtype=np.int64)
    one[:e] = base.one
    return FiniteRing(base.p, base.k, table, one, name=name or f"{base.name}[t]/t^{trunc}")


def product_ring(a: FiniteRing, b: FiniteRing, name: str | None = None) -> FiniteRing:
    if a.p != b.p or a.k != b.k:
        raise InputError("product factors must share Z/p^k")
    n = a.n + b.n
    table = np.zeros((n, n, n), dtype=np.int64)
    table[: a.n, : a.n, : a.n] = a.table
    table[a.n :, a.n :, a.n :] = b.table
    one = np.concatenate([a.one, b.one])
    r = FiniteRing(a.p, a.k, table, one, name=name or f"{a.name}x{b.name}")
    r._embedding = np.eye(n, dtype=np.int64)
    r._embedding_split = (a, b, a.n)
    return r


# ---- hom enumeration (monogenic sources) ----------------------------


def monogenic_generator(r: FiniteRing):
    """A basis-spanning power generator (theta, minpoly) or None."""
    singles = [(i,) for i in range(r.n)]
    pairs = [(i, j) for i in range(r.n) for j in range(i + 1, r.n)]
    for support in singles + pairs:
        g = np.zeros(r.n, dtype=np.int64)
        for i in support:
            g[i] = 1
        powers = [r.one.copy()]
        for _ in range(r.n):
            powers.append(r.mul(powers[-1], g))
        span = linalg.howell_form(np.array(powers[: r.n]), r.p, r.k, ncols=r.n)
        if linalg.span_log_size(span, r.p, r.k) == r.k * r.n:
            # first monic relation among the powers
            for d in range(1, r.n + 1):
                sol = linalg.solve_left(np.array(powers[:d]), (-powers[d]) % r.char, r.p, r.k)
                if sol is not None:
                    return g, list(map(int, sol)) + [1]
    return None


def all_ring_maps(src: FiniteRing, dst: FiniteRing, limit: int = 20000) -> list[RingMap]:
    """All unital ring maps src -> dst, via a monogenic presentation of src."""
    if dst.p != src.p or dst.k > src.k:
        return []
    mono = monogenic_generator(src)
    if mono is None:
        raise BudgetExceeded("source ring is not monogenic; hom enumeration unsupported")
    g, minpoly = mono
    if dst.size > limit:
        raise BudgetExceeded(f"target has {dst.size} elements, limit {limit}")
    powers_src = [src.one.copy()]
    for _ in range(src.n - 1):
        powers_src.append(src.mul(powers_src[-1], g))
    basis_in_powers = np.array(powers_src)
    # express each src basis vector through the power basis once, up front
    coeffs = []
    for i in range(src.n):
        e = np.zeros(src.n, dtype=np.int64)
        e[i] = 1
        sol = linalg.solve_left(basis_in_powers, e, src.p, src.k)
        if sol is None:
            raise InvariantViolation("power basis fails to express a basis vector")
        coeffs.append(sol)
    out = []
    for cand in dst.elements(limit=limit):
        acc = dst.one.copy()
        val = dst.zero()
        for c in minpoly:
            val = dst.add(val, dst.smul(c, acc))
            acc = dst.mul(acc, cand)
        if val.any():
            continue
        powers_dst = [dst.one.copy()]
        for _ in range(src.n - 1):
            powers_dst.append(dst.mul(powers_dst[-1], cand))
        mat = np.array(
            [sum((int(c) * powers_dst[j] for j, c in enumerate(row)), dst.zero()) % dst.char for row in coeffs]
        )
        m = RingMap(src, dst, mat)
        try:
            m.check_hom()
        except InvariantViolation:
            continue
        if not any(np.array_equal(m.matrix, o.matrix) for o in out):
            out.append(m)
    return out


# ---- truncated discrete valuation model ----------------------------


class DvrModel:
    """k[t]/(t^N) over F_{p^e}: the finite stand-in for a DVR.

    N is kept strictly larger than every length that matters downstream;
    results that touch t^(N-1) carry a truncation caveat.
    """

    def __init__(self, p: int = 5, e: int = 1, trunc: int = 16):
        if trunc < 2:
            raise InputError("truncation order must be >= 2")
        self.p, self.e, self.trunc = p, e, trunc
        self.residue = field_ring(p, e)
        self.ring = truncated_poly_ring(self.residue, trunc, name=f"F{p**e}[t]/t^{trunc}")
        self.ring.check_ring()

    @property
    def q(self) -> int:
        return self.p**self.e

    def t(self, power: int = 1) -> np.ndarray:
        x = np.zeros(self.ring.n, dtype=np.int64)
        if power < self.trunc:
            x[power * self.e] = 1
        return x

    def from_poly(self, coeffs) -> np.ndarray:
        """Element from a list of residue-field elements (t-adic coefficients)."""
        x = np.zeros(self.ring.n, dtype=np.int64)
        for i, c in enumerate(coeffs[: self.trunc]):
            block = np.asarray(c if not np.isscalar(c) else [c] + [0] * (self.e - 1))
            x[i * self.e : (i + 1) * self.e] = block % self.p
        return x

    def valuation(self, x) -> int:
        for i in range(self.trunc):
            if x[i * self.e : (i + 1) * self.e].any():
                return i
        return self.trunc

    def t_ideal(self, power: int) -> Ideal:
        return Ideal(self.ring, self.t(power).reshape(1, -1))

    def quotient_mod_t(self, power: int) -> QuotientRing:
        return quotient_ring(self.ring, self.t_ideal(power), name=f"L/t^{power}")

    def __repr__(self):
        return f"<DvrModel F{self.q}[t]/t^{self.trunc}>"
