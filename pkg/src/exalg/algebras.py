"""Associative algebras over the commutative rings of `rings`.

An algebra is stored exactly like a FiniteRing (basis plus structure
constants over Z/p^k) without the commutativity requirement, together with
a central embedding of its coefficient ring.  Ideals of algebras are plain
Howell row sets closed under left and right multiplication; the commutative
Ideal class does not apply here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InputError, InvariantViolation
from .rings import FiniteRing, RingMap, _QuotientPresentation

__all__ = [
    "AssocAlgebra",
    "group_algebra",
    "matrix_algebra",
    "two_sided_ideal_rows",
    "subalgebra_closure",
    "AlgebraQuotient",
    "quotient_algebra",
]


class AssocAlgebra(FiniteRing):
    """Finite associative algebra with a marked central coefficient ring."""

    def __init__(self, p, k, table, one, base: FiniteRing, base_embed, labels=None, name="E"):
        super().__init__(p, k, np.asarray(table), np.asarray(one), name)
        self.base = base
        self.base_embed = np.asarray(base_embed, dtype=np.int64) % self.char
        if self.base_embed.shape != (base.n, self.n):
            raise InputError("base embedding has the wrong shape")
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.n)]
        if len(self.labels) != self.n:
            raise InputError("need one label per basis element")

    # commutative-only inherited machinery is switched off
    @property
    def _local_data(self):
        raise InputError("local-ring analysis is for commutative rings only")

    def check_ring(self, rng_seed: int = 0, full_limit: int = 20) -> None:
        raise InputError("use check_algebra for associative algebras")

    def scalar(self, a) -> np.ndarray:
        """Image of a base-ring element."""
        return (np.asarray(a, dtype=np.int64) @ self.base_embed) % self.char

    def amul(self, a, x) -> np.ndarray:
        """Base-scalar action a . x."""
        return self.mul(self.scalar(a), x)

    def right_mul_matrix(self, x) -> np.ndarray:
        """Matrix M with y @ M = y * x."""
        if self.n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.einsum("i,jil->jl", x, self.table) % self.char

    def is_central(self, x) -> bool:
        return np.array_equal(self.mul_matrix(x), self.right_mul_matrix(x))

    def commutator(self, x, y) -> np.ndarray:
        return self.sub(self.mul(x, y), self.mul(y, x))

    def check_algebra(self, rng_seed: int = 0, full_limit: int = 24) -> None:
        n = self.n
        if n == 0:
            return
        for i in range(n):
            e = np.zeros(n, dtype=np.int64)
            e[i] = 1
            if not np.array_equal(self.mul(self.one, e), e) or not np.array_equal(
                self.mul(e, self.one), e
            ):
                raise InvariantViolation(f"one fails on basis {i}")
        t = self.table
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
        # base ring embeds as a central unital subring
        RingMap(self.base, self, self.base_embed, name="base").check_hom()
        for a in range(self.base.n):
            u = self.base_embed[a]
            if not self.is_central(u):
                raise InvariantViolation(f"base image {a} is not central")

    def __repr__(self):
        return f"<{self.name}: dim {self.n} algebra over {self.base.name}>"


# ---- constructors ----------------------------------------------------


def group_algebra(base: FiniteRing, group, name: str | None = None) -> AssocAlgebra:
    """base[G] with basis g x (base basis)."""
    m, e = group.m, base.n
    n = m * e
    table = np.zeros((n, n, n), dtype=np.int64)
    for g1 in range(m):
        for g2 in range(m):
            g3 = group.mul(g1, g2)
            blk = slice(g3 * e, (g3 + 1) * e)
            for a1 in range(e):
                for a2 in range(e):
                    table[g1 * e + a1, g2 * e + a2, blk] = base.table[a1, a2]
    one = np.zeros(n, dtype=np.int64)
    one[group.identity * e : (group.identity + 1) * e] = base.one
    embed = np.zeros((e, n), dtype=np.int64)
    embed[:, group.identity * e : (group.identity + 1) * e] = np.eye(e, dtype=np.int64)
    labels = [
        f"{group.names[g]}*{i}" if e > 1 else group.names[g] for g in range(m) for i in range(e)
    ]
    return AssocAlgebra(
        base.p, base.k, table, one, base, embed, labels, name=name or f"{base.name}[{group.name}]"
    )


def matrix_algebra(base: FiniteRing, size: int, name: str | None = None) -> AssocAlgebra:
    """size x size matrices over the base, basis E_ij x (base basis)."""
    e = base.n
    n = size * size * e

    def idx(i, j, a):
        return (i * size + j) * e + a

    table = np.zeros((n, n, n), dtype=np.int64)
    for i in range(size):
        for j in range(size):
            for a1 in range(e):
                for j2 in range(size):
                    for a2 in range(e):
                        # E_ij E_j j2 = E_i j2
                        for l, c in enumerate(base.table[a1, a2]):
                            if c:
                                table[idx(i, j, a1), idx(j, j2, a2), idx(i, j2, l)] = c
    one = np.zeros(n, dtype=np.int64)
    for i in range(size):
        one[idx(i, i, 0) : idx(i, i, 0) + e] = base.one
    embed = np.zeros((e, n), dtype=np.int64)
    for a in range(e):
        for i in range(size):
            embed[a, idx(i, i, a)] = 1
    labels = [f"E{i}{j}*{a}" if e > 1 else f"E{i}{j}" for i in range(size) for j in range(size) for a in range(e)]
    alg = AssocAlgebra(base.p, base.k, table, one, base, embed, labels, name=name or f"M{size}({base.name})")
    return alg


# ---- ideals and subalgebras -----------------------------------------


def two_sided_ideal_rows(alg: AssocAlgebra, gens) -> np.ndarray:
    """Howell basis of the two-sided ideal generated by `gens`."""
    n = alg.n
    rows = np.asarray(gens, dtype=np.int64).reshape(-1, n) % alg.char
    if n == 0 or rows.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    h = linalg.howell_form(rows, alg.p, alg.k, ncols=n)
    while h.shape[0]:
        left = np.einsum("ri,ail->ral", h, alg.table).reshape(-1, n) % alg.char
        right = np.einsum("ri,ial->ral", h, alg.table).reshape(-1, n) % alg.char
        h2 = linalg.howell_form(np.vstack([h, left, right]), alg.p, alg.k, ncols=n)
        if linalg.span_equal(h, h2):
            return h
        h = h2
    return h


def subalgebra_closure(alg: AssocAlgebra, gens, with_one: bool = True) -> np.ndarray:
    """Howell basis of the unital subalgebra spanned by `gens`."""
    n = alg.n
    rows = [np.asarray(g, dtype=np.int64) % alg.char for g in gens]
    if with_one:
        rows = [alg.one.copy()] + rows
    h = linalg.howell_form(np.array(rows), alg.p, alg.k, ncols=n)
    while True:
        prods = np.einsum("ai,bj,ijl->abl", h, h, alg.table).reshape(-1, n) % alg.char
        h2 = linalg.howell_form(np.vstack([h, prods]), alg.p, alg.k, ncols=n)
        if linalg.span_equal(h, h2):
            return h
        h = h2


# ---- quotients -------------------------------------------------------


@dataclass(eq=False)
class AlgebraQuotient:
    algebra: AssocAlgebra
    pres: _QuotientPresentation
    proj_matrix: np.ndarray

    def proj(self, x) -> np.ndarray:
        return self.pres.proj(x)

    def lift(self, c) -> np.ndarray:
        return self.pres.lift(c)


def quotient_algebra(alg: AssocAlgebra, ideal_rows, name: str | None = None) -> AlgebraQuotient:
    """Quotient by a two-sided ideal given as (already closed) Howell rows."""
    rows = np.asarray(ideal_rows, dtype=np.int64).reshape(-1, alg.n) % alg.char
    pres = _QuotientPresentation.build(
        alg.p, alg.k, alg.table, alg.one, rows, name=name or f"{alg.name}/J"
    )
    proj_mat = pres.proj_matrix(alg.n)
    embed = (alg.base_embed @ proj_mat) % pres.ring.char
    out = AssocAlgebra(
        pres.ring.p,
        pres.ring.k,
        pres.ring.table,
        pres.ring.one,
        alg.base,
        embed,
        labels=None,
        name=pres.ring.name,
    )
    out.check_algebra()
    quot = AlgebraQuotient(out, pres, proj_mat)
    # the projection must be multiplicative: two-sidedness of the input rows
    if alg.n and out.n:
        lhs = np.einsum("ijx,xl->ijl", alg.table, proj_mat) % out.char
        imgs = proj_mat
        rhs = np.einsum("ix,jy,xyl->ijl", imgs, imgs, out.table) % out.char
        if not np.array_equal(lhs, rhs):
            raise InvariantViolation("quotient projection is not multiplicative")
    return quot
