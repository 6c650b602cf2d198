"""Finitely presented modules over the finite rings in `rings`.

A module is R^g modulo a relation submodule.  Relations are stored as the
Howell basis of their additive span inside (Z/p^k)^(g*n); the span is closed
under the ring action, so additive data is enough for sizes, lengths and
annihilators.  Fitting ideals need the finer ring-coefficient presentation
and take it as a separate argument.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import linalg
from .errors import BudgetExceeded, InputError, InvariantViolation
from .rings import FiniteRing, Ideal

__all__ = [
    "FinModule",
    "fitting_ideal",
    "ring_det",
    "module_from_ideal_quotient",
]


def _right_kernel_rows(rows: np.ndarray, p: int, k: int) -> np.ndarray:
    """Rows v with rows @ v^T = 0; over Z/p^k the span is the double annihilator."""
    return linalg.kernel(rows.T.copy(), p, k)


class FinModule:
    """R^g modulo an R-stable additive relation span."""

    def __init__(self, ring: FiniteRing, gens_count: int, relations, check: bool = True):
        self.ring = ring
        self.g = int(gens_count)
        width = self.g * ring.n
        if width == 0:
            rows = np.zeros((0, 0), dtype=np.int64)
        else:
            rows = np.asarray(relations, dtype=np.int64).reshape(-1, width) % ring.char
        self.relations = linalg.howell_form(rows, ring.p, ring.k, ncols=width)
        if check and self.relations.shape[0] and ring.n:
            self._check_stable()

    def _check_stable(self):
        r = self.ring
        blocks = self.relations.reshape(-1, self.g, r.n)
        # one pass of the full ring action must stay inside the span
        prods = np.einsum("rgi,ijl->jrgl", blocks, r.table) % r.char
        prods = prods.reshape(-1, self.g * r.n)
        combined = linalg.howell_form(
            np.vstack([self.relations, prods]), r.p, r.k, ncols=self.g * r.n
        )
        if not linalg.span_equal(combined, self.relations):
            raise InvariantViolation("relation span is not stable under the ring action")

    @staticmethod
    def from_presentation(ring: FiniteRing, pres) -> "FinModule":
        """Module of the (rels, g, n) array of ring-coefficient relation rows."""
        pres = np.asarray(pres, dtype=np.int64)
        if pres.ndim != 3 or pres.shape[2] != ring.n:
            raise InputError("presentation must be (rels, gens, ring_dim)")
        rels, g, n = pres.shape
        rows = pres.reshape(rels, g * n) % ring.char
        # close the additive span under the ring action
        h = linalg.howell_form(rows, ring.p, ring.k, ncols=g * n)
        while h.shape[0]:
            blocks = h.reshape(-1, g, n)
            prods = np.einsum("rgi,ijl->jrgl", blocks, ring.table) % ring.char
            h2 = linalg.howell_form(
                np.vstack([h, prods.reshape(-1, g * n)]), ring.p, ring.k, ncols=g * n
            )
            if linalg.span_equal(h, h2):
                break
            h = h2
        return FinModule(ring, g, h, check=False)

    # ---- size and length --------------------------------------------

    def log_size(self) -> int:
        """log_p of the module size."""
        total = self.g * self.ring.n * self.ring.k
        return total - linalg.span_log_size(self.relations, self.ring.p, self.ring.k)

    def is_zero(self) -> bool:
        return self.log_size() == 0

    def length(self) -> int:
        """Composition length over a local ring (all factors = residue field)."""
        res = self.ring.residue_log_size
        ls = self.log_size()
        if ls % res:
            raise InvariantViolation("module size is not a residue field power")
        return ls // res

    def minimal_generator_count(self) -> int:
        """dim of M/mM over the residue field."""
        r = self.ring
        m = r.maximal_ideal()
        width = self.g * r.n
        extra = []
        for row in m.basis:
            mat = r.mul_matrix(row)
            for j in range(self.g):
                blk = np.zeros((r.n, width), dtype=np.int64)
                blk[:, j * r.n : (j + 1) * r.n] = mat
                extra.append(blk)
        rows = np.vstack([self.relations] + extra) if extra else self.relations
        h = linalg.howell_form(rows, r.p, r.k, ncols=width)
        ls = self.g * r.n * r.k - linalg.span_log_size(h, r.p, r.k)
        res = r.residue_log_size
        if ls % res:
            raise InvariantViolation("M/mM size is not a residue field power")
        return ls // res

    # ---- annihilator -------------------------------------------------

    def annihilator(self) -> Ideal:
        """{r in R : r * M = 0}, via membership as linear conditions."""
        r = self.ring
        if r.n == 0 or self.g == 0:
            return Ideal(r, np.eye(r.n, dtype=np.int64), _closed=True)
        rk = _right_kernel_rows(self.relations, r.p, r.k) if self.relations.shape[0] else np.eye(
            self.g * r.n, dtype=np.int64
        )
        if rk.shape[0] == 0:
            # relations fill the ambient module: M = 0
            return Ideal(r, np.eye(r.n, dtype=np.int64), _closed=True)
        # x kills M iff x (placed in block j) is orthogonal to the right
        # kernel of the relation span, for every generator slot j
        cons = [rk[:, j * r.n : (j + 1) * r.n].T for j in range(self.g)]
        big = np.hstack(cons)
        ann_rows = linalg.kernel(big, r.p, r.k)
        return Ideal(r, ann_rows, _closed=True)

    def __repr__(self):
        return f"<FinModule over {self.ring.name}: {self.g} gens, log size {self.log_size()}>"


def module_from_ideal_quotient(r: FiniteRing, top: Ideal, bottom: Ideal) -> FinModule:
    """I/J as an R-module, generated by the Howell basis of I."""
    if not top.contains_ideal(bottom):
        raise InputError("quotient needs bottom contained in top")
    gens = top.basis
    m = gens.shape[0]
    if m == 0:
        return FinModule(r, 0, np.zeros((0, 0), dtype=np.int64), check=False)
    big = np.vstack([r.mul_matrix(b) for b in gens])  # (m*n, n): x -> sum x_i b_i
    rk = _right_kernel_rows(bottom.basis, r.p, r.k) if bottom.basis.shape[0] else np.eye(
        r.n, dtype=np.int64
    )
    cons = (big @ rk.T) % r.char if rk.shape[0] else np.zeros((m * r.n, 0), dtype=np.int64)
    rels = linalg.kernel(cons, r.p, r.k)
    return FinModule(r, m, rels, check=False)


# ---- Fitting ideals --------------------------------------------------


def ring_det(r: FiniteRing, mat) -> np.ndarray:
    """Determinant of a square matrix of ring elements, by permutation sum."""
    mat = np.asarray(mat, dtype=np.int64)
    g = mat.shape[0]
    if mat.shape[:2] != (g, g) or mat.shape[2] != r.n:
        raise InputError("determinant needs a (g, g, ring_dim) array")
    if g == 0:
        return r.one.copy()
    if g > 6:
        raise BudgetExceeded("determinant size above the supported bound")
    acc = r.zero()
    for perm in itertools.permutations(range(g)):
        sgn = 1
        for i in range(g):
            for j in range(i + 1, g):
                if perm[i] > perm[j]:
                    sgn = -sgn
        term = r.one.copy()
        for i in range(g):
            term = r.mul(term, mat[i, perm[i]])
        acc = r.add(acc, r.smul(sgn, term))
    return acc


def fitting_ideal(r: FiniteRing, pres, budget: int = 5000) -> Ideal:
    """Zeroth Fitting ideal of the module presented by (rels, g, n) rows."""
    pres = np.asarray(pres, dtype=np.int64)
    if pres.ndim != 3 or pres.shape[2] != r.n:
        raise InputError("presentation must be (rels, gens, ring_dim)")
    rels, g, _ = pres.shape
    if g == 0:
        return Ideal(r, np.eye(r.n, dtype=np.int64), _closed=True)
    if rels < g:
        return Ideal(r, np.zeros((0, r.n), dtype=np.int64), _closed=True)
    if math.comb(rels, g) > budget:
        raise BudgetExceeded(f"minor count {math.comb(rels, g)} exceeds budget {budget}")
    minors = [ring_det(r, pres[list(choice)]) for choice in itertools.combinations(range(rels), g)]
    return Ideal(r, np.array(minors, dtype=np.int64))
