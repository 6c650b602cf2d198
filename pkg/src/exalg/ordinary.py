"""Ordinarity at the marked decomposition subgroup, and the ordinary quotient.

A GMA structure on a Cayley-Hamilton quotient is *ordinary* for a character
kappa when the group images are upper triangular along the decomposition
subgroup (the 12-coordinate dies on Dp) and the 11-corner restricted to the
inertia subgroup is kappa^-1.  `ordinary_quotient` imposes exactly those
relations universally: the two-sided ideal J* they generate, the base ideal
J_R of trace values they force, and the quotient algebra

    E_ord = E / (J* + J_R E)    over    A / J_R,

which again carries a Cayley-Hamilton structure.  A pseudorepresentation is
then ordinary precisely when J_R = 0 for some kappa-compatible choice of
idempotent, and that is what `is_ordinary_psrep` decides (searching over
residual idempotents in the matrix-residual case).

J_R is generated by the traces of J* alone: J* is two-sided, so t(j y) is
again a trace of J* and every determinant value d(j) = (t(j)^2 - t(j^2))/2
lands in the trace ideal automatically.  The determinant generators are
still recorded, with provenance, because the quotient reports are easier
to audit that way.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebras import group_algebra, quotient_algebra, two_sided_ideal_rows
from .errors import BudgetExceeded, InputError, InvariantViolation
from .gma import (
    ChAlgebra,
    GmaAlgebra,
    _chars_equal,
    _trace_one_idempotents,
    ch_base_change,
    ch_quotient,
    gma_decompose,
    lift_idempotents,
    split_as_characters,
)
from .groups import GroupChar
from .psrep import (
    ExtendedPsrep,
    Pseudorep2,
    psrep_base_change,
    residual_split,
    validate_pseudorep,
)
from .rings import FiniteRing, Ideal, QuotientRing, quotient_ring

__all__ = [
    "OrdinaryContext",
    "ordinary_context",
    "is_ordinary_rep",
    "OrdinaryQuotient",
    "ordinary_quotient",
    "is_ordinary_psrep",
    "reducible_ordinary_quotient",
    "ordinary_tangent_count",
    "ordinary_factorization_check",
]


# ---- contexts --------------------------------------------------------


@dataclass(eq=False)
class OrdinaryContext:
    """A GMA with group coordinates, marks, and a unit character on Dp.

    `kappa_alignment` records which corner residually restricts to
    kappa^-1 on the inertia marks: "corner1", "corner2", "both",
    "neither", or "nonsplit"/"coincident"/"unknown" when the residual
    does not separate.  It is descriptive; the hard conditions are
    checked by `is_ordinary_rep` and `ordinary_quotient`.
    """

    gma: GmaAlgebra
    kappa: GroupChar
    dp: tuple
    ip: tuple
    kappa_alignment: str

    @property
    def ch(self) -> ChAlgebra:
        return self.gma.ch

    def __repr__(self):
        return (
            f"<OrdinaryContext |Dp|={len(self.dp)} |Ip|={len(self.ip)} "
            f"kappa on {self.kappa_alignment}>"
        )


def _residual_corner_alignment(gma: GmaAlgebra, kappa: GroupChar, ip) -> str:
    ch = gma.ch
    a = ch.base
    if not a.is_local:
        return "unknown"
    resq = a.residue_field()
    split = residual_split(psrep_base_change(ch.psr, resq.proj))
    if split.get("unsupported"):
        return "nonsplit"
    if not split["split"]:
        return "nonsplit"
    chi1, chi2 = split["chars"]
    if _chars_equal(chi1, chi2):
        return "coincident"
    # residual corner characters: phi_i(rho(g)) mod the maximal ideal
    kbar = [resq.proj(kappa.inv_value(g)) for g in ip]
    c1 = [resq.proj(gma.phi1_of(ch.rho(g))) for g in ip]
    c2 = [resq.proj(gma.phi2_of(ch.rho(g))) for g in ip]
    hit1 = all(np.array_equal(x, y) for x, y in zip(c1, kbar))
    hit2 = all(np.array_equal(x, y) for x, y in zip(c2, kbar))
    if hit1 and hit2:
        return "both"
    if hit1:
        return "corner1"
    if hit2:
        return "corner2"
    return "neither"


def ordinary_context(gma: GmaAlgebra, kappa: GroupChar) -> OrdinaryContext:
    if gma.ch is None:
        raise InputError("ordinarity needs group coordinates")
    grp = gma.ch.psr.group
    if grp.dp is None or grp.ip is None:
        raise InputError("group carries no decomposition/inertia marks")
    if kappa.ring is not gma.base:
        raise InputError("kappa must take values in the base ring")
    if not set(grp.dp) <= set(kappa.domain):
        raise InputError("kappa must be defined on the decomposition subgroup")
    kappa.check()
    alignment = _residual_corner_alignment(gma, kappa, grp.ip)
    return OrdinaryContext(gma, kappa, grp.dp, grp.ip, alignment)


def is_ordinary_rep(ctx: OrdinaryContext) -> dict:
    """Upper triangular on Dp and kappa^-1 on the 11-corner along Ip.

    Returns {"ordinary": bool, "witness": None | dict}; the witness names
    the first element and coordinate where the condition fails.
    """
    gma, ch = ctx.gma, ctx.gma.ch
    al = ch.algebra
    grp = ch.psr.group
    for g in ctx.dp:
        v = (ch.rho(g) @ gma.p12) % al.char
        if v.any():
            return {
                "ordinary": False,
                "witness": {
                    "element": int(g),
                    "name": grp.names[g],
                    "coordinate": "rho12",
                    "value": [int(c) for c in v],
                },
            }
    for g in ctx.ip:
        diff = (gma.phi1_of(ch.rho(g)) - ctx.kappa.inv_value(g)) % ch.base.char
        if diff.any():
            return {
                "ordinary": False,
                "witness": {
                    "element": int(g),
                    "name": grp.names[g],
                    "coordinate": "rho11",
                    "value": [int(c) for c in gma.phi1_of(ch.rho(g))],
                    "expected": [int(c) for c in ctx.kappa.inv_value(g)],
                },
            }
    return {"ordinary": True, "witness": None}


# ---- the ordinary quotient ------------------------------------------


@dataclass(eq=False)
class OrdinaryQuotient:
    """E_ord = E/(J* + J_R E) over A/J_R, with the ideals that built it."""

    ctx: OrdinaryContext
    j_star_rows: np.ndarray  # Howell basis of J*, coordinates of ctx.ch.algebra
    j_star_generators: list
    j_r: Ideal
    j_r_generators: list
    j_rows: np.ndarray  # Howell basis of J* + J_R E
    base_quot: QuotientRing
    e_ord: ChAlgebra | None
    ord_proj: np.ndarray | None  # (ch.nbar, e_ord.nbar), reduce-then-project
    collapsed: bool
    collapse_step: dict | None

    def __repr__(self):
        tail = "zero" if self.collapsed else f"dim {self.e_ord.nbar} over {self.base_quot.ring.name}"
        return f"<OrdinaryQuotient {tail}>"


def _push_vector(ch: ChAlgebra, base_quot: QuotientRing, down: ChAlgebra, v) -> np.ndarray:
    """Image of v in the quotient built over base_quot, through A[G] lifts."""
    grp = ch.psr.group
    lift = ch.quot.lift(v).reshape(grp.m, ch.base.n)
    mapped = np.stack([base_quot.proj(b) for b in lift]) if grp.m else lift
    return down.quot.proj(mapped.reshape(-1))


def _quotient_by_pushed(
    ch: ChAlgebra, base_quot: QuotientRing, extra_rows, name: str | None = None
):
    """(down, ch_out, proj_mat): quotient of ch by extra_rows over base_quot.

    `down` is the Cayley-Hamilton quotient over the smaller base; `ch_out`
    additionally kills the two-sided ideal generated by the images of
    `extra_rows`.  The trace is required to die on that ideal, otherwise
    the base ideal was not saturated and the construction refuses.
    """
    down = ch_quotient(psrep_base_change(ch.psr, base_quot.proj), name=name)
    abar = base_quot.ring
    pushed = [_push_vector(ch, base_quot, down, r) for r in np.atleast_2d(extra_rows)] if len(extra_rows) else []
    rows2 = two_sided_ideal_rows(down.algebra, np.asarray(pushed, dtype=np.int64).reshape(-1, down.algebra.n))
    if rows2.shape[0] and ((rows2 @ down.t_matrix) % abar.char).any():
        raise InvariantViolation("trace survives on the imposed ideal")
    quot2 = quotient_algebra(down.algebra, rows2, name=name)
    if quot2.algebra.char != down.algebra.char and quot2.algebra.n:
        raise InvariantViolation("imposed ideal changes the characteristic")
    # canonical presentation straight from E = Abar[G]
    p_full = (down.quot.proj_matrix @ quot2.proj_matrix) % max(quot2.algebra.char, 1)
    ker = linalg.kernel(p_full, down.E.p, down.E.k)
    quot_full = quotient_algebra(down.E, ker, name=name)
    if quot_full.algebra.n != quot2.algebra.n:
        raise InvariantViolation("quotient presentations disagree on dimension")
    if quot_full.algebra.n and linalg.kernel(
        quot_full.algebra.base_embed, quot_full.algebra.p, quot_full.algebra.k
    ).shape[0]:
        raise InvariantViolation("base does not embed into the imposed quotient")
    nord = quot_full.algebra.n
    ext = ExtendedPsrep(down.psr, down.E)
    tmat = np.zeros((nord, abar.n), dtype=np.int64)
    for i in range(nord):
        tmat[i] = ext.t_el(quot_full.lift(np.eye(nord, dtype=np.int64)[i]))
    grp = ch.psr.group
    rho = np.zeros((grp.m, nord), dtype=np.int64)
    for g in range(grp.m):
        u = np.zeros(down.E.n, dtype=np.int64)
        u[g * abar.n : (g + 1) * abar.n] = abar.one
        rho[g] = quot_full.proj(u)
    out = ChAlgebra(down.psr, abar, down.E, quot_full.algebra, quot_full, tmat, rho)
    out.verify()
    proj_mat = np.zeros((ch.nbar, nord), dtype=np.int64)
    for i in range(ch.nbar):
        proj_mat[i] = _map_through(ch, base_quot, quot_full, i)
    return down, out, proj_mat


def _map_through(ch: ChAlgebra, base_quot: QuotientRing, quot_full, i: int) -> np.ndarray:
    grp = ch.psr.group
    lift = ch.quot.lift(np.eye(ch.nbar, dtype=np.int64)[i]).reshape(grp.m, ch.base.n)
    mapped = np.stack([base_quot.proj(b) for b in lift])
    return quot_full.proj(mapped.reshape(-1))


def _star_generators(ctx: OrdinaryContext):
    """Defining vectors of J* with per-element provenance."""
    gma, ch = ctx.gma, ctx.gma.ch
    al, a = ch.algebra, ch.base
    gens, star_prov = [], []
    for g in ctx.dp:
        v = (ch.rho(g) @ gma.p12) % al.char
        star_prov.append(
            {"clause": "rho12-on-dp", "element": int(g), "value": [int(c) for c in v]}
        )
        if v.any():
            gens.append(v)
    for g in ctx.ip:
        diff = (gma.phi1_of(ch.rho(g)) - ctx.kappa.inv_value(g)) % a.char
        vec = al.amul(diff, gma.e1)
        star_prov.append(
            {
                "clause": "rho11-minus-kappa-inv-on-ip",
                "element": int(g),
                "value": [int(c) for c in vec],
            }
        )
        if vec.any():
            gens.append(vec)
    return gens, star_prov


def ordinary_quotient(ctx: OrdinaryContext, name: str | None = None) -> OrdinaryQuotient:
    ch = ctx.gma.ch
    al, a = ch.algebra, ch.base
    gens, star_prov = _star_generators(ctx)
    j_star = two_sided_ideal_rows(al, np.asarray(gens, dtype=np.int64).reshape(-1, al.n))
    jr_rows, jr_prov = [], []
    for i, r in enumerate(j_star):
        tv = ch.t_el(r)
        jr_rows.append(tv)
        jr_prov.append({"kind": "trace", "row": i, "value": [int(c) for c in tv]})
        dv = ch.d_el(r)
        jr_rows.append(dv)
        jr_prov.append({"kind": "determinant", "row": i, "value": [int(c) for c in dv]})
    j_r = Ideal(a, np.asarray(jr_rows, dtype=np.int64).reshape(-1, a.n))
    # J* + J_R E, for the record and for the quotient below
    scaled = [al.amul(c, e) for c in j_r.basis for e in np.eye(al.n, dtype=np.int64)]
    j_rows = linalg.howell_form(
        np.vstack([j_star, np.asarray(scaled, dtype=np.int64).reshape(-1, al.n)]),
        al.p,
        al.k,
        ncols=al.n,
    )
    collapsed = j_r.is_unit_ideal()
    collapse_step = None
    if collapsed:
        hit = next((pr for pr in jr_prov if a.is_unit(np.asarray(pr["value"]))), None)
        collapse_step = {
            "generator": hit,
            "note": "" if hit else "unit arises only as a combination of generators",
        }
    base_quot = quotient_ring(a, j_r, name=f"{a.name}/JR")
    if collapsed:
        return OrdinaryQuotient(
            ctx, j_star, star_prov, j_r, jr_prov, j_rows, base_quot, None, None, True, collapse_step
        )
    _, e_ord, proj_mat = _quotient_by_pushed(
        ch, base_quot, j_star, name=name or f"{al.name} ord"
    )
    return OrdinaryQuotient(
        ctx, j_star, star_prov, j_r, jr_prov, j_rows, base_quot, e_ord, proj_mat, False, None
    )


# ---- deciding ordinarity for a pseudorepresentation ------------------


def _ordinary_for_idempotent(ch: ChAlgebra, kappa: GroupChar, e1) -> tuple:
    g = gma_decompose(ch, e1)
    ctx = ordinary_context(g, kappa)
    oq = ordinary_quotient(ctx)
    return oq.j_r.is_zero(), ctx, oq


def is_ordinary_psrep(psr: Pseudorep2, kappa: GroupChar, budget: int = 400000) -> dict:
    """Does the Cayley-Hamilton quotient admit an ordinary GMA structure?

    True iff J_R = 0 for some choice of trace-1 idempotent whose corner is
    kappa-compatible.  With a split residual the candidates are the lifts
    aligned to the residual characters matching kappa^-1 on inertia; with
    a matrix residual every residual trace-1 idempotent is lifted and
    tried.  Irreducible residual characteristic polynomials would need a
    field extension and are reported unsupported, as are coincident
    residual characters.
    """
    grp = psr.group
    if grp.dp is None or grp.ip is None:
        raise InputError("group carries no decomposition/inertia marks")
    a = psr.ring
    if not a.is_local or a.n == 0:
        raise InputError("ordinarity decision expects a local base")
    ch = ch_quotient(psr)
    resq = a.residue_field()
    split = residual_split(psrep_base_change(psr, resq.proj))
    if split.get("unsupported") and split["chars"] is None and "irreducible" in split["reason"]:
        return {"supported": False, "ordinary": None, "reason": split["reason"], "checked": 0}
    if split["split"]:
        chi1, chi2 = split["chars"]
        if _chars_equal(chi1, chi2):
            return {
                "supported": False,
                "ordinary": None,
                "reason": "residual characters coincide; no idempotent separates them",
                "checked": 0,
            }
        kbar = {g: resq.proj(kappa.inv_value(g)) for g in grp.ip}
        cands = [
            chi
            for chi in (chi1, chi2)
            if all(np.array_equal(chi(g), kbar[g]) for g in grp.ip)
        ]
        if not cands:
            return {
                "supported": True,
                "ordinary": False,
                "reason": "no residual character matches kappa^-1 on inertia",
                "checked": 0,
            }
        for chi in cands:
            lifted = lift_idempotents(ch, prefer_char=chi, budget=budget)
            ok, ctx, oq = _ordinary_for_idempotent(ch, kappa, lifted["e1"])
            if ok:
                return {
                    "supported": True,
                    "ordinary": True,
                    "reason": "",
                    "checked": len(cands),
                    "witness": {
                        "e1": [int(c) for c in lifted["e1"]],
                        "alignment": ctx.kappa_alignment,
                    },
                }
        return {
            "supported": True,
            "ordinary": False,
            "reason": "ordinary base ideal is nonzero for every aligned corner",
            "checked": len(cands),
        }
    # matrix residual over the base field: search all residual corners
    ch_res, connect = ch_base_change(ch, resq.proj)
    cands = [
        e
        for e in _trace_one_idempotents(ch_res, budget)
        if e.any() and not np.array_equal(e, ch_res.algebra.one)
    ]
    if not cands:
        return {
            "supported": False,
            "ordinary": None,
            "reason": "residual algebra has no nontrivial trace-1 idempotent",
            "checked": 0,
        }
    checked = 0
    for target in cands:
        e1 = _newton_lift(ch, ch_res, connect, target)
        checked += 1
        ok, ctx, _ = _ordinary_for_idempotent(ch, kappa, e1)
        if ok:
            return {
                "supported": True,
                "ordinary": True,
                "reason": "",
                "checked": checked,
                "witness": {
                    "e1": [int(c) for c in e1],
                    "alignment": ctx.kappa_alignment,
                },
            }
    return {
        "supported": True,
        "ordinary": False,
        "reason": "ordinary base ideal is nonzero for every residual corner",
        "checked": checked,
    }


def _newton_lift(ch: ChAlgebra, ch_res: ChAlgebra, connect, target, max_iter: int = 64):
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
    if not np.array_equal((x @ connect) % ch_res.algebra.char, target):
        raise InvariantViolation("lifted idempotent drifted from its residual class")
    return x


# ---- the reducible ordinary quotient --------------------------------


def reducible_ordinary_quotient(ctx: OrdinaryContext, name: str | None = None) -> dict:
    """Quotient by the ordinary relations plus the reducibility ideal.

    On top of J* this kills every pairing product rho12(g) rho21(h), so the
    base drops to A/(J_R + J_red) and the trace must split there as a pair
    of characters; the split is computed and returned as the certificate.
    The result is the same algebra as E_ord/(J_red E_ord), which is checked
    by comparing log sizes.
    """
    gma, ch = ctx.gma, ctx.gma.ch
    al, a = ch.algebra, ch.base
    grp = ch.psr.group
    oq = ordinary_quotient(ctx)
    jd = Ideal(a, gma.m_table.reshape(-1, a.n))
    total = Ideal(a, np.vstack([oq.j_r.basis, jd.basis]))
    base_quot = quotient_ring(a, total, name=f"{a.name}/JRred")
    collapsed = total.is_unit_ideal()
    if collapsed:
        return {
            "quotient": oq,
            "reducibility_ideal": jd,
            "total_ideal": total,
            "base_quot": base_quot,
            "e_red": None,
            "certificate": None,
            "collapsed": True,
            "rank_match": True,
        }
    cert = split_as_characters(psrep_base_change(ch.psr, base_quot.proj))
    if not cert["split"]:
        raise InvariantViolation("trace fails to split modulo the reducibility ideal")
    # two-sided generators: J* plus the pairing products
    prods = [
        al.mul((ch.rho(g) @ gma.p12) % al.char, (ch.rho(h) @ gma.p21) % al.char)
        for g in range(grp.m)
        for h in range(grp.m)
    ]
    extra = np.vstack([oq.j_star_rows.reshape(-1, al.n), np.asarray(prods).reshape(-1, al.n)])
    _, e_red, proj_mat = _quotient_by_pushed(ch, base_quot, extra, name=name or f"{al.name} red-ord")
    rank_match = True
    if oq.e_ord is not None:
        # E_red must be E_ord with the reducibility ideal extended, nothing more
        eo = oq.e_ord
        abar = oq.base_quot.ring
        jd_bar = Ideal(abar, np.stack([oq.base_quot.proj(r) for r in jd.basis]) if jd.basis.shape[0] else np.zeros((0, abar.n), dtype=np.int64))
        scaled = [eo.algebra.amul(c, e) for c in jd_bar.basis for e in np.eye(eo.nbar, dtype=np.int64)]
        rows = two_sided_ideal_rows(eo.algebra, np.asarray(scaled, dtype=np.int64).reshape(-1, eo.nbar))
        q = quotient_algebra(eo.algebra, rows)
        lhs = q.algebra.k * q.algebra.n
        rhs = e_red.algebra.k * e_red.algebra.n
        rank_match = lhs == rhs
        if not rank_match:
            raise InvariantViolation("reducible ordinary quotient has the wrong size")
    return {
        "quotient": oq,
        "reducibility_ideal": jd,
        "total_ideal": total,
        "base_quot": base_quot,
        "e_red": e_red,
        "red_proj": proj_mat,
        "certificate": cert,
        "collapsed": False,
        "rank_match": rank_match,
    }


# ---- universality of the ordinary quotient ---------------------------


def ordinary_factorization_check(ctx: OrdinaryContext, budget: int = 200000) -> dict:
    """The universal property of E_ord, verified by enumeration.

    A quotient pair (I, K) -- I an ideal of the base, K a two-sided ideal
    of the Cayley-Hamilton algebra with I E <= K -- carries the ordinary
    relations exactly when the J* generators land in K and the trace maps
    K into I.  Every qualifying pair must contain (J_R, J* + J_R E), and
    that pair itself qualifies; both directions are checked over every
    cyclic base ideal and the two-sided closures of a spanning family of
    seed vectors.  Raises on any violation.
    """
    ch = ctx.gma.ch
    al, a = ch.algebra, ch.base
    if a.size > budget:
        raise BudgetExceeded(f"base has {a.size} elements, budget {budget}")
    oq = ordinary_quotient(ctx)
    gens, _ = _star_generators(ctx)
    eye = np.eye(al.n, dtype=np.int64)
    base_ideals, seen = [], set()
    for x in a.elements(limit=budget):
        ideal = Ideal(a, x.reshape(1, -1))
        key = ideal.basis.tobytes()
        if key not in seen:
            seen.add(key)
            base_ideals.append(ideal)
    rng = random.Random(0)
    seeds = [np.zeros(al.n, dtype=np.int64)]
    seeds.extend(eye)
    seeds.extend(al.random_element(rng) for _ in range(8))
    seeds.extend(oq.j_star_rows)
    seeds.extend(oq.j_rows)
    qualified = 0
    for ideal in base_ideals:
        ie = [al.amul(c, e) for c in ideal.basis for e in eye]
        ie = np.asarray(ie, dtype=np.int64).reshape(-1, al.n)
        for seed in seeds:
            k_rows = two_sided_ideal_rows(al, np.vstack([seed.reshape(1, -1), ie]))
            has_gens = all(
                linalg.span_contains(k_rows, g, al.p, al.k) for g in gens
            )
            traces_in = all(ideal.contains(ch.t_el(r)) for r in k_rows)
            if not (has_gens and traces_in):
                continue
            qualified += 1
            for r in oq.j_r.basis:
                if not ideal.contains(r):
                    raise InvariantViolation(
                        "qualifying quotient misses the ordinary base ideal"
                    )
            for r in oq.j_rows:
                if not linalg.span_contains(k_rows, r, al.p, al.k):
                    raise InvariantViolation(
                        "qualifying quotient misses the ordinary ideal"
                    )
    # the canonical pair qualifies
    if not all(linalg.span_contains(oq.j_rows, g, al.p, al.k) for g in gens):
        raise InvariantViolation("ordinary ideal misses its own generators")
    for r in oq.j_rows:
        if not oq.j_r.contains(ch.t_el(r)):
            raise InvariantViolation("ordinary trace values escape the base ideal")
    return {"ok": True, "qualified": qualified, "base_ideals": len(base_ideals)}


# ---- tangent counting over dual numbers ------------------------------


def _dual_numbers(f: FiniteRing):
    from .rings import truncated_poly_ring

    return truncated_poly_ring(f, 2, name=f"{f.name}[eps]")


def ordinary_tangent_count(
    psr: Pseudorep2, kappa: GroupChar | None = None, constraint: str = "all",
    budget: int = 200000,
) -> dict:
    """Dimension of the space of first-order trace deformations.

    Works over a field F with |F| <= 9 and |G| <= 16.  A deformation is a
    delta: G -> F with t + eps delta (and the determinant it forces) again
    a pseudorepresentation over F[eps]; those deltas are exactly the
    kernel of the linearized laws, which is solved as one linear system.
    The solutions are then enumerated and filtered by the requested
    constraint ("all", "ordinary", "reducible-ordinary"), the filtered set
    is checked to be closed under addition, and its F-dimension returned.
    """
    grp, f = psr.group, psr.ring
    if f.k != 1 or not f.is_local or not f.maximal_ideal().is_zero():
        raise InputError("tangent counting expects a field base")
    if f.p**f.n > 9:
        raise InputError("field too large for tangent enumeration")
    if grp.m > 16:
        raise InputError("group too large for tangent enumeration")
    if constraint not in ("all", "ordinary", "reducible-ordinary"):
        raise InputError(f"unknown constraint {constraint!r}")
    if constraint != "all":
        if kappa is None:
            raise InputError("ordinary constraints need kappa")
        if grp.dp is None or grp.ip is None:
            raise InputError("group carries no decomposition/inertia marks")
    psr.check()
    m, nf, p = grp.m, f.n, f.p
    dim_amb = m * nf
    inv2 = pow(2, -1, p)

    def block(g: int, mat=None) -> np.ndarray:
        out = np.zeros((dim_amb, nf), dtype=np.int64)
        out[g * nf : (g + 1) * nf] = np.eye(nf, dtype=np.int64) if mat is None else mat
        return out

    def dd_row(g: int) -> np.ndarray:
        # delta d(g) = inv2 (2 t(g) delta(g) - delta(g^2))
        g2 = grp.mul(g, g)
        r = block(g, f.mul_matrix(f.smul(2, psr.t[g]))) - block(g2)
        return (inv2 * r) % p

    eqs = [block(grp.identity), dd_row(grp.identity)]
    for g in range(m):
        for h in range(m):
            gh, hg = grp.mul(g, h), grp.mul(h, g)
            if g < h and gh != hg:
                eqs.append((block(gh) - block(hg)) % p)
            ghi = grp.mul(g, grp.inv(h))
            row = (
                block(h, f.mul_matrix(psr.t[g]))
                + block(g, f.mul_matrix(psr.t[h]))
                - block(gh)
                - block(ghi, f.mul_matrix(psr.d[h]))
                - (dd_row(h) @ f.mul_matrix(psr.t[ghi]))
            ) % p
            eqs.append(row)
            row = (
                dd_row(gh)
                - dd_row(h) @ f.mul_matrix(psr.d[g])
                - dd_row(g) @ f.mul_matrix(psr.d[h])
            ) % p
            eqs.append(row)
    sol = linalg.kernel(np.hstack(eqs) % p, p, 1)
    fp_dim = sol.shape[0]
    if p**fp_dim > budget:
        raise BudgetExceeded(f"tangent space has {p}^{fp_dim} points, budget {budget}")
    reps = _dual_numbers(f)
    kappa2 = None
    if kappa is not None:
        pad = {g: np.concatenate([kappa(g), np.zeros(nf, dtype=np.int64)]) for g in kappa.domain}
        kappa2 = GroupChar(grp, reps, pad, name=f"{kappa.name}[eps]")

    def as_psrep(delta: np.ndarray) -> Pseudorep2:
        dm = delta.reshape(m, nf)
        t2 = np.zeros((m, reps.n), dtype=np.int64)
        d2 = np.zeros((m, reps.n), dtype=np.int64)
        for g in range(m):
            t2[g] = np.concatenate([psr.t[g], dm[g]])
            dd = (inv2 * (2 * f.mul(psr.t[g], dm[g]) - dm[grp.mul(g, g)])) % p
            d2[g] = np.concatenate([psr.d[g], dd])
        return Pseudorep2(grp, reps, t2, d2, name=f"{psr.name} deform")

    kept = set()
    for coeffs in itertools.product(range(p), repeat=fp_dim):
        delta = (np.asarray(coeffs, dtype=np.int64) @ sol) % p if fp_dim else np.zeros(dim_amb, dtype=np.int64)
        cand = as_psrep(delta)
        rep = validate_pseudorep(cand)
        if not rep["ok"]:
            raise InvariantViolation("linearized solution fails the exact laws")
        if constraint != "all":
            dec = is_ordinary_psrep(cand, kappa2, budget=budget)
            if not dec["supported"]:
                return {
                    "supported": False,
                    "constraint": constraint,
                    "reason": f"ordinarity undecidable on a deformation: {dec['reason']}",
                }
            if not dec["ordinary"]:
                continue
            if constraint == "reducible-ordinary" and not split_as_characters(cand)["split"]:
                continue
        kept.add(tuple(int(c) for c in delta))
    if not kept:
        return {
            "supported": True,
            "constraint": constraint,
            "count": 0,
            "dimension": None,
            "fp_dimension": None,
            "closed_under_addition": True,
            "ambient_fp_dimension": fp_dim,
        }
    if len(kept) <= 128:
        pairs = itertools.combinations_with_replacement(sorted(kept), 2)
    else:
        rng = random.Random(0)
        pool = sorted(kept)
        pairs = ((rng.choice(pool), rng.choice(pool)) for _ in range(500))
    for x, y in pairs:
        s = tuple((a + b) % p for a, b in zip(x, y))
        if s not in kept:
            raise InvariantViolation("constrained deformations are not closed under addition")
    count = len(kept)
    fp_kept = round(np.log(count) / np.log(p))
    if p**fp_kept != count:
        raise InvariantViolation("constrained deformation count is not a power of p")
    if fp_kept % nf:
        raise InvariantViolation("constrained deformations are not an F-subspace")
    return {
        "supported": True,
        "constraint": constraint,
        "count": count,
        "dimension": fp_kept // nf,
        "fp_dimension": fp_kept,
        "closed_under_addition": True,
        "ambient_fp_dimension": fp_dim,
    }
