"""Finite groups with marked decomposition and inertia subgroups.

Groups are multiplication tables on indices 0..m-1.  The two marked subsets
model the local data at a fixed prime: a decomposition subgroup and an
inertia subgroup inside it.  Characters take unit values in a finite ring
and may be defined only on a marked subgroup.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, InvariantViolation
from .rings import FiniteRing

__all__ = [
    "MarkedGroup",
    "GroupChar",
    "cyclic_group",
    "dihedral_group",
    "symmetric_3",
    "direct_product",
    "trivial_char",
    "cyclic_char",
]


class MarkedGroup:
    def __init__(self, table, identity: int = 0, names=None, dp=None, ip=None, name: str = "G"):
        self.table = np.asarray(table, dtype=np.int64)
        m = self.table.shape[0]
        if self.table.shape != (m, m):
            raise InputError("group table must be square")
        self.identity = int(identity)
        self.name = name
        self.names = list(names) if names is not None else [f"g{i}" for i in range(m)]
        if len(self.names) != m:
            raise InputError("need one name per element")
        self.dp = tuple(sorted(set(dp))) if dp is not None else None
        self.ip = tuple(sorted(set(ip))) if ip is not None else None
        self.check_group()
        self._inv = self._build_inverses()
        if self.dp is not None and not self.is_subgroup(self.dp):
            raise InputError("decomposition marks are not a subgroup")
        if self.ip is not None:
            if self.dp is None or not set(self.ip) <= set(self.dp):
                raise InputError("inertia marks must sit inside the decomposition marks")
            if not self.is_subgroup(self.ip):
                raise InputError("inertia marks are not a subgroup")

    # ---- structure ---------------------------------------------------

    @property
    def m(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.identity
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def order_of(self, a: int) -> int:
        out, o = a, 1
        while out != self.identity:
            out = self.mul(out, a)
            o += 1
            if o > self.m:
                raise InvariantViolation("element order exceeds group order")
        return o

    def elements(self):
        return range(self.m)

    def check_group(self) -> None:
        m = self.m
        t = self.table
        if t.min() < 0 or t.max() >= m:
            raise InvariantViolation("table entries out of range")
        e = self.identity
        if not (np.array_equal(t[e], np.arange(m)) and np.array_equal(t[:, e], np.arange(m))):
            raise InvariantViolation("identity fails")
        # associativity, fully vectorized
        lhs = t[t]  # lhs[a,b,c] = t[t[a,b], c]
        rhs = t[:, t]  # rhs[a,b,c] = t[a, t[b,c]]
        if not np.array_equal(lhs, rhs):
            raise InvariantViolation("associativity fails")
        for a in range(m):
            if len(set(int(x) for x in t[a])) != m:
                raise InvariantViolation("left translation is not a bijection")

    def _build_inverses(self) -> np.ndarray:
        inv = np.full(self.m, -1, dtype=np.int64)
        for a in range(self.m):
            hits = np.nonzero(self.table[a] == self.identity)[0]
            if hits.size != 1:
                raise InvariantViolation("inverse is not unique")
            inv[a] = hits[0]
        return inv

    # ---- subgroups ---------------------------------------------------

    def subgroup_closure(self, gens) -> tuple[int, ...]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = [int(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def is_subgroup(self, subset) -> bool:
        s = set(int(x) for x in subset)
        if self.identity not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)

    def is_normal(self, subset) -> bool:
        s = set(int(x) for x in subset)
        return all(
            self.mul(self.mul(g, h), self.inv(g)) in s for g in range(self.m) for h in s
        )

    def mark(self, dp, ip) -> "MarkedGroup":
        return MarkedGroup(
            self.table, self.identity, self.names, dp=dp, ip=ip, name=self.name
        )

    def __repr__(self):
        marks = ""
        if self.dp is not None:
            marks = f", |Dp|={len(self.dp)}" + (f", |Ip|={len(self.ip)}" if self.ip else "")
        return f"<{self.name}: order {self.m}{marks}>"


# ---- constructors ----------------------------------------------------


def cyclic_group(n: int, name: str | None = None) -> MarkedGroup:
    if n < 1:
        raise InputError("cyclic group order must be positive")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    names = ["e"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)]
    return MarkedGroup(table, 0, names, name=name or f"C{n}")


def dihedral_group(n: int, name: str | None = None) -> MarkedGroup:
    """Order 2n: rotations r^i and reflections r^i s, with s r = r^-1 s."""
    if n < 1:
        raise InputError("dihedral parameter must be positive")
    m = 2 * n

    def idx(i, j):
        return i % n + n * (j % 2)

    table = np.zeros((m, m), dtype=np.int64)
    for i1 in range(n):
        for j1 in range(2):
            for i2 in range(n):
                for j2 in range(2):
                    i3 = (i1 - i2) % n if j1 else (i1 + i2) % n
                    table[idx(i1, j1), idx(i2, j2)] = idx(i3, j1 + j2)
    names = [("e" if i == 0 else f"r^{i}" if i > 1 else "r") for i in range(n)]
    names += [("s" if i == 0 else f"r^{i}s" if i > 1 else "rs") for i in range(n)]
    return MarkedGroup(table, 0, names, name=name or f"D{n}")


def symmetric_3() -> MarkedGroup:
    g = dihedral_group(3, name="S3")
    return g


def direct_product(a: MarkedGroup, b: MarkedGroup, name: str | None = None) -> MarkedGroup:
    ma, mb = a.m, b.m
    table = np.zeros((ma * mb, ma * mb), dtype=np.int64)
    for x1 in range(ma):
        for y1 in range(mb):
            for x2 in range(ma):
                for y2 in range(mb):
                    table[x1 * mb + y1, x2 * mb + y2] = a.mul(x1, x2) * mb + b.mul(y1, y2)
    names = [f"({a.names[x]},{b.names[y]})" for x in range(ma) for y in range(mb)]
    return MarkedGroup(
        table, a.identity * mb + b.identity, names, name=name or f"{a.name}x{b.name}"
    )


# ---- characters ------------------------------------------------------


class GroupChar:
    """Unit-valued multiplicative character, possibly only on a marked subgroup."""

    def __init__(self, group: MarkedGroup, ring: FiniteRing, values: dict, name: str = "chi"):
        self.group = group
        self.ring = ring
        self.name = name
        self.values = {int(g): np.asarray(v, dtype=np.int64) % ring.char for g, v in values.items()}
        self.domain = tuple(sorted(self.values))

    def __call__(self, g: int) -> np.ndarray:
        if g not in self.values:
            raise InputError(f"character {self.name} is undefined at element {g}")
        return self.values[g]

    def inv_value(self, g: int) -> np.ndarray:
        return self.ring.inv(self(g))

    def check(self) -> None:
        grp, r = self.group, self.ring
        if not grp.is_subgroup(self.domain):
            raise InvariantViolation("character domain is not a subgroup")
        if not np.array_equal(self(grp.identity), r.one):
            raise InvariantViolation("character is not 1 at the identity")
        for a in self.domain:
            if not r.is_unit(self.values[a]):
                raise InvariantViolation(f"character value at {a} is not a unit")
            for b in self.domain:
                lhs = self(grp.mul(a, b))
                rhs = r.mul(self(a), self(b))
                if not np.array_equal(lhs, rhs):
                    raise InvariantViolation(f"character fails at ({a},{b})")

    def restrict(self, subset) -> "GroupChar":
        subset = set(int(x) for x in subset)
        if not subset <= set(self.domain):
            raise InputError("restriction target exceeds the domain")
        return GroupChar(
            self.group, self.ring, {g: self.values[g] for g in subset}, name=self.name
        )

    def __repr__(self):
        return f"<{self.name}: {len(self.domain)} of {self.group.m} elements, values in {self.ring.name}>"


def trivial_char(group: MarkedGroup, ring: FiniteRing, domain=None, name: str = "1") -> GroupChar:
    dom = domain if domain is not None else range(group.m)
    return GroupChar(group, ring, {g: ring.one.copy() for g in dom}, name=name)


def cyclic_char(
    group: MarkedGroup, ring: FiniteRing, gen: int, value, name: str = "chi"
) -> GroupChar:
    """Character on the cyclic subgroup generated by `gen`, sending gen to `value`."""
    value = np.asarray(value, dtype=np.int64) % ring.char
    order = group.order_of(gen)
    if not np.array_equal(ring.pow_el(value, order), ring.one):
        raise InputError("value order does not divide the generator order")
    values = {}
    g, v = group.identity, ring.one.copy()
    for _ in range(order):
        values[g] = v.copy()
        g = group.mul(g, gen)
        v = ring.mul(v, value)
    chi = GroupChar(group, ring, values, name=name)
    chi.check()
    return chi
