"""Exact linear algebra over Z/p^k.

Everything downstream (ideal arithmetic, quotients, kernels of ring maps,
module lengths) reduces to row-span computations here.  The canonical form
for a row span is the Howell form: unlike the reduced echelon form it is a
complete invariant of the span over a ring with zero divisors, because the
annihilator closure rows are part of the data.

Rows are numpy int64 vectors with entries in [0, p^k).  All operations are
exact; no floating point anywhere.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "check_modulus",
    "howell_form",
    "howell_with_transform",
    "kernel",
    "kernel_mod",
    "solve_left",
    "span_contains",
    "span_equal",
    "span_log_size",
    "span_sum",
    "reduce_by_howell",
    "pivot_info",
]


def check_modulus(p: int, k: int) -> None:
    """Reject moduli outside the supported range (odd prime power, 2 a unit)."""
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        raise ValueError(f"base prime must be an odd prime, got {p}")
    # small trial division is enough at desk scale
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"base prime must be prime, got {p}")
        d += 2
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"exponent must be a positive integer, got {k}")


def _val(x: int, p: int, k: int) -> int:
    """p-adic valuation of x in Z/p^k; the zero class gets valuation k."""
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim == 1:
        if a.shape[0] == 0:
            # empty row list; a true (r, 0) matrix stays 2-D and is kept
            return np.zeros((0, ncols or 0), dtype=np.int64)
        a = a.reshape(1, -1)
    return a


def _engine(mat: np.ndarray, p: int, k: int, with_transform: bool):
    m = p**k
    a = _as_matrix(mat) % m
    nr, nc = a.shape
    u = np.eye(nr, dtype=np.int64) % m if with_transform else None
    done = 0
    for c in range(nc):
        col = a[done:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        vals = [_val(int(col[j]), p, k) for j in nz]
        j = int(nz[int(np.argmin(vals))]) + done
        v = _val(int(a[j, c]), p, k)
        if j != done:
            a[[done, j]] = a[[j, done]]
            if with_transform:
                u[[done, j]] = u[[j, done]]
        piv = p**v
        unit = int(a[done, c]) // piv
        if unit != 1:
            ui = pow(unit, -1, m)
            a[done] = (a[done] * ui) % m
            if with_transform:
                u[done] = (u[done] * ui) % m
        below = a[done + 1 :, c]
        if below.size and below.any():
            mult = below // piv  # exact: the pivot has minimal valuation
            a[done + 1 :] = (a[done + 1 :] - mult[:, None] * a[done]) % m
            if with_transform:
                u[done + 1 :] = (u[done + 1 :] - mult[:, None] * u[done]) % m
        if done > 0:
            mult = a[:done, c] // piv
            if mult.any():
                a[:done] = (a[:done] - mult[:, None] * a[done]) % m
                if with_transform:
                    u[:done] = (u[:done] - mult[:, None] * u[done]) % m
        if v > 0:
            ann = (a[done] * p ** (k - v)) % m
            if ann.any() or with_transform:
                # a vanishing annihilator row still carries a kernel relation
                a = np.vstack([a, ann[None, :]])
                if with_transform:
                    u = np.vstack([u, (u[done] * p ** (k - v))[None, :] % m])
        done += 1
    return a, u, done


def howell_form(rows, p: int, k: int, ncols: int | None = None) -> np.ndarray:
    """Canonical basis of the row span of `rows` over Z/p^k.

    Two row sets span the same submodule iff their Howell forms are equal
    elementwise.  Pivot entries are powers of p at strictly increasing
    columns; entries above a pivot p^v are reduced mod p^v.
    """
    a = _as_matrix(rows, ncols)
    if a.shape[0] == 0:
        return a
    h, _, done = _engine(a, p, k, with_transform=False)
    return h[:done].copy()


def howell_with_transform(rows, p: int, k: int):
    """Return (H, U, K): H the Howell form, U with U @ rows = H row-block,
    K a spanning set for {x : x @ rows = 0}."""
    a = _as_matrix(rows)
    h, u, done = _engine(a, p, k, with_transform=True)
    kern = u[done:] if u is not None else np.zeros((0, a.shape[0]), dtype=np.int64)
    # rows of h beyond `done` are zero by construction
    return h[:done].copy(), u[:done].copy(), howell_form(kern, p, k, ncols=a.shape[0])


def kernel(mat, p: int, k: int) -> np.ndarray:
    """Howell basis of the left kernel {x : x @ mat == 0 over Z/p^k}."""
    a = _as_matrix(mat)
    if a.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    _, _, kern = howell_with_transform(a, p, k)
    return kern


def kernel_mod(mat, p: int, k_src: int, k_dst: int) -> np.ndarray:
    """Left kernel of a map (Z/p^k_src)^r -> (Z/p^k_dst)^c given by `mat`.

    Requires k_dst <= k_src; the congruence x@mat = 0 mod p^k_dst is lifted
    to modulus p^k_src by scaling the matrix.
    """
    if k_dst > k_src:
        raise ValueError("target modulus must divide source modulus")
    a = _as_matrix(mat)
    scaled = (a * p ** (k_src - k_dst)) % (p**k_src)
    return kernel(scaled, p, k_src)


def pivot_info(h: np.ndarray, p: int, k: int) -> dict[int, int]:
    """Map pivot column -> valuation of its pivot, for a Howell-form matrix."""
    info: dict[int, int] = {}
    for row in h:
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        info[c] = _val(int(row[c]), p, k)
    return info


def reduce_by_howell(h: np.ndarray, vec, p: int, k: int):
    """Reduce `vec` against a Howell-form matrix.

    Returns (residual, coeffs) with vec = coeffs @ h + residual mod p^k.
    The residual is the canonical coset representative of vec + rowspan(h).
    """
    m = p**k
    v = np.asarray(vec, dtype=np.int64).copy() % m
    coeffs = np.zeros(h.shape[0], dtype=np.int64)
    for i, row in enumerate(h):
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        piv = int(row[c])
        q = int(v[c]) // piv
        if q:
            v = (v - q * row) % m
            coeffs[i] = q % m
    return v, coeffs


def span_contains(h: np.ndarray, vec, p: int, k: int) -> bool:
    res, _ = reduce_by_howell(h, vec, p, k)
    return not res.any()


def span_equal(h1: np.ndarray, h2: np.ndarray) -> bool:
    return h1.shape == h2.shape and bool(np.array_equal(h1, h2))


def span_sum(h1: np.ndarray, h2: np.ndarray, p: int, k: int) -> np.ndarray:
    if h1.shape[0] == 0:
        return h2
    if h2.shape[0] == 0:
        return h1
    return howell_form(np.vstack([h1, h2]), p, k)


def span_log_size(h: np.ndarray, p: int, k: int) -> int:
    """log_p of the number of elements in the row span (h in Howell form)."""
    total = 0
    for _, v in pivot_info(h, p, k).items():
        total += k - v
    return total


def solve_left(mat, rhs, p: int, k: int):
    """Solve x @ mat = rhs over Z/p^k; return one solution or None."""
    a = _as_matrix(mat)
    if a.shape[0] == 0:
        r = np.asarray(rhs, dtype=np.int64) % (p**k)
        return np.zeros(0, dtype=np.int64) if not r.any() else None
    h, u, _ = howell_with_transform(a, p, k)
    res, coeffs = reduce_by_howell(h, rhs, p, k)
    if res.any():
        return None
    return (coeffs @ u) % (p**k)
