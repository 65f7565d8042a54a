"""Canonical classes of linear self-equivalence pairs.

A linear self-equivalence of F is a pair of invertible matrices (B, A)
with F(Ax) = B F(x) for all x.  Classification reduces to prime order:
either both matrices have the same prime order p, or exactly one is the
identity.  Representatives are kept in rational canonical form, so each
matrix is a block diagonal of companion matrices of a divisibility chain
of divisors of X^p + 1.

Pairs with both members of order p are further identified when a common
power i makes both coordinates similar at once; one representative per
orbit is kept.  Identity-kind pairs are only reduced by similarity of
the non-identity member.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product

from .gf2 import (
    BitMatrix,
    block_diag,
    companion,
    cycle_count,
    fixed_space,
    matrix_order,
    minimal_polynomial,
    poly_degree,
    poly_factor,
    poly_mul,
    rcf,
)

KINDS = ("both-prime-order", "B-identity", "A-identity")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class CanonicalClass:
    index: int
    A: BitMatrix
    B: BitMatrix
    kind: str
    p: int

    @property
    def n(self) -> int:
        return self.A.n


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _mult_order(a: int, p: int) -> int:
    k, acc = 1, a % p
    while acc != 1:
        acc = acc * a % p
        k += 1
    return k


def relevant_primes(n: int) -> list[int]:
    """Primes p for which GL(n, 2) contains an element of order p."""
    out = [2]
    for p in range(3, 1 << n):
        if _is_prime(p) and _mult_order(2, p) <= n:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# order-p representatives as invariant factor chains

@lru_cache(maxsize=None)
def _factor_base(p: int) -> tuple[tuple[int, int], ...]:
    """Irreducible factors of X^p + 1 with multiplicity, ascending."""
    facs = sorted(poly_factor((1 << p) | 1), key=lambda fm: (poly_degree(fm[0]), fm[0]))
    assert facs[0][0] == 0b11  # X + 1 divides X^p + 1
    return tuple(facs)


@lru_cache(maxsize=None)
def _divisors(p: int, cap: int) -> tuple[tuple[tuple[int, ...], int, int], ...]:
    """Nonconstant divisors of X^p + 1 up to degree cap: (expvec, poly, deg)."""
    facs = _factor_base(p)
    out = []

    def grow(idx: int, vec: list[int], poly: int, deg: int) -> None:
        if idx == len(facs):
            if deg >= 1:
                out.append((tuple(vec), poly, deg))
            return
        f, mult = facs[idx]
        d = poly_degree(f)
        q = 1
        for e in range(mult + 1):
            if deg + e * d > cap:
                break
            grow(idx + 1, vec + [e], poly_mul(poly, q), deg + e * d)
            q = poly_mul(q, f)

    grow(0, [], 1, 0)
    return tuple(sorted(out, key=lambda t: (t[2], t[1])))


def _vec_has_order_p(vec: tuple[int, ...], p: int) -> bool:
    # companion order is the lcm over factors; X+1 alone contributes 1,
    # (X+1)^2 contributes 2, any other factor contributes exactly p
    if p == 2:
        return vec[0] == 2
    return any(vec[1:])


@lru_cache(maxsize=None)
def _chains(n: int, p: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Invariant factor chains of total degree n and order exactly p.

    Each chain is a tuple of divisor exponent vectors, ascending, where
    every element divides the next and the last has order p.
    """
    divs = _divisors(p, n)
    by_vec = {vec: (poly, deg) for vec, poly, deg in divs}
    found: set[tuple[tuple[int, ...], ...]] = set()

    def grow(seq: list[tuple[int, ...]], last: tuple[int, ...], rem: int) -> None:
        if rem == 0:
            found.add(tuple(reversed(seq)))
            return
        for vec, _, deg in divs:
            if deg <= rem and all(a <= b for a, b in zip(vec, last)):
                grow(seq + [vec], vec, rem - deg)

    for vec, _, deg in divs:
        if deg <= n and _vec_has_order_p(vec, p):
            grow([vec], vec, n - deg)

    return tuple(sorted(found, key=lambda ch: _chain_key(p, ch)))


def _vec_poly(p: int, vec: tuple[int, ...]) -> int:
    facs = _factor_base(p)
    polys = [reduce(poly_mul, [f] * e, 1) for (f, _), e in zip(facs, vec)]
    return reduce(poly_mul, polys, 1)


def _chain_key(p: int, chain: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, int], ...]:
    out = []
    for vec in chain:
        q = _vec_poly(p, vec)
        out.append((poly_degree(q), q))
    return tuple(out)


def _chain_matrix(p: int, chain: tuple[tuple[int, ...], ...]) -> BitMatrix:
    return block_diag([companion(_vec_poly(p, vec)) for vec in chain])


def prime_order_rcfs(n: int, p: int) -> list[BitMatrix]:
    """All rational canonical forms in GL(n, 2) of order exactly p."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return [_chain_matrix(p, ch) for ch in _chains(n, p)]


# ---------------------------------------------------------------------------
# power maps on chains, without matrix arithmetic

@lru_cache(maxsize=None)
def _power_perm(p: int, i: int) -> tuple[int, ...]:
    """Permutation of the factor base induced by M -> M^i (odd p)."""
    facs = _factor_base(p)
    images = []
    for f, _ in facs:
        g = minimal_polynomial(companion(f) ** i)
        images.append(next(j for j, (h, _) in enumerate(facs) if h == g))
    assert sorted(images) == list(range(len(facs)))
    return tuple(images)


def _map_chain(p: int, chain: tuple[tuple[int, ...], ...], i: int):
    perm = _power_perm(p, i)
    mapped = []
    for vec in chain:
        new = [0] * len(vec)
        for k, e in enumerate(vec):
            new[perm[k]] = e
        mapped.append(tuple(new))
    mapped.sort(key=lambda v: (sum(e * poly_degree(f) for (f, _), e in zip(_factor_base(p), v)),
                               _vec_poly(p, v)))
    return tuple(mapped)


# ---------------------------------------------------------------------------
# class list assembly

@lru_cache(maxsize=None)
def _canonical_classes(n: int) -> tuple[CanonicalClass, ...]:
    if not 2 <= n <= 10:
        raise ValueError(f"dimension {n} out of supported range [2, 10]")
    ident = BitMatrix.identity(n)
    ident_key = ((1, 0b11),) * n
    raw = []
    for p in relevant_primes(n):
        chains = _chains(n, p)
        if not chains:
            continue
        mat = {ch: _chain_matrix(p, ch) for ch in chains}
        key = {ch: _chain_key(p, ch) for ch in chains}
        if p == 2:
            reps = list(product(chains, chains))
        else:
            seen: set = set()
            reps = []
            for a, b in product(chains, chains):
                if (a, b) in seen:
                    continue
                orbit = {(_map_chain(p, a, i), _map_chain(p, b, i)) for i in range(1, p)}
                assert all(x in mat and y in mat for x, y in orbit)
                seen |= orbit
                reps.append(min(orbit, key=lambda ab: (key[ab[0]], key[ab[1]])))
        for a, b in reps:
            raw.append((_KIND_RANK["both-prime-order"], p, key[a], key[b],
                        "both-prime-order", mat[a], mat[b]))
        for ch in chains:
            raw.append((_KIND_RANK["B-identity"], p, key[ch], ident_key,
                        "B-identity", mat[ch], ident))
            raw.append((_KIND_RANK["A-identity"], p, ident_key, key[ch],
                        "A-identity", ident, mat[ch]))
    raw.sort(key=lambda t: t[:4])
    return tuple(
        CanonicalClass(index=i + 1, A=a, B=b, kind=kind, p=p)
        for i, (_, p, _, _, kind, a, b) in enumerate(raw)
    )


def canonical_classes(n: int) -> list[CanonicalClass]:
    """Every canonical self-equivalence class for dimension n, stably indexed."""
    return list(_canonical_classes(n))


# ---------------------------------------------------------------------------
# admissibility

def fix_sizes(c: CanonicalClass) -> tuple[int, int]:
    """(|Fix A|, |Fix B|) as point counts, 0 included."""
    return 1 << fixed_space(c.A).dim, 1 << fixed_space(c.B).dim


def cycle_bound(n: int) -> int:
    """Least cycle count of A compatible with F(Ax) = F(x) for an APN F."""
    return ((1 << n) + 2) // 3 if n % 2 == 0 else ((1 << n) + 1) // 3


def exclusion_reason(c: CanonicalClass) -> str | None:
    """Why no APN function admits this class, or None if not excluded."""
    fix_a, fix_b = fix_sizes(c)
    if fix_b < fix_a and (fix_b, fix_a) not in ((1, 2), (2, 4)):
        return f"fixed-point rule: |Fix B| = {fix_b} < |Fix A| = {fix_a}"
    if c.kind == "B-identity":
        bound = cycle_bound(c.n)
        cyc = cycle_count(c.A)
        if cyc < bound:
            return f"cycle-count rule: {cyc} cycles < bound {bound}"
    return None


def filter_admissible(classes: list[CanonicalClass],
                      max_fix_a: int | None = None) -> list[CanonicalClass]:
    """Classes that survive both exclusion rules.

    max_fix_a additionally drops classes whose A fixes max_fix_a or more
    points; that is a compute policy for large dimensions, not math.
    """
    out = []
    for c in classes:
        if exclusion_reason(c) is not None:
            continue
        if max_fix_a is not None and fix_sizes(c)[0] >= max_fix_a:
            continue
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# lookup

def class_of_pair(classes: list[CanonicalClass], A: BitMatrix, B: BitMatrix) -> CanonicalClass:
    """The canonical class whose orbit contains the pair (B, A).

    Raises LookupError when no listed class matches; ValueError for pairs
    outside the classification (identity pair, mismatched prime orders).
    """
    ident = BitMatrix.identity(A.n)
    ra, rb = rcf(A), rcf(B)
    if ra == ident and rb == ident:
        raise ValueError("the identity pair constrains nothing")
    if rb == ident:
        p = matrix_order(A)
        hits = [c for c in classes if c.kind == "B-identity" and c.p == p and c.A == ra]
    elif ra == ident:
        p = matrix_order(B)
        hits = [c for c in classes if c.kind == "A-identity" and c.p == p and c.B == rb]
    else:
        p = matrix_order(A)
        if matrix_order(B) != p:
            raise ValueError("A and B must share the same order")
        hits = [
            c for c in classes
            if c.kind == "both-prime-order" and c.p == p and any(
                rcf(c.A ** i) == ra and rcf(c.B ** i) == rb for i in range(1, p)
            )
        ]
    if not hits:
        raise LookupError("no canonical class matches the pair")
    assert len(hits) == 1, "classes are not a partition"
    return hits[0]
