import random

import pytest
from hypothesis import given, settings, strategies as st

from qapn.gf2 import (
    BitMatrix,
    Subspace,
    block_diag,
    companion,
    cycle_count,
    fixed_space,
    invariant_factors,
    matrix_order,
    minimal_polynomial,
    poly_degree,
    poly_divmod,
    poly_factor,
    poly_gcd,
    poly_is_irreducible,
    poly_lcm,
    poly_mod,
    poly_mul,
    poly_powmod,
    rcf,
)

polys = st.integers(min_value=0, max_value=(1 << 12) - 1)
nonzero_polys = st.integers(min_value=1, max_value=(1 << 12) - 1)


def poly_at_matrix(p: int, m: BitMatrix) -> BitMatrix:
    acc = BitMatrix.zero(m.n)
    power = BitMatrix.identity(m.n)
    while p:
        if p & 1:
            acc = acc ^ power
        power = power * m
        p >>= 1
    return acc


def random_invertible(n: int, rng: random.Random) -> BitMatrix:
    while True:
        m = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
        if m.is_invertible():
            return m


# --- polynomial arithmetic -------------------------------------------------

@given(polys, polys, polys)
def test_poly_mul_ring_laws(a, b, c):
    assert poly_mul(a, b) == poly_mul(b, a)
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))
    assert poly_mul(a, b ^ c) == poly_mul(a, b) ^ poly_mul(a, c)


@given(polys, nonzero_polys)
def test_poly_divmod_identity(a, b):
    q, r = poly_divmod(a, b)
    assert poly_degree(r) < poly_degree(b)
    assert poly_mul(q, b) ^ r == a


@given(nonzero_polys, nonzero_polys)
def test_poly_gcd_divides(a, b):
    g = poly_gcd(a, b)
    assert poly_mod(a, g) == 0
    assert poly_mod(b, g) == 0
    lcm = poly_lcm(a, b)
    assert poly_mod(lcm, a) == 0
    assert poly_mod(lcm, b) == 0


def naive_irreducible(p: int) -> bool:
    d = poly_degree(p)
    if d < 1:
        return False
    for f in range(2, 1 << (d // 2 + 1)):
        if poly_degree(f) >= 1 and poly_mod(p, f) == 0 and poly_degree(f) < d:
            return False
    return True


def test_irreducibility_against_trial_division():
    for p in range(2, 1 << 9):
        assert poly_is_irreducible(p) == naive_irreducible(p), bin(p)


@given(st.integers(min_value=2, max_value=(1 << 10) - 1))
def test_factor_reconstructs(p):
    factors = poly_factor(p)
    acc = 1
    for f, mult in factors:
        assert poly_is_irreducible(f)
        for _ in range(mult):
            acc = poly_mul(acc, f)
    assert acc == p


def test_factor_cyclic_examples():
    # X^7 + 1 = (X+1)(X^3+X+1)(X^3+X^2+1)
    assert poly_factor(0b10000001) == [(0b11, 1), (0b1011, 1), (0b1101, 1)]
    # X^2 + 1 = (X+1)^2
    assert poly_factor(0b101) == [(0b11, 2)]


@given(nonzero_polys, st.integers(min_value=0, max_value=64), st.integers(min_value=2, max_value=255))
def test_powmod_matches_repeated_mul(base, e, mod):
    acc = 1 % mod if mod != 1 else 0
    b = poly_mod(base, mod)
    for _ in range(e):
        acc = poly_mod(poly_mul(acc, b), mod)
    assert poly_powmod(base, e, mod) == acc


# --- matrices --------------------------------------------------------------

@given(st.integers(min_value=0), st.integers(min_value=2, max_value=8))
@settings(max_examples=60)
def test_matmul_apply_consistency(seed, n):
    rng = random.Random(seed)
    a = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
    b = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
    for _ in range(8):
        x = rng.getrandbits(n)
        assert (a * b).apply(x) == a.apply(b.apply(x))


@given(st.integers(min_value=0), st.integers(min_value=2, max_value=8))
@settings(max_examples=60)
def test_inverse_and_transpose(seed, n):
    rng = random.Random(seed)
    m = random_invertible(n, rng)
    ident = BitMatrix.identity(n)
    assert m * m.inverse() == ident
    assert m.inverse() * m == ident
    assert m.transpose().transpose() == m
    assert BitMatrix.from_cols(n, [m.col(j) for j in range(n)]) == m


@given(st.integers(min_value=0), st.integers(min_value=2, max_value=8))
@settings(max_examples=60)
def test_kernel_rank(seed, n):
    rng = random.Random(seed)
    m = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
    basis = m.kernel()
    assert len(basis) == n - m.rank()
    for v in basis:
        assert m.apply(v) == 0
    sub = Subspace(n, tuple(basis))
    for v in sub.vectors():
        assert m.apply(v) == 0


def test_matrix_text_round_trip():
    m = companion(0b1011)
    assert BitMatrix.from_text(m.to_text()) == m
    with pytest.raises(ValueError):
        BitMatrix.from_text("01\n1")


# --- canonical forms -------------------------------------------------------

def test_companion_layout():
    # q = X^2 + X + 1 -> [[0,1],[1,1]] with leftmost char = coordinate 1
    m = companion(0b111)
    assert m.to_text() == "01\n11"
    assert matrix_order(m) == 3
    # q = X + 1 -> 1x1 identity
    assert companion(0b11) == BitMatrix.identity(1)
    with pytest.raises(ValueError):
        companion(1)


def test_companion_minimal_polynomial():
    for q in (0b111, 0b1011, 0b1101, 0b10011, 0b101, 0b10000001):
        assert minimal_polynomial(companion(q)) == q


def test_minimal_polynomial_block_example():
    # diag(I_2, companion(X^3+1)): annihilated by X^3+1 and nothing smaller
    m = block_diag([BitMatrix.identity(2), companion(0b1001)])
    p = minimal_polynomial(m)
    assert p == 0b1001
    assert poly_at_matrix(p, m) == BitMatrix.zero(5)
    for cand in range(2, 1 << 3):
        if cand != p:
            assert poly_at_matrix(cand, m) != BitMatrix.zero(5)


@given(st.integers(min_value=0), st.integers(min_value=2, max_value=7))
@settings(max_examples=40)
def test_minimal_polynomial_annihilates(seed, n):
    rng = random.Random(seed)
    m = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
    p = minimal_polynomial(m)
    assert poly_at_matrix(p, m) == BitMatrix.zero(n)
    # minimality: no proper divisor annihilates
    for f, _ in poly_factor(p):
        q, r = poly_divmod(p, f)
        assert r == 0
        assert poly_at_matrix(q, m) != BitMatrix.zero(n)


def test_invariant_factors_examples():
    m = block_diag([BitMatrix.identity(5), companion(0b1001)])
    assert invariant_factors(m) == [0b11] * 5 + [0b1001]
    assert rcf(m) == m  # already canonical
    ident = BitMatrix.identity(4)
    assert invariant_factors(ident) == [0b11] * 4


@given(st.integers(min_value=0), st.integers(min_value=2, max_value=8))
@settings(max_examples=40, deadline=None)
def test_rcf_conjugation_invariant(seed, n):
    rng = random.Random(seed)
    m = random_invertible(n, rng)
    p = random_invertible(n, rng)
    conj = p.inverse() * m * p
    assert rcf(conj) == rcf(m)
    assert rcf(rcf(m)) == rcf(m)
    # largest invariant factor is the minimal polynomial
    assert invariant_factors(m)[-1] == minimal_polynomial(m)


def test_fixed_space_example():
    # diag(I_5, Comp(X^3+1)) on n=8: the block contributes one fixed dimension
    m = block_diag([BitMatrix.identity(5), companion(0b1001)])
    fs = fixed_space(m)
    assert fs.dim == 6
    for v in fs.vectors():
        assert m.apply(v) == v


def test_cycle_count_examples():
    assert cycle_count(BitMatrix.identity(4)) == 16
    # Comp(X^2+X+1) has order 3: the single fixed point 0 plus one 3-cycle
    assert cycle_count(companion(0b111)) == 2


@given(st.integers(min_value=0), st.integers(min_value=2, max_value=7))
@settings(max_examples=30, deadline=None)
def test_cycle_count_matches_fixed_points(seed, n):
    rng = random.Random(seed)
    m = random_invertible(n, rng)
    table = m.apply_table()
    # independent recount: tally orbit sizes via index-chasing on a dict
    remaining = set(range(1 << n))
    cycles = 0
    while remaining:
        x = min(remaining)
        cycles += 1
        while x in remaining:
            remaining.discard(x)
            x = table[x]
    assert cycle_count(m) == cycles
    assert sum(1 for x in range(1 << n) if table[x] == x) == 1 << fixed_space(m).dim


def test_matrix_order_cap():
    with pytest.raises(ValueError):
        matrix_order(BitMatrix.zero(3))
    m = companion(0b1011)  # X^3+X+1, order 7
    assert matrix_order(m) == 7
    with pytest.raises(RuntimeError):
        matrix_order(m, cap=3)
