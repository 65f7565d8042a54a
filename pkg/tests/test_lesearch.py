"""Tests for the orbit-constrained search."""

import random

import pytest

from qapn.boolfun import algebraic_degree, is_apn
from qapn.classes import canonical_classes, class_of_pair, exclusion_reason
from qapn.equiv import fingerprint
from qapn.field import Field, multiplication_matrix
from qapn.gf2 import BitMatrix, fixed_space, matrix_order
from qapn.lesearch import (
    OrbitPlan,
    build_orbit_plan,
    commuting_set,
    deterministic_search,
    le_search,
    load_seed_library,
    orbit_value_candidates,
    quadratic_solution_space,
    search_class,
    seed_fixed_subspace,
    _expand,
    _pop_orbit,
    _prepare,
    _push_orbit,
)
from qapn.search import SearchState, SearchTimeout

from test_search import check_state


def admissible(n):
    return [c for c in canonical_classes(n) if exclusion_reason(c) is None]


def pick(n, index):
    return next(c for c in canonical_classes(n) if c.index == index)


def constraint_holds(table, cls):
    atab = cls.A.apply_table()
    btab = cls.B.apply_table()
    return all(table[atab[x]] == btab[table[x]] for x in range(len(table)))


# --- orbit plans -----------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_orbit_plan_partitions_the_space(n):
    for cls in admissible(n):
        plan = build_orbit_plan(cls)
        seen = sorted(x for orb in plan.orbits for x in orb)
        assert seen == list(range(1 << n))
        ord_a = matrix_order(cls.A)
        atab = cls.A.apply_table()
        for orb in plan.orbits:
            assert orb[0] == min(orb)
            assert ord_a % len(orb) == 0
            for i, x in enumerate(orb[:-1]):
                assert atab[x] == orb[i + 1]
            assert atab[orb[-1]] == orb[0]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_position_order_matches_fixed_space_shape(n):
    for cls in admissible(n):
        plan = build_orbit_plan(cls)
        sa = 1 << plan.fixA_basis.dim
        sb = 1 << plan.fixB_basis.dim
        moving = [o[0] for o in plan.orbits if len(o) > 1]
        fixed = [o[0] for o in plan.orbits if len(o) == 1 and o[0] != 0]
        if sa == sb:
            assert plan.seed_dim == plan.fixA_basis.dim
            assert list(plan.position_order) == moving
            assert plan.forced == ()
        elif sa == 2:
            # the nonzero fixed point of A is pinned to zero up front
            assert plan.forced == ((fixed[0], 0),)
            assert list(plan.position_order) == moving
        elif 2 < sa < sb:
            assert list(plan.position_order) == moving + fixed
            assert plan.seed_dim is None
        else:
            assert list(plan.position_order) == sorted(moving + fixed)
        # representatives cover exactly the non-forced, non-seeded orbits
        covered = set(plan.position_order) | {0} | {x for x, _ in plan.forced}
        if plan.seed_dim:
            covered |= set(plan.fixA_basis.vectors())
        assert covered == {o[0] for o in plan.orbits}


def test_forced_case_appears_and_pins_the_fixed_point():
    hits = 0
    for n in (5, 6, 7):
        for cls in admissible(n):
            fa = fixed_space(cls.A)
            if fa.dim == 1 and fixed_space(cls.B).dim > 1:
                plan = build_orbit_plan(cls)
                (fx,) = [v for v in fa.vectors() if v]
                assert plan.forced == ((fx, 0),)
                hits += 1
        if hits:
            return
    pytest.fail("no class with |Fix A| = 2 < |Fix B| found")


def test_multiplicative_order3_orbit_count():
    spec = Field(8)
    elt = spec.pow(spec.generator, 85)
    assert spec.order(elt) == 3
    a = multiplication_matrix(spec, elt)
    cls = class_of_pair(canonical_classes(8), a, a)
    plan = build_orbit_plan(cls)
    sizes = sorted(len(o) for o in plan.orbits)
    assert len(plan.orbits) == 86
    assert sizes == [1] + [3] * 85


def test_inadmissible_class_is_rejected():
    cls = pick(4, 2)
    assert exclusion_reason(cls) is not None
    with pytest.raises(ValueError, match="not admissible"):
        build_orbit_plan(cls)


def test_orbit_value_candidates_brute_force():
    cls = pick(4, 5)
    btab = cls.B.apply_table()
    for length in (1, 3):
        got = orbit_value_candidates(cls.B, length)
        want = []
        for y in range(16):
            z = y
            for _ in range(length):
                z = btab[z]
            if z == y:
                want.append(y)
        assert got == want


# --- the quadratic solution space ------------------------------------------


def all_quadratic_members(cls):
    """Brute-force {F : deg <= 2, F(0) = 0, F o A = B o F} for tiny n."""
    n = cls.n
    size = 1 << n
    atab = cls.A.apply_table()
    btab = cls.B.apply_table()
    monos = [u for u in range(1, size) if u.bit_count() <= 2]
    out = []
    for pickv in range(1 << (len(monos) * n)):
        coeffs = [(pickv >> (n * i)) & (size - 1) for i in range(len(monos))]
        tab = [0] * size
        for c, u in zip(coeffs, monos):
            if c:
                for x in range(size):
                    if (x & u) == u:
                        tab[x] ^= c
        if all(tab[atab[x]] == btab[tab[x]] for x in range(size)):
            out.append(tuple(tab))
    return set(out)


@pytest.mark.parametrize("n", [2])
def test_solution_space_is_exact_on_two_bits(n):
    for cls in admissible(n):
        basis = quadratic_solution_space(cls)
        spanned = {tuple([0] * (1 << n))}
        for w in basis:
            spanned |= {tuple(a ^ b for a, b in zip(s, w)) for s in spanned}
        assert len(spanned) == 1 << len(basis)
        assert spanned == all_quadratic_members(cls)


@pytest.mark.parametrize("n,index", [(4, 5), (4, 8), (4, 12)])
def test_solution_space_members_satisfy_the_defining_conditions(n, index):
    cls = pick(n, index)
    basis = quadratic_solution_space(cls)
    rng = random.Random(7)
    for _ in range(25):
        tab = [0] * (1 << n)
        for w in basis:
            if rng.random() < 0.5:
                tab = [a ^ b for a, b in zip(tab, w)]
        assert tab[0] == 0
        assert algebraic_degree(tab) <= 2
        assert constraint_holds(tab, cls)


def test_candidates_match_conditioned_brute_force_on_two_bits():
    rng = random.Random(3)
    for cls in admissible(2):
        members = all_quadratic_members(cls)
        plan = build_orbit_plan(cls)
        for _ in range(20):
            prep = _prepare(plan, None, rng, False)
            if prep is None:
                continue
            state, affine = prep
            fixed = {x: state.sbox[x] for x in state.assigned}
            live = [m for m in members
                    if all(m[x] == v for x, v in fixed.items())]
            for x in range(4):
                want = sorted({m[x] for m in live})
                if live:
                    assert sorted(affine.candidates(x)) == want


# --- incremental pushes and rollback ---------------------------------------


def test_push_orbit_rollback_is_bit_exact():
    cls = pick(4, 5)
    plan = build_orbit_plan(cls)
    btab = cls.B.apply_table()
    omap = {o[0]: o for o in plan.orbits}
    rng = random.Random(11)
    state = SearchState(4)
    state.sbox[0] = 0
    state.add_point(0)
    check_state(state)
    stack = []
    for _ in range(400):
        if stack and (len(stack) == len(plan.position_order) or rng.random() < 0.4):
            _pop_orbit(state, omap[stack.pop()])
            check_state(state)
            continue
        rep = plan.position_order[len(stack)]
        y = rng.randrange(16)
        before = list(state.sbox)
        if _push_orbit(state, omap[rep], btab, y):
            stack.append(rep)
        else:
            # a failed push must leave no trace at all
            assert list(state.sbox) == before
        check_state(state)


def test_push_orbit_assigns_conjugated_values():
    cls = pick(4, 5)
    plan = build_orbit_plan(cls)
    btab = cls.B.apply_table()
    orbit = next(o for o in plan.orbits if len(o) > 1)
    state = SearchState(4)
    state.sbox[0] = 0
    state.add_point(0)
    for y in range(16):
        if _push_orbit(state, orbit, btab, y):
            val = y
            for x in orbit:
                assert state.sbox[x] == val
                val = btab[val]
            _pop_orbit(state, orbit)


# --- seeding ---------------------------------------------------------------


def test_seed_library_shape_and_verification():
    lib = load_seed_library()
    assert lib.dims == [1, 2, 3, 4, 5, 6]
    assert len(lib.for_dim(6)) == 13
    assert len({fingerprint(t) for t in lib.for_dim(6)}) == 13
    for k in lib.dims:
        for t in lib.for_dim(k):
            assert len(t) == 1 << k
            assert t[0] == 0
            assert is_apn(t)
            assert algebraic_degree(t) <= 2
    with pytest.raises(ValueError, match="dimension 9"):
        lib.for_dim(9)


def test_seeded_search_restricts_to_a_library_function():
    cls = pick(4, 5)
    plan = build_orbit_plan(cls)
    assert plan.seed_dim == 2
    table = le_search(cls, seed=1, total_budget=30)
    pool = load_seed_library().for_dim(2)
    ba = plan.fixA_basis.basis
    bb = plan.fixB_basis.basis
    restrictions = []
    for g in pool:
        restrictions.append(all(
            table[_expand(ba, v)] == _expand(bb, g[v])
            for v in range(1 << plan.seed_dim)))
    assert any(restrictions)


def test_seed_dimension_one_forces_zero():
    cls = next(c for c in admissible(4)
               if fixed_space(c.A).dim == 1 and fixed_space(c.B).dim == 1)
    plan = build_orbit_plan(cls)
    assert plan.seed_dim == 1
    state = SearchState(4)
    state.sbox[0] = 0
    state.add_point(0)
    (g,) = load_seed_library().for_dim(1)
    assert seed_fixed_subspace(state, plan, g) == 1
    (fx,) = [v for v in plan.fixA_basis.vectors() if v]
    assert state.sbox[fx] == 0


def test_seed_fixed_subspace_rejects_bad_input():
    plan = build_orbit_plan(pick(4, 5))
    state = SearchState(4)
    state.sbox[0] = 0
    state.add_point(0)
    with pytest.raises(ValueError, match="entries"):
        seed_fixed_subspace(state, plan, (0, 1))
    with pytest.raises(ValueError, match="map 0 to 0"):
        seed_fixed_subspace(state, plan, (1, 0, 2, 3))


# --- the randomized driver -------------------------------------------------


def test_le_search_output_passes_all_oracles():
    cls = pick(4, 5)
    table = le_search(cls, seed=0, total_budget=30)
    assert table[0] == 0
    assert constraint_holds(table, cls)
    assert is_apn(table)
    assert algebraic_degree(table) <= 2


def test_le_search_is_seed_deterministic():
    cls = pick(4, 5)
    assert le_search(cls, seed=5, total_budget=30) == \
        le_search(cls, seed=5, total_budget=30)


def test_le_search_proves_unseeded_class_empty():
    cls = pick(4, 8)  # fixed-point-free order-3 pair: no quadratic APN exists
    with pytest.raises(SearchTimeout, match="no solution exists"):
        le_search(cls, seed=0, total_budget=30)


def test_le_search_reports_exhausted_seed_pool():
    cls = next(c for c in admissible(7)
               if fixed_space(c.A).dim == 4 and fixed_space(c.B).dim == 4)
    with pytest.raises(SearchTimeout, match="seeded restriction"):
        le_search(cls, seed=0, total_budget=60)


def test_randomize_basis_still_finds_solutions():
    cls = pick(4, 5)
    table = le_search(cls, seed=3, total_budget=30, randomize_basis=True)
    assert constraint_holds(table, cls)
    assert is_apn(table) and algebraic_degree(table) <= 2


# --- deterministic variant and pruning -------------------------------------


def test_commuting_set_contains_qualifying_powers_only():
    cls = pick(4, 5)
    fix = fixed_space(cls.A)
    got = commuting_set(cls.A, fix)
    ident = BitMatrix.identity(4)
    assert ident in got
    assert cls.A in got
    for x in got:
        assert x.is_invertible()
        assert x * cls.A == cls.A * x
        assert all(x.apply(v) == v for v in fix.vectors())


def test_commuting_set_sampling_stays_a_group():
    cls = pick(4, 5)
    fix = fixed_space(cls.A)
    rng = random.Random(2)
    got = commuting_set(cls.A, fix, rng=rng, samples=40)
    members = set(got)
    assert len(members) >= 3
    for x in got:
        for y in got:
            assert x * y in members


def test_deterministic_outputs_are_sound_and_seed_restricted():
    cls = pick(4, 5)
    tables = deterministic_search(cls, prune=False)
    assert tables, "expected solutions for the order-3 seeded class"
    for t in tables:
        assert constraint_holds(t, cls)
        assert is_apn(t)
        assert algebraic_degree(t) <= 2


def test_pruned_deterministic_covers_every_orbit():
    cls = pick(4, 5)
    full = {tuple(t) for t in deterministic_search(cls, prune=False)}
    pruned = {tuple(t) for t in deterministic_search(cls, prune=True)}
    assert pruned <= full
    assert len(full) == 48 and len(pruned) == 16
    ca = [m.apply_table() for m in commuting_set(cls.A, fixed_space(cls.A))]
    cb = [m.apply_table() for m in commuting_set(cls.B, fixed_space(cls.B))]
    for t in full:
        orbit = {tuple(mb[t[ma[x]]] for x in range(16))
                 for ma in ca for mb in cb}
        assert orbit & pruned, "a solution orbit lost its representative"


def test_deterministic_finds_empty_class_quickly():
    assert deterministic_search(pick(4, 8)) == []


def test_deterministic_respects_time_limit():
    cls = pick(4, 5)
    with pytest.raises(SearchTimeout, match="ran long"):
        deterministic_search(cls, time_limit=-1.0)


def test_search_class_triage_paths():
    cls = pick(4, 5)
    full = search_class(cls)
    assert len(full) == 16  # deterministic pass finished under the ceiling
    forced_random = search_class(cls, deterministic_ceiling=-1.0, seed=0,
                                 total_budget=30)
    assert len(forced_random) == 1
    assert constraint_holds(forced_random[0], cls)


# --- the acceptance-critical order-17 classes ------------------------------


def gold_conjugation_case(exponent):
    spec = Field(8)
    alpha = spec.pow(spec.generator, 15)
    assert spec.order(alpha) == 17
    a = multiplication_matrix(spec, alpha)
    b = multiplication_matrix(spec, spec.pow(alpha, exponent))
    cls = class_of_pair(canonical_classes(8), a, b)
    ref = [spec.pow(x, exponent) for x in range(256)]
    return cls, ref


@pytest.mark.parametrize("exponent", [3, 9])
def test_order17_class_matches_the_power_map(exponent):
    cls, ref = gold_conjugation_case(exponent)
    assert len(quadratic_solution_space(cls)) == 16
    table = le_search(cls, seed=0, total_budget=300, restart_budget=300)
    assert constraint_holds(table, cls)
    assert is_apn(table)
    assert algebraic_degree(table) == 2
    assert fingerprint(table) == fingerprint(ref)
