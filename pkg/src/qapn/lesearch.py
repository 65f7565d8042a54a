"""Orbit-constrained search for quadratic APN functions with F o A = B o F.

Guessing F at one orbit representative x determines F on the whole A-orbit
via F(A^i x) = B^i y, so the tree branches only at representatives.  Fixed
points of A are handled separately: when A and B fix subspaces of equal
size 2^k, the restriction of F to Fix_A must itself be (isomorphic to) a
k-bit quadratic APN function, so it is seeded from a library of known
representatives instead of guessed freely.

Candidate values are filtered hard: every completion is a quadratic map
satisfying the conjugation identity, and those maps form a linear space
that can be computed up front (`quadratic_solution_space`).  A value y is
attempted at a representative only when some member of that space agrees
with the whole partial table and takes value y there.  This subsumes the
orbit-closure condition B^ord(y) = y and keeps the tree small enough that
an exhausted descent is a proof that the current seed admits no solution.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .boolfun import algebraic_degree, is_apn, parse_lut_text
from .classes import CanonicalClass, exclusion_reason
from .gf2 import BitMatrix, Subspace, fixed_space
from .search import SearchState, SearchTimeout, restart_budget_default

log = logging.getLogger(__name__)

# Seed functions for small fixed subspaces.  One bit leaves only the zero
# map (the nonzero fixed point must go to 0); two and three bits each have
# a single class, represented by the cube map over the matching field.
_ANALYTIC_SEEDS: dict[int, tuple[tuple[int, ...], ...]] = {
    1: ((0, 0),),
    2: ((0, 1, 1, 1),),
    3: ((0, 1, 3, 4, 5, 6, 7, 2),),
}


@dataclass(frozen=True, eq=False)
class SeedLibrary:
    """Known k-bit quadratic APN representatives, k = 1..6."""

    tables: Mapping[int, tuple[tuple[int, ...], ...]]

    @property
    def dims(self) -> list[int]:
        return sorted(self.tables)

    def for_dim(self, k: int) -> tuple[tuple[int, ...], ...]:
        if k not in self.tables:
            raise ValueError(f"no seed functions for dimension {k}")
        return self.tables[k]


def _verify_seed(table: Sequence[int], origin: str) -> None:
    if table[0] != 0:
        raise ValueError(f"{origin}: seed function does not map 0 to 0")
    if not is_apn(table):
        raise ValueError(f"{origin}: seed function is not APN")
    if algebraic_degree(table) > 2:
        raise ValueError(f"{origin}: seed function has degree > 2")


@lru_cache(maxsize=None)
def load_seed_library() -> SeedLibrary:
    """Analytic seeds for k <= 3 plus packaged .lut files for larger k."""
    tables: dict[int, list[tuple[int, ...]]] = {
        k: list(v) for k, v in _ANALYTIC_SEEDS.items()
    }
    root = resources.files("qapn").joinpath("data").joinpath("seeds")
    if root.is_dir():
        for entry in sorted(root.iterdir(), key=lambda e: e.name):
            if not entry.name.endswith(".lut"):
                continue
            f = parse_lut_text(entry.read_text())
            tables.setdefault(f.n, []).append(f.lut)
    out = {k: tuple(v) for k, v in tables.items()}
    for k, group in out.items():
        for i, t in enumerate(group):
            _verify_seed(t, f"seed k={k} #{i}")
    if 6 in out and len(out[6]) != 13:
        raise ValueError(f"expected 13 six-bit seed functions, found {len(out[6])}")
    return SeedLibrary(out)


# --- orbit plans -----------------------------------------------------------


@dataclass(frozen=True)
class OrbitPlan:
    """Precomputed orbit structure for one automorphism class."""

    cls: CanonicalClass
    orbits: tuple[tuple[int, ...], ...]      # each listed from its smallest element
    position_order: tuple[int, ...]          # representatives, in guess order
    forced: tuple[tuple[int, int], ...]      # assignments applied before the recursion
    fixA_basis: Subspace
    fixB_basis: Subspace
    seed_dim: int | None                     # k when Fix_A is filled from a k-bit seed

    @property
    def n(self) -> int:
        return self.cls.n


def build_orbit_plan(cls: CanonicalClass) -> OrbitPlan:
    reason = exclusion_reason(cls)
    if reason is not None:
        raise ValueError(f"class {cls.index} is not admissible ({reason})")
    size = 1 << cls.n
    step = cls.A.apply_table()
    seen = bytearray(size)
    orbits: list[tuple[int, ...]] = []
    for x in range(size):
        if seen[x]:
            continue
        orb = [x]
        seen[x] = 1
        y = step[x]
        while y != x:
            seen[y] = 1
            orb.append(y)
            y = step[y]
        orbits.append(tuple(orb))

    fa = fixed_space(cls.A)
    fb = fixed_space(cls.B)
    sa, sb = 1 << fa.dim, 1 << fb.dim
    moving = [o[0] for o in orbits if len(o) > 1]
    fixed = [o[0] for o in orbits if len(o) == 1 and o[0] != 0]
    forced: tuple[tuple[int, int], ...] = ()
    seed_dim: int | None = None
    if sa == sb:
        # equal fixed spaces: Fix_A is assigned by the seeding step
        seed_dim = fa.dim
        order = moving
    elif sa == 2:
        # Fix_A = {0, x} smaller than Fix_B: F(x) = 0 is forced up front
        forced = ((fixed[0], 0),)
        order = moving
    elif 2 < sa < sb:
        # large cycles first, fixed points of A last
        order = moving + fixed
    else:
        order = sorted(moving + fixed)
    return OrbitPlan(cls, tuple(orbits), tuple(order), forced, fa, fb, seed_dim)


def orbit_value_candidates(b: BitMatrix, length: int) -> list[int]:
    """Values y with B^length y = y: necessary for closing an orbit of that length."""
    return sorted(fixed_space(b ** length).vectors())


# --- the linear space of quadratic solutions -------------------------------


@lru_cache(maxsize=32)
def quadratic_solution_space(cls: CanonicalClass) -> tuple[tuple[int, ...], ...]:
    """Basis tables of {F : deg <= 2, F(0) = 0, F o A = B o F}.

    The defining conditions are linear in F, so the set is the kernel of
    F -> F o A + B o F restricted to the monomial span x^u e_k, wt(u) <= 2.
    """
    n = cls.n
    size = 1 << n
    atab = cls.A.apply_table()
    btab = cls.B.apply_table()
    monomials: list[tuple[int, int]] = []   # (u, output bit)
    residues: list[int] = []                # packed table of m o A + B o m
    for u in range(1, size):
        if u.bit_count() > 2:
            continue
        mono = [(x & u) == u for x in range(size)]
        for k in range(n):
            bit = 1 << k
            bbit = btab[bit]
            packed = 0
            for x in range(size):
                v = (bit if mono[atab[x]] else 0) ^ (bbit if mono[x] else 0)
                packed |= v << (n * x)
            monomials.append((u, bit))
            residues.append(packed)
    # kernel of the residue map, tracking which monomials combine to zero
    pivots: dict[int, tuple[int, int]] = {}
    combos: list[int] = []
    for j, v in enumerate(residues):
        comb = 1 << j
        while v:
            b = v.bit_length()
            got = pivots.get(b)
            if got is None:
                pivots[b] = (v, comb)
                break
            v ^= got[0]
            comb ^= got[1]
        else:
            combos.append(comb)
    basis = []
    for comb in combos:
        tab = [0] * size
        j = 0
        while comb:
            if comb & 1:
                u, bit = monomials[j]
                for x in range(size):
                    if (x & u) == u:
                        tab[x] ^= bit
            comb >>= 1
            j += 1
        if not all(tab[atab[x]] == btab[tab[x]] for x in range(size)):
            raise AssertionError("solution-space member breaks the constraint")
        basis.append(tuple(tab))
    return tuple(basis)


class _AffineSpace:
    """The quadratic solutions compatible with the current partial table.

    Kept as offset + basis; conditioning on F(x) = y shrinks the basis to
    directions vanishing at x and moves the offset.  Snapshots are O(1)
    because tables are immutable and only rebound.
    """

    __slots__ = ("v0", "basis", "_stack")

    def __init__(self, size: int, basis: Sequence[tuple[int, ...]]):
        self.v0: Sequence[int] = tuple([0] * size)
        self.basis = list(basis)
        self._stack: list[tuple[Sequence[int], list[tuple[int, ...]]]] = []

    def push(self) -> None:
        self._stack.append((self.v0, list(self.basis)))

    def pop(self) -> None:
        self.v0, self.basis = self._stack.pop()

    def candidates(self, x: int) -> list[int]:
        """All values a compatible solution can take at position x."""
        piv: dict[int, int] = {}
        for w in self.basis:
            v = w[x]
            while v:
                b = v.bit_length()
                if b in piv:
                    v ^= piv[b]
                else:
                    piv[b] = v
                    break
        span = [0]
        for v in piv.values():
            span += [s ^ v for s in span]
        base = self.v0[x]
        return [base ^ s for s in span]

    def condition(self, x: int, y: int) -> bool:
        """Restrict to members with value y at x; False iff none exists."""
        pivots: dict[int, tuple[int, tuple[int, ...]]] = {}
        rest: list[tuple[int, ...]] = []
        for w in self.basis:
            v = w[x]
            while v:
                b = v.bit_length()
                got = pivots.get(b)
                if got is None:
                    pivots[b] = (v, w)
                    break
                v ^= got[0]
                w = _xor_tab(w, got[1])
            else:
                rest.append(w)
        t = y ^ self.v0[x]
        shift: tuple[int, ...] | None = None
        while t:
            got = pivots.get(t.bit_length())
            if got is None:
                return False
            t ^= got[0]
            shift = got[1] if shift is None else _xor_tab(shift, got[1])
        if shift is not None:
            self.v0 = _xor_tab(self.v0, shift)
        self.basis = rest
        return True


def _xor_tab(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x ^ y for x, y in zip(a, b))


# --- incremental orbit assignment -----------------------------------------


def _push_orbit(state: SearchState, orbit: Sequence[int], btab: Sequence[int],
                y: int) -> int:
    """Assign F(A^i x) = B^i y along an orbit; 1 iff every check passes.

    On failure the pushed prefix (including the failing point) is unwound,
    leaving the state exactly as before the call.
    """
    val = y
    for i, x in enumerate(orbit):
        if i:
            val = btab[val]
        if not state.set_point(x, val):
            for j in range(i, -1, -1):
                state.remove_point(orbit[j])
            return 0
    return 1


def _pop_orbit(state: SearchState, orbit: Sequence[int]) -> None:
    for x in reversed(orbit):
        state.remove_point(x)


def _mix_basis(basis: Sequence[int], rng: random.Random) -> list[int]:
    # random invertible recombination; keeps the span, changes the map
    k = len(basis)
    while True:
        rows = [rng.randrange(1, 1 << k) for _ in range(k)]
        if BitMatrix(k, tuple(rows)).is_invertible():
            break
    return [_expand(basis, r) for r in rows]


def _expand(basis: Sequence[int], coords: int) -> int:
    out = 0
    i = 0
    while coords:
        if coords & 1:
            out ^= basis[i]
        coords >>= 1
        i += 1
    return out


def seed_fixed_subspace(state: SearchState, plan: OrbitPlan,
                        g: Sequence[int], rng: random.Random | None = None,
                        randomize_basis: bool = False) -> int:
    """Assign F on Fix_A as a basis-transported copy of the k-bit seed g.

    Returns 1 on success; on a failed check everything pushed here is
    unwound and 0 comes back, so the caller can try another seed.
    """
    k = plan.fixA_basis.dim
    if len(g) != 1 << k:
        raise ValueError(f"seed has {len(g)} entries, fixed subspace needs {1 << k}")
    if k == 0:
        return 1
    if g[0] != 0:
        raise ValueError("seed function must map 0 to 0")
    ba = list(plan.fixA_basis.basis)
    bb = list(plan.fixB_basis.basis)
    if randomize_basis:
        if rng is None:
            raise ValueError("randomize_basis needs an rng")
        ba = _mix_basis(ba, rng)
        bb = _mix_basis(bb, rng)
    pushed: list[int] = []
    for v in range(1, 1 << k):
        x = _expand(ba, v)
        y = _expand(bb, g[v])
        if state.set_point(x, y):
            pushed.append(x)
        else:
            state.remove_point(x)
            for z in reversed(pushed):
                state.remove_point(z)
            return 0
    return 1


# --- randomized driver -----------------------------------------------------


class _Found(Exception):
    def __init__(self, table: list[int]):
        self.table = table


def _prepare(plan: OrbitPlan, seeds: SeedLibrary | None,
             rng: random.Random | None, randomize_basis: bool,
             g: Sequence[int] | None = None) -> tuple[SearchState, _AffineSpace] | None:
    """Fresh state with F(0) = 0, forced points, and the seeded subspace."""
    state = SearchState(plan.n)
    state.sbox[0] = 0
    state.add_point(0)
    for x, y in plan.forced:
        if not state.set_point(x, y):
            return None
    if plan.seed_dim:
        if g is None:
            if seeds is None:
                seeds = load_seed_library()
            pool = seeds.for_dim(plan.seed_dim)
            g = pool[rng.randrange(len(pool))] if rng is not None else pool[0]
        if not seed_fixed_subspace(state, plan, g, rng, randomize_basis):
            return None
    affine = _AffineSpace(1 << plan.n, quadratic_solution_space(plan.cls))
    for x in state.assigned:
        if not affine.condition(x, state.sbox[x]):
            return None  # no quadratic solution restricts this way
    return state, affine


def le_search_once(plan: OrbitPlan, rng: random.Random,
                   seeds: SeedLibrary | None = None,
                   deadline: float | None = None,
                   randomize_basis: bool = False,
                   g: Sequence[int] | None = None) -> tuple[list[int] | None, bool]:
    """One shuffled descent; (table or None, whether the tree was exhausted)."""
    prep = _prepare(plan, seeds, rng, randomize_basis, g)
    if prep is None:
        return None, True  # the seed choice contradicts the checks up front
    state, affine = prep
    btab = plan.cls.B.apply_table()
    omap = {o[0]: o for o in plan.orbits}

    def next_val(depth: int) -> None:
        if depth == len(plan.position_order):
            if not state.is_complete():
                raise AssertionError("plan left positions unassigned")
            raise _Found(state.table())
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout
        orbit = omap[plan.position_order[depth]]
        row = affine.candidates(orbit[0])
        rng.shuffle(row)
        for y in row:
            affine.push()
            if affine.condition(orbit[0], y) and _push_orbit(state, orbit, btab, y):
                next_val(depth + 1)
                _pop_orbit(state, orbit)
            affine.pop()

    try:
        next_val(0)
    except _Found as hit:
        return hit.table, False
    except SearchTimeout:
        return None, False
    return None, True  # tree exhausted: no solution under this seeding


def _conjugation_holds(table: Sequence[int], cls: CanonicalClass) -> bool:
    atab = cls.A.apply_table()
    btab = cls.B.apply_table()
    return all(table[atab[x]] == btab[table[x]] for x in range(len(table)))


def le_search(cls: CanonicalClass,
              seeds: SeedLibrary | None = None,
              seed: int | None = None,
              restart_budget: float | None = None,
              total_budget: float | None = None,
              max_restarts: int | None = None,
              randomize_basis: bool = False) -> list[int]:
    """Restarting orbit search; a quadratic APN table with F o A = B o F.

    Raises SearchTimeout when the budget runs out.  An exhausted tree is
    conclusive for unseeded classes (the class has no solution at all);
    for seeded classes it only rules out the tried restriction, so the
    driver cycles through the seed pool and gives up when every seed is
    exhausted, unless randomize_basis keeps fresh transports coming.
    """
    plan = build_orbit_plan(cls)
    rng = random.Random(seed)
    if restart_budget is None:
        restart_budget = restart_budget_default(cls.n)
    pool: tuple[tuple[int, ...], ...] | None = None
    remaining: set[int] | None = None
    if plan.seed_dim:
        pool = (seeds or load_seed_library()).for_dim(plan.seed_dim)
        if not randomize_basis:
            remaining = set(range(len(pool)))
    start = time.monotonic()
    restarts = 0
    while True:
        g = None
        g_idx = None
        if pool is not None:
            if remaining is not None:
                g_idx = sorted(remaining)[rng.randrange(len(remaining))]
            else:
                g_idx = rng.randrange(len(pool))
            g = pool[g_idx]
        deadline = time.monotonic() + restart_budget if restart_budget > 0 else None
        if total_budget is not None:
            hard = start + total_budget
            deadline = hard if deadline is None else min(deadline, hard)
        table, exhausted = le_search_once(plan, rng, seeds, deadline,
                                          randomize_basis, g)
        if table is not None:
            if not _conjugation_holds(table, cls):
                raise AssertionError("output violates the defining constraint")
            log.info("le-search class=%d n=%d: found after %d restarts (%.2fs)",
                     cls.index, cls.n, restarts, time.monotonic() - start)
            return table
        if exhausted:
            if pool is None:
                raise SearchTimeout(
                    f"class {cls.index}: search tree exhausted, no solution exists")
            if remaining is not None:
                remaining.discard(g_idx)
                if not remaining:
                    raise SearchTimeout(
                        f"class {cls.index}: every seeded restriction is "
                        f"exhausted, no solution through the seed library")
        restarts += 1
        log.info("le-search class=%d n=%d: restart %d", cls.index, cls.n, restarts)
        if total_budget is not None and time.monotonic() - start > total_budget:
            raise SearchTimeout(
                f"class {cls.index}: no table within {total_budget:.0f}s")
        if max_restarts is not None and restarts >= max_restarts:
            raise SearchTimeout(
                f"class {cls.index}: no table within {max_restarts} restarts")


# --- deterministic variant -------------------------------------------------


def commuting_set(m: BitMatrix, fix: Subspace,
                  rng: random.Random | None = None, samples: int = 0,
                  max_size: int = 512) -> list[BitMatrix]:
    """Invertible matrices commuting with m that fix `fix` pointwise.

    Always contains the powers of m.  Extra elements are sampled as odd-
    weight polynomials in m (these commute for free and fix every fixed
    point of m); the result is closed into a group so that minimality
    pruning against it stays sound.  Completeness is not promised and not
    needed.
    """
    ident = BitMatrix.identity(m.n)

    def qualifies(x: BitMatrix) -> bool:
        return (x.is_invertible()
                and x * m == m * x
                and all(x.apply(v) == v for v in fix.basis))

    powers = [ident]
    cur = m
    while cur != ident:
        powers.append(cur)
        cur = cur * m
    group = {x for x in powers if qualifies(x)}
    if samples and rng is not None:
        ord_m = len(powers)
        for _ in range(samples):
            picks = [i for i in range(ord_m) if rng.random() < 0.5]
            if len(picks) % 2 == 0:
                continue  # even-weight polynomials collapse on fixed points
            cand = powers[picks[0]]
            for i in picks[1:]:
                cand = cand ^ powers[i]
            if not qualifies(cand) or cand in group:
                continue
            trial = _close_group(group | {cand}, max_size)
            if trial is not None:
                group = trial
    return sorted(group, key=lambda b: b.rows)


def _close_group(gens: set[BitMatrix], max_size: int) -> set[BitMatrix] | None:
    group = set(gens)
    frontier = list(gens)
    while frontier:
        x = frontier.pop()
        for y in list(group):
            for prod in (x * y, y * x):
                if prod not in group:
                    group.add(prod)
                    frontier.append(prod)
                    if len(group) > max_size:
                        return None
    return group


def _lex_minimal(sbox: Sequence[int],
                 pairs: Sequence[tuple[Sequence[int], Sequence[int]]]) -> bool:
    """False iff some C_B o F o C_A is lexicographically below the partial F.

    Scanning stops at the first position where either side is undefined;
    the verdict is thus conservative but never discards the orbit minimum.
    """
    for ca, cb in pairs:
        for x in range(len(sbox)):
            b = sbox[x]
            if b < 0:
                break
            fa = sbox[ca[x]]
            if fa < 0:
                break
            a = cb[fa]
            if a != b:
                if a < b:
                    return False
                break
    return True


def deterministic_search(cls: CanonicalClass,
                         seeds: SeedLibrary | None = None,
                         prune: bool = True,
                         time_limit: float | None = None,
                         rng: random.Random | None = None,
                         samples: int = 0) -> list[list[int]]:
    """Full descent over the orbit tree, every seed choice, all solutions.

    With prune=True a branch is entered only when the partial table is
    lexicographically smallest within its {C_B o F o C_A} set, so the
    output covers every solution orbit without listing every solution.
    For seeded classes "all" means all solutions extending one of the
    library restrictions through the canonical bases.  Raises
    SearchTimeout past time_limit.
    """
    plan = build_orbit_plan(cls)
    btab = cls.B.apply_table()
    omap = {o[0]: o for o in plan.orbits}
    pairs: list[tuple[Sequence[int], Sequence[int]]] = []
    if prune:
        ca_set = commuting_set(cls.A, plan.fixA_basis, rng, samples)
        cb_set = commuting_set(cls.B, plan.fixB_basis, rng, samples)
        ident = BitMatrix.identity(cls.n)
        for a in ca_set:
            for b in cb_set:
                if a == ident and b == ident:
                    continue
                pairs.append((a.apply_table(), b.apply_table()))
    if plan.seed_dim:
        if seeds is None:
            seeds = load_seed_library()
        g_choices: Iterable[Sequence[int] | None] = seeds.for_dim(plan.seed_dim)
    else:
        g_choices = (None,)
    deadline = time.monotonic() + time_limit if time_limit is not None else None
    out: list[list[int]] = []

    def descend(state: SearchState, affine: _AffineSpace, depth: int) -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout(f"class {cls.index}: deterministic pass ran long")
        if depth == len(plan.position_order):
            out.append(state.table())
            return
        orbit = omap[plan.position_order[depth]]
        for y in sorted(affine.candidates(orbit[0])):
            affine.push()
            if affine.condition(orbit[0], y) and _push_orbit(state, orbit, btab, y):
                if not pairs or _lex_minimal(state.sbox, pairs):
                    descend(state, affine, depth + 1)
                _pop_orbit(state, orbit)
            affine.pop()

    for g in g_choices:
        prep = _prepare(plan, seeds, None, False, g)
        if prep is None:
            continue  # this seed contradicts the checks immediately
        descend(prep[0], prep[1], 0)
    for table in out:
        if not _conjugation_holds(table, cls):
            raise AssertionError("output violates the defining constraint")
    return out


def search_class(cls: CanonicalClass,
                 seeds: SeedLibrary | None = None,
                 deterministic_ceiling: float = 600.0,
                 seed: int | None = None,
                 **kwargs) -> list[list[int]]:
    """Deterministic pass under a ceiling, randomized restarts otherwise.

    A deterministic pass that finishes is definitive (possibly empty); on
    timeout the randomized search contributes a single table or raises.
    """
    try:
        return deterministic_search(cls, seeds, time_limit=deterministic_ceiling)
    except SearchTimeout:
        log.info("class %d: deterministic pass over %.0fs, switching to randomized",
                 cls.index, deterministic_ceiling)
    return [le_search(cls, seeds, seed=seed, **kwargs)]
