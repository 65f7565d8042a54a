"""Randomized backtracking search for quadratic APN functions.

The tree assigns sbox values at the smallest undefined position, pruning
on two incrementally-maintained conditions: no DDT entry above 2 off the
zero row, and no fully-defined cube of weight >= 3 with nonzero XOR
(which would force algebraic degree > 2).

Bookkeeping discipline: a failing add still applies its full update (DDT)
or the prefix up to the violation (degree), and the matching remove
replays the same iteration order, so state restoration is bit-exact.
remove_point consults sbox[x], so the slot is cleared afterwards, not
before.
"""

from __future__ import annotations

import logging
import random
import sys
import time
from functools import lru_cache
from typing import Callable, Iterator, Sequence

log = logging.getLogger(__name__)

UNDEF = -1

DEFAULT_RESTART_BUDGET = {7: 10.0, 8: 60.0, 9: 60.0, 10: 60.0}


def restart_budget_default(n: int) -> float:
    return DEFAULT_RESTART_BUDGET.get(n, 1.0)


class SearchTimeout(Exception):
    """Budget expired before a completed table was found."""


@lru_cache(maxsize=None)
def superset_lists(n: int) -> tuple[tuple[int, ...], ...]:
    """For each x, the ascending u >= x (bitwise) with wt(u) >= 3."""
    size = 1 << n
    out = []
    for x in range(size):
        free = (size - 1) & ~x
        subs = []
        s = free
        while True:
            u = x | s
            if u.bit_count() >= 3:
                subs.append(u)
            if s == 0:
                break
            s = (s - 1) & free
        subs.sort()
        out.append(tuple(subs))
    return tuple(out)


class SearchState:
    """Partial n-bit table plus incremental DDT and degree counters."""

    def __init__(self, n: int):
        if not 2 <= n <= 10:
            raise ValueError(f"dimension {n} out of supported range [2, 10]")
        self.n = n
        self.size = 1 << n
        self.sbox = [UNDEF] * self.size
        self.ddt = bytearray(self.size * self.size)
        self.ctr = [0] * self.size
        self.sums = [0] * self.size
        self.assigned: list[int] = []
        self._supersets = superset_lists(n)

    # -- DDT bookkeeping ----------------------------------------------------

    def add_ddt_information(self, x: int) -> int:
        """+2 per defined pair; 0 iff some entry passed 2 (update still applied)."""
        n = self.n
        ddt = self.ddt
        sbox = self.sbox
        y = sbox[x]
        ok = 1
        for xp in self.assigned:
            idx = ((x ^ xp) << n) | (y ^ sbox[xp])
            ddt[idx] += 2
            if ddt[idx] > 2:
                ok = 0
        return ok

    def remove_ddt_information(self, x: int) -> int:
        """-2 per defined pair; 0 iff the state being removed was violating."""
        n = self.n
        ddt = self.ddt
        sbox = self.sbox
        y = sbox[x]
        ok = 1
        for xp in self.assigned:
            idx = ((x ^ xp) << n) | (y ^ sbox[xp])
            if ddt[idx] > 2:
                ok = 0
            ddt[idx] -= 2
        return ok

    # -- degree bookkeeping -------------------------------------------------

    def add_degree_information(self, x: int) -> int:
        ctr = self.ctr
        sums = self.sums
        y = self.sbox[x]
        for u in self._supersets[x]:
            ctr[u] += 1
            sums[u] ^= y
            if ctr[u] == 1 << u.bit_count() and sums[u]:
                return 0  # cube complete with a_u != 0: degree would exceed 2
        return 1

    def remove_degree_information(self, x: int) -> int:
        ctr = self.ctr
        sums = self.sums
        y = self.sbox[x]
        for u in self._supersets[x]:
            ctr[u] -= 1
            sums[u] ^= y
            if ctr[u] == (1 << u.bit_count()) - 1 and sums[u] != y:
                return 0  # mirrors the add-side early return at the same u
        return 1

    # -- combined point operations -----------------------------------------

    def add_point(self, x: int) -> int:
        """Register sbox[x] (already set); 1 iff both pruning checks pass."""
        ok = self.add_ddt_information(x)
        self.assigned.append(x)
        if ok:
            return self.add_degree_information(x)
        return 0

    def remove_point(self, x: int) -> None:
        """Unwind the registration of x and clear the slot."""
        top = self.assigned.pop()
        if top != x:
            raise AssertionError(f"non-LIFO removal: {x} while {top} is newest")
        if self.remove_ddt_information(x):
            self.remove_degree_information(x)
        self.sbox[x] = UNDEF

    def set_point(self, x: int, y: int) -> int:
        """Assign sbox[x] = y and register it."""
        self.sbox[x] = y
        return self.add_point(x)

    # -- queries ------------------------------------------------------------

    def is_complete(self) -> bool:
        return len(self.assigned) == self.size

    def next_free_position(self) -> int:
        for i, v in enumerate(self.sbox):
            if v == UNDEF:
                return i
        raise ValueError("table is complete")

    def table(self) -> list[int]:
        return list(self.sbox)


class _Found(Exception):
    def __init__(self, table: list[int]):
        self.table = table


def _ensure_recursion_room(size: int) -> None:
    need = size * 3 + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def search_once(
    n: int,
    rng: random.Random,
    deadline: float | None = None,
) -> tuple[list[int] | None, int]:
    """One shuffled descent; returns (table or None, max depth reached)."""
    _ensure_recursion_room(1 << n)
    state = SearchState(n)
    size = state.size
    orders = [list(range(size)) for _ in range(size)]
    for row in orders:
        rng.shuffle(row)
    state.sbox[0] = 0
    state.add_point(0)
    max_depth = 0

    def next_val(depth: int) -> None:
        nonlocal max_depth
        if depth > max_depth:
            max_depth = depth
        if state.is_complete():
            raise _Found(state.table())
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout
        x = state.next_free_position()
        for y in orders[depth]:
            state.sbox[x] = y
            if state.add_point(x):
                next_val(depth + 1)
            state.remove_point(x)

    try:
        next_val(0)
    except _Found as hit:
        return hit.table, max_depth
    except SearchTimeout:
        return None, max_depth
    return None, max_depth  # tree exhausted without completion


def search(
    n: int,
    seed: int | None = None,
    restart_budget: float | None = None,
    total_budget: float | None = None,
    max_restarts: int | None = None,
) -> list[int]:
    """Restarting search; returns a quadratic APN table or raises SearchTimeout."""
    rng = random.Random(seed)
    if restart_budget is None:
        restart_budget = restart_budget_default(n)
    start = time.monotonic()
    restarts = 0
    while True:
        deadline = time.monotonic() + restart_budget if restart_budget > 0 else None
        if total_budget is not None:
            hard = start + total_budget
            deadline = hard if deadline is None else min(deadline, hard)
        table, depth = search_once(n, rng, deadline)
        if table is not None:
            log.info("search n=%d seed=%s: found after %d restarts (%.2fs)",
                     n, seed, restarts, time.monotonic() - start)
            return table
        restarts += 1
        log.info("search n=%d seed=%s: restart %d, reached depth %d",
                 n, seed, restarts, depth)
        if total_budget is not None and time.monotonic() - start > total_budget:
            raise SearchTimeout(f"no table within {total_budget:.0f}s ({restarts} restarts)")
        if max_restarts is not None and restarts >= max_restarts:
            raise SearchTimeout(f"no table within {max_restarts} restarts")


def enumerate_all(n: int, prune: bool = True) -> Iterator[list[int]]:
    """Every degree-<=2 APN table with F(0)=0, by exhaustive backtracking.

    With prune=False the incremental structures are ignored and each step
    is vetted by full recomputation instead; both modes must agree.
    """
    _ensure_recursion_room(1 << n)
    state = SearchState(n)
    size = state.size
    state.sbox[0] = 0
    state.add_point(0)

    def partial_ok(x: int) -> bool:
        # recompute both pruning conditions from scratch on defined points
        pts = state.assigned
        counts: dict[int, int] = {}
        for i, a in enumerate(pts):
            for b in pts[:i]:
                key = ((a ^ b) << n) | (state.sbox[a] ^ state.sbox[b])
                c = counts.get(key, 0) + 2
                if c > 2:
                    return False
                counts[key] = c
        defined = set(pts)
        for u in range(size):
            if u.bit_count() < 3:
                continue
            acc = 0
            s = u
            while True:
                if s not in defined:
                    break
                acc ^= state.sbox[s]
                if s == 0:
                    if acc:
                        return False
                    break
                s = (s - 1) & u
        return True

    def walk() -> Iterator[list[int]]:
        if state.is_complete():
            yield state.table()
            return
        x = state.next_free_position()
        for y in range(size):
            state.sbox[x] = y
            ok = state.add_point(x)
            if not prune:
                ok = partial_ok(x)
            if ok:
                yield from walk()
            state.remove_point(x)

    yield from walk()
