"""Switching: replace F by F + v*f for a Boolean function f.

Adding the constant v on the set where f = 1 preserves APN exactly when
f satisfies a homogeneous linear system: every quadruple x, x+a, y, y+a
whose F-values sum to v forces f_x + f_{x+a} + f_y + f_{y+a} = 0.  The
system is built by scanning all such quadruples, solved by elimination
over GF(2), and every enumerated solution is re-checked with the APN
oracle before being emitted (a failure there is a bug, not an input
problem).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolfun import is_apn

ENUMERATION_CAP = 24


@dataclass(frozen=True)
class SwitchingSystem:
    n: int
    v: int
    equations: tuple[tuple[int, int, int, int], ...]

    @property
    def unknowns(self) -> int:
        return 1 << self.n


@dataclass(frozen=True)
class SwitchingResult:
    system: SwitchingSystem
    dimension: int
    basis: tuple[int, ...]
    functions: tuple[tuple[int, ...], ...]
    skipped: bool


def build_system(table, v: int) -> SwitchingSystem:
    """All quadruple constraints for direction v, one per configuration.

    Each equation is (x, x+a, y, y+a) with x < x+a, y < y+a and the two
    pairs ordered; the same four points may recur under a different a.
    """
    size = len(table)
    n = size.bit_length() - 1
    if not 0 < v < size:
        raise ValueError("direction v must be a nonzero n-bit vector")
    if not is_apn(table):
        raise ValueError("switching starts from an APN function")
    arr = np.asarray(table, dtype=np.int64)
    idx = np.arange(size)
    eqs = set()
    for a in range(1, size):
        d = arr ^ arr[idx ^ a]
        reps: dict[int, list[int]] = {}
        for x in range(size):
            if x < x ^ a:
                reps.setdefault(int(d[x]), []).append(x)
        for w, xs in reps.items():
            if (w ^ v) < w:
                continue  # the partner value handles this group
            ys = reps.get(w ^ v)
            if not ys:
                continue
            for x in xs:
                for y in ys:
                    p, q = (x, x ^ a), (y, y ^ a)
                    eqs.add(p + q if p < q else q + p)
    return SwitchingSystem(n=n, v=v, equations=tuple(sorted(eqs)))


def _nullspace(system: SwitchingSystem) -> tuple[int, ...]:
    """Basis of the solution space, each element a 2^n-bit mask over f."""
    pivots: dict[int, int] = {}
    for x, xa, y, ya in system.equations:
        m = (1 << x) | (1 << xa) | (1 << y) | (1 << ya)
        while m:
            b = m.bit_length() - 1
            if b in pivots:
                m ^= pivots[b]
            else:
                pivots[b] = m
                break
    order = sorted(pivots, reverse=True)
    for i, b in enumerate(order):
        for b2 in order[:i]:
            if (pivots[b2] >> b) & 1:
                pivots[b2] ^= pivots[b]
    basis = []
    for f in range(system.unknowns):
        if f in pivots:
            continue
        vec = 1 << f
        for b, row in pivots.items():
            if (row >> f) & 1:
                vec |= 1 << b
        basis.append(vec)
    return tuple(basis)


def solve_switchings(table, v: int, cap: int = ENUMERATION_CAP) -> SwitchingResult:
    """Solve the system for direction v and enumerate the switched tables.

    When the solution space has dimension above cap only the basis is
    returned and enumeration is marked skipped.
    """
    system = build_system(table, v)
    basis = _nullspace(system)
    dim = len(basis)
    if dim > cap:
        return SwitchingResult(system, dim, basis, (), True)
    size = len(table)
    out = []
    for combo in range(1 << dim):
        mask = 0
        m = combo
        i = 0
        while m:
            if m & 1:
                mask ^= basis[i]
            m >>= 1
            i += 1
        g = tuple(table[x] ^ (v if (mask >> x) & 1 else 0) for x in range(size))
        if not is_apn(list(g)):
            raise AssertionError("switching solution failed the APN oracle")
        out.append(g)
    return SwitchingResult(system, dim, basis, tuple(out), False)


def switch_sweep(table, cap: int = ENUMERATION_CAP) -> dict[int, SwitchingResult]:
    """solve_switchings for every nonzero direction."""
    size = len(table)
    return {v: solve_switchings(table, v, cap) for v in range(1, size)}
