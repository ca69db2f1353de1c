"""CNF encoding of an AIGER model as ``<X, Y, I, T>`` plus a bad literal.

Variable layout: latches ``1..L``, inputs ``L+1..L+I``, primed latches
``L+I+1..2L+I``, then one variable per (non-folded) AND gate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aiger import AigerModel
from .logic import Clause, Cube


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    model: AigerModel
    latch_vars: tuple[int, ...]
    input_vars: tuple[int, ...]
    init: Cube
    trans: tuple[Clause, ...]
    bad: int
    prime_map: dict
    num_vars: int

    def __post_init__(self):
        object.__setattr__(self, "_unprime_map", {p: v for v, p in self.prime_map.items()})

    @property
    def num_latches(self) -> int:
        return len(self.latch_vars)

    def prime_lit(self, lit: int) -> int:
        try:
            return 2 * self.prime_map[lit >> 1] | (lit & 1)
        except KeyError:
            raise ValueError(f"x{lit >> 1} is not a latch variable") from None

    def prime(self, cube: Cube) -> Cube:
        return Cube._trusted(frozenset(self.prime_lit(l) for l in cube.lits))

    def unprime(self, cube: Cube) -> Cube:
        up = self._unprime_map
        try:
            return Cube._trusted(frozenset(2 * up[l >> 1] | (l & 1) for l in cube.lits))
        except KeyError as e:
            raise ValueError(f"x{e.args[0]} is not a primed latch variable") from None

    def is_state_cube(self, cube) -> bool:
        n = len(self.latch_vars)
        return all(1 <= l >> 1 <= n for l in cube.lits)


def _and_clauses(g, a, b):
    return [Clause._trusted(frozenset(c)) for c in ((g ^ 1, a), (g ^ 1, b), (g, a ^ 1, b ^ 1))]


def encode(model: AigerModel) -> TransitionSystem:
    """Two-sided Tseitin encoding with constant folding."""
    nl, ni = len(model.latches), len(model.inputs)
    latch_vars = tuple(range(1, nl + 1))
    input_vars = tuple(range(nl + 1, nl + ni + 1))
    prime_map = {v: nl + ni + v for v in latch_vars}
    nvars = 2 * nl + ni

    # AIGER even literal -> SAT literal, or a Python bool for constants
    amap: dict = {0: False}
    for v, latch in zip(latch_vars, model.latches):
        amap[latch.lit] = 2 * v
    for v, lit in zip(input_vars, model.inputs):
        amap[lit] = 2 * v

    def tr(alit):
        base = amap[alit & ~1]
        if isinstance(base, bool):
            return base != bool(alit & 1)
        return base ^ (alit & 1)

    clauses: list[Clause] = []
    for lhs, r0, r1 in model.ands:
        a, b = tr(r0), tr(r1)
        if a is False or b is False:
            amap[lhs] = False
        elif a is True:
            amap[lhs] = b
        elif b is True or a == b:
            amap[lhs] = a
        elif a == b ^ 1:
            amap[lhs] = False
        else:
            nvars += 1
            g = 2 * nvars
            amap[lhs] = g
            clauses += _and_clauses(g, a, b)

    for v, latch in zip(latch_vars, model.latches):
        p = 2 * prime_map[v]
        f = tr(latch.next)
        if f is True:
            clauses.append(Clause([p]))
        elif f is False:
            clauses.append(Clause([p ^ 1]))
        else:
            clauses += [Clause([p ^ 1, f]), Clause([p, f ^ 1])]

    bad = tr(model.bad)
    if isinstance(bad, bool):
        nvars += 1
        clauses.append(Clause([2 * nvars if bad else 2 * nvars + 1]))
        bad = 2 * nvars

    init = Cube(2 * v + (1 - latch.reset) for v, latch in zip(latch_vars, model.latches)
                if latch.reset is not None)
    return TransitionSystem(model, latch_vars, input_vars, init, tuple(clauses), bad,
                            prime_map, nvars)
