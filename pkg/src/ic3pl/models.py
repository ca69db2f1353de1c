"""Small AIGER models: hand-written toys, scalable families, random AIGs."""

from __future__ import annotations

import random
from typing import Optional

from .aiger import AigerModel, Latch


class AigBuilder:
    """Builds models in binary AIGER variable order (inputs, latches, gates)."""

    def __init__(self):
        self._var = 0
        self.inputs: list[int] = []
        self.latches: list[list] = []
        self.ands: list[tuple[int, int, int]] = []

    def _fresh(self) -> int:
        self._var += 1
        return 2 * self._var

    def input(self) -> int:
        assert not self.latches and not self.ands, "declare inputs first"
        lit = self._fresh()
        self.inputs.append(lit)
        return lit

    def latch(self, reset: Optional[int] = 0) -> int:
        assert not self.ands, "declare latches before gates"
        lit = self._fresh()
        self.latches.append([lit, 0, reset])
        return lit

    def set_next(self, latch_lit: int, nxt: int):
        for entry in self.latches:
            if entry[0] == latch_lit:
                entry[1] = nxt
                return
        raise KeyError(latch_lit)

    def and_(self, a: int, b: int) -> int:
        if a == 0 or b == 0 or a == b ^ 1:
            return 0
        if a == 1:
            return b
        if b == 1 or a == b:
            return a
        lhs = self._fresh()
        self.ands.append((lhs, max(a, b), min(a, b)))
        return lhs

    def or_(self, a: int, b: int) -> int:
        return self.and_(a ^ 1, b ^ 1) ^ 1

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, b ^ 1), self.and_(a ^ 1, b))

    def mux(self, sel: int, hi: int, lo: int) -> int:
        return self.or_(self.and_(sel, hi), self.and_(sel ^ 1, lo))

    def all_of(self, lits) -> int:
        out = 1
        for l in lits:
            out = self.and_(out, l)
        return out

    def build(self, bad: int) -> AigerModel:
        return AigerModel(
            max_var=self._var,
            inputs=tuple(self.inputs),
            latches=tuple(Latch(l, n, r) for l, n, r in self.latches),
            outputs=(bad,),
            ands=tuple(self.ands),
        )


def toggle() -> AigerModel:
    """x' = ~x from 0; bad = x (unsafe at depth 1)."""
    b = AigBuilder()
    x = b.latch()
    b.set_next(x, x ^ 1)
    return b.build(x)


def hold() -> AigerModel:
    """x' = x from 0; bad = x (safe)."""
    b = AigBuilder()
    x = b.latch()
    b.set_next(x, x)
    return b.build(x)


def counter(bits: int, target: Optional[int] = None, modulus: Optional[int] = None,
            enable: bool = False) -> AigerModel:
    """Binary up-counter from 0, bad when it equals ``target`` (default all ones).

    With ``modulus`` the counter wraps to 0 after ``modulus - 1``, so targets
    at or beyond the modulus are unreachable. ``enable`` adds an input gating
    every increment.
    """
    b = AigBuilder()
    en = b.input() if enable else 1
    xs = [b.latch() for _ in range(bits)]
    if target is None:
        target = (1 << bits) - 1

    def equals(value):
        return b.all_of(x if (value >> i) & 1 else x ^ 1 for i, x in enumerate(xs))

    wrap = equals(modulus - 1) if modulus is not None else 0
    carry = en
    for x in xs:
        nxt = b.and_(b.xor(x, carry), wrap ^ 1)
        carry = b.and_(carry, x)
        b.set_next(x, nxt)
    return b.build(equals(target))


def two_bit_counter() -> AigerModel:
    """b0' = ~b0, b1' = b1 xor b0; bad = b1 & b0 (unsafe at depth 3)."""
    return counter(2)


def toggle_with_enable() -> AigerModel:
    """Two latches: ``a`` toggles when input ``e`` is high, ``b`` copies ``a``.

    bad = ~a & b, reachable after a toggle and a toggle back.
    """
    m = AigBuilder()
    e = m.input()
    a = m.latch()
    c = m.latch()
    m.set_next(a, m.xor(a, e))
    m.set_next(c, a)
    return m.build(m.and_(a ^ 1, c))


def shift_register(length: int, safe: bool = True) -> AigerModel:
    """Input shifts through ``length`` latches.

    Safe variant: a guard chain starts all ones and shifts in ones; bad = data
    chain all high while the first guard bit is low. Unsafe variant: bad = data
    chain all high.
    """
    b = AigBuilder()
    inp = b.input()
    data = [b.latch() for _ in range(length)]
    guard = [b.latch(reset=1) for _ in range(length)]
    prev = inp
    for x in data:
        b.set_next(x, prev)
        prev = x
    prev = 1
    for g in guard:
        b.set_next(g, prev)
        prev = g
    if safe:
        bad = b.and_(b.all_of(data), b.all_of(g ^ 1 for g in guard[:1]))
    else:
        bad = b.all_of(data)
    return b.build(bad)


def ring_counter(length: int) -> AigerModel:
    """One-hot token circulating in a ring; bad = two adjacent tokens (safe)."""
    b = AigBuilder()
    xs = [b.latch(reset=1 if i == 0 else 0) for i in range(length)]
    for i, x in enumerate(xs):
        b.set_next(x, xs[i - 1])
    bad = 0
    for i in range(length):
        bad = b.or_(bad, b.and_(xs[i], xs[(i + 1) % length]))
    return b.build(bad)


def random_aig(seed: int, max_latches: int = 12, max_inputs: int = 4,
               max_gates: int = 40) -> AigerModel:
    """Random AIG with a bad signal built from a conjunction of latch-heavy logic."""
    rng = random.Random(seed)
    nl = rng.randint(1, max_latches)
    ni = rng.randint(0, max_inputs)
    # reserve room for the bad-signal conjunction
    ng = rng.randint(max(1, nl // 2), max_gates - 4)
    b = AigBuilder()
    ins = [b.input() for _ in range(ni)]
    lat = []
    for _ in range(nl):
        r = rng.random()
        lat.append(b.latch(reset=None if r < 0.05 else (1 if r < 0.2 else 0)))
    pool = ins + lat
    gates = []
    for _ in range(ng - 1):
        x = rng.choice(pool) ^ rng.randint(0, 1)
        y = rng.choice(pool) ^ rng.randint(0, 1)
        g = b.and_(x, y)
        if g > 1 and g not in pool:
            pool.append(g)
            gates.append(g)
    for l in lat:
        style = rng.random()
        if style < 0.25:
            b.set_next(l, l)  # mostly-stable state bits
        elif style < 0.35:
            b.set_next(l, rng.choice(lat) ^ rng.randint(0, 1))
        else:
            src = gates if gates and rng.random() < 0.8 else pool
            b.set_next(l, rng.choice(src) ^ rng.randint(0, 1))
    k = rng.randint(2, min(4, max(2, nl)))
    picks = rng.sample(lat, min(k, len(lat)))
    bad = b.all_of(l ^ rng.randint(0, 1) for l in picks)
    if gates and rng.random() < 0.3:
        bad = b.and_(bad, rng.choice(gates) ^ rng.randint(0, 1))
    if bad in (0, 1):
        bad = lat[0]
    return b.build(bad)


def random_local_aig(seed: int, max_latches: int = 12, max_inputs: int = 4,
                     max_gates: int = 40) -> AigerModel:
    """Random AIG where each latch reads itself and a neighbour.

    Counter- and shift-like coupling gives longer diameters than
    :func:`random_aig`; the bad signal is a 3-5 literal conjunction.
    """
    rng = random.Random(seed)
    nl = rng.randint(3, max_latches)
    ni = rng.randint(1, max_inputs)
    b = AigBuilder()
    ins = [b.input() for _ in range(ni)]
    lat = [b.latch(reset=None if rng.random() < 0.03 else 0) for _ in range(nl)]
    ops = [b.and_, b.or_, b.xor]
    for i, x in enumerate(lat):
        prev = lat[i - 1]
        other = rng.choice(ins + lat) ^ rng.randint(0, 1)
        kind = rng.random()
        if kind < 0.4:
            nxt = b.xor(x, b.and_(prev, other))  # carry-like
        elif kind < 0.7:
            nxt = rng.choice(ops)(prev ^ rng.randint(0, 1), other)  # shift-like
        else:
            nxt = b.mux(other, prev ^ rng.randint(0, 1), x)  # load-enable
        b.set_next(x, nxt)
        if len(b.ands) >= max_gates - 8:
            break
    for x in lat:
        entry = next(e for e in b.latches if e[0] == x)
        if entry[1] == 0:
            entry[1] = x
    picks = rng.sample(lat, rng.randint(min(3, nl), min(5, nl)))
    bad = b.all_of(l ^ (1 if rng.random() < 0.2 else 0) for l in picks)
    return b.build(bad)


def toy_models() -> dict[str, AigerModel]:
    return {
        "toggle": toggle(),
        "hold": hold(),
        "counter2": two_bit_counter(),
        "toggle_enable": toggle_with_enable(),
        "counter3_mod5_safe": counter(3, target=6, modulus=5),
        "counter4_mod10_unsafe": counter(4, target=9, modulus=10),
        "counter4_en_mod12_safe": counter(4, target=13, modulus=12, enable=True),
        "shift3_unsafe": shift_register(3, safe=False),
        "shift4_safe": shift_register(4, safe=True),
        "ring4_safe": ring_counter(4),
    }
