"""Literals, cubes and clauses.

Literals use the AIGER pairing: variable ``v`` has positive literal ``2*v``
and negative literal ``2*v + 1``. Negation is ``lit ^ 1`` and sorting the
integer codes sorts by ``(var, sign)``.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def make_lit(var: int, negated: bool = False) -> int:
    if var < 1:
        raise ValueError(f"variable index must be >= 1, got {var}")
    return 2 * var + (1 if negated else 0)


def lit_var(lit: int) -> int:
    return lit >> 1


def lit_negated(lit: int) -> bool:
    return bool(lit & 1)


def neg(lit: int) -> int:
    return lit ^ 1


def to_dimacs(lit: int) -> int:
    return -(lit >> 1) if lit & 1 else lit >> 1


def from_dimacs(d: int) -> int:
    if d == 0:
        raise ValueError("0 is not a DIMACS literal")
    return make_lit(abs(d), d < 0)


def format_lit(lit: int) -> str:
    return ("~" if lit & 1 else "") + f"x{lit >> 1}"


class _LiteralSet:
    """Canonical, immutable, sorted and duplicate-free set of literals."""

    __slots__ = ("lits", "_set", "_hash")

    def __init__(self, lits: Iterable[int] = ()):
        s = frozenset(lits)
        for l in s:
            if l < 2:
                raise ValueError(f"invalid literal code {l}")
            if l ^ 1 in s:
                raise ValueError(
                    f"{type(self).__name__} contains both polarities of x{l >> 1}")
        self._set = s
        self.lits = tuple(sorted(s))
        self._hash = hash((type(self).__name__, self.lits))

    @classmethod
    def _trusted(cls, lits: frozenset):
        # caller guarantees canonical input
        obj = cls.__new__(cls)
        obj._set = lits
        obj.lits = tuple(sorted(lits))
        obj._hash = hash((cls.__name__, obj.lits))
        return obj

    def __iter__(self) -> Iterator[int]:
        return iter(self.lits)

    def __len__(self) -> int:
        return len(self.lits)

    def __contains__(self, lit: int) -> bool:
        return lit in self._set

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.lits == other.lits

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.lits)})"

    @property
    def literal_set(self) -> frozenset:
        return self._set

    def vars(self) -> tuple[int, ...]:
        return tuple(l >> 1 for l in self.lits)

    def issubset(self, other: "_LiteralSet") -> bool:
        return self._set <= other._set

    def with_lit(self, lit: int):
        return type(self)(self._set | {lit})

    def without(self, lit: int):
        return type(self)._trusted(self._set - {lit})


class Cube(_LiteralSet):
    """Conjunction of literals."""

    __slots__ = ()

    def __str__(self) -> str:
        return " & ".join(map(format_lit, self.lits)) or "true"


class Clause(_LiteralSet):
    """Disjunction of literals."""

    __slots__ = ()

    def __str__(self) -> str:
        return " | ".join(map(format_lit, self.lits)) or "false"


def negate(c):
    """Cube -> Clause and Clause -> Cube, flipping every literal."""
    flipped = frozenset(l ^ 1 for l in c.lits)
    if isinstance(c, Cube):
        return Clause._trusted(flipped)
    if isinstance(c, Clause):
        return Cube._trusted(flipped)
    raise TypeError(f"cannot negate {type(c).__name__}")


def subsumes(a: _LiteralSet, b: _LiteralSet) -> bool:
    """Set inclusion ``a ⊆ b``.

    For clauses, ``a`` subsumes ``b`` (``a`` implies ``b``). For cubes the
    implication runs the other way: ``b`` implies ``a``.
    """
    return a.literal_set <= b.literal_set


def diff(a: Cube, b: Cube) -> frozenset:
    """Literals of ``a`` whose negation occurs in ``b``. Not symmetric."""
    bs = b.literal_set
    return frozenset(l for l in a.lits if l ^ 1 in bs)


def cube_from_assignment(values: dict[int, bool]) -> Cube:
    return Cube(make_lit(v, not val) for v, val in values.items())
