"""Delta-encoded frame sequence with one SAT session per level."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .logic import Clause, Cube, diff, negate, to_dimacs
from .sat import make_solver
from .transition_system import TransitionSystem


class Origin(enum.Enum):
    GENERALIZED = "generalized"
    PREDICTED = "predicted"
    PUSHED = "pushed"


@dataclass(eq=False)
class Lemma:
    clause: Clause
    level: int
    origin: Origin


class InitiationError(ValueError):
    """A lemma does not contain the initial states."""


def initiated(init: Cube, cube: Cube) -> bool:
    """I => not(cube), i.e. the cube shares no state with I.

    Both are cubes, so this is exactly ``diff(cube, I) != {}``. An empty
    ``init`` admits every state and nothing is initiated.
    """
    return bool(diff(cube, init))


class FrameSequence:
    """Frames ``F_0 .. F_k`` where ``F_i`` is the union of ``delta[j]`` for ``j >= i``.

    ``F_0`` is the initial cube and has no lemmas. Each level owns a solver
    session loaded with ``T`` and the clauses of ``F_i``.
    """

    rebuild_threshold = 400

    def __init__(self, ts: TransitionSystem, backend: str = "reference",
                 conflict_budget: Optional[int] = None):
        self.ts = ts
        self.backend = backend
        self.conflict_budget = conflict_budget
        self.delta: list[dict[Clause, Lemma]] = [{}]
        self._where: dict[Clause, int] = {}
        self._solvers: list = []
        self._dirt: list[int] = []
        self._solvers.append(self._fresh_solver(0))
        self._dirt.append(0)
        self.rebuilds = 0
        self.extend()

    @property
    def k(self) -> int:
        return len(self.delta) - 1

    def extend(self):
        """Open a new top frame ``F_{k+1} = T``."""
        self.delta.append({})
        self._solvers.append(self._fresh_solver(self.k))
        self._dirt.append(0)

    def _fresh_solver(self, level: int):
        s = make_solver(self.backend, self.conflict_budget)
        s.ensure_vars(self.ts.num_vars)
        for c in self.ts.trans:
            s.add_clause(c.lits)
        for c in self.frame_clauses(level):
            s.add_clause(c.lits)
        return s

    def solver(self, level: int):
        if self._dirt[level] > self.rebuild_threshold:
            self._solvers[level] = self._fresh_solver(level)
            self._dirt[level] = 0
            self.rebuilds += 1
        return self._solvers[level]

    def mark_dirty(self, level: int, amount: int = 1):
        """Record garbage (dead temporaries, subsumed lemmas) in a level's session."""
        self._dirt[level] += amount

    # -- queries -----------------------------------------------------------

    def frame_clauses(self, level: int) -> list[Clause]:
        if level == 0:
            return [Clause([l]) for l in self.ts.init.lits]
        return [c for j in range(level, len(self.delta)) for c in self.delta[j]]

    def lemmas_at_exactly(self, level: int) -> list[Lemma]:
        if level == 0 or level >= len(self.delta):
            return []
        return list(self.delta[level].values())

    def level_of(self, clause: Clause) -> Optional[int]:
        return self._where.get(clause)

    def contains(self, clause: Clause, level: int) -> bool:
        """Syntactic membership of ``clause`` in ``F_level``."""
        if level == 0:
            return False
        lv = self._where.get(clause)
        return lv is not None and lv >= level

    def num_lemmas(self) -> int:
        return len(self._where)

    # -- updates -----------------------------------------------------------

    def add_lemma(self, clause: Clause, level: int, origin: Origin) -> bool:
        """Add ``clause`` to ``F_1 .. F_level``.

        Lemmas at levels ``<= level`` that ``clause`` subsumes are dropped. If an
        existing lemma at a level ``>= level`` already subsumes ``clause``
        nothing changes and False is returned.
        """
        if not 1 <= level <= self.k:
            raise ValueError(f"level {level} outside 1..{self.k}")
        if not initiated(self.ts.init, negate(clause)):
            raise InitiationError(f"initial states violate lemma {clause}")
        cs = clause.literal_set
        present = 0
        for j in range(level, len(self.delta)):
            for other in self.delta[j]:
                if other.literal_set <= cs:
                    return False
        for j in range(1, level + 1):
            dead = [other for other in self.delta[j] if cs <= other.literal_set]
            for other in dead:
                del self.delta[j][other]
                del self._where[other]
                if other == clause:
                    present = j
                else:
                    for m in range(1, j + 1):
                        self._dirt[m] += 1
        self.delta[level][clause] = Lemma(clause, level, origin)
        self._where[clause] = level
        for m in range(present + 1, level + 1):
            self._solvers[m].add_clause(clause.lits)
        return True

    def push(self, lemma: Lemma, level: int) -> bool:
        """Move a lemma from ``delta[level]`` to ``delta[level + 1]``."""
        return self.add_lemma(lemma.clause, level + 1, lemma.origin)

    # -- output ------------------------------------------------------------

    def invariant(self, level: int) -> list[Clause]:
        return self.frame_clauses(level)


def audit(frames: FrameSequence, backend: str = "reference") -> list[str]:
    """Check ``F_i & T => F_{i+1}'`` and ``F_i => P`` (i < k) with fresh solvers."""
    ts = frames.ts
    problems = []
    for i in range(frames.k):
        below = frames.frame_clauses(i)
        for c in frames.frame_clauses(i + 1):
            s = make_solver(backend)
            s.ensure_vars(ts.num_vars)
            for cl in list(ts.trans) + below:
                s.add_clause(cl.lits)
            if s.solve([ts.prime_lit(l ^ 1) for l in c.lits]):
                problems.append(f"F_{i} & T does not imply lemma {c} of F_{i + 1} in the next state")
        s = make_solver(backend)
        s.ensure_vars(ts.num_vars)
        for cl in list(ts.trans) + below:
            s.add_clause(cl.lits)
        if s.solve([ts.bad]):
            problems.append(f"F_{i} intersects the bad states")
    return problems


def format_invariant(clauses: Iterable[Clause]) -> str:
    """``inv <n>`` header, then one DIMACS-style clause per line over latch variables."""
    clauses = list(clauses)
    lines = [f"inv {len(clauses)}"]
    lines += [" ".join(str(to_dimacs(l)) for l in c.lits) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"


def parse_invariant(text: str) -> list[Clause]:
    from .logic import from_dimacs

    rows = [r for r in text.splitlines() if r.strip()]
    if not rows or not rows[0].startswith("inv "):
        raise ValueError("missing 'inv <n>' header")
    n = int(rows[0].split()[1])
    out = []
    for r in rows[1:]:
        nums = [int(t) for t in r.split()]
        if not nums or nums[-1] != 0:
            raise ValueError(f"clause line not terminated by 0: {r!r}")
        out.append(Clause(from_dimacs(d) for d in nums[:-1]))
    if len(out) != n:
        raise ValueError(f"header announces {n} clauses, found {len(out)}")
    return out
