"""Lemma prediction from counterexamples to propagation.

When a lemma ``p`` fails to move from level ``i-1`` to level ``i``, the SAT
model contains a successor state ``t`` that violates ``p``. Later, when a
cube ``b`` blocked at level ``i`` has ``p`` as a parent (``p`` lives exactly at
level ``i-1`` and ``p ⊆ ¬b``), the literals of ``b`` that disagree with ``t``
give one-literal strengthenings of ``p`` that exclude ``t`` while still
blocking ``b``. Each is tried with a single relative-induction query before
falling back to literal dropping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .frames import FrameSequence, Lemma, initiated
from .logic import Clause, Cube, diff, negate


class FailurePushTable:
    """``(lemma, level) -> successor state t`` of the last failed push."""

    def __init__(self):
        self._table: dict[tuple[Clause, int], Cube] = {}

    def record(self, clause: Clause, level: int, successor: Cube):
        self._table[(clause, level)] = successor

    def get(self, clause: Clause, level: int) -> Optional[Cube]:
        return self._table.get((clause, level))

    def __contains__(self, key) -> bool:
        return key in self._table

    def __len__(self) -> int:
        return len(self._table)

    def clear(self):
        self._table.clear()


def record_push_failure(table: FailurePushTable, clause: Clause, level: int, successor: Cube):
    table.record(clause, level, successor)


@dataclass
class PredictionStats:
    n_sp: int = 0  # successful predictions
    n_p: int = 0  # prediction SAT queries
    n_fp: int = 0  # generalizations that found a failed-push parent
    n_g: int = 0  # generalizations
    parent_push_successes: int = 0
    extension_successes: int = 0
    refinements: int = 0  # failed candidate followed by a ds update
    refinement_prunes: int = 0  # ds update removed a not-yet-tried candidate

    def consistent(self) -> bool:
        return self.n_sp <= self.n_p and self.n_fp <= self.n_g and self.n_sp <= self.n_g


@dataclass(frozen=True)
class PredictionEvent:
    """One successful prediction, kept for offline contract checks."""

    kind: str  # "extension" or "parent_push"
    level: int
    blocked: Cube
    parent: Clause
    successor: Cube
    result: Cube
    frame: tuple[Clause, ...] = field(default=(), repr=False)


def parent_lemmas(frames: FrameSequence, clause: Clause, level: int) -> list[Lemma]:
    """Lemmas exactly at ``level`` that subsume ``clause``, in insertion order."""
    if level == 0:
        return []
    cs = clause.literal_set
    return [lem for lem in frames.lemmas_at_exactly(level) if lem.clause.literal_set <= cs]


def contract_violations(event: PredictionEvent, init: Cube) -> list[str]:
    """Syntactic guarantees a predicted cube must satisfy.

    Relative induction is the one condition this cannot decide; check it
    separately against ``event.frame``.
    """
    out = []
    c3, b, t = event.result, event.blocked, event.successor
    c2 = negate(event.parent)
    if not c3.issubset(b):
        out.append("predicted cube is not a subset of the blocked cube")
    if not initiated(init, c3):
        out.append("predicted lemma excludes an initial state")
    if event.kind == "extension":
        if not c2.issubset(c3):
            out.append("parent cube is not a subset of the predicted cube")
        if len(c3) != len(c2) + 1:
            out.append("predicted cube is not exactly one literal longer than its parent")
        if not diff(c3, t):
            out.append("predicted cube intersects the failed-push successor")
    elif c3 != c2:
        out.append("pushed parent differs from the returned cube")
    return out


class LemmaPredictor:
    """Owns the failure-push table and statistics for one engine run."""

    def __init__(self, record_events: bool = False, check_contract: bool = False):
        self.table = FailurePushTable()
        self.stats = PredictionStats()
        self.record_events = record_events
        self.check_contract = check_contract
        self.events: list[PredictionEvent] = []

    def predict(self, engine, b: Cube, level: int) -> Optional[Cube]:
        """Try to find a lemma blocking ``b`` at ``level`` without dropping literals.

        ``engine`` supplies ``frames``, ``ts`` and ``inductive_relative``.
        Returns the predicted cube or None.
        """
        frames = engine.frames
        stats = self.stats
        below = level - 1
        found_parent = False
        try:
            for parent in parent_lemmas(frames, negate(b), below):
                p = parent.clause
                t = self.table.get(p, below)
                if t is None:
                    continue
                found_parent = True
                ds = diff(b, t)
                if not ds:
                    # b and t overlap: try moving the parent itself up a level
                    stats.n_p += 1
                    cti = engine.inductive_relative(p, below, phase="prediction")
                    if cti is None:
                        return self._success("parent_push", engine, level, b, p, t, negate(p))
                    self.table.record(p, below, cti.successor)
                    continue
                remaining = set(ds)
                while remaining:
                    d = min(remaining)
                    remaining.discard(d)
                    cand = Clause._trusted(p.literal_set | {d ^ 1})
                    stats.n_p += 1
                    cti = engine.inductive_relative(cand, below, phase="prediction")
                    if cti is None:
                        return self._success("extension", engine, level, b, p, t, negate(cand))
                    stats.refinements += 1
                    before = len(remaining)
                    ds = ds & diff(b, cti.successor)
                    remaining &= ds
                    if len(remaining) < before:
                        stats.refinement_prunes += 1
            return None
        finally:
            if found_parent:
                stats.n_fp += 1

    def _success(self, kind, engine, level, b, parent, t, result):
        self.stats.n_sp += 1
        if kind == "extension":
            self.stats.extension_successes += 1
        else:
            self.stats.parent_push_successes += 1
        if self.record_events or self.check_contract:
            frame = tuple(engine.frames.frame_clauses(level - 1)) if self.record_events else ()
            event = PredictionEvent(kind, level, b, parent, t, result, frame)
            if self.check_contract:
                problems = contract_violations(event, engine.ts.init)
                assert not problems, f"prediction contract broken: {problems}"
            if self.record_events:
                self.events.append(event)
        return result
