"""IC3 with optional lemma prediction."""

from __future__ import annotations

import logging
import os
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from .certification import Trace, check_invariant, replay
from .frames import FrameSequence, Origin, audit, initiated
from .logic import Clause, Cube, negate
from .prediction import LemmaPredictor, PredictionStats
from .sat import SolverBudgetExceeded
from .transition_system import TransitionSystem

log = logging.getLogger(__name__)

PHASES = ("blocking", "generalization", "prediction", "propagation")


@dataclass
class Options:
    prediction: bool = True
    max_frames: Optional[int] = None
    timeout: Optional[float] = None
    max_depth: Optional[int] = None
    backend: str = "reference"
    conflict_budget: Optional[int] = None
    audit: bool = False
    record_predictions: bool = False
    check_prediction_contract: bool = False
    dimacs_dir: Optional[str] = None
    certify: bool = True


@dataclass(frozen=True)
class Safe:
    invariant: tuple[Clause, ...]


@dataclass(frozen=True)
class Unsafe:
    trace: Trace


@dataclass(frozen=True)
class Unknown:
    reason: str


Verdict = Union[Safe, Unsafe, Unknown]


@dataclass(frozen=True)
class Cti:
    """Model of a failed consecution query: ``predecessor -> successor``."""

    predecessor: Cube
    successor: Cube
    inputs: tuple[bool, ...]


@dataclass(eq=False)
class ProofObligation:
    cube: Cube
    level: int
    depth: int
    parent: Optional["ProofObligation"] = None
    # inputs applied in this state: into the parent's state, or raising bad at the root
    inputs: tuple[bool, ...] = ()


class _Abort(Exception):
    pass


@dataclass
class EngineStats:
    queries: Counter = field(default_factory=Counter)
    lemmas: Counter = field(default_factory=Counter)
    pushes: int = 0
    obligations: int = 0
    max_depth: int = 0


class IC3:
    """One model-checking run over a transition system.

    >>> verdict = IC3(ts, Options(prediction=True)).check()   # doctest: +SKIP
    """

    def __init__(self, ts: TransitionSystem, options: Optional[Options] = None):
        self.ts = ts
        self.options = options or Options()
        self.frames: Optional[FrameSequence] = None
        self.predictor = LemmaPredictor(self.options.record_predictions,
                                        self.options.check_prediction_contract)
        self.stats = EngineStats()
        self.k = 0
        self._deadline = None
        self.audit_failures: list[str] = []

    @property
    def prediction_stats(self) -> PredictionStats:
        return self.predictor.stats

    # -- SAT queries -------------------------------------------------------

    def _solve(self, s, assumptions, phase):
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise _Abort("timeout")
        self.stats.queries[phase] += 1
        return s.solve(assumptions, self._deadline)

    def _state_cube(self, s, primed=False) -> Cube:
        pm = self.ts.prime_map
        lits = []
        for v in self.ts.latch_vars:
            lits.append(2 * v + (0 if s.model_value(pm[v] if primed else v) else 1))
        return Cube._trusted(frozenset(lits))

    def _inputs(self, s) -> tuple[bool, ...]:
        return tuple(s.model_value(v) for v in self.ts.input_vars)

    def inductive_relative(self, clause: Clause, level: int, phase: str = "blocking") -> Optional[Cti]:
        """Query ``F_level & clause & T & ~clause'``.

        Returns None when the query is unsatisfiable (``clause`` is inductive
        relative to ``F_level``), otherwise the counterexample to induction.
        """
        assert level >= 0
        assumptions = [self.ts.prime_lit(l ^ 1) for l in clause.lits]
        s = self.frames.solver(level)
        act = None
        if not self.frames.contains(clause, level):
            act = s.new_activation()
            s.add_clause(clause.lits, tag=act)
            assumptions.insert(0, act)
        try:
            sat = self._solve(s, assumptions, phase)
            if not sat:
                return None
            return Cti(self._state_cube(s), self._state_cube(s, primed=True), self._inputs(s))
        finally:
            if act is not None:
                s.release(act)
                self.frames.mark_dirty(level)

    def get_predecessor(self, level: int) -> Cube:
        """Latch assignment of the last satisfying model at ``level``."""
        s = self.frames.solver(level)
        if s.model is None:
            raise RuntimeError(f"no model available at level {level}")
        return self._state_cube(s)

    def _bad_state(self, level: int):
        s = self.frames.solver(level)
        if not self._solve(s, [self.ts.bad], "blocking"):
            return None
        return self._state_cube(s), self._inputs(s)

    # -- generalization ----------------------------------------------------

    def generalize(self, b: Cube, level: int) -> Cube:
        return self._generalize(b, level)[0]

    def _generalize(self, b: Cube, level: int):
        self.predictor.stats.n_g += 1
        if self.options.prediction:
            predicted = self.predictor.predict(self, b, level)
            if predicted is not None:
                return predicted, Origin.PREDICTED
        init = self.ts.init
        for lit in sorted(b.lits, reverse=True):
            cand = b.without(lit)
            if not initiated(init, cand):
                continue
            if self.inductive_relative(negate(cand), level - 1, "generalization") is None:
                b = cand
        return b, Origin.GENERALIZED

    # -- blocking ----------------------------------------------------------

    def block(self, po: ProofObligation) -> bool:
        """Recursively block ``po``; False means a counterexample reached ``I``."""
        self.stats.obligations += 1
        self.stats.max_depth = max(self.stats.max_depth, po.depth)
        if po.level == 0:
            self._cex = po
            return False
        if self.options.max_depth is not None and po.depth > self.options.max_depth:
            raise _Abort("recursion depth cap")
        clause = negate(po.cube)
        while True:
            cti = self.inductive_relative(clause, po.level - 1, "blocking")
            if cti is None:
                break
            child = ProofObligation(cti.predecessor, po.level - 1, po.depth + 1, po, cti.inputs)
            if not self.block(child):
                return False
        b, origin = self._generalize(po.cube, po.level)
        mic = negate(b)
        i = po.level
        while i < self.k:
            cti = self.inductive_relative(mic, i, "blocking")
            if cti is not None:
                if self.options.prediction:
                    self.predictor.table.record(mic, i, cti.successor)
                break
            i += 1
        self.stats.lemmas[origin.value] += 1
        self.frames.add_lemma(mic, i, origin)
        return True

    # -- propagation -------------------------------------------------------

    def propagate(self) -> Optional[int]:
        """Push lemmas forward; returns ``i`` with ``F_i = F_{i+1}`` if found."""
        self.predictor.table.clear()
        for i in range(1, self.k):
            for lemma in self.frames.lemmas_at_exactly(i):
                if self.frames.level_of(lemma.clause) != i:
                    continue
                cti = self.inductive_relative(lemma.clause, i, "propagation")
                if cti is None:
                    self.frames.push(lemma, i)
                    self.stats.pushes += 1
                elif self.options.prediction:
                    self.predictor.table.record(lemma.clause, i, cti.successor)
            if not self.frames.delta[i]:
                return i
        return None

    # -- main loop ---------------------------------------------------------

    def _trace(self, po: ProofObligation) -> Trace:
        steps = []
        while po is not None:
            state = tuple(l & 1 == 0 for l in po.cube.lits)
            steps.append((state, tuple(po.inputs)))
            po = po.parent
        return Trace(tuple(steps))

    def _audit(self, where):
        if self.options.audit:
            problems = audit(self.frames, self.options.backend)
            if problems:
                self.audit_failures += [f"{where}: {p}" for p in problems]
                log.error("frame audit failed after %s: %s", where, problems)

    def _dump_dimacs(self):
        d = self.options.dimacs_dir
        if not d or self.frames is None:
            return
        os.makedirs(d, exist_ok=True)
        for lvl in range(self.frames.k + 1):
            with open(os.path.join(d, f"frame{lvl}.cnf"), "w") as fh:
                fh.write(self.frames.solver(lvl).dimacs())

    def check(self) -> Verdict:
        opts = self.options
        self._deadline = time.monotonic() + opts.timeout if opts.timeout else None
        try:
            verdict = self._run()
        except _Abort as e:
            verdict = Unknown(str(e))
        except SolverBudgetExceeded as e:
            verdict = Unknown(f"solver gave up: {e}")
        finally:
            self._dump_dimacs()
        if opts.certify:
            verdict = self._certify(verdict)
        return verdict

    def _certify(self, verdict: Verdict) -> Verdict:
        if isinstance(verdict, Safe):
            bad = check_invariant(self.ts, verdict.invariant, self.options.backend)
            if bad is not None:
                return Unknown(f"certificate rejected: {bad.condition} fails")
        elif isinstance(verdict, Unsafe):
            bad = replay(self.ts, verdict.trace)
            if bad is not None:
                return Unknown(f"trace rejected at step {bad.step}: {bad.reason}")
        return verdict

    def _run(self) -> Verdict:
        self.frames = FrameSequence(self.ts, self.options.backend, self.options.conflict_budget)
        self.k = 1
        hit = self._bad_state(0)
        if hit is not None:
            return Unsafe(Trace(((tuple(l & 1 == 0 for l in hit[0].lits), hit[1]),)))
        while True:
            while (hit := self._bad_state(self.k)) is not None:
                root = ProofObligation(hit[0], self.k, 0, None, hit[1])
                if not self.block(root):
                    return Unsafe(self._trace(self._cex))
                self._audit(f"blocking at k={self.k}")
            if self.options.max_frames is not None and self.k >= self.options.max_frames:
                return Unknown(f"frame limit {self.options.max_frames} reached")
            self.frames.extend()
            self.k += 1
            fix = self.propagate()
            self._audit(f"propagation at k={self.k}")
            if fix is not None:
                return Safe(tuple(self.frames.invariant(fix + 1)))


def check(ts: TransitionSystem, options: Optional[Options] = None) -> Verdict:
    return IC3(ts, options).check()
