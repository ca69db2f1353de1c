"""Independent checks of verdicts, plus an explicit-state oracle.

Nothing here touches engine state: invariants are checked with fresh
solver sessions, traces are replayed on the AIG itself, and the oracle
simulates the AIG over the whole state space with numpy.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .aiger import AigerModel
from .logic import Clause
from .sat import make_solver
from .transition_system import TransitionSystem


@dataclass(frozen=True)
class Trace:
    """Counterexample: per step, latch values and the input applied in that step.

    The inputs of the last step are the ones that raise the bad signal.
    """

    steps: tuple[tuple[tuple[bool, ...], tuple[bool, ...]], ...]

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class Violation:
    condition: str  # "initiation", "consecution" or "property"
    witness: dict


@dataclass(frozen=True)
class Broken:
    step: int
    reason: str


def _negation_selector(solver, clauses: Sequence[Clause], rename=lambda l: l):
    """Add clauses making the solver satisfy the negation of a CNF."""
    if not clauses:
        solver.add_clause([])
        return
    selectors = []
    for c in clauses:
        a = solver.new_activation()
        selectors.append(a)
        for l in c.lits:
            solver.add_clause([a ^ 1, rename(l) ^ 1])
    solver.add_clause(selectors)


def _witness(ts, solver, primed=False):
    w = {"state": tuple(solver.model_value(v) for v in ts.latch_vars),
         "inputs": tuple(solver.model_value(v) for v in ts.input_vars)}
    if primed:
        w["next"] = tuple(solver.model_value(ts.prime_map[v]) for v in ts.latch_vars)
    return w


def check_invariant(ts: TransitionSystem, inv: Iterable[Clause],
                    backend: str = "reference") -> Optional[Violation]:
    """None when ``inv`` is an inductive invariant proving the property."""
    inv = list(inv)

    def fresh():
        s = make_solver(backend)
        s.ensure_vars(ts.num_vars)
        return s

    s = fresh()
    for l in ts.init.lits:
        s.add_clause([l])
    _negation_selector(s, inv)
    if s.solve():
        return Violation("initiation", _witness(ts, s))

    s = fresh()
    for c in list(ts.trans) + inv:
        s.add_clause(c.lits)
    _negation_selector(s, inv, ts.prime_lit)
    if s.solve():
        return Violation("consecution", _witness(ts, s, primed=True))

    s = fresh()
    for c in list(ts.trans) + inv:
        s.add_clause(c.lits)
    if s.solve([ts.bad]):
        return Violation("property", _witness(ts, s))
    return None


def is_relatively_inductive(ts: TransitionSystem, frame: Iterable[Clause], clause: Clause,
                            backend: str = "reference") -> bool:
    """``frame & clause & T & ~clause'`` is unsatisfiable (fresh session)."""
    s = make_solver(backend)
    s.ensure_vars(ts.num_vars)
    for c in list(ts.trans) + list(frame) + [clause]:
        s.add_clause(c.lits)
    return not s.solve([ts.prime_lit(l ^ 1) for l in clause.lits])


def replay(ts_or_model, trace: Trace) -> Optional[Broken]:
    """Simulate ``trace`` on the circuit. None when it is a genuine counterexample."""
    model = ts_or_model.model if isinstance(ts_or_model, TransitionSystem) else ts_or_model
    steps = trace.steps
    if not steps:
        return Broken(0, "empty trace")
    nl, ni = len(model.latches), len(model.inputs)
    for idx, (state, inputs) in enumerate(steps):
        if len(state) != nl or len(inputs) != ni:
            return Broken(idx, "assignment width does not match the circuit")
    if not model.is_initial(steps[0][0]):
        return Broken(0, "init violated")
    for idx in range(len(steps) - 1):
        nxt, _ = model.simulate(*steps[idx])
        if tuple(nxt) != tuple(bool(x) for x in steps[idx + 1][0]):
            return Broken(idx + 1, "state is not the successor of the previous step")
    _, bad = model.simulate(*steps[-1])
    if not bad:
        return Broken(len(steps) - 1, "property not violated")
    return None


class Reach(enum.Enum):
    SAFE = "safe"
    UNSAFE = "unsafe"
    TOO_LARGE = "too_large"


@dataclass(frozen=True)
class ReachResult:
    status: Reach
    depth: Optional[int] = None
    reachable: Optional[int] = None


def _simulate_all(model: AigerModel, input_bits: int):
    """Next-state index and bad flag of every state for one input vector."""
    nl = len(model.latches)
    states = np.arange(1 << nl, dtype=np.int64)
    ones = np.ones(1 << nl, dtype=bool)
    val = {0: ~ones}
    for j, latch in enumerate(model.latches):
        val[latch.lit] = ((states >> j) & 1).astype(bool)
    for j, lit in enumerate(model.inputs):
        val[lit] = ones if (input_bits >> j) & 1 else ~ones

    def get(l):
        v = val[l & ~1]
        return ~v if l & 1 else v

    for lhs, r0, r1 in model.ands:
        val[lhs] = get(r0) & get(r1)
    nxt = np.zeros(1 << nl, dtype=np.int64)
    for j, latch in enumerate(model.latches):
        nxt |= get(latch.next).astype(np.int64) << j
    return nxt, get(model.bad)


def explicit_reach(ts_or_model, latch_budget: int = 16, input_budget: int = 12) -> ReachResult:
    """Breadth-first search over all states and inputs.

    Returns the minimal number of transitions to a state that can raise the
    bad signal, SAFE when the reachable set closes first, or TOO_LARGE.
    """
    model = ts_or_model.model if isinstance(ts_or_model, TransitionSystem) else ts_or_model
    nl, ni = len(model.latches), len(model.inputs)
    if nl > latch_budget or ni > input_budget:
        return ReachResult(Reach.TOO_LARGE)
    n_states = 1 << nl
    succs = []
    bad_state = np.zeros(n_states, dtype=bool)
    for inp in range(1 << ni):
        nxt, bad = _simulate_all(model, inp)
        succs.append(nxt)
        bad_state |= bad
    states = np.arange(n_states, dtype=np.int64)
    init = np.ones(n_states, dtype=bool)
    for j, latch in enumerate(model.latches):
        if latch.reset is not None:
            init &= ((states >> j) & 1) == latch.reset
    visited = init.copy()
    frontier = init
    depth = 0
    while True:
        if (frontier & bad_state).any():
            return ReachResult(Reach.UNSAFE, depth, int(visited.sum()))
        reached = np.zeros(n_states, dtype=bool)
        for nxt in succs:
            reached[nxt[frontier]] = True
        new = reached & ~visited
        if not new.any():
            return ReachResult(Reach.SAFE, None, int(visited.sum()))
        visited |= new
        frontier = new
        depth += 1


def format_witness(ts: TransitionSystem, trace: Trace) -> str:
    """AIGER stimulus: ``1``, ``b0``, one line of input bits per step, ``.``.

    An initial-state line is inserted after ``b0`` only when some latch is
    uninitialized, since the initial state is otherwise implied.
    """
    lines = ["1", "b0"]
    if any(l.reset is None for l in ts.model.latches):
        lines.append("".join("1" if v else "0" for v in trace.steps[0][0]))
    for _, inputs in trace.steps:
        lines.append("".join("1" if v else "0" for v in inputs))
    lines.append(".")
    return "\n".join(lines) + "\n"
