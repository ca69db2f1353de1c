"""Incremental SAT solving under assumptions.

All solvers here speak the AIGER literal encoding of :mod:`ic3pl.logic`
(``2*v`` / ``2*v + 1``). Clauses are never removed; a clause added with an
activation ``tag`` only constrains calls that assume the tag, and
:meth:`release` disables the tag for good.
"""

from __future__ import annotations

import heapq
import time
from typing import Iterable, Optional, Sequence

from .logic import to_dimacs


class SolverBudgetExceeded(RuntimeError):
    """The solver gave up (conflict budget or deadline); the answer is unknown."""


class SolverTimeout(SolverBudgetExceeded):
    pass


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class CdclSolver:
    """Reference CDCL solver.

    Two watched literals, first-UIP learning with local minimization, VSIDS
    branching with phase saving (initial phase false), Luby restarts and
    MiniSat-style assumption handling. Deterministic for a given call history.
    """

    restart_base = 100
    var_decay = 0.95

    def __init__(self, conflict_budget: Optional[int] = None):
        self.nvars = 0
        self.conflict_budget = conflict_budget
        self.val = [0, 0]
        self.level = [0]
        self.reason: list = [None]
        self.activity = [0.0]
        self.phase = [False]
        self.seen = [False]
        self.watches: list[list] = [[], []]
        self.clauses: list[list[int]] = []
        self.learnts: list[list[int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list = []
        self.var_inc = 1.0
        self.ok = True
        self.model: Optional[list] = None
        self.max_learnts = 1000
        self.log: list[tuple[int, ...]] = []
        self.n_solves = 0
        self.n_conflicts = 0
        self._level0_mark = 0

    # -- variables ---------------------------------------------------------

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.val += (0, 0)
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(False)
        self.seen.append(False)
        self.watches += ([], [])
        heapq.heappush(self.heap, (-0.0, v))
        return v

    def ensure_vars(self, n: int):
        while self.nvars < n:
            self.new_var()

    def new_activation(self) -> int:
        return 2 * self.new_var()

    def release(self, act: int):
        self.add_clause([act ^ 1])

    # -- clauses -----------------------------------------------------------

    def add_clause(self, lits: Iterable[int], tag: Optional[int] = None):
        lits = list(lits)
        if tag is not None:
            lits.append(tag ^ 1)
        self.log.append(tuple(lits))
        if not self.ok:
            return
        if lits:
            self.ensure_vars(max(lits) >> 1)
        assert not self.trail_lim, "add_clause called during search"
        val = self.val
        s = set(lits)
        out = []
        for l in sorted(s):
            if l ^ 1 in s or val[l] == 1:
                return
            if val[l] == 0:
                out.append(l)
        if not out:
            self.ok = False
        elif len(out) == 1:
            self._enqueue(out[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self.clauses.append(out)
            self.watches[out[0]].append(out)
            self.watches[out[1]].append(out)

    # -- core --------------------------------------------------------------

    def _enqueue(self, lit, reason):
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        val = self.val
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        confl = None
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        confl = c
                    else:
                        val[first] = 1
                        val[first ^ 1] = -1
                        v = first >> 1
                        level[v] = dl
                        reason[v] = c
                        trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.qhead = qhead if confl is None else len(trail)
        return confl

    def _bump(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.nvars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _rebuild_heap(self):
        self.heap = [(-self.activity[v], v) for v in range(1, self.nvars + 1)
                     if self.val[2 * v] == 0]
        heapq.heapify(self.heap)

    def _analyze(self, confl):
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = None
        idx = len(trail) - 1
        c = confl
        while True:
            for q in (c if p is None else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = True
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            c = reason[p >> 1]
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        # local minimization: drop literals implied by other learnt literals
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or any(not seen[x >> 1] and level[x >> 1] > 0 for x in r[1:]):
                kept.append(q)
        for q in learnt[1:]:
            seen[q >> 1] = False
        bt = 0
        if len(kept) > 1:
            mi = 1
            for k in range(2, len(kept)):
                if level[kept[k] >> 1] > level[kept[mi] >> 1]:
                    mi = k
            kept[1], kept[mi] = kept[mi], kept[1]
            bt = level[kept[1] >> 1]
        return kept, bt

    def _cancel_until(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        lim = self.trail_lim[lvl]
        trail = self.trail
        val = self.val
        phase = self.phase
        reason = self.reason
        act = self.activity
        heap = self.heap
        for k in range(len(trail) - 1, lim - 1, -1):
            l = trail[k]
            v = l >> 1
            val[l] = 0
            val[l ^ 1] = 0
            reason[v] = None
            phase[v] = not (l & 1)
            heapq.heappush(heap, (-act[v], v))
        del trail[lim:]
        del self.trail_lim[lvl:]
        self.qhead = lim

    def _pick_branch(self):
        heap = self.heap
        val = self.val
        act = self.activity
        while heap:
            k, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -k == act[v]:
                return 2 * v if self.phase[v] else 2 * v + 1
        return None

    def _simplify(self):
        """Level-0 cleanup: drop satisfied clauses, strip false literals, rewatch."""
        val = self.val

        def clean(cs):
            out = []
            for c in cs:
                if any(val[l] == 1 for l in c):
                    continue
                out.append([l for l in c if val[l] == 0])
            return out

        self.clauses = clean(self.clauses)
        self.learnts = clean(self.learnts)
        self._rewatch()
        self._level0_mark = len(self.trail)

    def _rewatch(self):
        for ws in self.watches:
            ws.clear()
        for c in self.clauses:
            self.watches[c[0]].append(c)
            self.watches[c[1]].append(c)
        for c in self.learnts:
            self.watches[c[0]].append(c)
            self.watches[c[1]].append(c)
        for v in range(1, self.nvars + 1):
            self.reason[v] = None

    def _reduce_learnts(self):
        self.learnts.sort(key=len)
        del self.learnts[len(self.learnts) // 2:]
        self.max_learnts = int(self.max_learnts * 1.1)

    def _search(self, nof_conflicts, assumptions, deadline):
        conflicts = 0
        trail_lim = self.trail_lim
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                self.n_conflicts += 1
                if not trail_lim:
                    self.ok = False
                    return False
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.learnts.append(learnt)
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self._enqueue(learnt[0], learnt)
                self.var_inc /= self.var_decay
                if self.conflict_budget is not None:
                    self.conflict_budget -= 1
                    if self.conflict_budget < 0:
                        raise SolverBudgetExceeded("conflict budget exhausted")
                if deadline is not None and not self.n_conflicts & 63 \
                        and time.monotonic() > deadline:
                    raise SolverTimeout("deadline reached during SAT search")
                continue
            if conflicts >= nof_conflicts:
                self._cancel_until(0)
                return None
            nxt = None
            while len(trail_lim) < len(assumptions):
                p = assumptions[len(trail_lim)]
                v = self.val[p]
                if v == 1:
                    trail_lim.append(len(self.trail))
                elif v == -1:
                    return False
                else:
                    nxt = p
                    break
            if nxt is None:
                nxt = self._pick_branch()
                if nxt is None:
                    return True
            trail_lim.append(len(self.trail))
            self._enqueue(nxt, None)

    def solve(self, assumptions: Sequence[int] = (), deadline: Optional[float] = None) -> bool:
        """True iff the active clauses and the assumptions are satisfiable."""
        self.model = None
        self.n_solves += 1
        if not self.ok:
            return False
        if assumptions:
            self.ensure_vars(max(assumptions) >> 1)
        if len(self.trail) - self._level0_mark > 20:
            self._simplify()
        if len(self.learnts) > self.max_learnts:
            self._reduce_learnts()
            self._rewatch()
        assumptions = list(assumptions)
        restarts = 0
        try:
            while True:
                r = self._search(luby(restarts) * self.restart_base, assumptions, deadline)
                restarts += 1
                if r is not None:
                    break
            if r:
                val = self.val
                self.model = [False] + [val[2 * v] == 1 for v in range(1, self.nvars + 1)]
            return r
        finally:
            self._cancel_until(0)

    def model_value(self, var: int) -> bool:
        if self.model is None:
            raise RuntimeError("no model: the last solve call was not satisfiable")
        if var < len(self.model):
            return self.model[var]
        return False

    def lit_value(self, lit: int) -> bool:
        return self.model_value(lit >> 1) ^ bool(lit & 1)

    def dimacs(self) -> str:
        out = [f"p cnf {self.nvars} {len(self.log)}"]
        out += [" ".join(str(to_dimacs(l)) for l in c) + " 0" for c in self.log]
        return "\n".join(out) + "\n"


class PysatSolver:
    """Same contract backed by a PySAT solver (optional dependency)."""

    def __init__(self, name: str = "minisat22", conflict_budget: Optional[int] = None):
        from pysat.solvers import Solver

        self._s = Solver(name=name)
        self.name = name
        self.nvars = 0
        self.conflict_budget = conflict_budget
        self.model: Optional[list] = None
        self.log: list[tuple[int, ...]] = []
        self.n_solves = 0

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def ensure_vars(self, n: int):
        self.nvars = max(self.nvars, n)

    def new_activation(self) -> int:
        return 2 * self.new_var()

    def release(self, act: int):
        self.add_clause([act ^ 1])

    def add_clause(self, lits: Iterable[int], tag: Optional[int] = None):
        lits = list(lits)
        if tag is not None:
            lits.append(tag ^ 1)
        self.log.append(tuple(lits))
        if lits:
            self.ensure_vars(max(lits) >> 1)
        self._s.add_clause([to_dimacs(l) for l in lits])

    def solve(self, assumptions: Sequence[int] = (), deadline: Optional[float] = None) -> bool:
        self.n_solves += 1
        self.model = None
        if assumptions:
            self.ensure_vars(max(assumptions) >> 1)
        assum = [to_dimacs(l) for l in assumptions]
        if self.conflict_budget is not None:
            self._s.conf_budget(self.conflict_budget)
            r = self._s.solve_limited(assumptions=assum)
            if r is None:
                raise SolverBudgetExceeded("conflict budget exhausted")
        else:
            r = self._s.solve(assumptions=assum)
        if r:
            m = [False] * (self.nvars + 1)
            for d in self._s.get_model() or ():
                if abs(d) <= self.nvars:
                    m[abs(d)] = d > 0
            self.model = m
        return bool(r)

    def model_value(self, var: int) -> bool:
        if self.model is None:
            raise RuntimeError("no model: the last solve call was not satisfiable")
        return self.model[var] if var < len(self.model) else False

    def lit_value(self, lit: int) -> bool:
        return self.model_value(lit >> 1) ^ bool(lit & 1)

    def dimacs(self) -> str:
        out = [f"p cnf {self.nvars} {len(self.log)}"]
        out += [" ".join(str(to_dimacs(l)) for l in c) + " 0" for c in self.log]
        return "\n".join(out) + "\n"

    def __del__(self):
        s = getattr(self, "_s", None)
        if s is not None:
            s.delete()


BACKENDS = ("reference", "minisat22", "cadical153", "glucose4")


def make_solver(backend: str = "reference", conflict_budget: Optional[int] = None):
    if backend == "reference":
        return CdclSolver(conflict_budget)
    if backend in BACKENDS:
        return PysatSolver(backend, conflict_budget)
    raise ValueError(f"unknown SAT backend {backend!r}; choose from {', '.join(BACKENDS)}")
