"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are collected
into an "acceptance criteria" section of the terminal summary.
"""

import random
import sys
import time
from dataclasses import dataclass

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from ic3pl.certification import (Reach, check_invariant, explicit_reach, is_relatively_inductive,
                                 replay)
from ic3pl.engine import IC3, Options, Safe, Unsafe
from ic3pl.logic import Cube, diff, make_lit, negate
from ic3pl.models import (counter, random_aig, random_local_aig, ring_counter, shift_register,
                          toy_models)
from ic3pl.prediction import contract_violations
from ic3pl.report import success_rates
from ic3pl.sat import CdclSolver
from ic3pl.transition_system import encode

N_RANDOM = 150  # per generator, so 300 random AIGs
TIME_LIMIT = 300.0


def verdict(ok: bool, number: int, title: str, detail: str, gated: bool = True):
    tag = ("PASS" if ok else "FAIL") if gated else ("PASS (soft)" if ok else "FAIL (soft)")
    line = f"[{tag}] criterion {number}: {title} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    if gated:
        assert ok, line


# -- shared corpus ---------------------------------------------------------


@dataclass
class Run:
    name: str
    prediction: bool
    verdict: object
    engine: IC3


def corpus():
    out = {f"toy_{n}": m for n, m in toy_models().items()}
    for seed in range(N_RANDOM):
        out[f"rand_{seed:04d}"] = random_aig(seed)
        out[f"local_{seed:04d}"] = random_local_aig(seed)
    return out


def run_all(models):
    runs = []
    for name, model in models.items():
        ts = encode(model)
        for prediction in (True, False):
            opts = Options(prediction=prediction, record_predictions=prediction, certify=False)
            eng = IC3(ts, opts)
            runs.append(Run(name, prediction, eng.check(), eng))
    return runs


def fingerprint(run: Run):
    e = run.engine
    return (run.name, run.prediction, type(run.verdict).__name__,
            tuple(sorted(e.stats.lemmas.items())), e.stats.pushes,
            tuple(sorted(e.stats.queries.items())), e.frames.num_lemmas(), e.k)


@pytest.fixture(scope="module")
def suite():
    models = corpus()
    start = time.monotonic()
    oracle = {n: explicit_reach(m) for n, m in models.items()}
    runs = run_all(models)
    elapsed = time.monotonic() - start
    return models, oracle, runs, elapsed


# -- criteria --------------------------------------------------------------


def test_criterion_1_oracle_equivalence(suite):
    models, oracle, runs, elapsed = suite
    n_random = sum(1 for n in models if not n.startswith("toy_"))
    mismatches = []
    for r in runs:
        want = oracle[r.name].status
        got = r.verdict
        ok = (want is Reach.SAFE and isinstance(got, Safe)) or \
             (want is Reach.UNSAFE and isinstance(got, Unsafe))
        if not ok:
            mismatches.append((r.name, r.prediction, got))
    ok = n_random >= 200 and not mismatches and elapsed < TIME_LIMIT
    verdict(ok, 1, "oracle equivalence",
            f"{n_random} random + {len(models) - n_random} toys, {len(runs)} runs (ON and OFF), "
            f"{len(runs) - len(mismatches)}/{len(runs)} agree, {elapsed:.1f}s total"
            + (f", mismatches {mismatches[:5]}" if mismatches else ""))


def test_criterion_2_certificates(suite):
    models, _, runs, _ = suite
    bad = []
    n_safe = n_unsafe = 0
    for r in runs:
        ts = r.engine.ts
        if isinstance(r.verdict, Safe):
            n_safe += 1
            v = check_invariant(ts, r.verdict.invariant)
            if v is not None:
                bad.append((r.name, r.prediction, v.condition))
        elif isinstance(r.verdict, Unsafe):
            n_unsafe += 1
            b = replay(ts, r.verdict.trace)
            if b is not None:
                bad.append((r.name, r.prediction, b.reason))
        else:
            bad.append((r.name, r.prediction, "no verdict"))
    verdict(not bad, 2, "certificate validity",
            f"{n_safe} invariants checked, {n_unsafe} traces replayed, {len(bad)} violations"
            + (f": {bad[:5]}" if bad else ""))


def _cube_masks(nvars):
    """Bitmask over all 2^nvars assignments of where each literal is true."""
    idx = np.arange(1 << nvars)
    masks = {}
    for v in range(1, nvars + 1):
        bits = ((idx >> (v - 1)) & 1).astype(bool)
        pos = int("".join("1" if b else "0" for b in bits[::-1]), 2)
        masks[make_lit(v)] = pos
        masks[make_lit(v, True)] = ((1 << (1 << nvars)) - 1) ^ pos
    return masks


def test_criterion_3_diff_set_theorems():
    rng = random.Random(2024)
    nvars = 8
    full = (1 << (1 << nvars)) - 1
    masks = _cube_masks(nvars)

    def models_of(c):
        m = full
        for l in c.lits:
            m &= masks[l]
        return m

    def rand_cube():
        k = rng.randint(1, nvars)
        return Cube(make_lit(v, rng.random() < 0.5) for v in rng.sample(range(1, nvars + 1), k))

    n = 10_000
    failures = [0, 0, 0]
    premises = 0
    for _ in range(n):
        a, b, c = rand_cube(), rand_cube(), rand_cube()
        ma, mb = models_of(a), models_of(b)
        # conflict: a & b unsatisfiable iff diff(a, b) nonempty
        if ((ma & mb) == 0) != bool(diff(a, b)):
            failures[0] += 1
        # propagation: c meeting diff(a, b) makes c & b unsatisfiable
        d = diff(a, b)
        if d and c.literal_set & d:
            premises += 1
            if not diff(c, b) or (models_of(c) & mb) != 0:
                failures[1] += 1
        # implication: a implies b iff b is a subset of a
        if ((ma & ~mb & full) == 0) != b.issubset(a):
            failures[2] += 1
    verdict(failures == [0, 0, 0], 3, "diff-set theorems",
            f"{n} random cube triples over {nvars} vars, brute-force masks; "
            f"failures conflict={failures[0]} propagation={failures[1]} "
            f"({premises} premises) implication={failures[2]}")


def test_criterion_4_prediction_contract(suite):
    _, _, runs, _ = suite
    n_events = 0
    problems = []
    kinds = {"extension": 0, "parent_push": 0}
    prunes = 0
    for r in runs:
        if not r.prediction:
            continue
        ts = r.engine.ts
        prunes += r.engine.prediction_stats.refinement_prunes
        for ev in r.engine.predictor.events:
            n_events += 1
            kinds[ev.kind] += 1
            p = contract_violations(ev, ts.init)
            if not is_relatively_inductive(ts, ev.frame, negate(ev.result)):
                p.append("not inductive relative to the frame below")
            if p:
                problems.append((r.name, ev.kind, p))
    covered = kinds["extension"] > 0 and kinds["parent_push"] > 0 and prunes > 0
    verdict(not problems and covered, 4, "predicted-lemma contract",
            f"{n_events} successful predictions checked (a)-(e), {len(problems)} violations; "
            f"extension path {kinds['extension']}, parent-push path {kinds['parent_push']}, "
            f"refinement prunes {prunes}")


def test_criterion_5_statistics(suite):
    _, _, runs, _ = suite
    bad = []
    sp = p = 0
    n_fp_runs = 0
    for r in runs:
        s = r.engine.prediction_stats
        rates = success_rates(s)
        if not (s.n_sp <= s.n_p and s.n_sp <= s.n_g and s.n_fp <= s.n_g):
            bad.append((r.name, "counter chain"))
        if any(x is not None and not 0.0 <= x <= 1.0 for x in rates):
            bad.append((r.name, "rate out of range"))
        if not r.prediction and (s.n_p or s.n_sp or s.n_fp):
            bad.append((r.name, "prediction counters moved with prediction off"))
        gen = r.engine.stats.lemmas
        if s.n_g != gen.get("generalized", 0) + gen.get("predicted", 0):
            bad.append((r.name, "N_g differs from lemma origins"))
        if s.n_fp > 0:
            n_fp_runs += 1
            sp += s.n_sp
            p += s.n_p
    agg = sp / p if p else 0.0
    verdict(not bad and agg > 0, 5, "statistics sanity",
            f"{len(runs)} runs in range with N_sp <= N_p, N_sp <= N_g; "
            f"aggregate SR_lp over {n_fp_runs} runs with N_fp > 0 = {100 * agg:.2f}%"
            + (f"; problems {bad[:5]}" if bad else ""))


def scaled_family():
    fam = {}
    for b in (3, 4, 5, 6):
        fam[f"counter{b}_mod"] = counter(b, target=(1 << b) - 1, modulus=(1 << b) - 2)
        fam[f"counter{b}_en_mod"] = counter(b, target=(1 << b) - 1, modulus=(1 << b) - 3,
                                            enable=True)
    for n in (3, 4, 5, 6, 8):
        fam[f"shift{n}_safe"] = shift_register(n, safe=True)
    for n in (4, 6, 8):
        fam[f"ring{n}"] = ring_counter(n)
    return fam


def test_criterion_6_query_reduction():
    rows = []
    for name, model in scaled_family().items():
        ts = encode(model)
        q = {}
        for prediction in (True, False):
            eng = IC3(ts, Options(prediction=prediction))
            eng.check()
            qs = eng.stats.queries
            q[prediction] = (qs["generalization"] + qs["prediction"], eng.prediction_stats)
        on, off = q[True][0], q[False][0]
        sr_adv = success_rates(q[True][1])[2]
        rows.append((name, on, off, on / off if off else float("nan"), sr_adv))
    fewer = sum(1 for r in rows if r[1] < r[2])
    lines = [f"    {'model':<18}{'ON':>6}{'OFF':>6}{'ratio':>8}{'SR_adv':>9}"]
    for name, on, off, ratio, sr in rows:
        srs = "n/a" if sr is None else f"{100 * sr:.1f}%"
        lines.append(f"    {name:<18}{on:>6}{off:>6}{ratio:>8.3f}{srs:>9}")
    table = "\n".join(lines)
    print(table)
    ACCEPTANCE_LINES.append("  generalization+prediction queries, prediction ON vs OFF:\n" + table)
    verdict(2 * fewer >= len(rows), 6, "query-reduction signal",
            f"ON used fewer generalization queries on {fewer}/{len(rows)} family members",
            gated=False)


def test_criterion_7_determinism(suite):
    models, _, runs, _ = suite
    again = run_all(models)
    first = [fingerprint(r) for r in runs]
    second = [fingerprint(r) for r in again]
    diffs = [a[:2] for a, b in zip(first, second) if a != b]
    verdict(not diffs and len(first) == len(second), 7, "determinism",
            f"{len(first)} runs repeated, {len(diffs)} differ in verdict, lemma or query counts"
            + (f": {diffs[:5]}" if diffs else ""))


def _brute_sat(cnf, nvars, assignments):
    """Vectorized enumeration: is any of the 2^nvars assignments a model?"""
    ok = np.ones(len(assignments), dtype=bool)
    for clause in cnf:
        sat = np.zeros(len(assignments), dtype=bool)
        for l in clause:
            col = assignments[:, (l >> 1) - 1]
            sat |= ~col if l & 1 else col
        ok &= sat
        if not ok.any():
            return False
    return bool(ok.any())


def test_criterion_8_sat_backend():
    rng = random.Random(8)
    tables = {n: ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(bool)
              for n in range(1, 13)}

    def rand_cnf(n, m):
        out = []
        for _ in range(m):
            k = rng.randint(1, min(4, n))
            out.append([make_lit(v, rng.random() < 0.5) for v in rng.sample(range(1, n + 1), k)])
        return out

    wrong = 0
    n_sat = 0
    for _ in range(1000):
        n = rng.randint(1, 12)
        cnf = rand_cnf(n, rng.randint(0, 40))
        s = CdclSolver()
        s.ensure_vars(n)
        for c in cnf:
            s.add_clause(c)
        got = s.solve()
        want = _brute_sat(cnf, n, tables[n])
        if got != want:
            wrong += 1
        elif got:
            n_sat += 1
            if not all(any(s.lit_value(l) for l in c) for c in cnf):
                wrong += 1
    inc_wrong = 0
    inc_calls = 0
    for _ in range(100):
        n = rng.randint(4, 12)
        s = CdclSolver()
        s.ensure_vars(n)
        acc = []
        for _ in range(8):
            batch = rand_cnf(n, rng.randint(1, 5))
            act = s.new_activation() if rng.random() < 0.3 else None
            for c in batch:
                s.add_clause(c, tag=act)
            assume = [make_lit(v, rng.random() < 0.5)
                      for v in rng.sample(range(1, n + 1), rng.randint(0, 3))]
            extra = [[l] for l in assume]
            inc_calls += 1
            if act is None:
                acc += batch
                got = s.solve(assume)
            else:
                got = s.solve(assume + [act])
                s.release(act)
            if got != _brute_sat(acc + extra + (batch if act else []), n, tables[n]):
                inc_wrong += 1
            inc_calls += 1
            if s.solve() != _brute_sat(acc, n, tables[n]):
                inc_wrong += 1
    verdict(wrong == 0 and inc_wrong == 0, 8, "SAT backend correctness",
            f"1000 random CNFs (<= 12 vars, <= 40 clauses, {n_sat} SAT): {wrong} wrong; "
            f"{inc_calls} incremental calls with activation literals: {inc_wrong} wrong")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
