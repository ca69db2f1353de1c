"""Brute-force reference implementations used by the tests."""

from __future__ import annotations

import itertools
import random

from ic3pl.logic import Cube, make_lit


def assignments(nvars):
    """All total assignments over variables 1..nvars as {var: bool}."""
    for bits in itertools.product((False, True), repeat=nvars):
        yield dict(zip(range(1, nvars + 1), bits))


def lit_true(lit, a):
    return a[lit >> 1] != bool(lit & 1)


def cube_holds(cube, a):
    return all(lit_true(l, a) for l in cube.lits)


def brute_sat(clauses, nvars, assumptions=()):
    for a in assignments(nvars):
        if all(lit_true(l, a) for l in assumptions) and \
                all(any(lit_true(l, a) for l in c) for c in clauses):
            return True
    return False


def cubes_conflict(a, b, nvars):
    return not any(cube_holds(a, x) and cube_holds(b, x) for x in assignments(nvars))


def cube_implies(a, b, nvars):
    return all(cube_holds(b, x) for x in assignments(nvars) if cube_holds(a, x))


def random_cube(rng: random.Random, nvars: int, nonempty=True) -> Cube:
    k = rng.randint(1 if nonempty else 0, nvars)
    vs = rng.sample(range(1, nvars + 1), k)
    return Cube(make_lit(v, rng.random() < 0.5) for v in vs)


def random_cnf(rng: random.Random, nvars: int, nclauses: int, width=3):
    out = []
    for _ in range(nclauses):
        k = rng.randint(1, width)
        vs = rng.sample(range(1, nvars + 1), min(k, nvars))
        out.append([make_lit(v, rng.random() < 0.5) for v in vs])
    return out
