import pytest

from ic3pl.certification import (Reach, Trace, check_invariant, explicit_reach, format_witness,
                                 replay)
from ic3pl.engine import Options, Safe, Unsafe, check
from ic3pl.logic import Clause
from ic3pl.models import AigBuilder, random_aig, toy_models
from ic3pl.transition_system import encode

HOLD = encode(toy_models()["hold"])
TOGGLE = encode(toy_models()["toggle"])


def test_hold_invariant_valid():
    assert check_invariant(HOLD, [Clause([3])]) is None


def test_toggle_invariant_breaks_consecution():
    v = check_invariant(TOGGLE, [Clause([3])])
    assert v.condition == "consecution"
    assert v.witness["state"] == (False,) and v.witness["next"] == (True,)


def test_empty_invariant_violates_property():
    assert check_invariant(HOLD, []).condition == "property"


def test_invariant_missing_init():
    assert check_invariant(HOLD, [Clause([2])]).condition == "initiation"


def test_replay_examples():
    good = Trace((((False,), ()), ((True,), ())))
    assert replay(TOGGLE, good) is None
    swapped = Trace((((True,), ()), ((False,), ())))
    assert replay(TOGGLE, swapped).reason == "init violated"
    assert replay(TOGGLE, swapped).step == 0
    short = Trace((((False,), ()),))
    assert replay(TOGGLE, short).reason == "property not violated"


@pytest.mark.parametrize("trace,step", [
    (Trace(()), 0),
    (Trace((((False,), ()), ((False,), ()))), 1),
    (Trace((((False, True), ()),)), 0),
])
def test_replay_broken(trace, step):
    assert replay(TOGGLE, trace).step == step


def test_explicit_reach_examples():
    r = explicit_reach(toy_models()["counter2"])
    assert r.status is Reach.UNSAFE and r.depth == 3
    r = explicit_reach(toy_models()["hold"])
    assert r.status is Reach.SAFE and r.reachable == 1
    b = AigBuilder()
    xs = [b.latch() for _ in range(20)]
    for x in xs:
        b.set_next(x, x)
    assert explicit_reach(b.build(xs[0])).status is Reach.TOO_LARGE


def test_explicit_reach_uninitialized_latch():
    b = AigBuilder()
    x = b.latch(reset=None)
    b.set_next(x, x)
    r = explicit_reach(b.build(x))
    assert r.status is Reach.UNSAFE and r.depth == 0


def test_witness_format():
    v = check(TOGGLE)
    assert format_witness(TOGGLE, v.trace) == "1\nb0\n\n\n.\n"
    ts = encode(toy_models()["toggle_enable"])
    v = check(ts)
    lines = format_witness(ts, v.trace).splitlines()
    assert lines[:2] == ["1", "b0"] and lines[-1] == "."
    assert len(lines) == len(v.trace) + 3 and all(len(l) == 1 for l in lines[2:-1])


def test_witness_with_uninitialized_latch_lists_start_state():
    b = AigBuilder()
    i = b.input()
    x, y = b.latch(reset=None), b.latch()
    b.set_next(x, x)
    b.set_next(y, b.and_(x, i))
    ts = encode(b.build(y))
    v = check(ts)
    assert isinstance(v, Unsafe)
    lines = format_witness(ts, v.trace).splitlines()
    assert lines[2] == "10"


@pytest.mark.parametrize("seed", range(40))
def test_engine_certificates(seed):
    ts = encode(random_aig(seed))
    v = check(ts, Options(certify=False))
    if isinstance(v, Safe):
        assert check_invariant(ts, v.invariant) is None
    else:
        assert replay(ts, v.trace) is None
