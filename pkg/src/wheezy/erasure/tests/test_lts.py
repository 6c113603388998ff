""" Unit tests for ``wheezy.erasure.lts``.
"""

import unittest

from wheezy.erasure.corpus import load_entry
from wheezy.erasure.labels import (
    SYSTEM,
    USER,
    begin_erase,
    end_erase,
    in_label,
    mem_read,
    out_label,
)
from wheezy.erasure.lts import (
    InconsistentBalance,
    Lts,
    ValueDomain,
    bracket_balance,
    covers,
    distinguishing_trace,
    is_deterministic,
    is_input_enabled,
    replay,
    traces_to_depth,
    validate_lts,
)
from wheezy.erasure.verdict import EXHAUSTIVE

D = ValueDomain((0, 1))


def model(transitions, kind=SYSTEM, initial="s0", states=None):
    if states is None:
        states = set([initial])
        for source, _, target in transitions:
            states.update((source, target))
    return Lts(kind, states, initial, transitions, D, "test")


class ValueDomainTestCase(unittest.TestCase):
    def test_order(self):
        """Ensure values keep their declared order."""
        d = ValueDomain(("up", "down", 3))
        assert ("up", "down", 3) == tuple(d)
        assert 2 == d.index(3)
        assert "down" in d
        assert True not in ValueDomain((0, 1))

    def test_too_small(self):
        """Ensure a domain needs two distinct values."""
        self.assertRaises(ValueError, ValueDomain, (1,))
        self.assertRaises(ValueError, ValueDomain, (1, 1))


class ValidateTestCase(unittest.TestCase):
    def test_empty_model(self):
        """Ensure a single state without transitions is valid."""
        verdict = validate_lts(model([]))
        assert verdict.passed
        assert EXHAUSTIVE == verdict.depth

    def test_undeclared_target(self):
        """Ensure a transition to an undeclared state is reported."""
        m = model([("s0", out_label("a", 1), "s9")], states=["s0"])
        verdict = validate_lts(m)
        assert verdict.failed
        assert 1 == len(verdict.witnesses)
        assert "targets an undeclared state" in (
            verdict.witnesses[0].description
        )
        assert "s0 -a!1-> s9" in verdict.witnesses[0].description

    def test_label_illegal_for_kind(self):
        """Ensure memory reads are illegal in systems."""
        verdict = validate_lts(model([("s0", mem_read(1, 0), "s1")]))
        assert verdict.failed
        assert "label illegal for kind system" in (
            verdict.witnesses[0].description
        )

    def test_value_outside_domain(self):
        verdict = validate_lts(model([("s0", out_label("a", 5), "s1")]))
        assert verdict.failed
        assert "value outside domain" in verdict.witnesses[0].description

    def test_undeclared_initial(self):
        m = Lts(SYSTEM, ["s1"], "s0", [], D)
        assert validate_lts(m).failed


class DeterminismTestCase(unittest.TestCase):
    def test_two_blocks(self):
        """Ensure the two block system is deterministic."""
        verdict = is_deterministic(load_entry("ex_a").system.lts)
        assert verdict.passed

    def test_two_outputs(self):
        """Ensure a choice between two outputs is reported."""
        m = model(
            [("s0", out_label("a", 1), "s1"), ("s0", out_label("b", 0), "s2")]
        )
        verdict = is_deterministic(m)
        assert verdict.failed
        assert "state s0 offers" in verdict.witnesses[0].description

    def test_one_label_two_targets(self):
        """Ensure one label must lead to one target."""
        m = model(
            [("s0", out_label("a", 1), "s1"), ("s0", out_label("a", 1), "s2")]
        )
        verdict = is_deterministic(m)
        assert verdict.failed
        assert "leads to s1 and s2" in verdict.witnesses[0].description

    def test_input_choice(self):
        """Ensure a choice between inputs is deterministic."""
        m = model(
            [("s0", in_label("a", 0), "s1"), ("s0", in_label("a", 1), "s2")]
        )
        assert is_deterministic(m).passed


class InputEnabledTestCase(unittest.TestCase):
    def test_full_branch(self):
        m = model(
            [("s0", in_label("a", 0), "s1"), ("s0", in_label("a", 1), "s1")]
        )
        assert is_input_enabled(m).passed

    def test_missing_value(self):
        """Ensure the missing input value is named."""
        verdict = is_input_enabled(model([("s0", in_label("a", 0), "s1")]))
        assert verdict.failed
        assert "state s0 misses value 1" == verdict.witnesses[0].description

    def test_user_reads(self):
        """Ensure memory reads count as inputs of a user."""
        m = model(
            [("u0", mem_read(1, 0), "u1"), ("u0", mem_read(1, 1), "u1")],
            kind=USER,
            initial="u0",
        )
        assert is_input_enabled(m).passed
        m = model([("u0", mem_read(1, 0), "u1")], kind=USER, initial="u0")
        assert is_input_enabled(m).failed


class TracesTestCase(unittest.TestCase):
    def test_depth_zero(self):
        """Ensure depth 0 gives the empty trace only."""
        lts = load_entry("ex_a").system.lts
        assert {()} == traces_to_depth(lts, lts.initial, 0)

    def test_chain(self):
        m = model(
            [("s0", out_label("a", 1), "s1"), ("s1", out_label("a", 0), "s2")]
        )
        assert {
            (),
            (out_label("a", 1),),
            (out_label("a", 1), out_label("a", 0)),
        } == traces_to_depth(m, "s0", 2)

    def test_two_blocks(self):
        """Ensure the first block unfolds over the domain."""
        lts = load_entry("ex_a").system.lts
        be = begin_erase("a")
        assert {
            (),
            (be,),
            (be, in_label("a", 0)),
            (be, in_label("a", 1)),
        } == traces_to_depth(lts, lts.initial, 2)

    def test_monotone(self):
        """Ensure longer bounds keep every shorter trace."""
        lts = load_entry("ex_a").system.lts
        for depth in range(6):
            small = traces_to_depth(lts, lts.initial, depth)
            large = traces_to_depth(lts, lts.initial, depth + 1)
            assert small <= large
            assert small == set(t for t in large if len(t) <= depth)

    def test_unique_end_state(self):
        """Ensure every trace of a deterministic model ends in one
        state.
        """
        lts = load_entry("figure1").system.lts
        for trace in traces_to_depth(lts, lts.initial, 8):
            assert 1 == len(replay(lts, trace))

    def test_replay_foreign_trace(self):
        lts = load_entry("minimal").system.lts
        assert not replay(lts, (end_erase("a"),))


class BracketBalanceTestCase(unittest.TestCase):
    def test_no_brackets(self):
        m = model(
            [("s0", out_label("a", 1), "s1"), ("s1", in_label("a", 0), "s0")]
        )
        assert {"s0": 0, "s1": 0} == bracket_balance(m)

    def test_block(self):
        """Ensure the balance rises once the erased input is taken."""
        lts = load_entry("minimal").system.lts
        assert {
            "s0": 0,
            "s1": 0,
            "s2_0": 1,
            "s2_1": 1,
            "s3": 0,
        } == bracket_balance(lts)

    def test_inconsistent(self):
        """Ensure a state reached inside and outside a block is
        rejected with two witness traces.
        """
        m = model(
            [
                ("s0", begin_erase("a"), "s1"),
                ("s1", in_label("a", 0), "s2"),
                ("s1", in_label("a", 1), "s2"),
                ("s2", end_erase("a"), "s3"),
                ("s0", out_label("a", 0), "s2"),
            ]
        )
        try:
            bracket_balance(m)
        except InconsistentBalance as e:
            assert "s2" == e.state
            assert e.first != e.second
        else:  # pragma: nocover
            self.fail("InconsistentBalance not raised")


class CoversTestCase(unittest.TestCase):
    def test_acyclic(self):
        lts = load_entry("minimal").system.lts
        assert covers(lts, 3)
        assert not covers(lts, 2)

    def test_cycle(self):
        """Ensure a loop is never covered by a bound."""
        lts = load_entry("figure1").system.lts
        assert not covers(lts, 100)


class DistinguishingTraceTestCase(unittest.TestCase):
    def test_equivalent(self):
        """Ensure distinct states with equal trace sets agree."""
        m = model(
            [
                ("s0", out_label("a", 1), "x"),
                ("s0", out_label("a", 1), "y"),
                ("x", out_label("a", 0), "z"),
                ("y", out_label("a", 0), "z"),
            ]
        )
        assert distinguishing_trace(m, "x", "y") is None

    def test_differ(self):
        """Ensure a shortest distinguishing trace is found."""
        m = model(
            [
                ("s0", out_label("a", 1), "x"),
                ("s0", out_label("a", 0), "y"),
                ("x", out_label("a", 0), "z"),
                ("y", out_label("a", 1), "z"),
            ]
        )
        assert (out_label("a", 0),) == distinguishing_trace(m, "x", "y")
