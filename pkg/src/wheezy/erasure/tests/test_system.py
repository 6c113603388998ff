""" Unit tests for ``wheezy.erasure.system``.
"""

import unittest

from wheezy.erasure.corpus import load_entry
from wheezy.erasure.dsl import loads
from wheezy.erasure.labels import (
    begin_erase,
    end_erase,
    in_label,
    other_out,
)
from wheezy.erasure.lts import replay, traces_to_depth
from wheezy.erasure.system import (
    InputStream,
    check_input_erasure,
    check_system_well_formed,
    enumerate_erasure_points,
    input_count,
    refine_with_stream,
)
from wheezy.erasure.verdict import EXHAUSTIVE

BE = begin_erase("a")
EE = end_erase("a")

HEADER = """\
system test
domain {0, 1}
channel a erase
channel b other
"""


def system(body):
    return loads(HEADER + body)


class WellFormedTestCase(unittest.TestCase):
    def test_minimal_block(self):
        """Ensure a single block followed by a halt is well formed."""
        verdict = check_system_well_formed(load_entry("minimal").system)
        assert verdict.passed
        assert EXHAUSTIVE == verdict.depth

    def test_corpus(self):
        for name in ("figure1", "ex_a", "mod10", "streamab"):
            assert check_system_well_formed(load_entry(name).system).passed

    def test_be_without_input(self):
        """Ensure BE must be followed by the erased input."""
        spec = system(
            """\
state s0 initial
state s1
state s2
trans s0 -> s1 : out a BE
trans s1 -> s2 : out a 1
"""
        )
        verdict = check_system_well_formed(spec)
        assert verdict.failed
        bracketing = verdict.detail("bracketing")
        assert bracketing.failed
        assert bracketing.witnesses[0].description.startswith("clause (1)")

    def test_halts_inside_block(self):
        """Ensure a stuck state inside an open block is reported."""
        spec = system(
            """\
state s0 initial
state s1
state s2_$v
trans s0 -> s1 : out a BE
trans s1 -> s2_$v : in a $v forall v
"""
        )
        verdict = check_system_well_formed(spec)
        assert verdict.failed
        descriptions = [w.description for w in verdict.witnesses]
        assert "stuck state s2_0 has balance 1" in descriptions
        assert "stuck state s2_1 has balance 1" in descriptions

    def test_ee_at_balance_zero(self):
        spec = system(
            """\
state s0 initial
state s1
trans s0 -> s1 : out a EE
"""
        )
        verdict = check_system_well_formed(spec)
        assert verdict.failed
        assert verdict.witnesses[0].description.startswith(
            "EE enabled at s0"
        )

    def test_nondeterministic(self):
        spec = system(
            """\
state s0 initial
state s1
trans s0 -> s1 : out a 0
trans s0 -> s1 : out b 1
"""
        )
        verdict = check_system_well_formed(spec)
        assert verdict.failed
        assert verdict.detail("determinism").failed


class InputCountTestCase(unittest.TestCase):
    def test_count(self):
        assert 0 == input_count(())
        assert 1 == input_count((BE, in_label("a", 3), EE))
        assert 2 == input_count(
            (in_label("a", 1), other_out("b", 2), in_label("a", 1))
        )


class RefineWithStreamTestCase(unittest.TestCase):
    def test_no_inputs(self):
        """Ensure a system without inputs ignores the stream."""
        spec = system(
            """\
state s0 initial
state s1
trans s0 -> s1 : out b 1
trans s1 -> s0 : out b 0
"""
        )
        expected = (other_out("b", 1), other_out("b", 0), other_out("b", 1))
        assert expected == refine_with_stream(spec, InputStream((), 0), 3)
        assert expected == refine_with_stream(spec, InputStream((1,), 1), 3)

    def test_two_blocks(self):
        """Ensure the n-th input carries the n-th stream value."""
        spec = load_entry("ex_a").system
        assert (
            BE,
            in_label("a", 0),
            EE,
            BE,
            in_label("a", 1),
            EE,
        ) == refine_with_stream(spec, InputStream((0, 1), 0), 6)
        assert (
            BE,
            in_label("a", 1),
            EE,
            BE,
            in_label("a", 1),
            EE,
        ) == refine_with_stream(spec, InputStream((), 1), 6)

    def test_member_of_traces(self):
        """Ensure a refinement is a trace of the model."""
        spec = load_entry("figure1").system
        traces = traces_to_depth(spec.lts, spec.lts.initial, 9)
        for prefix in ((1, 0, 1), (1, 1, 0), (0,)):
            trace = refine_with_stream(spec, InputStream(prefix, 0), 9)
            assert trace in traces

    def test_stream_prefix(self):
        """Ensure streams sharing a prefix agree up to its last input."""
        spec = load_entry("figure1").system
        a = refine_with_stream(spec, InputStream((1, 0, 1, 0), 0), 10)
        b = refine_with_stream(spec, InputStream((1, 0, 1, 1), 1), 10)
        assert a[:4] == b[:4]
        assert a != b


class ErasurePointsTestCase(unittest.TestCase):
    def test_no_blocks(self):
        spec = system(
            """\
state s0 initial
trans s0 -> s0 : out b 1
"""
        )
        assert [] == enumerate_erasure_points(spec, 5)

    def test_two_blocks(self):
        """Ensure the second block gives one point per first input."""
        points = enumerate_erasure_points(load_entry("ex_a").system, 6)
        assert ["s0", "s3", "s3"] == [p.pre_state for p in points]
        assert [1, 2, 2] == [p.input_position for p in points]
        assert (BE, in_label("a", 0), EE) == points[1].open_trace
        assert (BE, in_label("a", 1), EE) == points[2].open_trace

    def test_loop(self):
        """Ensure a loop gives points per unrolling within depth."""
        spec = load_entry("figure1").system
        points = enumerate_erasure_points(spec, 10)
        assert set(["open"]) == set(p.pre_state for p in points)
        assert [1, 9] == sorted(set(len(p.open_trace) for p in points))
        assert 1 == len(enumerate_erasure_points(spec, 8))


class InputErasureTestCase(unittest.TestCase):
    def test_minimal(self):
        """Ensure an empty continuation passes exhaustively."""
        verdict = check_input_erasure(load_entry("minimal").system, 10)
        assert verdict.passed
        assert EXHAUSTIVE == verdict.depth

    def test_two_blocks(self):
        assert check_input_erasure(load_entry("ex_a").system, 10).passed

    def test_credit_card(self):
        """Ensure the card written to the log file is a violation."""
        verdict = check_input_erasure(load_entry("figure1").system, 10)
        assert verdict.failed
        v, w = verdict.witnesses[:2]
        assert v.trace != w.trace
        assert other_out("logfile", 0) == v.trace[-1]
        assert other_out("logfile", 1) == w.trace[-1]

    def test_witness_states(self):
        """Ensure each witness state is the one its trace prefix
        reaches.
        """
        lts = load_entry("figure1").system.lts
        verdict = check_input_erasure(load_entry("figure1").system, 10)
        for witness in verdict.witnesses:
            assert len(witness.trace) + 1 == len(witness.states)
            for k, state in enumerate(witness.states):
                assert state in replay(lts, witness.trace[:k])

    def test_credit_card_bounded(self):
        """Ensure blocks cut by the bound are inconclusive."""
        verdict = check_input_erasure(load_entry("figure1").system, 4)
        assert verdict.inconclusive
        assert ("open",) == verdict.open_states

    def test_opening_bounded(self):
        """Ensure a BE whose input does not fit is inconclusive."""
        spec = load_entry("minimal").system
        for depth in (1, 2):
            verdict = check_input_erasure(spec, depth)
            assert verdict.inconclusive
            assert ("s0",) == verdict.open_states

    def test_discount(self):
        """Ensure handing out f(v) inside the block is fine."""
        spec = load_entry("streamab").system
        assert check_input_erasure(spec, 8).passed
        assert EXHAUSTIVE == check_input_erasure(spec, 8).depth

    def test_different_input_counts(self):
        """Ensure blocks must consume as many inputs for every value."""
        spec = system(
            """\
state s0 initial
state s1
state s2_$v
state s3
state s4
state s5
trans s0 -> s1 : out a BE
trans s1 -> s2_$v : in a $v forall v
trans s2_0 -> s3 : out a EE
trans s2_1 -> s4 : in a $x forall x
trans s4 -> s3 : out a EE
trans s3 -> s5 : out b 1
"""
        )
        assert check_system_well_formed(spec).passed
        verdict = check_input_erasure(spec, 10)
        assert verdict.failed
        assert "inputs" in verdict.witnesses[0].description
