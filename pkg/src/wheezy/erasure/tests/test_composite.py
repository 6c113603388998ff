""" Unit tests for ``wheezy.erasure.composite``.
"""

import unittest

from wheezy.erasure.composite import (
    TheoremReport,
    check_composite_erasure,
    composite_points,
    validate_soundness_theorem,
)
from wheezy.erasure.composition import compose
from wheezy.erasure.corpus import load_entry
from wheezy.erasure.lts import replay
from wheezy.erasure.verdict import (
    EXHAUSTIVE,
    FAIL,
    INCONCLUSIVE,
    PASS,
    Verdict,
)


def composite(name, depth):
    entry = load_entry(name)
    return check_composite_erasure(entry.user, entry.system, depth)


class CompositePointsTestCase(unittest.TestCase):
    def test_minimal(self):
        entry = load_entry("minimal")
        points = composite_points(compose(entry.user, entry.system, 10), 10)
        assert 1 == len(points)
        assert 1 == points[0].secret_index
        assert () == points[0].open_trace

    def test_two_blocks(self):
        """Ensure the second block is a point per first secret."""
        entry = load_entry("ex_a")
        points = composite_points(compose(entry.user, entry.system, 10), 10)
        assert [0, 4, 4] == sorted(len(p.open_trace) for p in points)

    def test_bound(self):
        entry = load_entry("minimal")
        model = compose(entry.user, entry.system, 10)
        assert not composite_points(model, 2)
        assert 1 == len(composite_points(model, 3))


class CompositeErasureTestCase(unittest.TestCase):
    def test_minimal(self):
        """Ensure the friendly pair passes exhaustively."""
        verdict = composite("minimal", 10)
        assert verdict.passed
        assert EXHAUSTIVE == verdict.depth

    def test_secret_used_twice(self):
        """Ensure behaviour after the first block depends on the
        secret when the user reads it again.
        """
        for depth in (6, 8, 10):
            verdict = composite("ex_a", depth)
            assert verdict.failed
            assert 2 == len(verdict.witnesses)

    def test_second_block_at_bound(self):
        """Ensure a block offered right at the bound is inconclusive."""
        verdict = composite("ex_a", 4)
        assert verdict.inconclusive
        assert (("u4", "s3"),) == verdict.open_states

    def test_witness_states(self):
        """Ensure each witness state is the one its trace prefix
        reaches in the composition.
        """
        entry = load_entry("ex_a")
        model = compose(entry.user, entry.system, 8)
        verdict = check_composite_erasure(entry.user, entry.system, 8)
        assert verdict.witnesses
        for witness in verdict.witnesses:
            assert len(witness.trace) + 1 == len(witness.states)
            for k, state in enumerate(witness.states):
                assert state in replay(model, witness.trace[:k])

    def test_residue(self):
        assert composite("mod10", 10).failed

    def test_echo(self):
        """Ensure the echo user leaks through an erasing system."""
        assert composite("streamab", 8).failed
        assert composite("streamab", 10).failed

    def test_echo_bounded(self):
        verdict = composite("streamab", 4)
        assert verdict.inconclusive
        assert verdict.open_states

    def test_opening_bounded(self):
        """Ensure a block whose read or first sync does not fit is
        inconclusive.
        """
        for depth in (1, 2):
            verdict = composite("minimal", depth)
            assert verdict.inconclusive
            assert (("u0", "s0"),) == verdict.open_states


class TheoremReportTestCase(unittest.TestCase):
    def test_consistent(self):
        passed = Verdict("x", PASS)
        failed = Verdict("y", FAIL)
        assert TheoremReport((passed, passed, passed), passed).consistent
        assert TheoremReport((passed, failed, passed), failed).consistent

    def test_contradicted(self):
        """Ensure passing premises with a failing conclusion is a
        contradiction.
        """
        passed = Verdict("x", PASS)
        report = TheoremReport((passed, passed, passed), Verdict("y", FAIL))
        assert not report.consistent
        assert 4 == len(report.verdicts)

    def test_inconclusive_premise(self):
        """Ensure an inconclusive premise never contradicts."""
        passed = Verdict("x", PASS)
        report = TheoremReport(
            (passed, Verdict("z", INCONCLUSIVE, 4), passed),
            Verdict("y", FAIL),
        )
        assert report.consistent


class SoundnessTheoremTestCase(unittest.TestCase):
    def test_minimal(self):
        """Ensure every verdict passes for the friendly pair."""
        entry = load_entry("minimal")
        report = validate_soundness_theorem(entry.user, entry.system, 10)
        assert report.consistent
        assert all(v.passed for v in report.verdicts)

    def test_echo(self):
        """Ensure the echo pair fails stream ability and the
        conclusion.
        """
        entry = load_entry("streamab")
        report = validate_soundness_theorem(entry.user, entry.system, 10)
        system_erasure, friendly, liveness = report.premises
        assert system_erasure.passed
        assert friendly.failed
        assert friendly.detail("stream-ability").failed
        assert liveness.passed
        assert report.conclusion.failed
        assert report.consistent

    def test_leaking_system(self):
        """Ensure a system failing input erasure stays consistent."""
        report = validate_soundness_theorem(
            load_entry("minimal").user, load_entry("figure1").system, 10
        )
        assert report.premises[0].failed
        assert report.consistent

    def test_corpus(self):
        for name in ("ex_a", "mod10", "streamab", "minimal"):
            entry = load_entry(name)
            for depth in (4, 6, 8):
                report = validate_soundness_theorem(
                    entry.user, entry.system, depth
                )
                assert report.consistent, (name, depth)
