""" Unit tests for ``wheezy.erasure.composition``.
"""

import os
import tempfile
import unittest

from wheezy.erasure.composition import (
    check_liveness,
    compose,
    moves,
    project_system,
    project_user,
    pydot,
    to_dot,
    write_dot,
)
from wheezy.erasure.corpus import load_entry
from wheezy.erasure.dsl import loads
from wheezy.erasure.labels import (
    OTHER,
    SYNC_BEGIN,
    SYNC_END,
    SYSTEM,
    USER,
    in_label,
    mem_read,
    other_out,
    out_label,
    sync,
)
from wheezy.erasure.lts import Lts, ValueDomain, replay, traces_to_depth
from wheezy.erasure.oracle import compare
from wheezy.erasure.system import SystemSpec
from wheezy.erasure.user import UserSpec

D = ValueDomain((0, 3, 7))


def pair(user_transitions, system_transitions):
    def states(initial, transitions):
        result = set([initial])
        for source, _, target in transitions:
            result.update((source, target))
        return result

    user = UserSpec(
        Lts(USER, states("u", user_transitions), "u", user_transitions, D),
        "a",
    )
    system = SystemSpec(
        Lts(
            SYSTEM,
            states("s", system_transitions),
            "s",
            system_transitions,
            D,
        ),
        "a",
        ("b",),
    )
    return user, system


class ComposeTestCase(unittest.TestCase):
    def test_no_transitions(self):
        """Ensure idle components compose to an idle product."""
        user, system = pair([], [])
        composed = compose(user, system, 5)
        assert set([("u", "s")]) == composed.states
        assert not composed.transitions
        assert not composed.truncated

    def test_value_exchange(self):
        """Ensure a user send meets the system input."""
        user, system = pair(
            [("u", out_label("a", 3), "u1")], [("s", in_label("a", 3), "s1")]
        )
        composed = compose(user, system, 5)
        assert (
            set([(("u", "s"), sync(3), ("u1", "s1"))]) == composed.transitions
        )

    def test_other_output(self):
        """Ensure other outputs of the system fire alone."""
        user, system = pair(
            [("u", out_label("a", 3), "u1")], [("s", other_out("b", 7), "s1")]
        )
        composed = compose(user, system, 5)
        assert (
            set([(("u", "s"), other_out("b", 7), ("u", "s1"))])
            == composed.transitions
        )

    def test_no_match(self):
        """Ensure nothing else interleaves."""
        user, system = pair(
            [("u", out_label("a", 0), "u1")], [("s", in_label("a", 3), "s1")]
        )
        assert not moves(user.lts, system.lts, "a", ("u", "s"))

    def test_minimal_pair(self):
        """Ensure the reachable product of the minimal pair."""
        entry = load_entry("minimal")
        composed = compose(entry.user, entry.system, 10)
        assert 7 == len(composed.states)
        assert 7 == len(composed.transitions)
        assert not composed.truncated
        assert "minimal|minimal" == composed.name

    def test_memory(self):
        """Ensure a memory keeps the reads of the stored value only."""
        entry = load_entry("minimal")
        composed = compose(entry.user, entry.system, 10, entry.memory)
        assert 5 == len(composed.states)
        reads = [lb for _, lb, _ in composed.transitions if lb.kind == "read"]
        assert [mem_read(1, 1)] == reads

    def test_truncated(self):
        entry = load_entry("minimal")
        composed = compose(entry.user, entry.system, 2)
        assert composed.truncated

    def test_deterministic(self):
        """Ensure composing twice gives the same product."""
        entry = load_entry("streamab")
        assert compose(entry.user, entry.system, 8) == compose(
            entry.user, entry.system, 8
        )

    def test_rules_justify_edges(self):
        """Ensure every composed edge replays on both components."""
        entry = load_entry("ex_a")
        composed = compose(entry.user, entry.system, 10)
        for trace in traces_to_depth(composed, composed.initial, 8):
            system_trace = project_system(trace, entry.system)
            user_trace = project_user(trace, entry.system)
            assert replay(entry.system.lts, system_trace)
            assert replay(entry.user.lts, user_trace)


class ProjectionTestCase(unittest.TestCase):
    def test_empty(self):
        system = load_entry("minimal").system
        assert () == project_system((), system)
        assert () == project_user((), system)

    def test_block(self):
        system = load_entry("minimal").system
        trace = (SYNC_BEGIN, mem_read(1, 0), sync(0), SYNC_END)
        assert 3 == len(project_system(trace, system))
        assert 4 == len(project_user(trace, system))
        assert out_label("a", 0) == project_user(trace, system)[2]
        assert in_label("a", 0) == project_system(trace, system)[1]

    def test_other_output(self):
        """Ensure other outputs belong to the system only."""
        _, system = pair([], [("s", other_out("b", 3), "s1")])
        trace = (other_out("b", 3),)
        assert OTHER == project_system(trace, system)[0].kind
        assert () == project_user(trace, system)

    def test_not_a_move(self):
        system = load_entry("minimal").system
        self.assertRaises(ValueError, project_system, (SYNC_END,), system)


class LivenessTestCase(unittest.TestCase):
    def test_mirror(self):
        """Ensure a user mirroring the system keeps it going."""
        entry = load_entry("minimal")
        verdict = check_liveness(entry.user, entry.system, 10)
        assert verdict.passed

    def test_corpus(self):
        for name in ("ex_a", "streamab"):
            entry = load_entry(name)
            assert check_liveness(entry.user, entry.system, 10).passed

    def test_halts_at_input(self):
        """Ensure a user with nothing to send blocks an input."""
        user = loads(
            """\
user halting
domain {0, 1}
channel a erase
state u0 initial
state u1
trans u0 -> u1 : in a BE
"""
        )
        verdict = check_liveness(user, load_entry("minimal").system, 10)
        assert verdict.failed
        assert "waiting for an input" in verdict.witnesses[0].description

    def test_missing_end(self):
        """Ensure a user refusing EE blocks the system."""
        user = loads(
            """\
user no_end
domain {0, 1}
channel a erase
state u0 initial
state u1
state u2_$v
state u3
trans u0 -> u1 : in a BE
trans u1 -> u2_$v : read i=1 $v forall v
trans u2_$v -> u3 : out a $v
"""
        )
        verdict = check_liveness(user, load_entry("minimal").system, 10)
        assert verdict.failed
        assert "waiting for a!EE" in verdict.witnesses[0].description

    def test_read_before_end(self):
        """Ensure a memory read does not stand in for taking EE when
        the system offers it.
        """
        user = loads(
            """\
user late_read
domain {0, 1}
channel a erase
state u0 initial
state u1
state u2_$v
state u3
state u4_$w
state u5
trans u0 -> u1 : in a BE
trans u1 -> u2_$v : read i=1 $v forall v
trans u2_$v -> u3 : out a $v
trans u3 -> u4_$w : read i=2 $w forall w
trans u4_$w -> u5 : in a EE
"""
        )
        system = load_entry("minimal").system
        verdict = check_liveness(user, system, 10)
        assert verdict.failed
        description = verdict.witnesses[0].description
        assert description.startswith("user u3 blocks")
        assert "waiting for a!EE" in description
        assert compare("liveness", (user, system), 10).passed


@unittest.skipIf(pydot is None, "pydot is not installed")
class DotTestCase(unittest.TestCase):
    def test_to_dot(self):
        """Ensure states are labelled u|s."""
        entry = load_entry("minimal")
        composed = compose(entry.user, entry.system, 10)
        graph = to_dot(composed)
        assert 7 == len(graph.get_nodes())
        assert 7 == len(graph.get_edges())
        assert "u0|s0" in graph.to_string()

    def test_write_dot(self):
        entry = load_entry("minimal")
        composed = compose(entry.user, entry.system, 10)
        with tempfile.TemporaryDirectory() as path:
            filename = os.path.join(path, "minimal.dot")
            write_dot(composed, filename)
            with open(filename) as f:
                assert "digraph" in f.read()
