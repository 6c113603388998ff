""" Unit tests for ``wheezy.erasure.cli``.
"""

import json
import os
import tempfile
import unittest
from io import StringIO
from unittest.mock import patch

from wheezy.erasure.cli import RunConfig, main, parse_args
from wheezy.erasure.composition import pydot
from wheezy.erasure.corpus import corpus_path

USR1 = corpus_path("usr1.usr")
MINIMAL_USER = corpus_path("minimal.usr")
MINIMAL_SYSTEM = corpus_path("minimal.sys")
FIGURE1 = os.path.join(
    os.path.dirname(__file__), "figure1_counterexample.txt"
)


class ParseArgsTestCase(unittest.TestCase):
    def test_defaults(self):
        config = parse_args(["check-user", USR1])
        assert isinstance(config, RunConfig)
        assert "check-user" == config.command
        assert (USR1,) == config.files
        assert 10 == config.depth
        assert "text" == config.format

    def test_pair(self):
        """Ensure the user comes first."""
        config = parse_args(
            ["compose", MINIMAL_USER, MINIMAL_SYSTEM, "--depth", "6"]
        )
        assert (MINIMAL_USER, MINIMAL_SYSTEM) == config.files
        assert 6 == config.depth

    def test_bad_depth(self):
        stderr = StringIO()
        with patch("sys.stderr", stderr):
            self.assertRaises(
                SystemExit, parse_args, ["check-user", USR1, "--depth", "0"]
            )

    def test_unknown_property(self):
        with patch("sys.stderr", StringIO()):
            self.assertRaises(
                SystemExit, parse_args, ["oracle-compare", "speed", USR1]
            )


class MainMixin(object):
    def run_main(self, *argv):
        stdout = StringIO()
        stderr = StringIO()
        status = main(list(argv), stdout, stderr)
        return status, stdout.getvalue(), stderr.getvalue()


class MainTestCase(MainMixin, unittest.TestCase):

    def test_check_user(self):
        """Ensure a failing user exits with status 1."""
        status, out, _ = self.run_main("check-user", USR1)
        assert 1 == status
        assert "secret singularity: FAIL" in out

    def test_check_system(self):
        status, _, _ = self.run_main(
            "check-system", corpus_path("example_ex_a.sys"), "--depth", "8"
        )
        assert 0 == status
        status, out, _ = self.run_main(
            "check-system", corpus_path("figure1.sys")
        )
        assert 1 == status
        with open(FIGURE1) as f:
            assert out.endswith(f.read())

    def test_inconclusive(self):
        """Ensure an inconclusive verdict exits with status 3."""
        status, out, _ = self.run_main(
            "check-system", corpus_path("figure1.sys"), "--depth", "4"
        )
        assert 3 == status
        assert "open sessions at [open]" in out

    def test_pair_commands(self):
        for command in ("check-liveness", "check-composite", "theorem"):
            status, _, _ = self.run_main(
                command, MINIMAL_USER, MINIMAL_SYSTEM
            )
            assert 0 == status, command

    def test_theorem_json(self):
        """Ensure JSON output is stable between runs."""
        argv = ("theorem", MINIMAL_USER, MINIMAL_SYSTEM, "--format", "json")
        status, first, _ = self.run_main(*argv)
        assert 0 == status
        document = json.loads(first)
        assert document["results"][0]["consistent"] is True
        assert 3 == len(document["results"][0]["premises"])
        _, second, _ = self.run_main(*argv)
        assert first == second

    def test_compose(self):
        status, out, _ = self.run_main(
            "compose", MINIMAL_USER, MINIMAL_SYSTEM, "--format", "json"
        )
        assert 0 == status
        stats = json.loads(out)
        assert 7 == stats["states"]
        assert stats["exhaustive"]
        _, out, _ = self.run_main(
            "compose",
            MINIMAL_USER,
            MINIMAL_SYSTEM,
            "--format",
            "json",
            "--memory",
            corpus_path("minimal.mem"),
        )
        assert 5 == json.loads(out)["states"]

    def test_compose_text(self):
        _, out, _ = self.run_main("compose", MINIMAL_USER, MINIMAL_SYSTEM)
        assert out.startswith("composition minimal|minimal\n")
        assert "  states: 7\n" in out

    @unittest.skipIf(pydot is None, "pydot is not installed")
    def test_emit_dot(self):
        with tempfile.TemporaryDirectory() as path:
            filename = os.path.join(path, "composed.dot")
            status, _, _ = self.run_main(
                "compose",
                MINIMAL_USER,
                MINIMAL_SYSTEM,
                "--emit-dot",
                filename,
            )
            assert 0 == status
            assert os.path.exists(filename)

    def test_oracle_compare(self):
        status, out, _ = self.run_main("oracle-compare", "singularity", USR1)
        assert 0 == status
        assert "oracle agreement: PASS" in out

    def test_oracle_compare_files(self):
        """Ensure a pair property refuses a single file."""
        status, _, err = self.run_main("oracle-compare", "liveness", USR1)
        assert 2 == status
        assert "liveness needs a user and a system" in err

    def test_corpus(self):
        status, _, _ = self.run_main("corpus")
        assert 0 == status


class UsageErrorTestCase(MainMixin, unittest.TestCase):
    def test_kind_mismatch(self):
        status, out, err = self.run_main("check-system", USR1)
        assert 2 == status
        assert "" == out
        assert "expected a system document" in err

    def test_missing_file(self):
        status, _, err = self.run_main(
            "check-user", corpus_path("missing.usr")
        )
        assert 2 == status
        assert err.startswith("error: ")

    def test_parse_error(self):
        """Ensure diagnostics carry the file name and position."""
        with tempfile.TemporaryDirectory() as path:
            filename = os.path.join(path, "bad.usr")
            with open(filename, "w") as f:
                f.write("domain {0, 1}\n")
            status, _, err = self.run_main("check-user", filename)
        assert 2 == status
        assert "%s:1:1: error: missing header" % filename in err

    def test_unbound_memory_index(self):
        with tempfile.TemporaryDirectory() as path:
            filename = os.path.join(path, "empty.mem")
            with open(filename, "w") as f:
                f.write("memory empty\nmem 2 = 0\n")
            status, _, err = self.run_main(
                "compose",
                MINIMAL_USER,
                MINIMAL_SYSTEM,
                "--memory",
                filename,
            )
        assert 2 == status
        assert "index 1 is not in the memory" in err
