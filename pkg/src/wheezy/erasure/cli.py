""" ``cli`` module.

The ``wheezy-erasure`` command. Exit status 0 when every verdict
passes, 1 on any failure, 3 when some verdict is inconclusive and none
fails, 2 for usage, input and internal errors.
"""

import argparse
import sys
from logging import getLogger

from wheezy.erasure import dsl, logging
from wheezy.erasure.composite import (
    check_composite_erasure,
    validate_soundness_theorem,
)
from wheezy.erasure.composition import check_liveness, compose, write_dot
from wheezy.erasure.corpus import check_corpus
from wheezy.erasure.encoding import dumps
from wheezy.erasure.labels import USER
from wheezy.erasure.memory import Memory, UnboundIndex
from wheezy.erasure.oracle import BUDGET, PAIR, PROPERTIES, SUBJECTS, compare
from wheezy.erasure.report import (
    FORMATS,
    JSON,
    TEXT,
    render_results,
    render_stats,
    render_stats_text,
)
from wheezy.erasure.system import (
    SystemSpec,
    check_input_erasure,
    check_system_well_formed,
)
from wheezy.erasure.user import CEILING, UserSpec, check_erasure_friendly
from wheezy.erasure.utils import positive
from wheezy.erasure.verdict import exit_status

log = getLogger(__name__)

DEPTH = 10
USAGE_ERROR = 2

COMMANDS = (
    "check-system",
    "check-user",
    "check-liveness",
    "compose",
    "check-composite",
    "theorem",
    "oracle-compare",
    "corpus",
)


class UsageError(Exception):
    """Bad input files; reported with exit status 2."""


class RunConfig(object):
    """Everything a run needs, as parsed from the command line."""

    def __init__(
        self,
        command,
        files=(),
        depth=DEPTH,
        format=TEXT,
        emit_dot=None,
        memory=None,
        property=None,
        budget=BUDGET,
        ceiling=CEILING,
        verbose=0,
    ):
        assert command in COMMANDS
        assert format in FORMATS
        self.command = command
        self.files = tuple(files)
        self.depth = positive(depth)
        self.format = format
        self.emit_dot = emit_dot
        self.memory = memory
        self.property = property
        self.budget = positive(budget)
        self.ceiling = positive(ceiling)
        self.verbose = verbose

    def __repr__(self):
        return "RunConfig(%r, %r, depth=%d)" % (
            self.command,
            self.files,
            self.depth,
        )


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--depth", type=positive, default=DEPTH, help="exploration bound"
    )
    common.add_argument("--format", choices=FORMATS, default=TEXT)
    common.add_argument(
        "--ceiling",
        type=positive,
        default=CEILING,
        help="subset pairs before confinement falls back to trace sets",
    )
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="wheezy-erasure",
        description="Checks erasure properties of systems and users.",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True
    p = commands.add_parser(
        "check-system", parents=[common], help="well-formedness and E(S)"
    )
    p.add_argument("system")
    p = commands.add_parser(
        "check-user", parents=[common], help="erasure friendliness"
    )
    p.add_argument("user")
    for name, description in (
        ("check-liveness", "the user never blocks the system"),
        ("check-composite", "composite erasure of U|S"),
        ("theorem", "premises against the conclusion"),
    ):
        p = commands.add_parser(name, parents=[common], help=description)
        p.add_argument("user")
        p.add_argument("system")
    p = commands.add_parser(
        "compose", parents=[common], help="build U|S and report its size"
    )
    p.add_argument("user")
    p.add_argument("system")
    p.add_argument("--emit-dot", metavar="PATH")
    p.add_argument("--memory", metavar="FILE")
    p = commands.add_parser(
        "oracle-compare",
        parents=[common],
        help="checker against brute force enumeration",
    )
    p.add_argument("property", choices=PROPERTIES)
    p.add_argument("files", nargs="+", metavar="file")
    p.add_argument("--budget", type=positive, default=BUDGET)
    commands.add_parser(
        "corpus", parents=[common], help="replay the golden verdicts"
    )
    return parser


def parse_args(argv=None):
    args = build_parser().parse_args(argv)
    files = []
    for name in ("user", "system", "files"):
        value = getattr(args, name, None)
        if isinstance(value, list):
            files.extend(value)
        elif value is not None:
            files.append(value)
    return RunConfig(
        args.command,
        files,
        depth=args.depth,
        format=args.format,
        emit_dot=getattr(args, "emit_dot", None),
        memory=getattr(args, "memory", None),
        property=getattr(args, "property", None),
        budget=getattr(args, "budget", BUDGET),
        ceiling=args.ceiling,
        verbose=args.verbose,
    )


def load(path, expected):
    """Loads ``path`` and checks it holds an ``expected`` instance."""
    try:
        spec = dsl.load(path)
    except OSError as e:
        raise UsageError("%s: %s" % (path, e.strerror or e))
    except dsl.ParseError as e:
        raise UsageError(
            "\n".join("%s:%s" % (path, d) for d in e.diagnostics)
        )
    if not isinstance(spec, expected):
        raise UsageError(
            "%s: expected a %s document"
            % (path, expected.__name__.replace("Spec", "").lower())
        )
    return spec


def _pair(config):
    user, system = config.files[:2]
    return load(user, UserSpec), load(system, SystemSpec)


def run(config, stdout=None):
    """Runs ``config`` and returns the exit status."""
    stdout = stdout or sys.stdout
    depth = config.depth
    command = config.command
    if command == "check-system":
        system = load(config.files[0], SystemSpec)
        results = [
            check_system_well_formed(system),
            check_input_erasure(system, depth),
        ]
    elif command == "check-user":
        user = load(config.files[0], UserSpec)
        results = [check_erasure_friendly(user, depth, config.ceiling)]
    elif command == "check-liveness":
        results = [check_liveness(*(_pair(config) + (depth,)))]
    elif command == "check-composite":
        results = [check_composite_erasure(*(_pair(config) + (depth,)))]
    elif command == "theorem":
        user, system = _pair(config)
        report = validate_soundness_theorem(
            user, system, depth, config.ceiling
        )
        stdout.write(render_results([report], config.format))
        return exit_status(report.verdicts)
    elif command == "compose":
        return _compose(config, stdout)
    elif command == "oracle-compare":
        results = [_oracle_compare(config)]
    else:
        results = [check_corpus(depth)]
    stdout.write(render_results(results, config.format))
    return exit_status(results)


def _compose(config, stdout):
    user, system = _pair(config)
    memory = None
    if config.memory:
        memory = load(config.memory, Memory)
    try:
        model = compose(user, system, config.depth, memory)
    except UnboundIndex as e:
        raise UsageError(
            "%s: index %s is not in the memory" % (config.memory, e.index)
        )
    if config.emit_dot:
        write_dot(model, config.emit_dot)
        log.info("wrote %s", config.emit_dot)
    stats = render_stats(model)
    if config.format == JSON:
        stdout.write(dumps(stats))
    else:
        stdout.write(render_stats_text(stats))
    return 0


def _oracle_compare(config):
    property = config.property
    subject = SUBJECTS[property]
    if subject == PAIR:
        if len(config.files) != 2:
            raise UsageError("%s needs a user and a system" % property)
        models = _pair(config)
    else:
        if len(config.files) != 1:
            raise UsageError("%s needs one %s" % (property, subject))
        expected = subject == USER and UserSpec or SystemSpec
        models = load(config.files[0], expected)
    return compare(property, models, config.depth, config.budget)


def main(argv=None, stdout=None, stderr=None):
    stderr = stderr or sys.stderr
    config = parse_args(argv)
    logging.configure(config.verbose, stderr)
    try:
        return run(config, stdout)
    except UsageError as e:
        stderr.write("error: %s\n" % e)
        return USAGE_ERROR
    except Exception as e:  # pragma: nocover
        log.exception("internal error")
        stderr.write("internal error: %s\n" % e)
        return USAGE_ERROR
