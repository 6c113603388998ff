""" ``report`` module.

Human and machine readable renderings of verdicts and theorem reports.
"""

from wheezy.erasure.composite import TheoremReport
from wheezy.erasure.encoding import dumps, state_encode, verdict_encode
from wheezy.erasure.labels import SYSTEM, format_label
from wheezy.erasure.verdict import EXHAUSTIVE

TEXT = "text"
JSON = "json"
FORMATS = (TEXT, JSON)


def format_state(state):
    """
    >>> format_state(('u1', 's0'))
    'u1|s0'
    """
    if isinstance(state, tuple):
        return "|".join(str(s) for s in state)
    return str(state)


def headline(verdict):
    """
    >>> from wheezy.erasure.verdict import Verdict
    >>> headline(Verdict('liveness', 'pass', 10))
    'liveness: PASS (depth=10)'
    >>> headline(Verdict('confinement', 'inconclusive', 4, open_states=[
    ...     'u0']))
    'secret confinement: INCONCLUSIVE at depth 4: open sessions at [u0]'
    """
    outcome = verdict.outcome.upper()
    if verdict.inconclusive:
        return "%s: %s at depth %s: open sessions at [%s]" % (
            verdict.title,
            outcome,
            verdict.depth,
            ", ".join(format_state(s) for s in verdict.open_states),
        )
    return "%s: %s (depth=%s)" % (verdict.title, outcome, verdict.depth)


def render_witness(witness, number, indent):
    """One label per line, each annotated with the state it leaves."""
    pad = " " * indent
    lines = ["%switness %d: %s" % (pad, number, witness.description)]
    kind = witness.kind or SYSTEM
    states = witness.states
    for k, label in enumerate(witness.trace):
        state = k < len(states) and format_state(states[k]) or ""
        lines.append(
            "%s  %3d  %-12s %s"
            % (pad, k + 1, state, format_label(label, kind))
        )
    if len(states) > len(witness.trace):
        lines.append("%s       %s" % (pad, format_state(states[-1])))
    return lines


def render_text(verdict, indent=0):
    lines = [" " * indent + headline(verdict)]
    if verdict.details:
        for detail in verdict.details:
            lines.extend(render_text(detail, indent + 2))
        return lines
    for number, witness in enumerate(verdict.witnesses, 1):
        lines.extend(render_witness(witness, number, indent + 2))
    return lines


def report_encode(report):
    return {
        "consistent": report.consistent,
        "premises": [verdict_encode(v) for v in report.premises],
        "conclusion": verdict_encode(report.conclusion),
    }


def render_counterexample(result, format=TEXT):
    """Renders a verdict or a theorem report.

    >>> from wheezy.erasure.verdict import Verdict
    >>> print(render_counterexample(Verdict('liveness', 'pass')))
    liveness: PASS (depth=exhaustive)
    """
    if format == JSON:
        return dumps(encode(result))
    if isinstance(result, TheoremReport):
        lines = [
            "soundness theorem: %s"
            % (result.consistent and "consistent" or "CONTRADICTED"),
            "  premises:",
        ]
        for verdict in result.premises:
            lines.extend(render_text(verdict, 4))
        lines.append("  conclusion:")
        lines.extend(render_text(result.conclusion, 4))
        return "\n".join(lines)
    return "\n".join(render_text(result))


def encode(result):
    if isinstance(result, TheoremReport):
        return report_encode(result)
    return verdict_encode(result)


def render_results(results, format=TEXT):
    """Renders everything one command produced. JSON output is one
    document holding a list, whatever the number of results.
    """
    if format == JSON:
        return dumps({"results": [encode(r) for r in results]})
    return "\n".join(render_counterexample(r) for r in results) + "\n"


def render_stats(model):
    """Summary of a composed graph for the ``compose`` command."""
    return {
        "name": model.name,
        "states": len(model.states),
        "transitions": len(model.transitions),
        "depth": model.depth,
        "exhaustive": not model.truncated,
        "truncated": sorted(state_encode(s) for s in model.truncated),
    }


def render_stats_text(stats):
    lines = ["composition %s" % stats["name"]]
    for key in ("states", "transitions", "depth"):
        lines.append("  %s: %s" % (key, stats[key]))
    lines.append(
        "  explored: %s"
        % (stats["exhaustive"] and EXHAUSTIVE or "up to depth")
    )
    return "\n".join(lines) + "\n"
