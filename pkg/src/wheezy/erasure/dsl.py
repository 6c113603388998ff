""" ``dsl`` module.

A line oriented text format for systems, users and memories::

    system minimal
    domain {0, 1}
    channel a erase
    state s0 initial
    state s1
    state s2_$v
    state s3
    trans s0 -> s1 : out a BE
    trans s1 -> s2_$v : in a $v forall v
    trans s2_$v -> s3 : out a EE

``$VAR`` in a state declaration declares one state per domain value;
in a transition it ranges over the domain when bound by ``forall`` or
when it occurs in the source state.
"""

import re
from collections import namedtuple
from itertools import product
from logging import getLogger

import ply.lex as lex

from wheezy.erasure.labels import (
    BE,
    EE,
    IN,
    OTHER,
    OUT,
    READ,
    SYSTEM,
    USER,
    begin_erase,
    end_erase,
    format_label,
    in_label,
    mem_read,
    other_out,
    out_label,
)
from wheezy.erasure.lts import Lts, ValueDomain
from wheezy.erasure.memory import Memory
from wheezy.erasure.system import SystemSpec
from wheezy.erasure.user import UserSpec

log = getLogger(__name__)

MEMORY = "memory"
KINDS = (SYSTEM, USER, MEMORY)
ERROR = "error"
WARNING = "warning"

RE_VAR = re.compile(r"\$([A-Za-z][A-Za-z0-9]*)")

StateDecl = namedtuple("StateDecl", ("name", "initial", "line", "column"))
TransDecl = namedtuple(
    "TransDecl",
    ("source", "target", "action", "var", "line", "column"),
)
Action = namedtuple("Action", ("direction", "channel", "index", "value"))


_Diagnostic = namedtuple(
    "ParseDiagnostic", ("line", "column", "message", "severity")
)


class ParseDiagnostic(_Diagnostic):
    __slots__ = ()

    def __str__(self):
        return "%d:%d: %s: %s" % (
            self.line,
            self.column,
            self.severity,
            self.message,
        )


class ParseError(ValueError):
    """Carries the diagnostics of a document that failed to load."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == ERROR]
        super(ParseError, self).__init__(
            "; ".join(str(d) for d in errors or self.diagnostics)
        )


class SpecDocument(object):
    """A parsed document before template expansion."""

    def __init__(self, kind, name):
        self.kind = kind
        self.name = name
        self.domain = None
        self.channels = []
        self.states = []
        self.transitions = []
        self.memory = []
        self.diagnostics = []

    @property
    def erase_channel(self):
        for name, role in self.channels:
            if role == "erase":
                return name
        return None

    @property
    def other_channels(self):
        return [name for name, role in self.channels if role == "other"]

    def declared_states(self):
        """Expanded state names in declaration order and the initial."""
        names = []
        initial = None
        for decl in self.states:
            for name in _instances(decl.name, self.domain):
                names.append(name)
                if decl.initial and initial is None:
                    initial = name
        return names, initial


# region: tokenizer

Token = namedtuple("Token", ("line", "column", "value"))


class TokenRules(object):
    """Token rules for ``ply.lex``; ``#`` comments run to end of line."""

    tokens = ("ARROW", "PUNCT", "WORD")

    t_ARROW = r"->"
    t_PUNCT = r"[{}:,=;]"
    t_WORD = r"[^\s{}:,=;\#>-]+"
    t_ignore = " \t\r"
    t_ignore_COMMENT = r"\#[^\n]*"

    def t_newline(self, t):
        r"\n+"
        t.lexer.lineno += len(t.value)
        t.lexer.linestart = t.lexpos + len(t.value)

    def t_error(self, t):
        t.lexer.skip(1)


LEXER = lex.lex(module=TokenRules(), errorlog=lex.NullLogger())


def tokenize(text):
    """Splits a document into tokens with line and column.

    >>> [t.value for t in tokenize('trans s0 -> s1 : out a BE # note')]
    ['trans', 's0', '->', 's1', ':', 'out', 'a', 'BE']
    >>> [t.value for t in tokenize('read i=1 $v')]
    ['read', 'i', '=', '1', '$v']
    >>> [(t.line, t.column) for t in tokenize('state s0\\n  state s1')]
    [(1, 1), (1, 7), (2, 3), (2, 9)]
    """
    lexer = LEXER.clone()
    lexer.lineno = 1
    lexer.linestart = 0
    lexer.input(text)
    return [
        Token(t.lineno, t.lexpos - lexer.linestart + 1, t.value)
        for t in iter(lexer.token, None)
    ]


def parse_value(token):
    """Values are non-negative integers or bare symbols.

    >>> parse_value('12'), parse_value('up')
    (12, 'up')
    """
    if token.isdigit():
        return int(token)
    return token


def _instances(template, domain):
    names = sorted(set(RE_VAR.findall(template)))
    if not names:
        return [template]
    if domain is None:
        return []
    return [
        substitute(template, dict(zip(names, values)))
        for values in product(domain, repeat=len(names))
    ]


def substitute(template, binding):
    """Replaces ``$VAR`` occurrences.

    >>> substitute('echo_$c_$x', {'c': 0, 'x': 1})
    'echo_0_1'
    """
    return RE_VAR.sub(lambda m: str(binding[m.group(1)]), template)


# region: parser


class _Parser(object):
    def __init__(self, text):
        self.text = text
        self.diagnostics = []
        self.doc = None

    def error(self, line, column, message):
        self.diagnostics.append(ParseDiagnostic(line, column, message, ERROR))

    def parse(self):
        line = 1
        statement = []
        for token in tokenize(self.text):
            if token.line != line:
                self.statement(line, statement)
                statement = []
                line = token.line
            if token.value == ";":
                self.statement(line, statement)
                statement = []
            else:
                statement.append((token.column, token.value))
        self.statement(line, statement)
        if self.doc is None:
            self.error(1, 1, "missing header")
            raise ParseError(self.diagnostics)
        self.check()
        self.doc.diagnostics = self.diagnostics
        if any(d.severity == ERROR for d in self.diagnostics):
            raise ParseError(self.diagnostics)
        return self.doc

    def statement(self, line, tokens):
        if not tokens:
            return
        column, keyword = tokens[0]
        words = [t for _, t in tokens]
        if self.doc is None:
            if keyword not in KINDS or len(words) != 2:
                self.error(line, column, "missing header")
                raise ParseError(self.diagnostics)
            self.doc = SpecDocument(keyword, words[1])
            return
        handler = getattr(self, "on_" + keyword, None)
        if handler is None:
            self.error(line, column, "unexpected %s" % keyword)
            return
        handler(line, tokens, words)

    def on_domain(self, line, tokens, words):
        if len(words) < 4 or words[1] != "{" or words[-1] != "}":
            self.error(line, tokens[0][0], "syntax error in domain")
            return
        values = []
        for column, token in tokens[2:-1]:
            if token == ",":
                continue
            values.append(parse_value(token))
        try:
            self.doc.domain = ValueDomain(values)
        except ValueError as e:
            self.error(line, tokens[0][0], str(e))

    def on_channel(self, line, tokens, words):
        if len(words) != 3 or words[2] not in ("erase", "other"):
            self.error(line, tokens[0][0], "syntax error in channel")
            return
        if words[2] == "erase" and self.doc.erase_channel is not None:
            self.error(line, tokens[1][0], "second erase channel")
            return
        self.doc.channels.append((words[1], words[2]))

    def on_state(self, line, tokens, words):
        if len(words) not in (2, 3) or (
            len(words) == 3 and words[2] != "initial"
        ):
            self.error(line, tokens[0][0], "syntax error in state")
            return
        if RE_VAR.search(words[1]) and self.doc.domain is None:
            self.error(line, tokens[1][0], "template state without domain")
            return
        self.doc.states.append(
            StateDecl(words[1], len(words) == 3, line, tokens[1][0])
        )

    def on_trans(self, line, tokens, words):
        # trans SOURCE -> TARGET : ACTION [forall VAR]
        if len(words) < 7 or words[2] != "->" or words[4] != ":":
            self.error(line, tokens[0][0], "syntax error in trans")
            return
        var = None
        action = words[5:]
        if len(action) > 2 and action[-2] == "forall":
            var = action[-1]
            action = action[:-2]
            if self.doc.domain is None:
                self.error(
                    line, tokens[len(words) - 2][0], "forall without domain"
                )
                return
        parsed = self.action(line, tokens[5][0], action)
        if parsed is None:
            return
        self.doc.transitions.append(
            TransDecl(words[1], words[3], parsed, var, line, tokens[1][0])
        )

    def action(self, line, column, words):
        if words[0] in ("out", "in") and len(words) == 3:
            return Action(words[0], words[1], None, words[2])
        if (
            words[0] == "read"
            and len(words) == 5
            and words[1] == "i"
            and words[2] == "="
            and words[3].isdigit()
        ):
            return Action("read", None, int(words[3]), words[4])
        self.error(line, column, "syntax error in action")
        return None

    def on_mem(self, line, tokens, words):
        if len(words) != 4 or words[2] != "=" or not words[1].isdigit():
            self.error(line, tokens[0][0], "syntax error in mem")
            return
        self.doc.memory.append(
            (int(words[1]), parse_value(words[3]), line, tokens[3][0])
        )

    def check(self):
        doc = self.doc
        domain = doc.domain
        if doc.kind == MEMORY:
            seen = set()
            for index, value, line, column in doc.memory:
                if index in seen:
                    self.error(line, column, "duplicate index %d" % index)
                seen.add(index)
                if domain is not None and value not in domain:
                    self.error(
                        line, column, "value outside domain: %s" % value
                    )
            return
        if doc.memory:
            self.error(doc.memory[0][2], 1, "mem outside a memory document")
        if domain is None:
            self.error(1, 1, "missing domain")
            return
        if doc.erase_channel is None:
            self.error(1, 1, "missing erase channel")
        seen = set()
        initials = 0
        for decl in doc.states:
            for name in _instances(decl.name, domain):
                if name in seen:
                    self.error(
                        decl.line, decl.column, "duplicate state %s" % name
                    )
                seen.add(name)
            if decl.initial:
                initials += 1
        if initials == 0:
            self.error(1, 1, "missing initial state")
        elif initials > 1:
            self.error(1, 1, "more than one initial state")
        for decl in doc.transitions:
            for source, label, target in self.instances(decl):
                for state in (source, target):
                    if state not in seen:
                        self.error(
                            decl.line,
                            decl.column,
                            "unknown state %s" % state,
                        )

    def instances(self, decl):
        try:
            return list(transition_instances(self.doc, decl))
        except ValueError as e:
            self.error(decl.line, decl.column, str(e))
            return []


def transition_instances(doc, decl):
    """Expands one transition template over the domain."""
    domain = doc.domain
    free = set(RE_VAR.findall(decl.source))
    if decl.var is not None:
        free.add(decl.var)
    used = set(RE_VAR.findall(decl.target))
    used.update(RE_VAR.findall(decl.action.value))
    unbound = used - free
    if unbound:
        raise ValueError("unbound variable $%s" % sorted(unbound)[0])
    names = sorted(free)
    for values in product(domain, repeat=len(names)):
        binding = dict(zip(names, values))
        label = make_label(doc, decl.action, binding)
        yield (
            substitute(decl.source, binding),
            label,
            substitute(decl.target, binding),
        )


def make_label(doc, action, binding):
    """Turns an action into a label; directions read from the kind of
    ``doc``.
    """
    token = action.value
    if token.startswith("$"):
        value = binding[token[1:]]
    elif token in ("BE", "EE"):
        value = token
    else:
        value = parse_value(token)
        if value not in doc.domain:
            raise ValueError("value outside domain: %s" % token)
    if action.direction == "read":
        if doc.kind != USER or value in ("BE", "EE"):
            raise ValueError("read is allowed in users only")
        return mem_read(action.index, value)
    channel = action.channel
    role = dict(doc.channels).get(channel)
    if role is None:
        raise ValueError("unknown channel %s" % channel)
    marker = value in ("BE", "EE")
    if doc.kind == SYSTEM:
        if role == "other":
            if action.direction != "out" or marker:
                raise ValueError("channel %s is output only" % channel)
            return other_out(channel, value)
        if action.direction == "out":
            if value == "BE":
                return begin_erase(channel)
            if value == "EE":
                return end_erase(channel)
            return out_label(channel, value)
        if marker:
            raise ValueError("a system sends BE and EE")
        return in_label(channel, value)
    if role != "erase":
        raise ValueError("users talk on the erase channel only")
    if action.direction == "in":
        if value == "BE":
            return begin_erase(channel)
        if value == "EE":
            return end_erase(channel)
        return in_label(channel, value)
    if marker:
        raise ValueError("a user receives BE and EE")
    return out_label(channel, value)


def parse_spec(text):
    """Parses ``text`` into a ``SpecDocument``; raises ``ParseError``
    with the collected diagnostics.

    >>> parse_spec('')  # doctest: +ELLIPSIS
    Traceback (most recent call last):
        ...
    wheezy.erasure.dsl.ParseError: 1:1: error: missing header
    """
    return _Parser(text).parse()


# region: expansion


def expand(doc):
    """Builds the ``SystemSpec``, ``UserSpec`` or ``Memory`` of a
    parsed document.

    Two expanded transitions from one state with one label and
    different targets are an error in a system and a warning in a
    user.
    """
    if doc.kind == MEMORY:
        return Memory(
            dict((index, value) for index, value, _, _ in doc.memory),
            doc.name,
        )
    states, initial = doc.declared_states()
    transitions = []
    targets = {}
    diagnostics = []
    for decl in doc.transitions:
        for source, label, target in transition_instances(doc, decl):
            known = targets.setdefault((source, label), target)
            if known != target:
                message = "%s offers %s towards %s and %s" % (
                    source,
                    format_label(label, doc.kind),
                    known,
                    target,
                )
                severity = doc.kind == SYSTEM and ERROR or WARNING
                diagnostics.append(
                    ParseDiagnostic(decl.line, decl.column, message, severity)
                )
            transitions.append((source, label, target))
    doc.diagnostics = list(doc.diagnostics) + diagnostics
    if any(d.severity == ERROR for d in diagnostics):
        raise ParseError(diagnostics)
    for d in diagnostics:
        log.warning("%s: %s", doc.name, d)
    lts = Lts(doc.kind, states, initial, transitions, doc.domain, doc.name)
    if doc.kind == SYSTEM:
        return SystemSpec(lts, doc.erase_channel, doc.other_channels)
    return UserSpec(lts, doc.erase_channel)


def loads(text):
    return expand(parse_spec(text))


def load(path):
    """Reads and expands a document file."""
    with open(path) as f:
        return loads(f.read())


# region: rendering


def render_spec(spec):
    """Renders an expanded spec, or a memory, back to the text format
    with every template spelled out.
    """
    if isinstance(spec, Memory):
        lines = ["memory %s" % (spec.name or "memory")]
        lines.extend("mem %d = %s" % item for item in spec.items())
        return "\n".join(lines) + "\n"
    lts = spec.lts
    lines = [
        "%s %s" % (lts.kind, lts.name or lts.kind),
        "domain {%s}" % ", ".join(str(v) for v in lts.domain),
        "channel %s erase" % spec.erase_channel,
    ]
    for channel in sorted(getattr(spec, "other_channels", ())):
        lines.append("channel %s other" % channel)
    for state in lts.ordered_states():
        if state == lts.initial:
            lines.append("state %s initial" % state)
        else:
            lines.append("state %s" % state)
    for source, label, target in lts.ordered_transitions():
        lines.append(
            "trans %s -> %s : %s"
            % (source, target, _render_action(lts, label))
        )
    return "\n".join(lines) + "\n"


def _render_action(lts, label):
    k = label.kind
    if k == READ:
        return "read i=%d %s" % (label.index, label.value)
    if k in (BE, EE):
        direction = lts.kind == SYSTEM and "out" or "in"
        return "%s %s %s" % (direction, label.channel, k.upper())
    if k in (OUT, OTHER):
        return "out %s %s" % (label.channel, label.value)
    assert k == IN
    return "in %s %s" % (label.channel, label.value)
