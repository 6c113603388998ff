""" ``labels`` module.

A label is one interaction event. The same constructors serve every
model kind, the direction is read relative to the model: in a system
``OUT`` is an emission on the erase channel, in a user it is the value
the user sends (the system's input).
"""

from collections import namedtuple

SYSTEM = "system"
USER = "user"
COMPOSED = "composed"

OUT = "out"
IN = "in"
BE = "be"
EE = "ee"
OTHER = "other"
READ = "read"
SYNC = "sync"
SYNC_BE = "sync_be"
SYNC_EE = "sync_ee"

KINDS = (OUT, IN, BE, EE, OTHER, READ, SYNC, SYNC_BE, SYNC_EE)
KIND_ORDER = dict((kind, i) for i, kind in enumerate(KINDS))

LEGAL_KINDS = {
    SYSTEM: frozenset((OUT, IN, BE, EE, OTHER)),
    USER: frozenset((OUT, IN, BE, EE, READ)),
    COMPOSED: frozenset((SYNC, SYNC_BE, SYNC_EE, OTHER, READ)),
}

VALUE_KINDS = frozenset((OUT, IN, OTHER, READ, SYNC))

Label = namedtuple("Label", ("kind", "channel", "index", "value"))


def out_label(channel, value):
    """``channel!value``

    >>> out_label('a', 1)
    Label(kind='out', channel='a', index=None, value=1)
    """
    return Label(OUT, channel, None, value)


def in_label(channel, value):
    """``channel?value``"""
    return Label(IN, channel, None, value)


def begin_erase(channel):
    """The reserved BE marker on ``channel``."""
    return Label(BE, channel, None, None)


def end_erase(channel):
    """The reserved EE marker on ``channel``."""
    return Label(EE, channel, None, None)


def other_out(channel, value):
    """An output on a channel other than the erase one."""
    return Label(OTHER, channel, None, value)


def mem_read(index, value):
    """The user fetches ``value`` stored at ``index`` of its memory."""
    return Label(READ, None, index, value)


def sync(value):
    """A value passed between user and system."""
    return Label(SYNC, None, None, value)


SYNC_BEGIN = Label(SYNC_BE, None, None, None)
SYNC_END = Label(SYNC_EE, None, None, None)


def value_rank(value, domain=None):
    """Sort key of a value: domain order first, then ints before
    symbols.

    >>> value_rank(None)
    (-1,)
    >>> value_rank(2) < value_rank('x')
    True
    """
    if value is None:
        return (-1,)
    if domain is not None and value in domain:
        return (0, domain.index(value))
    if isinstance(value, int):
        return (1, 0, value)
    return (1, 1, str(value))


def label_key(label, domain=None):
    """Tie-break key: kind, then channel, then index, then value.

    >>> a = [in_label('a', 1), out_label('a', 0), begin_erase('a')]
    >>> [l.kind for l in sorted(a, key=label_key)]
    ['out', 'in', 'be']
    """
    return (
        KIND_ORDER[label.kind],
        label.channel or "",
        label.index or 0,
        value_rank(label.value, domain),
    )


def is_input(label, kind):
    """Tells whether ``label`` is a value reception for a model of
    ``kind``.

    >>> is_input(in_label('a', 0), SYSTEM)
    True
    >>> is_input(mem_read(1, 0), SYSTEM)
    False
    >>> is_input(mem_read(1, 0), USER)
    True
    """
    if kind == USER:
        return label.kind in (IN, READ)
    if kind == SYSTEM:
        return label.kind == IN
    return label.kind == READ


def format_label(label, kind=SYSTEM):
    """Renders ``label`` in the usual ``a!v`` notation.

    >>> format_label(begin_erase('a'))
    'a!BE'
    >>> format_label(begin_erase('a'), USER)
    'a?BE'
    >>> format_label(mem_read(1, 0))
    '1?0'
    >>> format_label(SYNC_END)
    'sync(EE)'
    """
    k = label.kind
    if k == OUT or k == OTHER:
        return "%s!%s" % (label.channel, label.value)
    if k == IN:
        return "%s?%s" % (label.channel, label.value)
    if k == BE or k == EE:
        marker = k == BE and "BE" or "EE"
        if kind == USER:
            return "%s?%s" % (label.channel, marker)
        return "%s!%s" % (label.channel, marker)
    if k == READ:
        return "%s?%s" % (label.index, label.value)
    if k == SYNC:
        return "sync(%s)" % (label.value,)
    if k == SYNC_BE:
        return "sync(BE)"
    return "sync(EE)"


def format_trace(trace, kind=SYSTEM):
    """Renders a trace on one line; the empty trace is ``ε``.

    >>> format_trace(())
    'ε'
    >>> format_trace((begin_erase('a'), in_label('a', 1)))
    'a!BE a?1'
    """
    if not trace:
        return "ε"
    return " ".join(format_label(label, kind) for label in trace)
