""" ``system`` module.

Deterministic systems: erasure bracketing, refinement by an input
stream and the input erasure property.
"""

from collections import namedtuple
from logging import getLogger

from wheezy.erasure.labels import BE, EE, IN, SYSTEM
from wheezy.erasure.lts import (
    InconsistentBalance,
    bracket_contexts,
    bracketing_witnesses,
    check_channels,
    covers,
    is_deterministic,
    is_input_enabled,
    path_to,
    reachable,
    validate_lts,
)
from wheezy.erasure.utils import positive
from wheezy.erasure.verdict import (
    EXHAUSTIVE,
    Verdict,
    Witness,
    combine,
    summarize,
)

log = getLogger(__name__)

CLOSED = "closed"
TRUNCATED = "truncated"
STUCK = "stuck"

Session = namedtuple(
    "Session", ("status", "inputs", "trace", "states", "post")
)


class SystemSpec(object):
    """A system model and the roles of its channels."""

    def __init__(self, lts, erase_channel, other_channels=()):
        assert lts.kind == SYSTEM
        self.lts = lts
        self.erase_channel = erase_channel
        self.other_channels = frozenset(other_channels)

    @property
    def name(self):
        return self.lts.name

    @property
    def domain(self):
        return self.lts.domain


class InputStream(object):
    """An explicit finite prefix of values followed by ``default``
    forever.

    >>> s = InputStream((0, 1), 1)
    >>> [s.value(n) for n in (1, 2, 3, 4)]
    [0, 1, 1, 1]
    """

    __slots__ = ("prefix", "default")

    def __init__(self, prefix=(), default=None):
        self.prefix = tuple(prefix)
        self.default = default

    def value(self, n):
        """The ``n``-th value, counting from 1."""
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.default


class ErasurePoint(object):
    """A state with an outgoing BE, the trace leading there and the
    ordinal of the input that the block erases.
    """

    __slots__ = ("pre_state", "open_trace", "input_position", "states")

    def __init__(self, pre_state, open_trace, input_position, states=()):
        self.pre_state = pre_state
        self.open_trace = tuple(open_trace)
        self.input_position = input_position
        self.states = tuple(states)

    def __eq__(self, other):
        return (
            isinstance(other, ErasurePoint)
            and self.pre_state == other.pre_state
            and self.open_trace == other.open_trace
        )

    def __hash__(self):
        return hash((self.pre_state, self.open_trace))

    def __repr__(self):
        return "ErasurePoint(%r, n=%d, |t|=%d)" % (
            self.pre_state,
            self.input_position,
            len(self.open_trace),
        )


def input_count(trace):
    """Counts ``a?v`` labels.

    >>> from wheezy.erasure.labels import in_label, other_out
    >>> input_count(())
    0
    >>> input_count((in_label('a', 1), other_out('b', 2), in_label('a', 1)))
    2
    """
    return sum(1 for label in trace if label.kind == IN)


# region: well-formedness


def check_system_well_formed(spec):
    """Structural invariants of a system spec plus the three
    bracketing clauses: a BE is followed by the erased input for every
    value, no EE fires at balance 0 and stuck states are balanced.
    """
    lts = spec.lts
    parts = [
        validate_lts(lts),
        is_deterministic(lts),
        is_input_enabled(lts),
        check_channels(lts, spec.erase_channel, spec.other_channels),
    ]
    witnesses = []
    for state in sorted(reachable(lts)):
        for label, target in lts.successors(state):
            if label.kind != BE:
                continue
            values = set(
                lb.value
                for lb, _ in lts.successors(target)
                if lb.kind == IN and lb.channel == spec.erase_channel
            )
            missing = [v for v in lts.domain if v not in values]
            if missing:
                trace, states = path_to(lts, state)
                witnesses.append(
                    Witness(
                        "clause (1): BE at %s is not followed by an input "
                        "of %s" % (state, ", ".join(str(v) for v in missing)),
                        trace + (label,),
                        states + (target,),
                        SYSTEM,
                    )
                )
    witnesses.extend(bracketing_witnesses(lts))
    parts.append(summarize("bracketing", witnesses, (), EXHAUSTIVE, True))
    return combine("system-well-formed", parts)


# region: streams


def refine_with_stream(spec, stream, depth):
    """The unique maximal trace of length at most ``depth`` whose
    n-th input carries ``stream.value(n)``.
    """
    lts = spec.lts
    state = lts.initial
    trace = []
    n = 0
    while len(trace) < depth:
        successors = lts.successors(state)
        if not successors:
            break
        inputs = [(lb, t) for lb, t in successors if lb.kind == IN]
        if inputs:
            n += 1
            value = stream.value(n)
            if value is None:
                value = lts.domain.values[0]
            matches = [(lb, t) for lb, t in inputs if lb.value == value]
            if not matches:
                break
            label, state = matches[0]
        else:
            label, state = successors[0]
        trace.append(label)
    return tuple(trace)


def enumerate_erasure_points(spec, depth):
    """All erasure points whose open trace is at most ``depth`` long.

    Points reached by open traces of the same length, ending in the
    same state and carrying the same multiset of input values are
    reported once, with the first trace in tie-break order.
    """
    lts = spec.lts
    domain = lts.domain

    def order(entry):
        state, inputs = entry
        return state, tuple(domain.index(v) for v in inputs)

    points = []
    level = {(lts.initial, ()): ((), (lts.initial,))}
    for length in range(depth + 1):
        following = {}
        for entry in sorted(level, key=order):
            state, inputs = entry
            trace, states = level[entry]
            successors = lts.successors(state)
            if any(lb.kind == BE for lb, _ in successors):
                points.append(
                    ErasurePoint(state, trace, len(inputs) + 1, states)
                )
            if length == depth:
                continue
            for label, target in successors:
                if label.kind == IN:
                    following_inputs = tuple(
                        sorted(inputs + (label.value,), key=domain.index)
                    )
                else:
                    following_inputs = inputs
                reached = (target, following_inputs)
                if reached not in following:
                    following[reached] = (trace + (label,), states + (target,))
        level = following
        if not level:
            break
    return points


# region: input erasure


def check_input_erasure(spec, depth):
    """For every erasure point within ``depth`` and every pair of
    distinct erased values, runs sharing all other stream values must
    consume the same number of inputs inside the block and continue
    with the same labels after the matching EE.

    Runs are maximal traces of at most ``depth`` labels. A point whose
    opening or EE lies beyond the bound is inconclusive.
    """
    depth = positive(depth)
    lts = spec.lts
    try:
        contexts = bracket_contexts(lts)
    except InconsistentBalance as e:
        return Verdict(
            "input-erasure",
            "fail",
            depth,
            [Witness(str(e), e.first, (), SYSTEM)],
        )
    balance = dict((s, b) for s, (b, _) in contexts.items())
    witnesses = []
    open_states = []
    for point in enumerate_erasure_points(spec, depth):
        if len(point.open_trace) + 2 > depth:
            open_states.append(point.pre_state)
            continue
        found = _check_point(lts, point, balance, depth)
        if found is None:
            continue
        if found == TRUNCATED:
            log.debug("input erasure: block at %s cut by depth", point)
            open_states.append(point.pre_state)
        else:
            witnesses.extend(found)
            log.debug("input erasure: violation at %s", point)
    verdict = summarize(
        "input-erasure",
        witnesses,
        open_states,
        depth,
        covers(lts, depth),
    )
    log.info("input erasure of %s: %s", spec.name, verdict.outcome)
    return verdict


def _check_point(lts, point, balance, depth):
    """Returns None when the point passes, ``TRUNCATED`` when the bound
    cuts a block, or the witnesses of the first violation.
    """
    be_label, opened = [
        (lb, t) for lb, t in lts.successors(point.pre_state) if lb.kind == BE
    ][0]
    level = balance[point.pre_state]
    offset = len(point.open_trace) + 2
    branches = [(lb, t) for lb, t in lts.successors(opened) if lb.kind == IN]
    sessions = {}
    for label, target in branches:
        sessions[label] = list(
            _sessions(lts, target, level, depth - offset, balance)
        )
    truncated = False
    for lv, _ in branches:
        for lw, _ in branches:
            if lv == lw:
                continue
            for sv in sessions[lv]:
                if sv.status == TRUNCATED:
                    truncated = True
                    continue
                if sv.status == STUCK:
                    continue
                for sw in sessions[lw]:
                    if not _compatible(sv.inputs, sw.inputs):
                        continue
                    if sw.status == TRUNCATED:
                        truncated = True
                        continue
                    head_v = point.open_trace + (be_label, lv)
                    head_w = point.open_trace + (be_label, lw)
                    states_v = point.states + (opened,) + sv.states
                    states_w = point.states + (opened,) + sw.states
                    if sw.status == STUCK:
                        return [
                            Witness(
                                "unmatched EE: value %s closes its block"
                                % lv.value,
                                head_v + sv.trace,
                                states_v,
                                SYSTEM,
                            ),
                            Witness(
                                "unmatched EE: value %s cannot" % lw.value,
                                head_w + sw.trace,
                                states_w,
                                SYSTEM,
                            ),
                        ]
                    if len(sv.inputs) != len(sw.inputs):
                        return [
                            Witness(
                                "value %s: block consumes %d inputs"
                                % (lv.value, len(sv.inputs)),
                                head_v + sv.trace,
                                states_v,
                                SYSTEM,
                            ),
                            Witness(
                                "value %s: block consumes %d inputs"
                                % (lw.value, len(sw.inputs)),
                                head_w + sw.trace,
                                states_w,
                                SYSTEM,
                            ),
                        ]
                    diverging = _diverge(
                        lts,
                        sv.post,
                        sw.post,
                        depth - offset - len(sv.trace),
                        depth - offset - len(sw.trace),
                    )
                    if diverging is not None:
                        zv, zw, qv, qw = diverging
                        return [
                            Witness(
                                "value %s: continuation after EE" % lv.value,
                                head_v + sv.trace + zv,
                                states_v + qv,
                                SYSTEM,
                            ),
                            Witness(
                                "value %s: continuation after EE" % lw.value,
                                head_w + sw.trace + zw,
                                states_w + qw,
                                SYSTEM,
                            ),
                        ]
    return truncated and TRUNCATED or None


def _sessions(lts, start, level, budget, balance):
    """Enumerates the blocks opened just before ``start``: closed at
    the EE returning to ``level``, stuck, or cut after ``budget``
    labels.
    """
    stack = [(start, (), (), (start,))]
    while stack:
        state, inputs, trace, states = stack.pop()
        if len(trace) == budget:
            yield Session(TRUNCATED, inputs, trace, states, state)
            continue
        successors = lts.successors(state)
        if not successors:
            yield Session(STUCK, inputs, trace, states, state)
            continue
        for label, target in reversed(successors):
            following = trace + (label,)
            if label.kind == IN:
                following_inputs = inputs + (label.value,)
            else:
                following_inputs = inputs
            if label.kind == EE and balance.get(target) == level:
                yield Session(
                    CLOSED,
                    following_inputs,
                    following,
                    states + (target,),
                    target,
                )
            else:
                stack.append(
                    (target, following_inputs, following, states + (target,))
                )


def _compatible(a, b):
    """Two input sequences can come from one stream.

    >>> _compatible((0, 1), (0,))
    True
    >>> _compatible((0, 1), (1,))
    False
    """
    n = min(len(a), len(b))
    return a[:n] == b[:n]


def _diverge(lts, x, y, bx, by):
    """Walks two continuations fed by the same stream. Returns the
    diverging label sequences and the states they reach, or None when
    they agree within their budgets.
    """
    stack = [(x, y, bx, by, (), (), (), ())]
    seen = set()
    while stack:
        x, y, bx, by, zx, zy, qx, qy = stack.pop()
        if (x, y, bx, by) in seen:
            continue
        seen.add((x, y, bx, by))
        if bx == 0 or by == 0:
            continue
        sx = lts.successors(x)
        sy = lts.successors(y)
        if not sx and not sy:
            continue
        if not sx:
            return zx, zy + (sy[0][0],), qx, qy + (sy[0][1],)
        if not sy:
            return zx + (sx[0][0],), zy, qx + (sx[0][1],), qy
        ix = sx[0][0].kind == IN
        iy = sy[0][0].kind == IN
        if ix and iy:
            tx = dict((lb.value, t) for lb, t in sx if lb.kind == IN)
            ty = dict((lb.value, t) for lb, t in sy if lb.kind == IN)
            for value in reversed(lts.domain.values):
                if value in tx and value in ty:
                    label = [lb for lb, _ in sx if lb.value == value][0]
                    stack.append(
                        (
                            tx[value],
                            ty[value],
                            bx - 1,
                            by - 1,
                            zx + (label,),
                            zy + (label,),
                            qx + (tx[value],),
                            qy + (ty[value],),
                        )
                    )
            continue
        (lx, tx), (ly, ty) = sx[0], sy[0]
        if ix or iy or lx != ly:
            return zx + (lx,), zy + (ly,), qx + (tx,), qy + (ty,)
        stack.append(
            (
                tx,
                ty,
                bx - 1,
                by - 1,
                zx + (lx,),
                zy + (ly,),
                qx + (tx,),
                qy + (ty,),
            )
        )
    return None


