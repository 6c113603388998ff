""" ``user`` module.

Users supply the values a system erases: well-formedness, secret
singularity, erasure zones and frontiers, output equality, stream
ability, secret confinement and their conjunction.
"""

from collections import namedtuple
from itertools import combinations
from logging import getLogger

from wheezy.erasure.labels import BE, EE, OUT, READ, USER
from wheezy.erasure.lts import (
    CeilingReached,
    bracketing_witnesses,
    check_channels,
    covers,
    distances,
    distinguishing_trace,
    is_input_enabled,
    path_to,
    reachable,
    shortest_trace,
    traces_to_depth,
    validate_lts,
)
from wheezy.erasure.utils import positive
from wheezy.erasure.verdict import (
    EXHAUSTIVE,
    FAIL,
    PASS,
    Verdict,
    Witness,
    bounded,
    combine,
    summarize,
)

log = getLogger(__name__)

CEILING = 2000

ERASE = "er"
SEND = "out"

Token = namedtuple("Token", ("kind", "index", "value"))


class UserSpec(object):
    """A possibly nondeterministic user model."""

    def __init__(self, lts, erase_channel):
        assert lts.kind == USER
        self.lts = lts
        self.erase_channel = erase_channel

    @property
    def name(self):
        return self.lts.name

    @property
    def domain(self):
        return self.lts.domain


class ErasureSession(object):
    """A run from ``start_state`` that opens an erasure block with
    ``a?BE``, a read and the send of the value read; complete once the
    matching ``a?EE`` is taken.
    """

    __slots__ = (
        "start_state",
        "trace",
        "states",
        "complete",
        "secret_index",
        "secret_value",
    )

    def __init__(
        self, start_state, trace, states, complete, secret_index, secret_value
    ):
        self.start_state = start_state
        self.trace = tuple(trace)
        self.states = tuple(states)
        self.complete = complete
        self.secret_index = secret_index
        self.secret_value = secret_value

    @property
    def end_state(self):
        return self.states[-1]

    def is_open(self, model, depth):
        """An incomplete session cut by the bound rather than stuck."""
        return (
            not self.complete
            and len(self.trace) == depth
            and not model.is_stuck(self.end_state)
        )

    def __repr__(self):
        return "ErasureSession(%r, %d labels, %s)" % (
            self.start_state,
            len(self.trace),
            self.complete and "complete" or "incomplete",
        )


class ErasureZone(object):
    __slots__ = ("anchor", "sessions")

    def __init__(self, anchor, sessions):
        self.anchor = anchor
        self.sessions = tuple(sessions)

    def __iter__(self):
        return iter(self.sessions)

    def __len__(self):
        return len(self.sessions)


class Frontier(object):
    __slots__ = ("anchor", "states")

    def __init__(self, anchor, states):
        self.anchor = anchor
        self.states = frozenset(states)

    def __iter__(self):
        return iter(sorted(self.states))

    def __len__(self):
        return len(self.states)


# region: well-formedness


def check_user_well_formed(user):
    """Every ``a?BE`` is followed by reads of one index, one per value,
    each followed by sending the value read; reads appear nowhere else;
    brackets balance as in systems.
    """
    lts = user.lts
    parts = [
        validate_lts(lts),
        is_input_enabled(lts),
        check_channels(lts, user.erase_channel),
    ]
    reach = reachable(lts)
    incoming = {}
    for source, label, target in lts.ordered_transitions():
        if source in reach:
            incoming.setdefault(target, []).append((source, label))
    witnesses = []
    for state in sorted(reach):
        for label, target in lts.successors(state):
            if label.kind == BE:
                problem = _opening_problem(user, target)
                if problem:
                    trace, states = path_to(lts, state)
                    witnesses.append(
                        Witness(
                            "clause (1): after BE at %s %s"
                            % (lts.format_state(state), problem),
                            trace + (label,),
                            states + (target,),
                            USER,
                        )
                    )
            elif label.kind == READ:
                problem = _read_problem(user, state, label, target, incoming)
                if problem:
                    trace, states = path_to(lts, state)
                    witnesses.append(
                        Witness(
                            "clause (2): read at %s %s"
                            % (lts.format_state(state), problem),
                            trace + (label,),
                            states + (target,),
                            USER,
                        )
                    )
    witnesses.extend(bracketing_witnesses(lts))
    parts.append(summarize("bracketing", witnesses, (), EXHAUSTIVE, True))
    return combine("user-well-formed", parts)


def _opening_problem(user, state):
    lts = user.lts
    successors = lts.successors(state)
    if not successors:
        return "the user is stuck"
    if any(label.kind != READ for label, _ in successors):
        return "the user does something else than reading"
    indices = set(label.index for label, _ in successors)
    if len(indices) > 1:
        return "the user reads several indices"
    sends = {}
    for label, target in successors:
        if _sends(user, target, label.value):
            sends[label.value] = True
    missing = [v for v in lts.domain if v not in sends]
    if missing:
        return "no read of %s is followed by sending it" % ", ".join(
            str(v) for v in missing
        )
    return None


def _read_problem(user, state, label, target, incoming):
    lts = user.lts
    if state == lts.initial:
        return "happens at the initial state"
    entries = incoming.get(state, ())
    if any(lb.kind != BE for _, lb in entries):
        return "does not follow a BE"
    successors = lts.successors(target)
    if not successors or any(
        lb.kind != OUT or lb.value != label.value for lb, _ in successors
    ):
        return "is not followed by sending %s" % label.value
    return None


def _sends(user, state, value):
    return any(
        label.kind == OUT
        and label.channel == user.erase_channel
        and label.value == value
        for label, _ in user.lts.successors(state)
    )


# region: singularity


def check_secret_singularity(user, depth):
    """No run within ``depth`` reads one memory index twice.

    The shortest offending run is found from breadth-first distances
    over every pair of reads of one index, cycles included.
    """
    depth = positive(depth)
    lts = user.lts
    start = distances(lts)
    reads = [
        (source, label, target)
        for source, label, target in lts.ordered_transitions()
        if label.kind == READ and source in start
    ]
    found = None
    pairs = False
    cache = {}
    for a, first_read, b in reads:
        if b not in cache:
            cache[b] = distances(lts, b)
        for c, second_read, d in reads:
            if second_read.index != first_read.index or c not in cache[b]:
                continue
            pairs = True
            length = start[a] + cache[b][c] + 2
            if found is None or length < found[0]:
                found = (length, a, first_read, b, c, second_read, d)
    if found is None or found[0] > depth:
        return Verdict("singularity", PASS, bounded(depth, not pairs))
    _, a, first_read, b, c, second_read, d = found
    head, head_states = path_to(lts, a)
    middle, middle_states = shortest_trace(lts, b, c)
    return Verdict(
        "singularity",
        FAIL,
        depth,
        [
            Witness(
                "index %s is read twice" % first_read.index,
                head + (first_read,) + middle + (second_read,),
                head_states + middle_states + (d,),
                USER,
            )
        ],
    )


# region: zones


def anchors(user, depth):
    """States within ``depth`` of the initial one offering ``a?BE``."""
    lts = user.lts
    return [
        state
        for state in sorted(distances(lts, cutoff=depth))
        if any(label.kind == BE for label, _ in lts.successors(state))
    ]


def erasure_zone(user, anchor, depth):
    """Complete and maximal incomplete erasure sessions of at most
    ``depth`` labels starting at ``anchor``.
    """
    depth = positive(depth)
    lts = user.lts
    sessions = []
    if depth < 3:
        return ErasureZone(anchor, sessions)
    for be, opened in lts.successors(anchor):
        if be.kind != BE:
            continue
        for read, fetched in lts.successors(opened):
            if read.kind != READ:
                continue
            for sent, start in lts.successors(fetched):
                if sent.kind != OUT or sent.value != read.value:
                    continue
                head = (be, read, sent)
                stack = [(start, head, (anchor, opened, fetched, start), 1)]
                while stack:
                    state, trace, states, level = stack.pop()
                    successors = lts.successors(state)
                    if len(trace) == depth or not successors:
                        sessions.append(
                            ErasureSession(
                                anchor,
                                trace,
                                states,
                                False,
                                read.index,
                                read.value,
                            )
                        )
                        continue
                    for label, target in reversed(successors):
                        if label.kind == EE and level == 1:
                            sessions.append(
                                ErasureSession(
                                    anchor,
                                    trace + (label,),
                                    states + (target,),
                                    True,
                                    read.index,
                                    read.value,
                                )
                            )
                            continue
                        if label.kind == BE:
                            following = level + 1
                        elif label.kind == EE:
                            following = level - 1
                        else:
                            following = level
                        stack.append(
                            (
                                target,
                                trace + (label,),
                                states + (target,),
                                following,
                            )
                        )
    return ErasureZone(anchor, sessions)


def erasure_frontier(user, anchor, depth):
    """States right after the closing ``a?EE`` of complete sessions."""
    zone = erasure_zone(user, anchor, depth)
    return Frontier(anchor, (s.end_state for s in zone if s.complete))


# region: output equality


def tokens(trace):
    """Reduces a user trace to its outputs: an erasure opening
    ``(a?BE)(i?v)(a!v)`` is one token, a plain ``a!v`` another; all
    other labels are skipped.

    >>> from wheezy.erasure.labels import begin_erase, mem_read, out_label
    >>> tokens((begin_erase('a'), mem_read(1, 3), out_label('a', 3)))
    (Token(kind='er', index=1, value=3),)
    >>> tokens((begin_erase('a'), out_label('a', 3)))
    (Token(kind='out', index=None, value=3),)
    """
    result = []
    i = 0
    n = len(trace)
    while i < n:
        label = trace[i]
        if (
            label.kind == BE
            and i + 2 < n
            and trace[i + 1].kind == READ
            and trace[i + 2].kind == OUT
        ):
            result.append(
                Token(ERASE, trace[i + 1].index, trace[i + 2].value)
            )
            i += 3
            continue
        if label.kind == OUT:
            result.append(Token(SEND, None, label.value))
        i += 1
    return tuple(result)


def token_match(a, b):
    """Two openings match on the secret index, any other pair on the
    value sent.
    """
    if a.kind == ERASE and b.kind == ERASE:
        return a.index == b.index
    return a.value == b.value


def output_equal(t, t2):
    """Tells whether two user traces agree on their outputs.

    >>> from wheezy.erasure.labels import begin_erase, mem_read, out_label
    >>> def er(i, v):
    ...     return (begin_erase('a'), mem_read(i, v), out_label('a', v))
    >>> output_equal((), ())
    True
    >>> output_equal(er(1, 3), (out_label('a', 3),))
    True
    >>> output_equal(er(1, 3), er(2, 3))
    False
    >>> output_equal(er(1, 3), er(1, 4))
    True
    """
    a = tokens(t)
    b = tokens(t2)
    return len(a) == len(b) and all(
        token_match(x, y) for x, y in zip(a, b)
    )


def _disagreement(a, open_a, b, open_b):
    """Position of the first token pair that does not match, or None.
    A shorter token sequence is acceptable only when the bound cut it.
    """
    n = min(len(a), len(b))
    for k in range(n):
        if not token_match(a[k], b[k]):
            return k
    if len(a) < len(b) and not open_a or len(b) < len(a) and not open_b:
        return n
    return None


# region: stream ability


def check_stream_ability(user, depth):
    """Every two sessions of a zone are output equal.

    Sessions are grouped by their token sequence first, so each
    distinct output skeleton is compared once.
    """
    depth = positive(depth)
    lts = user.lts
    witnesses = []
    open_states = []
    for anchor in anchors(user, depth):
        zone = erasure_zone(user, anchor, depth)
        if not zone.sessions:
            continue
        groups = {}
        for session in zone:
            key = (tokens(session.trace), session.is_open(lts, depth))
            groups.setdefault(key, session)
        if all(is_open for _, is_open in groups):
            log.debug("stream ability: zone at %s cut by depth", anchor)
            open_states.append(anchor)
            continue
        for (ka, oa), (kb, ob) in combinations(list(groups), 2):
            k = _disagreement(ka, oa, kb, ob)
            if k is None:
                continue
            head, head_states = path_to(lts, anchor)
            for key in ((ka, oa), (kb, ob)):
                session = groups[key]
                witnesses.append(
                    Witness(
                        "zone at %s: output %d differs"
                        % (lts.format_state(anchor), k + 1),
                        head + session.trace,
                        head_states + session.states[1:],
                        USER,
                    )
                )
            break
    return summarize(
        "stream-ability", witnesses, open_states, depth, covers(lts, depth)
    )


# region: confinement


def check_secret_confinement(user, depth, ceiling=CEILING):
    """Frontier states of every zone offer the same traces.

    Trace equivalence is decided by subset construction; once that
    needs more than ``ceiling`` pairs, trace sets up to ``depth`` are
    compared instead. A difference counts only when its shortest
    distinguishing trace fits within ``depth``.
    """
    depth = positive(depth)
    ceiling = positive(ceiling)
    lts = user.lts
    witnesses = []
    exact = covers(lts, depth)
    for anchor in anchors(user, depth):
        zone = erasure_zone(user, anchor, depth)
        ends = {}
        for session in zone:
            if session.complete:
                ends.setdefault(session.end_state, session)
        for x, y in combinations(sorted(ends), 2):
            try:
                trace = distinguishing_trace(lts, x, y, ceiling)
            except CeilingReached:
                log.debug(
                    "confinement: ceiling reached for %s and %s, "
                    "comparing traces up to %d",
                    x,
                    y,
                    depth,
                )
                exact = False
                trace = _shortest_difference(
                    lts,
                    traces_to_depth(lts, x, depth),
                    traces_to_depth(lts, y, depth),
                )
            if trace is None or len(trace) > depth:
                continue
            head, head_states = path_to(lts, anchor)
            description = "frontier states %s and %s differ" % (
                lts.format_state(x),
                lts.format_state(y),
            )
            for state in (x, y):
                session = ends[state]
                witnesses.append(
                    Witness(
                        description,
                        head + session.trace + trace,
                        head_states + session.states[1:],
                        USER,
                    )
                )
            break
    return summarize("confinement", witnesses, (), depth, exact)


def _shortest_difference(model, a, b):
    differ = a ^ b
    if not differ:
        return None
    return min(
        differ, key=lambda t: (len(t), [model.label_key(lb) for lb in t])
    )


def check_erasure_friendly(user, depth, ceiling=CEILING):
    verdict = combine(
        "erasure-friendly",
        [
            check_user_well_formed(user),
            check_secret_singularity(user, depth),
            check_secret_confinement(user, depth, ceiling),
            check_stream_ability(user, depth),
        ],
        depth,
    )
    log.info("erasure friendliness of %s: %s", user.name, verdict.outcome)
    return verdict
