""" ``composition`` module.

The synchronized product of a user and a system, projections of its
traces back to the components and the liveness of a user for a system.
"""

from collections import deque
from logging import getLogger

from wheezy.erasure.labels import (
    BE,
    COMPOSED,
    EE,
    IN,
    OTHER,
    OUT,
    READ,
    SYNC,
    SYNC_BE,
    SYNC_BEGIN,
    SYNC_EE,
    SYNC_END,
    begin_erase,
    end_erase,
    format_label,
    in_label,
    out_label,
    sync,
)
from wheezy.erasure.lts import Lts, path_to
from wheezy.erasure.memory import instantiate
from wheezy.erasure.utils import positive
from wheezy.erasure.verdict import Witness, summarize

try:
    import pydot
except ImportError:  # pragma: nocover
    pydot = None

log = getLogger(__name__)


class ComposedLts(Lts):
    """The reachable part of ``U|S`` within ``depth`` steps.

    ``truncated`` holds the states found at the bound whose moves were
    not explored.
    """

    def __init__(
        self, user, system, states, initial, transitions, depth, truncated
    ):
        super(ComposedLts, self).__init__(
            COMPOSED,
            states,
            initial,
            transitions,
            system.domain,
            "%s|%s" % (user.name, system.name),
        )
        self.user = user
        self.system = system
        self.depth = depth
        self.truncated = frozenset(truncated)


def moves(user_lts, system_lts, channel, state):
    """Composed moves from ``(u, s)``, one per rule instance: value
    exchanges and erase markers synchronize on ``channel``, other
    outputs of the system and memory reads of the user fire alone.
    """
    u, s = state
    result = []
    user_moves = user_lts.successors(u)
    for label, target in system_lts.successors(s):
        k = label.kind
        if k == OTHER:
            result.append((label, (u, target)))
            continue
        if label.channel != channel:
            continue
        if k == IN:
            wanted = out_label(channel, label.value)
            composed = sync(label.value)
        elif k == OUT:
            wanted = in_label(channel, label.value)
            composed = sync(label.value)
        elif k == BE:
            wanted = begin_erase(channel)
            composed = SYNC_BEGIN
        else:
            wanted = end_erase(channel)
            composed = SYNC_END
        for lb, t in user_moves:
            if lb == wanted:
                result.append((composed, (t, target)))
    for label, target in user_moves:
        if label.kind == READ:
            result.append((label, (target, s)))
    return result


def compose(user, system, depth, memory=None):
    """Builds the product breadth first from ``(u0, s0)``; states
    first met at ``depth`` steps are kept but not expanded.

    With ``memory`` the user instance ``U(memory)`` is composed.
    """
    depth = positive(depth)
    user_lts = user.lts
    if memory is not None:
        user_lts = instantiate(user, memory).lts
    channel = system.erase_channel
    initial = (user_lts.initial, system.lts.initial)
    level = {initial: 0}
    transitions = []
    truncated = []
    queue = deque([initial])
    while queue:
        state = queue.popleft()
        if level[state] == depth:
            truncated.append(state)
            continue
        for label, target in moves(user_lts, system.lts, channel, state):
            transitions.append((state, label, target))
            if target not in level:
                level[target] = level[state] + 1
                queue.append(target)
    composed = ComposedLts(
        user,
        system,
        level,
        initial,
        transitions,
        depth,
        (s for s in truncated if moves(user_lts, system.lts, channel, s)),
    )
    log.debug(
        "composed %s: %d states, %d transitions",
        composed.name,
        len(composed.states),
        len(composed.transitions),
    )
    return composed


# region: projections


def _directions(trace, system):
    """Replays ``trace`` on the system and yields each composed label
    with the system label that justifies it, None for user reads.
    """
    lts = system.lts
    state = lts.initial
    for label in trace:
        if label.kind == READ:
            yield label, None
            continue
        for lb, target in lts.successors(state):
            if (
                label.kind == SYNC
                and lb.kind in (IN, OUT)
                and lb.channel == system.erase_channel
                and lb.value == label.value
                or label.kind == SYNC_BE
                and lb.kind == BE
                or label.kind == SYNC_EE
                and lb.kind == EE
                or label.kind == OTHER
                and lb == label
            ):
                yield label, lb
                state = target
                break
        else:
            raise ValueError(
                "%s is not a move of the system"
                % format_label(label, COMPOSED)
            )


def project_system(trace, system):
    """The system's share of a composed trace.

    >>> from wheezy.erasure.corpus import load_entry
    >>> from wheezy.erasure.labels import mem_read
    >>> system = load_entry('minimal').system
    >>> t = (SYNC_BEGIN, mem_read(1, 0), sync(0), SYNC_END)
    >>> [format_label(lb) for lb in project_system(t, system)]
    ['a!BE', 'a?0', 'a!EE']
    """
    return tuple(lb for _, lb in _directions(trace, system) if lb)


def project_user(trace, system):
    """The user's share of a composed trace; value exchanges are
    mirrored.

    >>> from wheezy.erasure.corpus import load_entry
    >>> from wheezy.erasure.labels import USER
    >>> from wheezy.erasure.labels import mem_read
    >>> system = load_entry('minimal').system
    >>> t = (SYNC_BEGIN, mem_read(1, 0), sync(0), SYNC_END)
    >>> [format_label(lb, USER) for lb in project_user(t, system)]
    ['a?BE', '1?0', 'a!0', 'a?EE']
    """
    result = []
    for label, lb in _directions(trace, system):
        if lb is None:
            result.append(label)
        elif lb.kind == IN:
            result.append(out_label(lb.channel, lb.value))
        elif lb.kind == OUT:
            result.append(in_label(lb.channel, lb.value))
        elif lb.kind in (BE, EE):
            result.append(lb)
    return tuple(result)


# region: liveness


def _read_closure(user_lts, state):
    """States reachable from ``state`` through memory reads alone."""
    seen = {state}
    stack = [state]
    while stack:
        u = stack.pop()
        for label, target in user_lts.successors(u):
            if label.kind == READ and target not in seen:
                seen.add(target)
                stack.append(target)
    return seen


def _offers(user_lts, states, wanted):
    return any(
        wanted(label) for u in states for label, _ in user_lts.successors(u)
    )


def check_liveness(user, system, depth):
    """The user never blocks the system: at an input state it can
    reach a send by reading memory, and at any other state it takes
    part in the system move on the erase channel right away.
    """
    depth = positive(depth)
    composed = compose(user, system, depth)
    user_lts = user.lts
    channel = system.erase_channel
    witnesses = []
    for state in composed.ordered_states():
        u, s = state
        successors = system.lts.successors(s)
        if not successors:
            continue
        pending = None
        if any(lb.kind == IN for lb, _ in successors):
            if not _offers(
                user_lts,
                _read_closure(user_lts, u),
                lambda lb: lb.kind == OUT and lb.channel == channel,
            ):
                pending = "an input"
        else:
            label = successors[0][0]
            if label.kind in (BE, EE):
                wanted = begin_erase(channel)
                if label.kind == EE:
                    wanted = end_erase(channel)
                if not _offers(user_lts, (u,), lambda lb: lb == wanted):
                    pending = format_label(label)
            elif label.kind == OUT:
                wanted = in_label(channel, label.value)
                if not _offers(user_lts, (u,), lambda lb: lb == wanted):
                    pending = format_label(label)
        if pending is None:
            continue
        trace, states = path_to(composed, state)
        witnesses.append(
            Witness(
                "user %s blocks system %s waiting for %s"
                % (u, system.lts.format_state(s), pending),
                trace,
                states,
                COMPOSED,
            )
        )
    verdict = summarize(
        "liveness", witnesses, (), depth, not composed.truncated
    )
    log.info(
        "liveness of %s for %s: %s", user.name, system.name, verdict.outcome
    )
    return verdict


# region: dot


def to_dot(model):
    """Renders ``model`` as a ``pydot.Dot`` graph with states labelled
    ``u|s``.
    """
    if pydot is None:  # pragma: nocover
        raise RuntimeError("DOT export requires the pydot package")
    graph = pydot.Dot(graph_type="digraph")
    names = {}
    for i, state in enumerate(model.ordered_states()):
        names[state] = "n%d" % i
        attrs = {"label": '"%s"' % model.format_state(state)}
        if state == model.initial:
            attrs["shape"] = "doublecircle"
        graph.add_node(pydot.Node(names[state], **attrs))
    for source, label, target in model.ordered_transitions():
        graph.add_edge(
            pydot.Edge(
                names[source],
                names[target],
                label='"%s"' % format_label(label, model.kind),
            )
        )
    return graph


def write_dot(model, path):
    to_dot(model).write(path, format="raw")
