""" ``lts`` module.

Labelled transition systems, their traces and the structural checks
every property builds on.
"""

from collections import deque

import networkx as nx

from wheezy.erasure.labels import (
    BE,
    EE,
    IN,
    LEGAL_KINDS,
    OTHER,
    OUT,
    READ,
    SYNC,
    SYNC_BE,
    SYNC_EE,
    SYSTEM,
    USER,
    VALUE_KINDS,
    format_label,
    is_input,
    label_key,
)
from wheezy.erasure.verdict import EXHAUSTIVE, Witness, summarize


class ValueDomain(object):
    """An ordered finite set of at least two distinct values."""

    __slots__ = ("values", "ranks")

    def __init__(self, values):
        values = tuple(values)
        if len(values) < 2:
            raise ValueError("A value domain needs at least two values")
        ranks = {}
        for i, value in enumerate(values):
            if value in ranks:
                raise ValueError("Duplicate domain value %r" % (value,))
            ranks[value] = i
        self.values = values
        self.ranks = ranks

    def __contains__(self, value):
        return not isinstance(value, bool) and value in self.ranks

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def index(self, value):
        return self.ranks[value]

    def __eq__(self, other):
        return isinstance(other, ValueDomain) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return "ValueDomain(%r)" % (self.values,)


class Lts(object):
    """A finite labelled transition system.

    ``transitions`` is a collection of ``(source, label, target)``.
    Nothing is validated on construction; see ``validate_lts``.
    """

    def __init__(self, kind, states, initial, transitions, domain, name=None):
        self.kind = kind
        self.name = name
        self.states = frozenset(states)
        self.initial = initial
        self.domain = domain
        self.transitions = frozenset(transitions)
        outgoing = {}
        for source, label, target in self.transitions:
            outgoing.setdefault(source, []).append((label, target))
        self.outgoing = dict(
            (state, tuple(sorted(items, key=self.edge_key)))
            for state, items in outgoing.items()
        )
        self._graph = None

    def edge_key(self, edge):
        label, target = edge
        return label_key(label, self.domain), target

    def label_key(self, label):
        return label_key(label, self.domain)

    def successors(self, state):
        """Outgoing ``(label, target)`` pairs in tie-break order."""
        return self.outgoing.get(state, ())

    def targets(self, state, label):
        return tuple(t for lb, t in self.successors(state) if lb == label)

    def is_stuck(self, state):
        return state not in self.outgoing

    def ordered_states(self):
        return sorted(self.states)

    def ordered_transitions(self):
        return sorted(
            self.transitions,
            key=lambda t: (t[0], self.label_key(t[1]), t[2]),
        )

    @property
    def graph(self):
        """The model as a ``networkx.MultiDiGraph`` keyed by label."""
        if self._graph is None:
            g = nx.MultiDiGraph(name=self.name)
            g.add_nodes_from(self.ordered_states())
            for source, label, target in self.ordered_transitions():
                g.add_edge(source, target, key=label)
            self._graph = g
        return self._graph

    def format_state(self, state):
        if isinstance(state, tuple):
            return "|".join(str(s) for s in state)
        return str(state)

    def __eq__(self, other):
        return (
            isinstance(other, Lts)
            and self.kind == other.kind
            and self.states == other.states
            and self.initial == other.initial
            and self.transitions == other.transitions
            and self.domain == other.domain
        )

    def __hash__(self):
        return hash((self.kind, self.initial, self.transitions))

    def __repr__(self):
        return "Lts(%r, %d states, %d transitions)" % (
            self.kind,
            len(self.states),
            len(self.transitions),
        )


class InconsistentBalance(ValueError):
    """One state is reachable at two different bracket balances."""

    def __init__(self, state, first, second):
        super(InconsistentBalance, self).__init__(
            "inconsistent bracketing at state %s" % (state,)
        )
        self.state = state
        self.first = tuple(first)
        self.second = tuple(second)


# region: traces


def traces_to_depth(model, start, depth):
    """Returns the set of traces of length at most ``depth`` from
    ``start``; it always holds the empty trace.
    """
    traces = {()}
    frontier = {((), start)}
    for _ in range(depth):
        following = set()
        for trace, state in frontier:
            for label, target in model.successors(state):
                following.add((trace + (label,), target))
        if not following:
            break
        traces.update(trace for trace, _ in following)
        frontier = following
    return traces


def replay(model, trace, start=None):
    """Returns the set of states reached by ``trace``; empty when
    ``trace`` is not a trace of ``model``.
    """
    states = {model.initial if start is None else start}
    for label in trace:
        states = set(
            t for state in states for t in model.targets(state, label)
        )
        if not states:
            break
    return frozenset(states)


def distances(model, start=None, cutoff=None):
    """Shortest number of steps from ``start`` to every reachable
    state, optionally limited to ``cutoff`` steps.
    """
    if start is None:
        start = model.initial
    if start not in model.graph:
        return {start: 0}
    return nx.single_source_shortest_path_length(model.graph, start, cutoff)


def reachable(model, start=None, depth=None):
    return set(distances(model, start, depth))


def shortest_trace(model, source, target):
    """Returns ``(trace, states)`` of a shortest path or None."""
    try:
        path = nx.shortest_path(model.graph, source, target)
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        return None
    trace = tuple(
        min(model.graph[u][v], key=model.label_key)
        for u, v in zip(path, path[1:])
    )
    return trace, tuple(path)


def path_to(model, state):
    """A shortest ``(trace, states)`` from the initial state, or an
    empty path when ``state`` is unreachable.
    """
    found = shortest_trace(model, model.initial, state)
    if found is None:
        return (), (state,)
    return found


def covers(model, depth, start=None):
    """Tells whether every path from ``start`` is finite and no longer
    than ``depth``, so bounded exploration sees everything.
    """
    nodes = reachable(model, start)
    sub = model.graph.subgraph(nodes)
    if not nx.is_directed_acyclic_graph(sub):
        return False
    return nx.dag_longest_path_length(nx.DiGraph(sub)) <= depth


# region: structural checks


def validate_lts(model):
    """Checks that the initial state and every transition endpoint
    are declared, that labels are legal for the model kind and that
    values belong to the domain.
    """
    witnesses = []
    if model.initial not in model.states:
        witnesses.append(
            Witness("initial state %s is not declared" % (model.initial,))
        )
    legal = LEGAL_KINDS.get(model.kind, frozenset())
    for source, label, target in model.ordered_transitions():
        text = "%s -%s-> %s" % (
            model.format_state(source),
            format_label(label, model.kind),
            model.format_state(target),
        )
        if source not in model.states:
            witnesses.append(
                Witness(
                    "transition %s leaves an undeclared state" % text,
                    (label,),
                    (source, target),
                )
            )
        if target not in model.states:
            witnesses.append(
                Witness(
                    "transition %s targets an undeclared state" % text,
                    (label,),
                    (source, target),
                )
            )
        if label.kind not in legal:
            witnesses.append(
                Witness(
                    "transition %s: label illegal for kind %s"
                    % (text, model.kind),
                    (label,),
                    (source, target),
                )
            )
        if label.kind in VALUE_KINDS and label.value not in model.domain:
            witnesses.append(
                Witness(
                    "transition %s: value outside domain" % text,
                    (label,),
                    (source, target),
                )
            )
        if label.kind == READ and not (
            isinstance(label.index, int) and label.index > 0
        ):
            witnesses.append(
                Witness(
                    "transition %s: memory index must be positive" % text,
                    (label,),
                    (source, target),
                )
            )
    return summarize("lts", witnesses, (), EXHAUSTIVE, True)


def is_deterministic(model):
    """Distinct labels from one state must both be value inputs and
    one label leads to one target.
    """
    witnesses = []
    for state in model.ordered_states():
        targets = {}
        for label, target in model.successors(state):
            targets.setdefault(label, []).append(target)
        trace, states = path_to(model, state)
        for label in sorted(targets, key=model.label_key):
            if len(targets[label]) > 1:
                witnesses.append(
                    Witness(
                        "state %s: label %s leads to %s"
                        % (
                            model.format_state(state),
                            format_label(label, model.kind),
                            " and ".join(
                                model.format_state(t) for t in targets[label]
                            ),
                        ),
                        trace + (label,),
                        states,
                        model.kind,
                    )
                )
        labels = sorted(targets, key=model.label_key)
        others = [lb for lb in labels if not is_input(lb, model.kind)]
        if len(labels) > 1 and others:
            second = [lb for lb in labels if lb != others[0]][0]
            witnesses.append(
                Witness(
                    "state %s offers %s and %s"
                    % (
                        model.format_state(state),
                        format_label(others[0], model.kind),
                        format_label(second, model.kind),
                    ),
                    trace + (others[0],),
                    states,
                    model.kind,
                )
            )
    return summarize("determinism", witnesses, (), EXHAUSTIVE, True)


def is_input_enabled(model):
    """A state receiving one value of a group (same kind, channel and
    memory index) receives every value of the domain.
    """
    witnesses = []
    for state in model.ordered_states():
        groups = {}
        for label, _ in model.successors(state):
            if is_input(label, model.kind):
                key = (label.kind, label.channel, label.index)
                groups.setdefault(key, set()).add(label.value)
        for key in sorted(groups, key=lambda k: (k[0], k[1] or "", k[2] or 0)):
            missing = [v for v in model.domain if v not in groups[key]]
            if not missing:
                continue
            trace, states = path_to(model, state)
            for value in missing:
                witnesses.append(
                    Witness(
                        "state %s misses value %s"
                        % (model.format_state(state), value),
                        trace,
                        states,
                        model.kind,
                    )
                )
    return summarize("input-enabled", witnesses, (), EXHAUSTIVE, True)


# region: bracketing


def step_bracket(kind, balance, phase, label):
    """Advances a ``(balance, phase)`` bracket context over ``label``.

    An opening counts once it is complete: BE then the value input for
    systems, BE then the memory read then the sent value for users.
    """
    k = label.kind
    if k == BE or k == SYNC_BE:
        return balance, 1
    if k == EE or k == SYNC_EE:
        return balance - 1, 0
    if kind == SYSTEM:
        if phase == 1 and k == IN:
            return balance + 1, 0
    elif kind == USER:
        if phase == 1 and k == READ:
            return balance, 2
        if phase == 2 and k == OUT:
            return balance + 1, 0
    else:
        if phase == 1 and k == READ:
            return balance, 2
        if phase == 2 and k == SYNC:
            return balance + 1, 0
    return balance, 0


def bracket_contexts(model):
    """Assigns each reachable state its ``(balance, phase)``.

    Raises ``InconsistentBalance`` with two witness traces when a
    state is reached in two different contexts.
    """
    contexts = {model.initial: (0, 0)}
    parents = {model.initial: None}
    queue = deque([model.initial])
    while queue:
        state = queue.popleft()
        balance, phase = contexts[state]
        for label, target in model.successors(state):
            context = step_bracket(model.kind, balance, phase, label)
            known = contexts.get(target)
            if known is None:
                contexts[target] = context
                parents[target] = (state, label)
                queue.append(target)
            elif known != context:
                raise InconsistentBalance(
                    target,
                    _unwind(parents, target),
                    _unwind(parents, state) + (label,),
                )
    return contexts


def bracket_balance(model):
    """Maps every reachable state to its bracket balance."""
    return dict(
        (state, balance)
        for state, (balance, _) in bracket_contexts(model).items()
    )


def _unwind(parents, state):
    trace = []
    while parents[state] is not None:
        state, label = parents[state]
        trace.append(label)
    trace.reverse()
    return tuple(trace)


def bracketing_witnesses(model):
    """Balance clauses shared by systems and users: no EE fires at
    balance 0 and every stuck state is balanced.
    """
    try:
        contexts = bracket_contexts(model)
    except InconsistentBalance as e:
        return [
            Witness(str(e), e.first, (), model.kind),
            Witness(str(e), e.second, (), model.kind),
        ]
    witnesses = []
    for state in sorted(contexts):
        balance, _ = contexts[state]
        for label, target in model.successors(state):
            if label.kind == EE and balance <= 0:
                trace, states = path_to(model, state)
                witnesses.append(
                    Witness(
                        "EE enabled at %s with balance %d"
                        % (model.format_state(state), balance),
                        trace + (label,),
                        states + (target,),
                        model.kind,
                    )
                )
        if model.is_stuck(state) and balance != 0:
            trace, states = path_to(model, state)
            witnesses.append(
                Witness(
                    "stuck state %s has balance %d"
                    % (model.format_state(state), balance),
                    trace,
                    states,
                    model.kind,
                )
            )
    return witnesses


def check_channels(model, erase_channel, other_channels=()):
    """Erase markers and values travel on ``erase_channel``, plain
    outputs on one of ``other_channels``.
    """
    witnesses = []
    for source, label, target in model.ordered_transitions():
        if label.kind == READ:
            continue
        if label.kind == OTHER:
            ok = label.channel in other_channels
        else:
            ok = label.channel == erase_channel
        if not ok:
            witnesses.append(
                Witness(
                    "label %s on unexpected channel"
                    % format_label(label, model.kind),
                    (label,),
                    (source, target),
                    model.kind,
                )
            )
    return summarize("channels", witnesses, (), EXHAUSTIVE, True)


class CeilingReached(RuntimeError):
    """Subset construction visited more pairs than allowed."""


def distinguishing_trace(model, x, y, ceiling=None):
    """Returns a shortest trace offered from one of ``x``, ``y`` but
    not from the other, or None when both have the same trace set.

    Runs a breadth-first subset construction over pairs of state sets;
    raises ``CeilingReached`` once it holds more than ``ceiling`` pairs.
    """
    start = (frozenset((x,)), frozenset((y,)))
    parents = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        left, right = pair
        labels = set(
            label for s in left | right for label, _ in model.successors(s)
        )
        for label in sorted(labels, key=model.label_key):
            following = (
                frozenset(t for s in left for t in model.targets(s, label)),
                frozenset(t for s in right for t in model.targets(s, label)),
            )
            if bool(following[0]) != bool(following[1]):
                return _unwind(parents, pair) + (label,)
            if following in parents:
                continue
            if ceiling is not None and len(parents) >= ceiling:
                raise CeilingReached(
                    "more than %d subset pairs" % ceiling
                )
            parents[following] = (pair, label)
            queue.append(following)
    return None
