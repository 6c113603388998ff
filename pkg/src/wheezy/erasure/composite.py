""" ``composite`` module.

Composite erasure of a user and a system and the harness that puts the
soundness theorem to test on concrete pairs.
"""

from collections import namedtuple
from logging import getLogger

from wheezy.erasure.composition import check_liveness, compose, moves
from wheezy.erasure.labels import COMPOSED, READ, SYNC, SYNC_BE, SYNC_EE
from wheezy.erasure.lts import covers
from wheezy.erasure.memory import Memory
from wheezy.erasure.system import check_input_erasure
from wheezy.erasure.user import CEILING, check_erasure_friendly
from wheezy.erasure.utils import positive
from wheezy.erasure.verdict import Witness, summarize

log = getLogger(__name__)

CLOSED = "closed"
TRUNCATED = "truncated"
STUCK = "stuck"

Block = namedtuple("Block", ("status", "trace", "states", "memory", "post"))


class CompositeErasurePoint(object):
    """A composed state ready for ``SyncBE`` then a read of
    ``secret_index``, with the run leading there and the memory that
    run has read.
    """

    __slots__ = (
        "open_trace",
        "states",
        "state",
        "opened",
        "secret_index",
        "memory",
    )

    def __init__(self, open_trace, states, opened, secret_index, memory):
        self.open_trace = tuple(open_trace)
        self.states = tuple(states)
        self.state = self.states[-1]
        self.opened = opened
        self.secret_index = secret_index
        self.memory = memory

    def __repr__(self):
        return "CompositeErasurePoint(%r, i=%s, |t|=%d)" % (
            self.state,
            self.secret_index,
            len(self.open_trace),
        )


class TheoremReport(object):
    """Premises input erasure, erasure friendliness and liveness
    against the composite erasure conclusion.
    """

    def __init__(self, premises, conclusion):
        self.premises = tuple(premises)
        self.conclusion = conclusion
        self.consistent = not (
            all(p.passed for p in self.premises) and conclusion.failed
        )

    @property
    def verdicts(self):
        return self.premises + (self.conclusion,)

    def __repr__(self):
        return "TheoremReport(%s, consistent=%s)" % (
            ", ".join(v.outcome for v in self.verdicts),
            self.consistent,
        )


def consistent(memory, label):
    """A read agrees with what ``memory`` already holds."""
    if label.kind != READ:
        return True
    return memory.get(label.index, label.value) == label.value


def extend(memory, label):
    if label.kind != READ or label.index in memory:
        return memory
    return memory.assign(label.index, label.value)


def _successors(model, state, memory):
    return [
        (label, target)
        for label, target in model.successors(state)
        if consistent(memory, label)
    ]


# region: points


def _moves(model, state):
    if state in model.truncated:
        return moves(
            model.user.lts,
            model.system.lts,
            model.system.erase_channel,
            state,
        )
    return model.successors(state)


def openings(model, depth):
    """Yields ``(trace, states, opened, memory)`` for every ``SyncBE``
    offered after at most ``depth`` labels of a run reading memory
    consistently. Runs reaching one state with the same length and
    memory count once.
    """
    level = {(model.initial, Memory({})): ((), (model.initial,))}
    for length in range(depth + 1):
        following = {}
        for (state, memory), (trace, states) in level.items():
            for label, opened in _moves(model, state):
                if label.kind == SYNC_BE:
                    yield trace, states, opened, memory
            if length == depth:
                continue
            for label, target in _successors(model, state, memory):
                reached = (target, extend(memory, label))
                if reached not in following:
                    following[reached] = (
                        trace + (label,),
                        states + (target,),
                    )
        level = following
        if not level:
            break


def composite_points(model, depth):
    """Erasure points of ``model`` whose ``SyncBE``, read and first
    sync fit within ``depth``.
    """
    points = []
    for trace, states, opened, memory in openings(model, depth):
        if len(trace) + 3 > depth:
            continue
        indices = set()
        for read, fetched in model.successors(opened):
            if read.kind == READ and any(
                lb.kind == SYNC for lb, _ in model.successors(fetched)
            ):
                indices.add(read.index)
        for index in sorted(indices):
            points.append(
                CompositeErasurePoint(trace, states, opened, index, memory)
            )
    return points


def blocks(model, start, memory, budget):
    """Runs from ``start``, right after the secret read, up to the
    ``SyncEE`` closing the block; the first move must be a sync.
    """
    stack = [(start, (), (start,), memory, 1)]
    while stack:
        state, trace, states, memory, level = stack.pop()
        if len(trace) == budget:
            yield Block(TRUNCATED, trace, states, memory, state)
            continue
        successors = _successors(model, state, memory)
        if not trace:
            successors = [(lb, t) for lb, t in successors if lb.kind == SYNC]
        if not successors:
            yield Block(STUCK, trace, states, memory, state)
            continue
        for label, target in reversed(successors):
            following = extend(memory, label)
            if label.kind == SYNC_EE and level == 1:
                yield Block(
                    CLOSED,
                    trace + (label,),
                    states + (target,),
                    following,
                    target,
                )
                continue
            if label.kind == SYNC_BE:
                nested = level + 1
            elif label.kind == SYNC_EE:
                nested = level - 1
            else:
                nested = level
            stack.append(
                (
                    target,
                    trace + (label,),
                    states + (target,),
                    following,
                    nested,
                )
            )


def _follow(model, x, memory, budget, configs, partial):
    """Follows every continuation of the v-side from ``x`` with the set
    of w-side configurations able to produce the same labels.

    Returns None when every continuation is matched and
    ``(z, states, False)`` for one that is not. ``(z, states, True)``
    tells that the only unmatched continuations might be matched by
    w-side runs cut by the bound.
    """
    if not configs:
        return (), (), partial
    seen = set()
    pending = None
    stack = [(x, memory, budget, frozenset(configs), partial, (), ())]
    while stack:
        entry = stack.pop()
        x, memory, budget, configs, partial, z, states = entry
        key = entry[:5]
        if key in seen or budget == 0:
            continue
        seen.add(key)
        for label, target in reversed(_successors(model, x, memory)):
            following = set()
            cut = partial
            for y, other, left in configs:
                if left == 0:
                    cut = True
                    continue
                if consistent(other, label):
                    for t in model.targets(y, label):
                        following.add((t, extend(other, label), left - 1))
            if not following:
                if not cut:
                    return z + (label,), states + (target,), False
                if pending is None:
                    pending = z + (label,), states + (target,), True
                continue
            stack.append(
                (
                    target,
                    extend(memory, label),
                    budget - 1,
                    frozenset(following),
                    cut,
                    z + (label,),
                    states + (target,),
                )
            )
    return pending


# region: composite erasure


def check_composite_erasure(user, system, depth):
    """Changing the memory at the index read by an erasure block must
    not change what the composition does after the block.

    For each point, each secret value v and each closed v-side block
    followed by a continuation z, some run reading w != v instead must
    close its block and continue with the same z; reads outside the
    shared prefix must agree with the v-side memory changed at the
    secret index only. Checking every ordered pair covers the converse.
    """
    depth = positive(depth)
    model = compose(user, system, depth)
    witnesses = []
    open_states = [
        states[-1]
        for trace, states, _, _ in openings(model, depth)
        if len(trace) + 3 > depth
    ]
    for point in composite_points(model, depth):
        found = _check_point(model, point, depth)
        if found is None:
            continue
        if found == TRUNCATED:
            log.debug("composite erasure: block at %s cut by depth", point)
            open_states.append(point.state)
        else:
            witnesses.extend(found)
    verdict = summarize(
        "composite-erasure",
        witnesses,
        open_states,
        depth,
        not model.truncated and covers(model, depth),
    )
    log.info("composite erasure of %s: %s", model.name, verdict.outcome)
    return verdict


def _check_point(model, point, depth):
    index = point.secret_index
    offset = len(point.open_trace) + 2
    opening = [
        lb
        for lb, t in model.successors(point.state)
        if lb.kind == SYNC_BE and t == point.opened
    ][0]
    alternatives = {}
    for lb, opened in model.successors(point.state):
        if lb.kind != SYNC_BE:
            continue
        for read, fetched in model.successors(opened):
            if read.kind == READ and read.index == index:
                alternatives.setdefault(read.value, []).append(
                    (read, fetched, opened)
                )
    truncated = False
    for read, fetched in model.successors(point.opened):
        if read.kind != READ or read.index != index:
            continue
        if not consistent(point.memory, read):
            continue
        v = read.value
        head_v = point.open_trace + (opening, read)
        for block in blocks(
            model, fetched, extend(point.memory, read), depth - offset
        ):
            if block.status == TRUNCATED:
                truncated = True
                continue
            if block.status == STUCK:
                continue
            for w in sorted(alternatives, key=model.domain.index):
                if w == v:
                    continue
                shared = Memory(
                    dict(
                        (j, value)
                        for j, value in block.memory.items()
                        if j != index
                    )
                ).assign(index, w)
                configs = set()
                partial = False
                for _, fetched_w, _ in alternatives[w]:
                    for other in blocks(
                        model, fetched_w, shared, depth - offset
                    ):
                        if other.status == CLOSED:
                            configs.add(
                                (
                                    other.post,
                                    other.memory,
                                    depth - offset - len(other.trace),
                                )
                            )
                        elif other.status == TRUNCATED:
                            partial = True
                result = _follow(
                    model,
                    block.post,
                    block.memory,
                    depth - offset - len(block.trace),
                    configs,
                    partial,
                )
                if result is None:
                    continue
                z, states, cut = result
                if cut:
                    truncated = True
                    continue
                read_w, fetched_w, opened_w = alternatives[w][0]
                return [
                    Witness(
                        "value %s closes its block and continues" % v,
                        head_v + block.trace + z,
                        point.states
                        + (point.opened,)
                        + block.states
                        + states,
                        COMPOSED,
                    ),
                    Witness(
                        "value %s at index %s cannot continue the same way"
                        % (w, index),
                        point.open_trace + (opening, read_w),
                        point.states + (opened_w, fetched_w),
                        COMPOSED,
                    ),
                ]
    return truncated and TRUNCATED or None


# region: theorem


def validate_soundness_theorem(user, system, depth, ceiling=CEILING):
    """Runs the premises and the conclusion of the soundness theorem.
    The report is inconsistent only when every premise passes and the
    conclusion fails.
    """
    depth = positive(depth)
    report = TheoremReport(
        (
            check_input_erasure(system, depth),
            check_erasure_friendly(user, depth, ceiling),
            check_liveness(user, system, depth),
        ),
        check_composite_erasure(user, system, depth),
    )
    if not report.consistent:
        log.warning(
            "soundness theorem contradicted by %s and %s at depth %d",
            user.name,
            system.name,
            depth,
        )
    return report
