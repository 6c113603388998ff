""" ``oracle`` module.

Brute force counterparts of every checker. Each property is decided by
enumerating runs up to the depth and testing its definition on them
directly, without products, memo tables or graph algorithms. Slow and
only meant to cross-check the checkers on small models.
"""

from itertools import product
from logging import getLogger

from wheezy.erasure.composite import check_composite_erasure
from wheezy.erasure.composition import check_liveness
from wheezy.erasure.labels import (
    BE,
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
    SYSTEM,
    USER,
    is_input,
    sync,
)
from wheezy.erasure.lts import (
    check_channels,
    is_deterministic,
    is_input_enabled,
    replay,
    validate_lts,
)
from wheezy.erasure.system import (
    InputStream,
    check_input_erasure,
    check_system_well_formed,
    input_count,
    refine_with_stream,
)
from wheezy.erasure.user import (
    check_erasure_friendly,
    check_secret_confinement,
    check_secret_singularity,
    check_stream_ability,
    check_user_well_formed,
    token_match,
    tokens,
)
from wheezy.erasure.utils import positive
from wheezy.erasure.verdict import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    Verdict,
    Witness,
    combine,
)

log = getLogger(__name__)

BUDGET = 200000
PAIR = "pair"

PROPERTIES = (
    "determinism",
    "input-enabled",
    "system-well-formed",
    "input-erasure",
    "user-well-formed",
    "singularity",
    "confinement",
    "stream-ability",
    "liveness",
    "composite-erasure",
)


class BudgetExceeded(RuntimeError):
    def __init__(self, limit):
        super(BudgetExceeded, self).__init__(
            "enumeration exceeded %d nodes" % limit
        )
        self.limit = limit


class Budget(object):
    __slots__ = ("limit", "used")

    def __init__(self, limit):
        self.limit = positive(limit)
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.limit)


class Outcome(object):
    """Collects what an enumeration observed."""

    def __init__(self, property, depth):
        self.property = property
        self.depth = depth
        self.witnesses = []
        self.open_states = []

    def fail(self, description, trace=()):
        self.witnesses.append(Witness(description, trace))

    def cut(self, state):
        if state not in self.open_states:
            self.open_states.append(state)

    def verdict(self):
        if self.witnesses:
            return Verdict(self.property, FAIL, self.depth, self.witnesses)
        if self.open_states:
            return Verdict(
                self.property,
                INCONCLUSIVE,
                self.depth,
                open_states=self.open_states,
            )
        return Verdict(self.property, PASS, self.depth)


def oracle_check(property, models, depth, budget=BUDGET):
    """Decides ``property`` for ``models`` (one spec, or a user and a
    system) by literal enumeration up to ``depth``.

    An enumeration exceeding ``budget`` nodes gives a failing verdict
    named after it.
    """
    depth = positive(depth)
    if not isinstance(models, (tuple, list)):
        models = (models,)
    try:
        oracle = ORACLES[property]
    except KeyError:
        raise ValueError("unknown property %s" % property)
    try:
        return oracle(*(tuple(models) + (depth, Budget(budget))))
    except BudgetExceeded as e:
        log.warning("oracle %s: %s", property, e)
        return Verdict(
            property, FAIL, depth, [Witness("budget exceeded: %s" % e)]
        )


# region: enumeration


def runs(start, depth, budget, step):
    """Every path of at most ``depth`` labels from ``start`` as
    ``(trace, states)``; ``step(trace, states)`` lists the moves.
    """
    result = [((), (start,))]
    frontier = result
    for _ in range(depth):
        following = []
        for trace, states in frontier:
            for label, target in step(trace, states):
                budget.spend()
                following.append((trace + (label,), states + (target,)))
        if not following:
            break
        result = result + following
        frontier = following
    return result


def _plain(model):
    def step(trace, states):
        return model.successors(states[-1])

    return step


def _offered(model, states):
    return [lb for s in states for lb, _ in model.successors(s)]


# region: structure


def _determinism(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("determinism", depth)
    ends = {}
    for trace, states in runs(model.initial, depth, budget, _plain(model)):
        ends.setdefault(trace, set()).add(states[-1])
    for trace in sorted(ends, key=len):
        if len(ends[trace]) > 1:
            outcome.fail("one trace, several states", trace)
        labels = set(_offered(model, ends[trace]))
        if len(labels) > 1 and any(
            not is_input(lb, model.kind) for lb in labels
        ):
            outcome.fail("choice between labels that are not inputs", trace)
    return outcome.verdict()


def _input_enabled(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("input-enabled", depth)
    for trace, states in runs(model.initial, depth, budget, _plain(model)):
        offered = _offered(model, states[-1:])
        for lb in offered:
            if not is_input(lb, model.kind):
                continue
            for v in model.domain:
                if lb._replace(value=v) not in offered:
                    outcome.fail("value %s missing" % v, trace)
    return outcome.verdict()


def _system_balance(trace):
    """Completed openings, a BE right before an input, minus EEs."""
    balance = 0
    for k, label in enumerate(trace):
        if label.kind == IN and k > 0 and trace[k - 1].kind == BE:
            balance += 1
        elif label.kind == EE:
            balance -= 1
    return balance


def _user_balance(trace):
    balance = 0
    for k, label in enumerate(trace):
        if (
            label.kind == OUT
            and k > 1
            and trace[k - 1].kind == READ
            and trace[k - 2].kind == BE
        ):
            balance += 1
        elif label.kind == EE:
            balance -= 1
    return balance


def _phase(trace, kind):
    if trace and trace[-1].kind == BE:
        return 1
    if (
        kind != SYSTEM
        and len(trace) > 1
        and trace[-1].kind == READ
        and trace[-2].kind == BE
    ):
        return 2
    return 0


def _bracketing(model, all_runs, balance, outcome):
    contexts = {}
    for trace, states in all_runs:
        b = balance(trace)
        context = (b, _phase(trace, model.kind))
        known = contexts.setdefault(states[-1], context)
        if known != context:
            outcome.fail("state reached with two balances", trace)
        if trace and trace[-1].kind == EE and balance(trace[:-1]) <= 0:
            outcome.fail("EE at balance 0", trace)
        if model.is_stuck(states[-1]) and b != 0:
            outcome.fail("stuck with open blocks", trace)


def _system_well_formed(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("bracketing", depth)
    all_runs = runs(model.initial, depth, budget, _plain(model))
    for trace, states in all_runs:
        if not trace or trace[-1].kind != BE:
            continue
        offered = _offered(model, states[-1:])
        for v in model.domain:
            if not any(
                lb.kind == IN
                and lb.channel == spec.erase_channel
                and lb.value == v
                for lb in offered
            ):
                outcome.fail("BE not followed by input %s" % v, trace)
    _bracketing(model, all_runs, _system_balance, outcome)
    return combine(
        "system-well-formed",
        [
            validate_lts(model),
            _determinism(spec, depth, budget),
            _input_enabled(spec, depth, budget),
            check_channels(model, spec.erase_channel, spec.other_channels),
            outcome.verdict(),
        ],
        depth,
    )


def _user_well_formed(spec, depth, budget):
    model = spec.lts
    channel = spec.erase_channel
    outcome = Outcome("bracketing", depth)
    all_runs = runs(model.initial, depth, budget, _plain(model))
    for trace, states in all_runs:
        if not trace:
            continue
        last = trace[-1]
        after = model.successors(states[-1])
        if last.kind == BE:
            reads = [(lb, t) for lb, t in after if lb.kind == READ]
            if not after or len(reads) != len(after):
                outcome.fail("BE not followed by reads only", trace)
                continue
            if len(set(lb.index for lb, _ in reads)) != 1:
                outcome.fail("BE followed by reads of several indices", trace)
            for v in model.domain:
                if not any(
                    lb.value == v
                    and _sends(model, t, channel, v)
                    for lb, t in reads
                ):
                    outcome.fail("no read of %s then send" % v, trace)
        elif last.kind == READ:
            if len(trace) < 2 or trace[-2].kind != BE:
                outcome.fail("read not right after BE", trace)
            if not after or any(
                lb.kind != OUT or lb.value != last.value for lb, _ in after
            ):
                outcome.fail("read not followed by sending it", trace)
    _bracketing(model, all_runs, _user_balance, outcome)
    return combine(
        "user-well-formed",
        [
            validate_lts(model),
            _input_enabled(spec, depth, budget),
            check_channels(model, channel),
            outcome.verdict(),
        ],
        depth,
    )


def _sends(model, state, channel, value):
    return any(
        lb.kind == OUT and lb.channel == channel and lb.value == value
        for lb, _ in model.successors(state)
    )


# region: input erasure


def _input_erasure(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("input-erasure", depth)
    counts = [
        input_count(trace)
        for trace, _ in runs(model.initial, depth, budget, _plain(model))
    ]
    k = max(counts)
    domain = model.domain.values
    for stream in product(domain, repeat=k):
        budget.spend()
        r = refine_with_stream(spec, InputStream(stream, domain[0]), depth)
        if len(r) == depth:
            if r[-1].kind == BE:
                outcome.cut(min(replay(model, r[:-1])))
            end = min(replay(model, r))
            if any(lb.kind == BE for lb, _ in model.successors(end)):
                outcome.cut(end)
        for p in range(len(r) - 1):
            if r[p].kind != BE or r[p + 1].kind != IN:
                continue
            n = input_count(r[:p]) + 1
            q = _system_close(r, p)
            if q is None:
                if len(r) == depth:
                    outcome.cut(min(replay(model, r[:p])))
                continue
            v = r[p + 1].value
            for w in domain:
                if w == v:
                    continue
                changed = list(stream)
                changed[n - 1] = w
                r2 = refine_with_stream(
                    spec, InputStream(changed, domain[0]), depth
                )
                q2 = _system_close(r2, p)
                if q2 is None:
                    if len(r2) == depth:
                        outcome.cut(min(replay(model, r[:p])))
                    else:
                        outcome.fail("unmatched EE", r2)
                    continue
                if input_count(r[p + 1:q]) != input_count(r2[p + 1:q2]):
                    outcome.fail("blocks consume different inputs", r2)
                    continue
                z, z2 = r[q + 1:], r2[q2 + 1:]
                m = min(len(z), len(z2))
                if z[:m] != z2[:m]:
                    outcome.fail("continuations differ", r2)
                elif len(z) < len(z2) and len(r) < depth:
                    outcome.fail("continuation stops early", r)
                elif len(z2) < len(z) and len(r2) < depth:
                    outcome.fail("continuation stops early", r2)
    return outcome.verdict()


def _system_close(trace, p):
    """Position of the EE closing the block whose BE is at ``p``."""
    level = 1
    for k in range(p + 2, len(trace)):
        label = trace[k]
        if label.kind == IN and trace[k - 1].kind == BE:
            level += 1
        elif label.kind == EE:
            level -= 1
            if level == 0:
                return k
    return None


# region: user properties


def _singularity(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("singularity", depth)
    for trace, _ in runs(model.initial, depth, budget, _plain(model)):
        indices = [lb.index for lb in trace if lb.kind == READ]
        if len(indices) != len(set(indices)):
            outcome.fail("index read twice", trace)
            break
    return outcome.verdict()


def _sessions(spec, depth, budget):
    """Per anchor: ``(trace, end state, complete)`` for complete
    sessions and incomplete ones that cannot be extended within depth.
    """
    model = spec.lts
    anchors = set()
    for _, states in runs(model.initial, depth, budget, _plain(model)):
        if any(lb.kind == BE for lb, _ in model.successors(states[-1])):
            anchors.add(states[-1])
    result = {}
    for anchor in sorted(anchors):
        entries = []
        for trace, states in runs(anchor, depth, budget, _plain(model)):
            if len(trace) < 3 or not (
                trace[0].kind == BE
                and trace[1].kind == READ
                and trace[2].kind == OUT
                and trace[2].value == trace[1].value
            ):
                continue
            close = _user_close(trace)
            if close is not None and close < len(trace) - 1:
                continue
            end = states[-1]
            if close is not None:
                entries.append((trace, end, True))
            elif len(trace) == depth or model.is_stuck(end):
                entries.append((trace, end, False))
        result[anchor] = entries
    return result


def _user_close(trace):
    level = 1
    for k in range(1, len(trace)):
        if trace[k].kind == BE:
            level += 1
        elif trace[k].kind == EE:
            level -= 1
            if level == 0:
                return k
    return None


def _confinement(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("confinement", depth)
    for anchor, entries in _sessions(spec, depth, budget).items():
        frontier = sorted(set(end for _, end, done in entries if done))
        for a in range(len(frontier)):
            for b in range(a + 1, len(frontier)):
                x = set(
                    t
                    for t, _ in runs(frontier[a], depth, budget, _plain(model))
                )
                y = set(
                    t
                    for t, _ in runs(frontier[b], depth, budget, _plain(model))
                )
                if x != y:
                    outcome.fail("frontier traces differ", min(x ^ y, key=len))
    return outcome.verdict()


def _stream_ability(spec, depth, budget):
    model = spec.lts
    outcome = Outcome("stream-ability", depth)
    for anchor, entries in _sessions(spec, depth, budget).items():
        if not entries:
            continue
        marked = [
            (
                tokens(trace),
                not done and len(trace) == depth and not model.is_stuck(end),
                trace,
            )
            for trace, end, done in entries
        ]
        if all(is_open for _, is_open, _ in marked):
            outcome.cut(anchor)
            continue
        for i in range(len(marked)):
            for j in range(i + 1, len(marked)):
                a, open_a, trace = marked[i]
                b, open_b, _ = marked[j]
                n = min(len(a), len(b))
                if not all(token_match(a[k], b[k]) for k in range(n)):
                    outcome.fail("outputs differ", trace)
                elif len(a) < len(b) and not open_a:
                    outcome.fail("fewer outputs", trace)
                elif len(b) < len(a) and not open_b:
                    outcome.fail("fewer outputs", trace)
    return outcome.verdict()


# region: composition


def _rules(user, system):
    """Composed moves derived pair by pair from the component
    transitions.
    """
    channel = system.erase_channel

    def step(state):
        u, s = state
        result = []
        for sl, st in system.lts.successors(s):
            if sl.kind == OTHER:
                result.append((sl, (u, st)))
                continue
            for ul, ut in user.lts.successors(u):
                if ul.channel != channel or sl.channel != channel:
                    continue
                if (
                    sl.kind == IN
                    and ul.kind == OUT
                    or sl.kind == OUT
                    and ul.kind == IN
                ) and ul.value == sl.value:
                    result.append((sync(sl.value), (ut, st)))
                elif sl.kind == BE and ul.kind == BE:
                    result.append((SYNC_BEGIN, (ut, st)))
                elif sl.kind == EE and ul.kind == EE:
                    result.append((SYNC_END, (ut, st)))
        for ul, ut in user.lts.successors(u):
            if ul.kind == READ:
                result.append((ul, (ut, s)))
        return result

    return step


def _liveness(user, system, depth, budget):
    outcome = Outcome("liveness", depth)
    rules = _rules(user, system)
    initial = (user.lts.initial, system.lts.initial)
    seen = set()
    for trace, states in runs(
        initial, depth, budget, lambda t, ss: rules(ss[-1])
    ):
        u, s = states[-1]
        if (u, s) in seen:
            continue
        seen.add((u, s))
        pending = system.lts.successors(s)
        if not pending:
            continue
        closure = set(
            ss[-1]
            for _, ss in runs(
                u,
                len(user.lts.states),
                budget,
                lambda t, us: [
                    (lb, x)
                    for lb, x in user.lts.successors(us[-1])
                    if lb.kind == READ
                ],
            )
        )
        first = pending[0][0]
        if first.kind == IN:
            ok = any(lb.kind == OUT for lb in _offered(user.lts, closure))
        elif first.kind == OUT:
            ok = any(
                lb.kind == IN and lb.value == first.value
                for lb in _offered(user.lts, [u])
            )
        elif first.kind in (BE, EE):
            ok = any(lb.kind == first.kind for lb in _offered(user.lts, [u]))
        else:
            ok = True
        if not ok:
            outcome.fail("system blocked", trace)
    return outcome.verdict()


def _reads(trace):
    memory = {}
    for label in trace:
        if label.kind == READ:
            memory.setdefault(label.index, label.value)
    return memory


def _agrees(memory, label):
    return label.kind != READ or memory.get(label.index, label.value) == (
        label.value
    )


def _composite_erasure(user, system, depth, budget):
    outcome = Outcome("composite-erasure", depth)
    rules = _rules(user, system)
    initial = (user.lts.initial, system.lts.initial)

    def consistent_step(trace, states):
        memory = _reads(trace)
        return [
            (lb, t) for lb, t in rules(states[-1]) if _agrees(memory, lb)
        ]

    all_runs = runs(initial, depth, budget, consistent_step)
    for r, states in all_runs:
        if len(r) < depth and consistent_step(r, states):
            continue
        for p in range(max(0, depth - 2), len(r)):
            if r[p].kind == SYNC_BE:
                outcome.cut(states[p])
        if len(r) == depth and any(
            lb.kind == SYNC_BE for lb, _ in rules(states[-1])
        ):
            outcome.cut(states[-1])
        for p in range(len(r) - 2):
            if not (
                r[p].kind == SYNC_BE
                and r[p + 1].kind == READ
                and r[p + 2].kind == SYNC
            ):
                continue
            i, v = r[p + 1].index, r[p + 1].value
            q = _composed_close(r, p)
            if q is None:
                if len(r) == depth:
                    outcome.cut(states[p])
                continue
            z = r[q + 1:]
            base = dict(
                (j, x) for j, x in _reads(r[: q + 1]).items() if j != i
            )
            at = states[p]
            alternatives = set(
                lb.value
                for lb1, b in rules(at)
                if lb1.kind == SYNC_BE
                for lb, _ in rules(b)
                if lb.kind == READ and lb.index == i
            )
            for w in sorted(alternatives, key=user.domain.index):
                if w == v:
                    continue
                memory = dict(base)
                memory[i] = w
                found = _match(
                    at, i, w, memory, z, depth - p, budget, rules
                )
                if found == FAIL:
                    outcome.fail("no run with %s continues the same" % w, r)
                elif found == INCONCLUSIVE:
                    outcome.cut(at)
    return outcome.verdict()


def _composed_close(trace, p):
    level = 1
    for k in range(p + 1, len(trace)):
        if trace[k].kind == SYNC_BE:
            level += 1
        elif trace[k].kind == SYNC_EE:
            level -= 1
            if level == 0:
                return k
    return None


def _match(start, i, w, memory, z, length, budget, rules):
    def step(trace, states):
        seen = dict(memory)
        seen.update(
            (lb.index, lb.value)
            for lb in trace
            if lb.kind == READ and lb.index not in memory
        )
        return [
            (lb, t) for lb, t in rules(states[-1]) if _agrees(seen, lb)
        ]

    partial = False
    for trace, _ in runs(start, length, budget, step):
        if len(trace) < 3 or not (
            trace[0].kind == SYNC_BE
            and trace[1].kind == READ
            and trace[1].index == i
            and trace[1].value == w
            and trace[2].kind == SYNC
        ):
            continue
        q = _composed_close(trace, 0)
        if q is None:
            if len(trace) == length:
                partial = True
            continue
        rest = trace[q + 1:]
        if rest[: len(z)] == z:
            return PASS
        if len(trace) == length and z[: len(rest)] == rest:
            partial = True
    return partial and INCONCLUSIVE or FAIL


ORACLES = {
    "determinism": _determinism,
    "input-enabled": _input_enabled,
    "system-well-formed": _system_well_formed,
    "input-erasure": _input_erasure,
    "user-well-formed": _user_well_formed,
    "singularity": _singularity,
    "confinement": _confinement,
    "stream-ability": _stream_ability,
    "liveness": _liveness,
    "composite-erasure": _composite_erasure,
}


# region: agreement

CHECKERS = {
    "determinism": lambda spec, depth: is_deterministic(spec.lts),
    "input-enabled": lambda spec, depth: is_input_enabled(spec.lts),
    "system-well-formed": lambda spec, depth: check_system_well_formed(
        spec
    ),
    "input-erasure": check_input_erasure,
    "user-well-formed": lambda spec, depth: check_user_well_formed(spec),
    "singularity": check_secret_singularity,
    "confinement": check_secret_confinement,
    "stream-ability": check_stream_ability,
    "erasure-friendly": check_erasure_friendly,
    "liveness": check_liveness,
    "composite-erasure": check_composite_erasure,
}

SUBJECTS = {
    "determinism": SYSTEM,
    "input-enabled": SYSTEM,
    "system-well-formed": SYSTEM,
    "input-erasure": SYSTEM,
    "user-well-formed": USER,
    "singularity": USER,
    "confinement": USER,
    "stream-ability": USER,
    "erasure-friendly": USER,
    "liveness": PAIR,
    "composite-erasure": PAIR,
}


def check(property, models, depth):
    """Runs the checker of ``property``; ``models`` as for
    ``oracle_check``.
    """
    if not isinstance(models, (tuple, list)):
        models = (models,)
    try:
        checker = CHECKERS[property]
    except KeyError:
        raise ValueError("unknown property %s" % property)
    return checker(*(tuple(models) + (depth,)))


def compare(property, models, depth, budget=BUDGET):
    """Runs the checker and the oracle of ``property`` side by side;
    the verdict passes when both reach the same outcome.
    """
    checked = check(property, models, depth)
    observed = oracle_check(property, models, depth, budget)
    witnesses = []
    if checked.outcome != observed.outcome:
        witnesses.append(
            Witness(
                "%s: checker says %s, oracle says %s"
                % (property, checked.outcome, observed.outcome)
            )
        )
        log.warning(witnesses[-1].description)
    return Verdict(
        "oracle-agreement",
        witnesses and FAIL or PASS,
        depth,
        witnesses,
        (checked, observed),
    )
