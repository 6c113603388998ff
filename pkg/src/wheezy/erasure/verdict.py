""" ``verdict`` module.
"""

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
EXHAUSTIVE = "exhaustive"

OUTCOMES = (PASS, INCONCLUSIVE, FAIL)

TITLES = {
    "lts": "model structure",
    "channels": "channel usage",
    "bracketing": "erasure bracketing",
    "determinism": "determinism",
    "input-enabled": "input enabledness",
    "system-well-formed": "system well-formedness",
    "input-erasure": "input erasure",
    "user-well-formed": "user well-formedness",
    "singularity": "secret singularity",
    "confinement": "secret confinement",
    "stream-ability": "stream ability",
    "erasure-friendly": "erasure friendliness",
    "liveness": "liveness",
    "composite-erasure": "composite erasure",
    "oracle-agreement": "oracle agreement",
    "corpus": "corpus verdicts",
}


class Witness(object):
    """A counterexample or certificate: a description and a trace,
    optionally annotated with the states it visits.
    """

    __slots__ = ("description", "trace", "states", "kind")

    def __init__(self, description, trace=(), states=(), kind=None):
        self.description = description
        self.trace = tuple(trace)
        self.states = tuple(states)
        self.kind = kind

    def __eq__(self, other):
        return (
            isinstance(other, Witness)
            and self.description == other.description
            and self.trace == other.trace
            and self.states == other.states
        )

    def __hash__(self):
        return hash((self.description, self.trace, self.states))

    def __repr__(self):
        return "Witness(%r, %r)" % (self.description, self.trace)


class Verdict(object):
    """The result of a property check.

    ``depth`` is a positive int or ``EXHAUSTIVE``. ``details`` holds
    the verdicts a conjunction is made of, ``open_states`` the states
    where bounded exploration stopped for an inconclusive outcome.
    """

    __slots__ = (
        "property",
        "outcome",
        "depth",
        "witnesses",
        "details",
        "open_states",
    )

    def __init__(
        self,
        property,
        outcome,
        depth=EXHAUSTIVE,
        witnesses=(),
        details=(),
        open_states=(),
    ):
        assert outcome in OUTCOMES
        self.property = property
        self.outcome = outcome
        self.depth = depth
        self.witnesses = tuple(witnesses)
        self.details = tuple(details)
        self.open_states = tuple(open_states)

    @property
    def title(self):
        return TITLES.get(self.property, self.property)

    @property
    def passed(self):
        return self.outcome == PASS

    @property
    def failed(self):
        return self.outcome == FAIL

    @property
    def inconclusive(self):
        return self.outcome == INCONCLUSIVE

    def detail(self, property):
        """Returns the nested verdict of ``property`` or None."""
        for d in self.details:
            if d.property == property:
                return d
        return None

    def __repr__(self):
        return "Verdict(%r, %r, %r)" % (
            self.property,
            self.outcome,
            self.depth,
        )


def worst(outcomes):
    """Fail beats Inconclusive which beats Pass.

    >>> worst([PASS, INCONCLUSIVE])
    'inconclusive'
    >>> worst([PASS, FAIL, INCONCLUSIVE])
    'fail'
    >>> worst([])
    'pass'
    """
    rank = 0
    for outcome in outcomes:
        rank = max(rank, OUTCOMES.index(outcome))
    return OUTCOMES[rank]


def bounded(depth, exact):
    """Returns ``EXHAUSTIVE`` when the check was exact, ``depth``
    otherwise.

    >>> bounded(8, True)
    'exhaustive'
    >>> bounded(8, False)
    8
    """
    return exact and EXHAUSTIVE or depth


def combine(property, verdicts, depth=EXHAUSTIVE):
    """Makes a conjunction of ``verdicts``. Its depth is exhaustive
    only when every part is.
    """
    verdicts = tuple(verdicts)
    if all(v.depth == EXHAUSTIVE for v in verdicts):
        depth = EXHAUSTIVE
    witnesses = []
    open_states = []
    for v in verdicts:
        if v.failed:
            witnesses.extend(v.witnesses)
        open_states.extend(s for s in v.open_states if s not in open_states)
    return Verdict(
        property,
        worst(v.outcome for v in verdicts),
        depth,
        witnesses,
        verdicts,
        open_states,
    )


def summarize(property, witnesses, open_states, depth, exact):
    """Builds a verdict out of collected failure witnesses and the
    states where exploration was cut.
    """
    if witnesses:
        return Verdict(property, FAIL, depth, witnesses)
    if open_states:
        return Verdict(
            property,
            INCONCLUSIVE,
            depth,
            open_states=sorted(set(open_states)),
        )
    return Verdict(property, PASS, bounded(depth, exact))


def exit_status(verdicts):
    """Maps a set of verdicts to a process exit status: 0 all pass,
    1 any failure, 3 inconclusive only.

    >>> exit_status([Verdict('x', PASS)])
    0
    >>> exit_status([Verdict('x', INCONCLUSIVE), Verdict('y', FAIL)])
    1
    >>> exit_status([Verdict('x', INCONCLUSIVE)])
    3
    """
    outcome = worst(v.outcome for v in verdicts)
    if outcome == FAIL:
        return 1
    if outcome == INCONCLUSIVE:
        return 3
    return 0
