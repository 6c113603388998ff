""" ``memory`` module.
"""

from wheezy.erasure.labels import READ
from wheezy.erasure.lts import Lts


class UnboundIndex(LookupError):
    """A user reads an index the memory does not define."""

    def __init__(self, index):
        super(UnboundIndex, self).__init__("unbound memory index %s" % index)
        self.index = index


class Memory(object):
    """A total map from a finite set of indices to values.

    >>> m = Memory({1: 0, 2: 1})
    >>> m[2]
    1
    >>> m.assign(2, 0).items()
    ((1, 0), (2, 0))
    >>> 3 in m
    False
    """

    __slots__ = ("values", "name")

    def __init__(self, values, name=None):
        self.values = dict(values)
        self.name = name

    @property
    def indices(self):
        return tuple(sorted(self.values))

    def __getitem__(self, index):
        try:
            return self.values[index]
        except KeyError:
            raise UnboundIndex(index)

    def __contains__(self, index):
        return index in self.values

    def get(self, index, default=None):
        return self.values.get(index, default)

    def items(self):
        return tuple((i, self.values[i]) for i in self.indices)

    def assign(self, index, value):
        """Returns a copy that differs at ``index`` only."""
        values = dict(self.values)
        values[index] = value
        return Memory(values, self.name)

    def __eq__(self, other):
        return isinstance(other, Memory) and self.values == other.values

    def __hash__(self):
        return hash(self.items())

    def __repr__(self):
        return "Memory(%r)" % (dict(self.items()),)


class UserInstance(object):
    """A user bound to a memory: every read returns the stored value."""

    def __init__(self, user, memory):
        self.user = user
        self.memory = memory
        model = user.lts
        self.lts = Lts(
            model.kind,
            model.states,
            model.initial,
            [
                (source, label, target)
                for source, label, target in model.transitions
                if label.kind != READ or memory[label.index] == label.value
            ],
            model.domain,
            model.name,
        )

    @property
    def erase_channel(self):
        return self.user.erase_channel

    @property
    def name(self):
        return self.user.name


def instantiate(user, memory):
    """Restricts ``user`` to the reads consistent with ``memory``.

    Raises ``UnboundIndex`` when the user reads an index the memory
    does not define.
    """
    for _, label, _ in user.lts.ordered_transitions():
        if label.kind == READ and label.index not in memory:
            raise UnboundIndex(label.index)
    return UserInstance(user, memory)
