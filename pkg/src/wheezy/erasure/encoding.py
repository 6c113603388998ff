""" ``encoding`` module.

Machine readable form of verdicts, witnesses and labels. Documents are
plain dicts serialised with sorted keys, so equal verdicts always give
equal bytes.
"""

import json

from wheezy.erasure.labels import Label, format_label
from wheezy.erasure.verdict import Verdict, Witness


def label_encode(label):
    """Maps ``label`` to a dict, leaving out the fields it does not
    carry.

    >>> from wheezy.erasure.labels import in_label, mem_read
    >>> label_encode(in_label('a', 1))
    {'label_kind': 'in', 'channel': 'a', 'value': 1}
    >>> label_encode(mem_read(2, 0))
    {'label_kind': 'read', 'index': 2, 'value': 0}
    """
    document = {"label_kind": label.kind}
    for field in ("channel", "index", "value"):
        value = getattr(label, field)
        if value is not None:
            document[field] = value
    return document


def label_decode(document):
    """Reverses ``label_encode``.

    >>> from wheezy.erasure.labels import begin_erase
    >>> label_decode(label_encode(begin_erase('a'))) == begin_erase('a')
    True
    """
    return Label(
        document["label_kind"],
        document.get("channel"),
        document.get("index"),
        document.get("value"),
    )


def state_encode(state):
    """Composed states become ``[u, s]`` lists, others stay as they
    are.
    """
    if isinstance(state, tuple):
        return [state_encode(s) for s in state]
    return state


def state_decode(state):
    if isinstance(state, list):
        return tuple(state_decode(s) for s in state)
    return state


def witness_encode(witness):
    document = {
        "description": witness.description,
        "trace": [label_encode(label) for label in witness.trace],
        "states": [state_encode(s) for s in witness.states],
    }
    if witness.kind is not None:
        document["text"] = [
            format_label(label, witness.kind) for label in witness.trace
        ]
    return document


def witness_decode(document):
    return Witness(
        document["description"],
        [label_decode(d) for d in document["trace"]],
        [state_decode(s) for s in document["states"]],
    )


def verdict_encode(verdict):
    """Maps ``verdict`` to the counterexample document.

    >>> from wheezy.erasure.verdict import PASS
    >>> verdict_encode(Verdict('liveness', PASS, 10))
    {'property': 'liveness', 'verdict': 'pass', 'depth': 10, 'witnesses': []}
    """
    document = {
        "property": verdict.property,
        "verdict": verdict.outcome,
        "depth": verdict.depth,
        "witnesses": [witness_encode(w) for w in verdict.witnesses],
    }
    if verdict.open_states:
        document["open_states"] = [
            state_encode(s) for s in verdict.open_states
        ]
    if verdict.details:
        document["details"] = [verdict_encode(d) for d in verdict.details]
    return document


def verdict_decode(document):
    return Verdict(
        document["property"],
        document["verdict"],
        document["depth"],
        [witness_decode(d) for d in document["witnesses"]],
        [verdict_decode(d) for d in document.get("details", ())],
        [state_decode(s) for s in document.get("open_states", ())],
    )


def dumps(document):
    """Serialises ``document`` with sorted keys and a trailing newline.

    >>> dumps({'b': 1, 'a': [1, 2]})
    '{\\n  "a": [\\n    1,\\n    2\\n  ],\\n  "b": 1\\n}\\n'
    """
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def hash_encode(hash_factory):
    """Returns a callable encoding a string with the given hash
    function, as used for log message keys.

    >>> from hashlib import sha1
    >>> key_encode = hash_encode(sha1)
    >>> len(key_encode('depth bound reached'))
    20
    """
    assert callable(hash_factory)

    def key_encode(key):
        h = hash_factory()
        if isinstance(key, str):
            key = key.encode("UTF-8")
        h.update(key)
        return h.digest()

    return key_encode
