""" ``corpus`` module.

Example models shipped with the package and the verdicts they are
known to produce.
"""

import json
import os
from logging import getLogger

from wheezy.erasure import dsl
from wheezy.erasure.oracle import PAIR, SUBJECTS, check
from wheezy.erasure.verdict import FAIL, PASS, Verdict, Witness, combine

log = getLogger(__name__)

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")
MANIFEST = "manifest.json"


def corpus_path(filename):
    return os.path.join(CORPUS, filename)


def corpus_files():
    """Every model file of the corpus, sorted."""
    return sorted(
        name for name in os.listdir(CORPUS) if not name.endswith(".json")
    )


class CorpusEntry(object):
    """A named set of model files with the verdict expected for each
    property at ``depth``. Models are parsed on first access.
    """

    def __init__(self, name, files, expected, source, depth):
        self.name = name
        self.files = dict(files)
        self.expected = dict(expected)
        self.source = source
        self.depth = depth
        self.loaded = {}

    def load(self, role):
        if role not in self.files:
            return None
        if role not in self.loaded:
            self.loaded[role] = dsl.load(corpus_path(self.files[role]))
        return self.loaded[role]

    @property
    def system(self):
        return self.load("system")

    @property
    def user(self):
        return self.load("user")

    @property
    def memory(self):
        return self.load("memory")

    def models(self, property):
        """The models ``property`` is checked on, or None when the
        entry lacks one of them.
        """
        subject = SUBJECTS[property]
        if subject == PAIR:
            if self.user is None or self.system is None:
                return None
            return self.user, self.system
        return self.load(subject)

    def __repr__(self):
        return "CorpusEntry(%r)" % self.name


def corpus_manifest():
    """
    >>> [e.name for e in corpus_manifest()]
    ['figure1', 'ex_a', 'mod10', 'streamab', 'minimal', 'blind']
    """
    with open(corpus_path(MANIFEST)) as f:
        manifest = json.load(f)
    depth = manifest["depth"]
    entries = []
    for item in manifest["entries"]:
        files = dict(
            (role, item[role])
            for role in ("system", "user", "memory")
            if role in item
        )
        entries.append(
            CorpusEntry(
                item["name"],
                files,
                item["expected"],
                item["source"],
                item.get("depth", depth),
            )
        )
    return entries


def load_entry(name):
    for entry in corpus_manifest():
        if entry.name == name:
            return entry
    raise KeyError(name)


def check_entry(entry, depth=None):
    """Replays the expected verdicts of ``entry``; the verdict passes
    when every property reproduces its outcome.
    """
    depth = depth or entry.depth
    checked = []
    witnesses = []
    for property in sorted(entry.expected):
        verdict = check(property, entry.models(property), depth)
        checked.append(verdict)
        expected = entry.expected[property]
        if verdict.outcome != expected:
            witnesses.append(
                Witness(
                    "%s %s: expected %s, got %s"
                    % (entry.name, property, expected, verdict.outcome)
                )
            )
    log.info("corpus entry %s: %d mismatches", entry.name, len(witnesses))
    return Verdict(
        "corpus",
        witnesses and FAIL or PASS,
        depth,
        witnesses,
        checked,
    )


def check_corpus(depth=None):
    entries = corpus_manifest()
    return combine(
        "corpus",
        [check_entry(e, depth) for e in entries],
        depth or entries[0].depth,
    )
