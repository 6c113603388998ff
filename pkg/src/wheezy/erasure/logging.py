""" `logging` module.
"""

import sys
from hashlib import sha1
from logging import DEBUG, INFO, Formatter, Handler, StreamHandler, getLogger

from wheezy.erasure.encoding import hash_encode

FORMAT = "%(levelname)s %(name)s: %(message)s"


class OnePassHandler(Handler):
    """One pass logging handler is used to proxy a message to inner
    handler once per run: bounded searches repeat the same notice for
    every point they cut.
    """

    def __init__(self, inner, key_encode=None):
        super(OnePassHandler, self).__init__()
        self.inner = inner
        self.key_encode = key_encode or hash_encode(sha1)
        self.seen = set()

    def emit(self, record):
        """Emit a record unless its message was already emitted."""
        key = self.key_encode(record.getMessage())
        if key not in self.seen:
            self.seen.add(key)
            self.inner.emit(record)

    def reset(self):
        self.seen.clear()


def configure(verbosity, stream=None):
    """Attaches a one pass stderr handler to the package logger;
    ``verbosity`` 1 shows check summaries, 2 and more search details.
    """
    logger = getLogger("wheezy.erasure")
    for h in list(logger.handlers):
        if isinstance(h, OnePassHandler):
            logger.removeHandler(h)
    if verbosity < 1:
        return None
    inner = StreamHandler(stream or sys.stderr)
    inner.setFormatter(Formatter(FORMAT))
    handler = OnePassHandler(inner)
    logger.addHandler(handler)
    logger.setLevel(verbosity > 1 and DEBUG or INFO)
    return handler
