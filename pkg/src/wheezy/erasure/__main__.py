import sys

from wheezy.erasure.cli import main

if __name__ == "__main__":  # pragma: nocover
    sys.exit(main())
