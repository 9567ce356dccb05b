"""
Entrypoint module, in case you use `python -m phermit`.
"""

import sys

import phermit.cli


def init():
    if __name__ == "__main__":
        sys.exit(phermit.cli.main())


init()
