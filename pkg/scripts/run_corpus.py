#!/usr/bin/env python3
"""Run the bundled corpus and print the theorem-check matrix.

Usage: python scripts/run_corpus.py [--strict] [--only NAME] [--json-out FILE]
"""

import sys

from mustab.cli import main

if __name__ == "__main__":
    sys.exit(main(["--corpus"] + sys.argv[1:]))
