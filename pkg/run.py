#!/usr/bin/env python3
"""
pfgr - Command Runner

Runs the reduction toolkit's command-line interface, e.g.

    python run.py gen-ov 200 4 --plant --seed 1 -o planted.ov
    python run.py solve-ov --engine diam planted.ov
    python run.py calc
"""

import sys

from pfgr.cli import main

if __name__ == "__main__":
    sys.exit(main())
