#!/usr/bin/env python
"""
Run the TF phase-space toolkit from the command line.

Usage:
    python run_tfps.py verify [--suite NAME] [--config FILE] [--out DIR]
    python run_tfps.py evolve --config FILE --out DIR
    python run_tfps.py transform INPUT --out FILE [--adjoint]
"""

import sys

from src.harness.cli import main

if __name__ == "__main__":
    sys.exit(main())
