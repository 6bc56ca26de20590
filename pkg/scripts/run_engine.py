#!/usr/bin/env python3
"""
Run the klgrowth batch engine from a source checkout.

    python scripts/run_engine.py verify-a1 --xmax 15 --nmax 30
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from klgrowth.cli import run  # noqa: E402

if __name__ == "__main__":
    sys.exit(run())
