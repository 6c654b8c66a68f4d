"""Run every claim and write the JSON report.

    python3 scripts/verify_paper.py --out report.json
"""

import sys

from selfsim.cli import run_command

if __name__ == "__main__":
    sys.exit(run_command(["verify-paper", *sys.argv[1:]]))
