#!/usr/bin/env python3
"""Run the full numerical verification suite and write the JSON report.

Exit status 0 means every identity, Jacobian and conditional-density check
passed at its stated tolerance.
"""

import sys

from circbeta.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "--out", "verification_report.json"] + sys.argv[1:]))
