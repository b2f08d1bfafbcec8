#!/usr/bin/env python3
"""
Pandemic growth estimator - package entry point
"""

import sys
from typing import List, Optional

from .cli import build_parser, run_command


def main(argv: Optional[List[str]] = None) -> int:
    """Parse the command line and run one subcommand; returns the exit code"""
    args = build_parser().parse_args(argv)
    return run_command(args)


if __name__ == "__main__":
    sys.exit(main())
