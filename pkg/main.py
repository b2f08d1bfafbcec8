#!/usr/bin/env python3
"""
Main entry point for the pandemic growth estimator.

Usage: python3 main.py COMMAND [options]   (see --help)
"""

import sys

from pandemic_growth.main import main

if __name__ == "__main__":
    sys.exit(main())
