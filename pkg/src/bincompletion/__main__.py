"""
Main entry point for the bincompletion command line
"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
