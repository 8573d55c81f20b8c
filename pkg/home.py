"""
ELP toolkit entry point
Usage: python home.py <answersets|scenarios|worldviews|check-guess|bound|analyze|query|repl> FILE [options]
"""

import sys

from components.cli import run_cli

if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
