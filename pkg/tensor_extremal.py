#!/usr/bin/env python3
"""
Runner script for the tensor-extremal command-line tool.

Lets the CLI run from a source checkout without installing the package.
"""

import asyncio
import os
import sys

# Add the project root to the Python path
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from tensor_extremal.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
