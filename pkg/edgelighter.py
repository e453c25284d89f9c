#!/usr/bin/env python3
"""
Edgelighter command-line entry point

Examples:
    python edgelighter.py sample --n 50 --p 0.3
    python edgelighter.py chain mixing --n 3
    python edgelighter.py experiment er-sweep --preset er-ci --replicates 5
"""
import os
import sys

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
