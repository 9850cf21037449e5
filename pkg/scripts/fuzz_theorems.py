"""Randomized counterexample search; a thin wrapper over ``voi-lab verify``.

    VOI_LAB_THREADS=4 python scripts/fuzz_theorems.py --seed 42 --cases 10000
"""
import sys

from voilab.cli import main

sys.exit(main(["verify", *sys.argv[1:]]))
