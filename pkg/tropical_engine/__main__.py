#!/usr/bin/env python3
"""
Entry point for the tropical_engine package.

This module allows the package to be executed as a module using:
    python -m tropical_engine <command> [options]

Commands:

1. m0n: build the moduli fan of rational marked curves, optionally capping
   psi classes and reporting degrees
2. check-balanced, intersect, pushforward, degree: operate on JSON files
   (complex.v1, plfn.v1, affine.v1, cycle.v1, morphism.v1)
3. case-study genus1: reproduce every number of the genus-one case study

Usage Examples:
    python -m tropical_engine m0n --n 5 --psi 1 --psi 2 --degree
    python -m tropical_engine case-study genus1 --report json

Environment Variables:
    TROPICAL_ENGINE_WORKERS: worker threads for balancing sweeps (default 1)
"""

import logging
import sys

from tropical_engine.cli_io.commands import run_and_render
from tropical_engine.config import setting


def _configure_logging():
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = setting("logging", "file")
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(setting("logging", "level", "INFO")).upper(), logging.INFO),
        format=setting("logging", "format", '%(asctime)s - %(name)s - %(levelname)s - %(message)s'),
        handlers=handlers,
    )


def main():
    _configure_logging()
    code, text = run_and_render(sys.argv[1:])
    sys.stdout.write(text)
    return code


if __name__ == '__main__':
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nInterrupted by user.")
        sys.exit(130)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
