"""Module entry point: ``python -m conekit ...``."""

from .cli import main

main()
