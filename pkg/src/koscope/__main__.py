"""Module entry point: python -m koscope ..."""

from .cli import main_entry

main_entry()
