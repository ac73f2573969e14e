#!/usr/bin/env python
"""Command-line entry point for depsi: estimation, simulation and export commands."""
import os
import sys


def main():
    """Dispatch to a depsi management command (estimate, family, convergence, ...)."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django, which depsi uses for its command line. "
            "Install the pinned stack with 'pip install -r requirements.txt' "
            "inside an activated virtual environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
