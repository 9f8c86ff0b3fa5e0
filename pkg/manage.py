#!/usr/bin/env python
"""Command-line entry point of the SGT project (also reached through ./sgt)."""
import os
import sys

# dashed spellings of the harness commands
COMMAND_ALIASES = {
    'gauge-test': 'gauge_test',
    'dump-mesh': 'dump_mesh',
}


def main(argv=None):
    """Run a management command, accepting the dashed aliases."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1:
        argv[1] = COMMAND_ALIASES.get(argv[1], argv[1])
    execute_from_command_line(argv)


if __name__ == '__main__':
    main()
