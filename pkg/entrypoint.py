# Root-level stub: `python entrypoint.py <command> ...` runs the lattice CLI
# without installing anything.
import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
