# Thin entrypoint: `python app.py <subcommand> ...` is the same as the `lre` console script
import sys

from lre.cli import main


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
