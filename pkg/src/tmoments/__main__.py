"""Allow `python -m tmoments` as an alias for the `tmoment` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
