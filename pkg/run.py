import sys

from denomkit.cli import main

if __name__ == '__main__':
    sys.exit(main())
