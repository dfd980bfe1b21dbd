import sys

from treespace.cli import main

sys.exit(main())
