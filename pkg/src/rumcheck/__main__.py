import sys

from rumcheck.cli import main

sys.exit(main())
