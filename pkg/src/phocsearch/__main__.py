import sys

from phocsearch.cli import main

sys.exit(main())
