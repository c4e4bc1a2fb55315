import sys

from batcoupler.cli import main

sys.exit(main())
