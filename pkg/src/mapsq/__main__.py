import sys

from mapsq.cli import main

sys.exit(main())
