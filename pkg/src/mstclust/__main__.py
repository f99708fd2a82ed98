import sys

from mstclust.cli import main

sys.exit(main())
