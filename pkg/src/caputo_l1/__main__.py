import sys

from caputo_l1.cli import main

sys.exit(main())
