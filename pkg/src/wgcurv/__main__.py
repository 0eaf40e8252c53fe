import sys

from wgcurv.cli import main

sys.exit(main())
