import sys

from hecm.cli import main

sys.exit(main())
