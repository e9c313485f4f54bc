import sys

from expandlab.cli import main

sys.exit(main())
