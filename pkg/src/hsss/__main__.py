import sys

from hsss.cli import main

sys.exit(main())
