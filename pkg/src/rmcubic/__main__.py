import sys

from rmcubic.cli import main

sys.exit(main())
