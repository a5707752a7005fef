import sys

from trochoids.cli import main

sys.exit(main())
