import sys

from leafgrow.cli import main

sys.exit(main())
