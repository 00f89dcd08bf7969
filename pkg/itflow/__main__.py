import sys

from itflow.harness.cli import main

sys.exit(main())
