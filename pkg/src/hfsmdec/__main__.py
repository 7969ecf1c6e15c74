import sys

from hfsmdec.cli import main

sys.exit(main())
