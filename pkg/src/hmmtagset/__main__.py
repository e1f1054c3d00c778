import sys

from hmmtagset.cli import main

sys.exit(main())
