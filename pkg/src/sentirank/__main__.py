import sys

from sentirank.cli import main

sys.exit(main())
