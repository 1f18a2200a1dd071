import sys

from polyembed.cli import main

sys.exit(main())
