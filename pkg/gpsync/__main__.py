import sys

from gpsync.cli import main

sys.exit(main())
