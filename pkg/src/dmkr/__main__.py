import sys

from dmkr.driver import main

sys.exit(main())
