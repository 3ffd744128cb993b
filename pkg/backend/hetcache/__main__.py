import sys

from hetcache.main import main


sys.exit(main())
