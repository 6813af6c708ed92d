"""Run ``python -m supertropical``."""
import sys

from supertropical.app import main

sys.exit(main())
