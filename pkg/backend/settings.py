"""
Environment-driven defaults. Values can be placed in a ``.env`` file.
"""

import os

from dotenv import load_dotenv

load_dotenv()

TOL_ABS = float(os.getenv("DEA_TOL_ABS", 1e-10))
TOL_REL = float(os.getenv("DEA_TOL_REL", 1e-9))
BOOTSTRAP_RESAMPLES = int(os.getenv("DEA_RESAMPLES", 1000))
Z_THRESHOLD = float(os.getenv("DEA_Z_THRESHOLD", 3.0))
LOG_LEVEL = os.getenv("DEA_LOG_LEVEL", "WARNING")
SHOT_PRESETS = (1000, 4000, 8000)
