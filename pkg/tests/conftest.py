"""Suite configuration: keep the sibling helpers module importable
regardless of the pytest import mode in use."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
