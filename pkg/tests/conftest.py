import sys
from pathlib import Path

# Test-support modules (oracles, generators) live next to the tests.
sys.path.insert(0, str(Path(__file__).parent))
