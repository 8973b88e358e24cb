import os
import sys

# Add project root to path so tests import `src.*`
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)
