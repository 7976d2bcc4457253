import os
import sys

# ilpk.py and the src package live at the repository root
repo_root = os.path.realpath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, repo_root)
