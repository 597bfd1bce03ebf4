import os
import sys

# make the shared oracle module importable from every test file
sys.path.insert(0, os.path.dirname(__file__))
