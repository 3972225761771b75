"""
Command-line entry point package for the USV turning-trial toolkit.
"""

__version__ = "1.0.0"
__author__ = "USV Trials Team"
