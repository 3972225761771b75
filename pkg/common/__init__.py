"""
Shared constants, errors, logging, settings and coordinate frames.
"""

__version__ = "1.0.0"
__author__ = "USV Trials Team"
