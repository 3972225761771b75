"""
Test package for the USV turning-trial toolkit.
"""
