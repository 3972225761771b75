"""
Unit tests for the USV turning-trial toolkit.
"""
