"""
Test suite for the N-Poincare-Weyl toolkit.

Unit tests per module plus an end-to-end integration script.
"""
