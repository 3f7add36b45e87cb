"""
Test suite for the Hadamard duality tools.
"""
