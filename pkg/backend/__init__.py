"""
Exact-arithmetic backend for Hadamard duality tools.
Pure library code: no argument parsing, no process exits.
"""
