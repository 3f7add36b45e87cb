"""
Hadamard systems: validation, matrices and system files.
"""
