"""
Extreme-cycle detection and admissibility scans.
"""
