"""
Systems, Fourier data, cycle searches, density counts and reproduction claims.
"""
