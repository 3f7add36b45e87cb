"""
Fourier data of the dual measures: chi, mu-hat, Gamma sets and spectral functions.
"""
