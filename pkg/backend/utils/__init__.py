"""
Configuration, exceptions, logging and output formatting.
"""
