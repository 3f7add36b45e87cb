"""
Result and report types shared by the backend modules.
"""
