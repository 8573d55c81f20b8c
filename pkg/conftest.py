"""
pytest root marker
Keeps the repository root importable (components, utils, data_collection)
"""
