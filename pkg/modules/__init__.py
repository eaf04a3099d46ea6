"""
Modules package for nsdquad.
Contains the numerical engine, reference oracle, command-line front-end,
configuration, loader and utility components.
"""
