"""
Utility Functions Module

Exceptions, run configuration, result containers and file I/O shared by the
numerical packages and the CLI.
"""
