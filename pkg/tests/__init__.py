"""
Test Suite

Unit tests and CLI integration tests for gram-sqrt.
"""
