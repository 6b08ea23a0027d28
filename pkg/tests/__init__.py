"""
Test suite for the Python SQS Integration library.
"""
