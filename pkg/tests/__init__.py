"""Test Suite"""

