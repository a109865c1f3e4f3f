"""Tests for tensor-extremal."""
