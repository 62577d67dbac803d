"""Integration tests for reversim."""
