"""Tests for reversim."""
