"""Tests for dfq."""
