"""Tests for temporal graph exploration."""
