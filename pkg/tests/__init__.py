"""Tests for wecsim."""
