"""Test fixtures for wecsim."""
