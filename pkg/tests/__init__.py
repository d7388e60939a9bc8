"""Test package for fermikit."""
