"""Analytical performance, resource and bandwidth models."""
