"""Shared helpers for the mouse-dynamics pipeline."""
