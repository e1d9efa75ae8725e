"""Configuration utilities for gfiso."""
