"""Verification harness: golden tables and the cross-check suite."""
