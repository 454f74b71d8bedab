"""Braid-group undeniable signatures."""
