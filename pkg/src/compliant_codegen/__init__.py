"""Compliant action spaces for LLM-generated contact-rich manipulation policies."""
__version__ = "0.1.0"
