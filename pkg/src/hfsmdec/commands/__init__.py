"""Subcommand implementations for hfsmdec."""
