"""Thin modular decomposition of finite state machines and maximization of
hierarchical FSMs."""

__version__ = "0.1.0"
