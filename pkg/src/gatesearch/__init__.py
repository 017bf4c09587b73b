"""Reinforcement-learning search for quantum circuits that prepare target states."""

__version__ = "0.1.0"
