"""Serene - alternating quasigroups, their serenations and free completions."""

__version__ = "0.1.0"
