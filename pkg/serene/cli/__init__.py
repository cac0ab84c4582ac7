"""Command-line interface for serene."""
