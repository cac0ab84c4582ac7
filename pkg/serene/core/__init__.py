"""Core algebra, topology and search engines for serene."""
