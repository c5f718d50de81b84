"""Local popularity analysis for directed graphs with a two-tier group hierarchy."""

__version__ = "0.1.0"
