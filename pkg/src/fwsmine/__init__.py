"""Recognition, typing and content mining of future work sentences."""

__version__ = "0.1.0"
