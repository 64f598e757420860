"""Model checking freeze LTL and first-order data logic over one-counter automata."""

__version__ = "0.1.0"
