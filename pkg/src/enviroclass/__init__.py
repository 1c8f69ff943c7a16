"""Air/water fusion, rule-based environment labelling and a from-scratch stacking classifier."""

__version__ = "0.1.0"
