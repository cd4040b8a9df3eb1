"""One-sided shift spaces over the alphabet ℕ, with budgeted decision procedures."""

__version__ = "0.1.0"
