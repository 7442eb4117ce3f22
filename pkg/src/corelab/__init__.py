"""Core outcomes in budget-constrained assignment markets."""
from .market import Market, Outcome, PriceVector

__all__ = ["Market", "Outcome", "PriceVector"]
