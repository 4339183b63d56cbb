"""Independent brute-force ground truth on finite truncations."""

from .enumeration import enumerate_submodules
from .groups import BudgetExceeded, FiniteAbelianGroup, Subgroup, enumerate_subgroups
from .verify import THEOREMS, Bounds, BoundsRefused, VerificationReport, verify, verify_all

__all__ = [
    "THEOREMS",
    "Bounds",
    "BoundsRefused",
    "BudgetExceeded",
    "FiniteAbelianGroup",
    "Subgroup",
    "VerificationReport",
    "enumerate_submodules",
    "enumerate_subgroups",
    "verify",
    "verify_all",
]
