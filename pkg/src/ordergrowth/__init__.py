"""Relative growth, order distances and quasimorphisms for bi-invariantly ordered groups."""
from . import abelian, core, qm, rootdata, sl2tilde
from .core import (GroupModel, GrowthEstimate, TriState, check_order_axioms, gamma_n,
                   integer_model, is_dominant, order_distance, relative_growth, verify_collapse)
from .errors import (BudgetExceeded, DimensionMismatch, DomainError, OracleError,
                     OrderGrowthError, Uncertain, UnsupportedFamily)
from .qm import Bounded, Quasimorphism, Sandwich

__version__ = "0.1.0"
