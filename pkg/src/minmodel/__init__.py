"""Minimal models, Ext and Hochschild cohomology of monomial quiver algebras."""
from .presentation import (
    Arrow, Document, ParseError, Presentation, PresentationError, Quiver,
    is_normal, normal_basis, parse_document, parse_presentation, zero_minimally,
)
from .chains import (
    BettiTable, Chain, Overlaps, betti, chain_from_monomial, enumerate_chains,
    overlapping_positions,
)
from .linalg import LimitError

__version__ = "0.1.0"
