"""Exact invariants, isomorphisms and canonical forms for cycles of linear maps."""

from .exactalg import GF, QQ, FieldSpec, Matrix, Subspace
from .ordinal import INF, OMEGA, Ordinal, parse_ordinal
from .cyclerep import ALEPH0, CycleRep, MorphismFamily, direct_sum, random_basis_change, shift
from .filtration import InvariantTable, chain, height, kaplansky_invariants
from .extension import build_isomorphism
from .terminal import TerminalRep, canonical_cell, discrete_numbers, linear_realization, pointed_sum
from .admissible import SupportSet, is_admissible
from .classify import adapted_basis, decide_isomorphic, decompose, realize_finite

__version__ = "0.1.0"
