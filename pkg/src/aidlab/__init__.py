"""aidlab: exact-arithmetic computation of almost inner derivations of
Lie algebras given by structure constants.

The package is organized around:

- ``fields`` / ``linalg`` / ``multipoly``: exact scalars (Q and simple
  number fields), linear algebra, sparse polynomials;
- ``liecore`` / ``hall`` / ``families``: structure-constant algebras, free
  nilpotent algebras on Hall bases, and the named families with their
  distinguished derivations and witnesses;
- ``derive`` / ``witness`` / ``engine`` / ``parametric``: derivation
  algebras, witness certification, the sandwich bound, and the exact
  parametric decision procedure;
- ``scalars``: change of base field and the scaled-derivation construction;
- ``suite`` / ``cli``: the reproduction suite and the command line.
"""

from .fields import FieldSpec, QQ, Rational, field_mul
from .linalg import Matrix, Subspace, rref, solve, subspace_contains, subspace_intersect
from .multipoly import MultiPoly, RationalFn, poly_eval, poly_is_zero, poly_substitute_zero
from .liecore import Element, LieAlgebra, bracket, direct_sum, jacobi_check, quotient, semidirect
from .hall import FreeNilpotent, build_free_nilpotent, witt_dimension
from .families import FamilySpec, build_family, named_derivation, paper_witness, parse_family
from .derive import Derivation, DerSpace, ad, derivation_space, ds_decomposition, is_derivation
from .witness import PiecewiseWitness, verify_witness
from .engine import (AidReport, SamplingConfig, WitnessEntry, aid_sandwich,
                     aid_upper_bound, point_constraint, refute_aid)
from .parametric import aid_exact_parametric
from .scalars import (ScalarChangeContext, build_scaled_family, descend_derivation,
                      extend_scalars, quadratic_split, restrict_scalars)

__version__ = "0.1.0"
