"""Exact computations with Poisson polynomial algebras.

Poisson presentations and iterated Poisson-Ore towers, higher skew
Poisson derivations, the deleting-derivation homomorphism, semiclassical
limits of quantum towers over K[t, t^-1], torus-invariant Poisson primes
of Poisson affine spaces and the quantum-matrices case study.
"""

from .arith import GF, QQ, LaurentPoly, NotDivisible, QBinomialTable, eval_at_one, field_for
from .arith import laurent_exact_div, q_binomial, q_factorial, q_integer
from .ddh import LambdaMatrix, BirationalRecord, StepRecord, check_equivariance, ddh_step, run_ddh
from .ddh import verify_step_poisson
from .poisson import OreLevel, OreTower, PoissonPresentation, apply_D, bracket, extend_poisson_ore
from .poisson import reorder_tower, verify_higher_axioms, verify_jacobi, verify_ore_data
from .poly import Poly, PolyRing
from .qmatrices import DeterminantalIdeal, MinorId, build_quantum_matrices, minor
from .qmatrices import verify_minor_bracket, verify_Pk_poisson
from .quantum import NCElem, QLevel, QuantumTower, check_hypotheses, extract_higher_derivation
from .quantum import nc_mul, sc_bracket, semiclassical_limit
from .report import Report
from .torus import CharacterData, JwIdeal, check_hyp, enumerate_Jw, quotient_affine, verify_Jw_poisson

__version__ = "0.1.0"
