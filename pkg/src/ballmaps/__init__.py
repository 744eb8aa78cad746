"""ballmaps: polynomial equivalence of proper rational maps between balls.

The package decides, with exact radical arithmetic wherever possible,
whether a proper rational holomorphic map between unit balls is
equivalent (under ball automorphisms on both sides) to a proper
polynomial map, and constructs the polynomial representative or an
exact infeasibility certificate.
"""

from .scalars import FLOAT_CONTEXT, Scalar, SqrtNotRepresentable
from .poly import HomPoly, NotDivisible, Poly, coprime_check
from .expressions import ParseError, poly_parse, scalar_parse
from .projective import (BALL, SIEGEL, DomainModel, Hyperplane, ProjPoint,
                         ball_disjoint, cayley, cayley_hyperplane,
                         siegel_disjoint)
from .autgroup import (IndefUnitary, hyperplane_to_infinity,
                       mobius_to_infinity, verify_indef_unitary)
from .ratmap import (ProjMap, RationalMap, base_locus, cayley_transport,
                     conjugate_by_autos, dehomogenize, proj_equal,
                     projectivize)
from .hermitian import HermForm, check_proper, norm_defect, vanishes_on_sphere
from .criterion import (Decision, InfeasibilityCert, WitnessPair, check_pair,
                        coefficient_system, decide_polynomial_equivalence,
                        linear_pullback, power_of_linear, replay_certificate,
                        search_witness, solve_forced)
from .degree2 import (CASE_I, CASE_II, NormalFormParams, build_normal_form,
                      case1_witness, case2_lambdas, find_y0, polynomialize)
from .gallery import Fixture, fixture, verify_example
from .mapfile import MapFile, Report

__version__ = "0.1.0"
