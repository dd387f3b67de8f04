"""Exact geometry and Veech group arithmetic for square-tiled surfaces.

The package computes cylinder decompositions of origamis in rational
directions, the coset table and signature of the stabilizer of an
origami class in the modular group, and verifies the section-count
bound formulas on concrete examples, all in exact arithmetic where the
quantities are rational.
"""

from .origami import (BijectionError, ConnectivityError, KernelElement,
                      Origami, OrigamiError, ParseError, Permutation,
                      SurfaceType, UnstableTypeError, Vertex, format_origami,
                      genus, kernel_of_D, parse_origami,
                      quotient_by_translations, surface_type, translations,
                      vertices)
from .cylinders import (HORIZONTAL, VERTICAL, Cylinder, CylinderDecomposition,
                        Direction, bottom_circle_gaps,
                        decomposition_in_direction, directions_up_to,
                        horizontal_decomposition, marked_square_set,
                        moduli_ratio_check, reduce_direction,
                        transformed_origami)
from .veech import (MAT_ID, MAT_S, MAT_T, CosetTable, GroupSignature,
                    OrbitCapError, OrigamiClass, act_generator, act_S, act_T,
                    act_T_inv, act_word, c1_search, clear_orbit_cache,
                    evaluate_word, mat_det, mat_mul, mat_neg, mat_pow_T,
                    membership, orbit_and_stabilizer, origami_classes,
                    projectively_equal, signature, word_decompose)
from .bounds import (BoundsReport, CheckResult, DirectionReport,
                     ij0_bound, integer_moduli_lcm, landau, landau_exp_bound,
                     massias_bound, massias_comparison, prop_bound,
                     rational_lcm, reduced_certificate, simple_js_bound,
                     thm31_bound, thm32_rhs, verify_all)

__version__ = "0.1.0"
