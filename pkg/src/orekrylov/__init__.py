"""Minimal relations for pseudo-linear maps and D-finite closure operators."""

from .algebra import Poly, RatFunc, apply_shift, mobius_substitute
from .bivariate import BivarPoly, parse_bivariate
from .bounds import BoundQuery, degmm_bound, evaluate_bound, order_degree_curve
from .closure import ClosurePoly, parse_closure
from .instances import (InstanceReport, associate, compose_annihilator, differential_resolvent,
                        hermite_reduce, lclm, polynomial_closure, sym_power, symmetric_product,
                        telescoper, wronskian_annihilator)
from .nullspace import kronecker_indices, min_kernel_vector
from .oracle import brute_force_relation, verify_instance
from .ore import DX, EX, SX, OrePoly, parse_operator
from .pseudokrylov import KrylovSeed, PseudoLinearMap, min_relation, relation_at_order
from .ratmat import RatMatrix, mcmillan_degree, mcmillan_degree_via_mobius, smith_mcmillan

__version__ = "0.1.0"

__all__ = [
    "Poly", "RatFunc", "apply_shift", "mobius_substitute",
    "BivarPoly", "parse_bivariate",
    "BoundQuery", "degmm_bound", "evaluate_bound", "order_degree_curve",
    "ClosurePoly", "parse_closure",
    "InstanceReport", "associate", "compose_annihilator", "differential_resolvent", "hermite_reduce",
    "lclm", "polynomial_closure", "sym_power", "symmetric_product", "telescoper", "wronskian_annihilator",
    "kronecker_indices", "min_kernel_vector",
    "brute_force_relation", "verify_instance",
    "DX", "EX", "SX", "OrePoly", "parse_operator",
    "KrylovSeed", "PseudoLinearMap", "min_relation", "relation_at_order",
    "RatMatrix", "mcmillan_degree", "mcmillan_degree_via_mobius", "smith_mcmillan",
]
