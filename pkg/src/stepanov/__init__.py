"""Auxiliary-polynomial (Stepanov method) certificates for |{x : f_i(x) in g_i Gamma}|."""

from .auxpoly import (PolySystem, check_admissible, compute_params, construct_certificate,
                      verify_certificate)
from .ffield import FieldCtx, coset, in_coset, is_prime, primitive_root, subgroup_of_order
from .oracle import enumerate_M, verify_instance
from .polyring import DensePoly

__all__ = [
    'DensePoly', 'FieldCtx', 'PolySystem', 'check_admissible', 'compute_params',
    'construct_certificate', 'coset', 'enumerate_M', 'in_coset', 'is_prime',
    'primitive_root', 'subgroup_of_order', 'verify_certificate', 'verify_instance',
]
