"""Product-free subsets of finite groups."""

from .groups import (
    Group,
    GroupSubset,
    PermAction,
    build_cyclic,
    build_from_generators,
    build_psl2,
    direct_product,
    quotient,
    set_inverse,
    set_product,
)
from .productfree import alpha_exact, green_ruzsa_alpha, is_product_free

__version__ = "0.1.0"
