"""Finite quotients of hyperbolic triangle groups: invariants, PSL(2,p)
witnesses, verifiable distinguishing certificates and a pair census."""

from .errors import (InconsistentCongruences, InvalidSignature, NotSmoothOrder,
                     PreconditionError, ResourceLimitError, TriquotError)
from .signature import Triple, abelianization, classify, invariant_profile, is_exceptional
from .l2set import l2_set, l2_split_witness
from .groups import (Alt4, Alt5, C3xC3, Cyclic, Dihedral, DirectProduct, GeneratedSubgroup, Psl2,
                     Sym4, element_orders, has_element_of_order)
from .psl2 import macbeath_generated, realize_psl2, find_smooth_generating_pair
from .oracle import OracleConfig, hom_count, is_quotient, is_smooth_quotient
from .witness import DistinguishConfig, distinguish, verify

__version__ = "0.1.0"
