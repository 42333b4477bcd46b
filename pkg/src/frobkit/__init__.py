"""Exact computations around Frobenius closure, plus closure and local
cohomology in prime characteristic."""

from .field import ExtensionField, ParamField, PrimeField, finite_field
from .ring import MonomialOrder, Polynomial, Ring, frobenius_power
from .groebner import (BudgetExceeded, GroebnerBasis, Ideal, buchberger, colon_ideal,
                       elimination, ideal_member, is_regular_sequence, kernel_of_ring_map,
                       normal_form)
from .frobenius import (CertificateError, FrobeniusClosureCertificate, bracket_power,
                        f_nilpotent_order, frobenius_closure_test)
from .extensions import (GaloisTowerReport, PresentedExtension, dickson_polynomial,
                         solvable_witness, verify_artin_schreier_reduction,
                         verify_plus_closure_example)

__version__ = "0.1.0"
