"""Energy functionals evaluated on deformations of annuli."""

from enum import Enum


class Functional(Enum):
    CONFORMAL = "conformal"  # E_h = integral of ||Dh||^n
    WEIGHTED = "weighted"  # F_h = integral of ||Dh||^n / |h|^n
    OPERATOR_NORM = "operator-norm"  # integral of |Dh|^n / |h|^n
