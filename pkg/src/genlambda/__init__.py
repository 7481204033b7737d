"""Exact q-expansions, modular equations and CM values of the generalized
lambda functions Lambda_k = W_[k,2,1] on Gamma_1(N)."""

__version__ = "0.1.0"

from .cyclotomic import CycNum, NotDivisibleError, cyclotomic_polynomial, zeta_pow
from .lambda_fn import LambdaSpec, lambda_expansion, omega_ratio, phi_diff_slash, phi_slash, theta
from .modgroup import UniMat, brace, same_coset, slash_data, transversal
from .modpoly import JPoly, ModPoly, express_in_j, j_expansion, modular_polynomial
from .qseries import QQ, ZZ, QSeries, cyc

__all__ = [
    "CycNum", "JPoly", "LambdaSpec", "ModPoly", "NotDivisibleError", "QQ", "QSeries", "UniMat", "ZZ",
    "brace", "cyc", "cyclotomic_polynomial", "express_in_j", "j_expansion", "lambda_expansion",
    "modular_polynomial", "omega_ratio", "phi_diff_slash", "phi_slash", "same_coset", "slash_data",
    "theta", "transversal", "zeta_pow",
]
