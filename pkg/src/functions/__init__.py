from .function_factory import get_test_function, parse_parameters
from .gaussian import abs_moment, gaussian_expectation, rho, rho_many, rho_product, rho_square
from .test_functions import (
    ClassMembership,
    CutoffPsi,
    TestFunction,
    class_membership,
    derivative,
    evaluate,
    phi,
)

__all__ = [
    "ClassMembership",
    "CutoffPsi",
    "TestFunction",
    "abs_moment",
    "class_membership",
    "derivative",
    "evaluate",
    "gaussian_expectation",
    "get_test_function",
    "parse_parameters",
    "phi",
    "rho",
    "rho_many",
    "rho_product",
    "rho_square",
]
