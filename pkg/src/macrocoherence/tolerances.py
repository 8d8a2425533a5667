"""Numerical tolerances shared by the library and its test-suite."""

HERMITIAN_ATOL = 1e-12
RECONSTRUCTION_RTOL = 1e-10
ORTHONORMAL_ATOL = 1e-10

# eigenvalues in [NOT_PSD_FLOOR, 0) are clamped to zero
NOT_PSD_FLOOR = -1e-8

TRACE_ATOL = 1e-10
DEGENERACY_RTOL = 1e-9
COMPLETENESS_ATOL = 1e-10
COVARIANCE_ATOL = 1e-8
TRACE_DRIFT_MAX = 1e-9
DUAL_ROUTE_ATOL = 1e-10
MONOTONE_SLACK = 1e-9

FULL_TENSOR_MAX_N = 12


def as_dict():
    return {k: v for k, v in globals().items() if k.isupper()}
