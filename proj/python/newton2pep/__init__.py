"""Linearizations of quadratic two-parameter matrix polynomials in the Newton basis."""

from ._core import (
    E1FreeParams,
    MatrixPoly2,
    MonomialPencil,
    NewtonNodes,
    NewtonPencil,
    as_newton,
    certify_delta_singular,
    companion_params,
    companion_pencil,
    construct_e1_newton,
    construct_general_ansatz,
    membership_newton,
    newton_to_monomial,
    random_params,
    run_cli,
    select_M,
    spectrum_pair,
    spectrum_slice,
    transfer_to_newton,
    verify_linearization,
)

__all__ = [
    "E1FreeParams",
    "MatrixPoly2",
    "MonomialPencil",
    "NewtonNodes",
    "NewtonPencil",
    "as_newton",
    "certify_delta_singular",
    "companion_params",
    "companion_pencil",
    "construct_e1_newton",
    "construct_general_ansatz",
    "membership_newton",
    "newton_to_monomial",
    "random_params",
    "run_cli",
    "select_M",
    "spectrum_pair",
    "spectrum_slice",
    "transfer_to_newton",
    "verify_linearization",
]
