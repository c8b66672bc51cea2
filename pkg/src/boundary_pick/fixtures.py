"""The two-node worked example: data, parameters and the expected numbers.

Nodes ``t = (1, -1)``, values ``w = (1, -1)``, bounds ``gamma = (1, 0)`` and
normalization point ``mu = i``. The Pick matrix is ``[[1, 1], [1, 0]]`` with
one negative eigenvalue.
"""

from __future__ import annotations

import cmath

import numpy as np

from .params import BoundaryData, SchurParameter
from .pick import InterpolationData
from .rational import RationalFunction

__all__ = [
    "WORKED_NODES",
    "WORKED_VALUES",
    "WORKED_GAMMAS",
    "WORKED_MU",
    "worked_example_data",
    "example1_parameter",
    "example2_parameter",
    "example3_parameter",
    "example3_parameter_eval",
    "example3_interpolant_eval",
    "minus_one_parameter",
    "theta_closed_form_worked",
    "BUILTIN_PARAMETERS",
    "EXPECTED",
]

WORKED_NODES = (1.0 + 0j, -1.0 + 0j)
WORKED_VALUES = (1.0 + 0j, -1.0 + 0j)
WORKED_GAMMAS = (1.0, 0.0)
WORKED_MU = 1j


def worked_example_data() -> InterpolationData:
    return InterpolationData(WORKED_NODES, WORKED_VALUES, WORKED_GAMMAS)


def minus_one_parameter() -> SchurParameter:
    return SchurParameter.constant(-1.0, name="constant -1")


def example1_parameter() -> SchurParameter:
    """``(2iz + 2) / ((1 - i) z - 1 - 3i)``."""
    r = RationalFunction.from_coeffs([2.0, 2j], [-1 - 3j, 1 - 1j])
    return SchurParameter.rational(r, name="example 1")


def example2_parameter() -> SchurParameter:
    """``((3 - i) z - (1 + i)) / (-(1 + i) z + 3i - 1)``."""
    r = RationalFunction.from_coeffs([-(1 + 1j), 3 - 1j], [-1 + 3j, -(1 + 1j)])
    return SchurParameter.rational(r, name="example 2")


def example3_parameter_eval(z: complex) -> complex:
    x = cmath.exp((z - 1) / (z + 1))
    num = ((3 + 1j) * z + 1 - 1j) * x - 2j * z - 2
    den = -2 * (1 + 1j * z) * x + (1j - 1) * z + 3j + 1
    return num / den


def example3_interpolant_eval(z: complex) -> complex:
    """Closed form of the interpolant produced by the example 3 parameter."""
    x = cmath.exp((z - 1) / (z + 1))
    return (((2 - 1j) * z - 1) * x - z + 1j) / ((z - 1j) * x - 1j * z + 2j - 1)


def example3_parameter() -> SchurParameter:
    """Transcendental parameter with declared data ``E(-1) = i``, ``d_E(-1) = 1/2``.

    The exponential factor has an essential singularity at ``-1``, so the
    boundary data there are declared rather than estimated.
    """
    declared = {-1.0 + 0j: BoundaryData(1j, 0.5, source="declared")}
    return SchurParameter.opaque(example3_parameter_eval, declared, name="example 3")


def theta_closed_form_worked(z: complex) -> np.ndarray:
    """Entries of the coefficient matrix as displayed for this example."""
    m = np.array(
        [
            [(1j - 1) * z**2 + 2 * (1 + 2j) * z - 1 - 1j, (3j - 1) * z**2 + 2 * z + 1j - 1],
            [(1j + 1) * z**2 - 2 * z + 1 + 3j, (1 - 1j) * z**2 + 2 * (2j - 1) * z + 1 + 1j],
        ]
    )
    return m / (2 * (z**2 - 1))


BUILTIN_PARAMETERS = {
    "minus-one": minus_one_parameter,
    "example1": example1_parameter,
    "example2": example2_parameter,
    "example3": example3_parameter,
}

EXPECTED = {
    "P": np.array([[1, 1], [1, 0]], dtype=complex),
    "P_inv": np.array([[0, 1], [1, -1]], dtype=complex),
    "kappa": 1,
    # as printed; the first column does not satisfy the inverse Stein identity
    "tilde_printed": np.array([[1, 1 - 1j], [-1, -1 - 1j]], dtype=complex),
    "eta": np.array([-1, 1j]),
    "p_over_e2": np.array([0.0, -0.5]),
    "theta_at_0": -0.5 * np.array([[-1 - 1j, 1j - 1], [1 + 3j, 1 + 1j]]),
    "w_example1_num": [-1j, 1.0],  # z - i
    "w_example1_den": [1 - 2j, 1j],  # i z + 1 - 2i
    "w_example1_at_minus1": (1 + 1j) / (3j - 1),
}
