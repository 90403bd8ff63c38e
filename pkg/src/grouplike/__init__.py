"""Finite groupoids, bibundles, convolution algebras and the noncommutative torus.

Everything is exact: scalars are symbolic phases with cyclotomic
coefficients, linear algebra is rational elimination.
"""

__version__ = "0.1.0"

from .scalars import LAM, TWO_PI, Angle, Scalar, angle_congruent  # noqa: E402

__all__ = ["LAM", "TWO_PI", "Angle", "Scalar", "angle_congruent", "__version__"]
