"""Permutation polynomials built from linear translators over finite-field towers."""

from .field import FieldCtx, FieldError, FieldSizeError, make_field

__all__ = ["FieldCtx", "FieldError", "FieldSizeError", "make_field"]
__version__ = "0.1.0"
