"""Exact computation of Zariski closures of finitely generated matrix groups."""

from .field import QQ, NumberField, Poly, rat
from .errors import ZClosureError

__all__ = ["QQ", "NumberField", "Poly", "rat", "ZClosureError"]
