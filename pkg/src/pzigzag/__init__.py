"""Exact verification toolkit for the p-DG zigzag algebras and their braid group actions."""

from .arith import CMat, Cyc2p, CycInt, Laurent, qint, to_root
from .pcomplex import PComplex, decompose, is_acyclic, symbol
from .zigzag import ZigzagAlgebra, build_algebra

__all__ = ["CMat", "Cyc2p", "CycInt", "Laurent", "PComplex", "ZigzagAlgebra", "build_algebra",
           "decompose", "is_acyclic", "qint", "symbol", "to_root"]
