"""Explicit 2-descent and rank-one quadratic twists for odd-degree hyperelliptic Jacobians over Q."""

from __future__ import annotations

from .curve import AffinePoint, Curve, new_curve, parse_curve
from .descent import SquareClassTuple, TwoTorsionVector, delta_two_torsion, delta_twisted_two_torsion
from .jacobian import JacobianModel, MumfordDivisor, jacobian_order, nontorsion_certificate
from .places import classify_prime, genericity_scan, weil_threshold
from .selmer import fake_selmer_upper, local_condition, variation_check
from .twistforge import forge_cocycle, simple_twist_scan

__version__ = "0.1.0"

__all__ = [
    "AffinePoint", "Curve", "new_curve", "parse_curve",
    "SquareClassTuple", "TwoTorsionVector", "delta_two_torsion", "delta_twisted_two_torsion",
    "JacobianModel", "MumfordDivisor", "jacobian_order", "nontorsion_certificate",
    "classify_prime", "genericity_scan", "weil_threshold",
    "fake_selmer_upper", "local_condition", "variation_check",
    "forge_cocycle", "simple_twist_scan",
]
