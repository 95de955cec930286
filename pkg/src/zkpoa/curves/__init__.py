"""Inner statement curve and outer pairing curve."""

from .bn import BNCurve, G1Point, G2Point, GTElement, PreparedG2
from .inner import InnerCurve, InnerPoint, inner_add, inner_scalar_mul, pedersen_commit
from .params import CurveProfile, load_profile


def pairing(P: G1Point, Q: G2Point) -> GTElement:
    return P.curve.pairing(P, Q)


__all__ = [
    "BNCurve",
    "CurveProfile",
    "G1Point",
    "G2Point",
    "GTElement",
    "InnerCurve",
    "InnerPoint",
    "PreparedG2",
    "inner_add",
    "inner_scalar_mul",
    "load_profile",
    "pairing",
    "pedersen_commit",
]
