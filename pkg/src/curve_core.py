import math
from dataclasses import dataclass
from typing import Optional

from src.fp_arith import (
    NULL_COUNTER,
    FieldElement,
    OpCounter,
    PrimeModulus,
    fe_add,
    fe_inv,
    fe_is_zero,
    fe_mul,
    fe_neg,
    fe_sqr,
    fe_sub,
)


class SingularCurveError(ValueError):
    pass


class HasseBoundError(ValueError):
    pass


class OffCurveError(ValueError):
    pass


class MissingOrderError(ValueError):
    pass


@dataclass(frozen=True)
class CurveParams:
    modulus: PrimeModulus
    a: FieldElement
    b: FieldElement
    order: Optional[int] = None
    name: str = ""

    @classmethod
    def create(cls, modulus: PrimeModulus, a: int, b: int, order=None, name=""):
        curve = cls(modulus, modulus.element(a), modulus.element(b), order, name)
        if discriminant(curve) == 0:
            raise SingularCurveError(f"curve {name or '?'} is singular: 4a^3 + 27b^2 = 0")
        if order is not None and not validate_hasse(curve):
            raise HasseBoundError(
                f"order {order:x} violates Hasse's bound for p = {modulus.p:x}"
            )
        return curve

    @property
    def p(self) -> int:
        return self.modulus.p


@dataclass(frozen=True)
class AffinePoint:
    x: Optional[FieldElement] = None
    y: Optional[FieldElement] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "AffinePoint(infinity)"
        return f"AffinePoint(0x{self.x.value:x}, 0x{self.y.value:x})"


INFINITY = AffinePoint()


def discriminant(E: CurveParams) -> int:
    p = E.p
    return (4 * pow(E.a.value, 3, p) + 27 * pow(E.b.value, 2, p)) % p


def make_point(E: CurveParams, x: int, y: int) -> AffinePoint:
    point = AffinePoint(E.modulus.element(x), E.modulus.element(y))
    if not is_on_curve(point, E):
        raise OffCurveError(f"point ({x:x}, {y:x}) is not on curve {E.name or '?'}")
    return point


def is_on_curve(P: AffinePoint, E: CurveParams) -> bool:
    if P.is_infinity:
        return True
    ctr = NULL_COUNTER
    rhs = fe_add(fe_mul(fe_add(fe_sqr(P.x, ctr), E.a, ctr), P.x, ctr), E.b, ctr)
    return fe_sqr(P.y, ctr) == rhs


def point_negate(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    if P.is_infinity:
        return P
    return AffinePoint(P.x, fe_neg(P.y, ctr))


def point_double(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    if P.is_infinity or fe_is_zero(P.y):
        return INFINITY
    x_sq = fe_sqr(P.x, ctr)
    numerator = fe_add(fe_add(fe_add(x_sq, x_sq, ctr), x_sq, ctr), E.a, ctr)
    slope = fe_mul(numerator, fe_inv(fe_add(P.y, P.y, ctr), ctr), ctr)
    x2 = fe_sub(fe_sub(fe_sqr(slope, ctr), P.x, ctr), P.x, ctr)
    y2 = fe_sub(fe_mul(slope, fe_sub(P.x, x2, ctr), ctr), P.y, ctr)
    return AffinePoint(x2, y2)


def point_add(P: AffinePoint, Q: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == Q.y:
            return point_double(P, E, ctr)
        return INFINITY
    slope = fe_mul(
        fe_sub(Q.y, P.y, ctr), fe_inv(fe_sub(Q.x, P.x, ctr), ctr), ctr
    )
    x3 = fe_sub(fe_sub(fe_sqr(slope, ctr), P.x, ctr), Q.x, ctr)
    y3 = fe_sub(fe_mul(slope, fe_sub(P.x, x3, ctr), ctr), P.y, ctr)
    return AffinePoint(x3, y3)


def scalar_mul_reference(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    """Left-to-right double-and-add over the primitive group law.

    Every faster routine in the package is checked against this one.
    """
    if k < 0:
        raise ValueError(f"negative scalar: -0x{-k:x}")
    result = INFINITY
    for i in range(k.bit_length() - 1, -1, -1):
        result = point_double(result, E, ctr)
        if (k >> i) & 1:
            result = point_add(result, P, E, ctr)
    return result


def hamming_weight(k: int) -> int:
    return k.bit_count()


def complement_scalar(k: int, E: CurveParams) -> tuple:
    if E.order is None:
        raise MissingOrderError(f"curve {E.name or '?'} has no order")
    if not 0 <= k <= E.order:
        raise ValueError(f"scalar 0x{k:x} outside [0, #E]")
    complement = E.order - k
    if hamming_weight(complement) < hamming_weight(k):
        return complement, True
    return k, False


def scalar_mul_complement(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    scalar, negate = complement_scalar(k, E)
    base = point_negate(P, E, ctr) if negate else P
    return scalar_mul_reference(scalar, base, E, ctr)


def validate_hasse(E: CurveParams) -> bool:
    if E.order is None:
        raise MissingOrderError(f"curve {E.name or '?'} has no order")
    return abs(E.order - (E.p + 1)) <= 2 * math.isqrt(E.p) + 1
