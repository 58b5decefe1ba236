"""X-only arithmetic on Montgomery curves By^2 = x^3 + Ax^2 + x.

Points are projective (X : Z) with x = X/Z; Z = 0 is the point at infinity.
The ladder below spends a single inversion, at the final normalization.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from src.curve_core import AffinePoint, CurveParams, SingularCurveError, make_point
from src.fp_arith import (
    NULL_COUNTER,
    FieldElement,
    OpCounter,
    PrimeModulus,
    fe_add,
    fe_inv,
    fe_is_zero,
    fe_mul,
    fe_sqr,
    fe_sub,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MontgomeryCurve:
    modulus: PrimeModulus
    A: FieldElement
    B: FieldElement
    a24: FieldElement
    order: Optional[int] = None
    name: str = ""

    @classmethod
    def create(cls, modulus: PrimeModulus, A: int, B: int, order=None, name=""):
        A_el, B_el = modulus.element(A), modulus.element(B)
        if fe_is_zero(B_el):
            raise SingularCurveError(f"Montgomery curve {name or '?'} has B = 0")
        if fe_sqr(A_el, NULL_COUNTER).value == 4 % modulus.p:
            raise SingularCurveError(f"Montgomery curve {name or '?'} has A^2 = 4")
        # setup cost, kept out of every per-multiplication count
        a24 = fe_mul(
            fe_add(A_el, modulus.element(2), NULL_COUNTER),
            fe_inv(modulus.element(4), NULL_COUNTER),
            NULL_COUNTER,
        )
        return cls(modulus, A_el, B_el, a24, order, name)

    @property
    def p(self) -> int:
        return self.modulus.p

    def contains(self, x: int, y: int) -> bool:
        p = self.p
        lhs = self.B.value * y * y % p
        return lhs == (x * x * x + self.A.value * x * x + x) % p


@dataclass(frozen=True)
class XZPoint:
    X: FieldElement
    Z: FieldElement

    @property
    def is_infinity(self) -> bool:
        return fe_is_zero(self.Z)


def xdbl(P: XZPoint, C: MontgomeryCurve, ctr: OpCounter) -> XZPoint:
    s = fe_sqr(fe_add(P.X, P.Z, ctr), ctr)
    d = fe_sqr(fe_sub(P.X, P.Z, ctr), ctr)
    four_xz = fe_sub(s, d, ctr)
    X = fe_mul(s, d, ctr)
    Z = fe_mul(four_xz, fe_add(d, fe_mul(C.a24, four_xz, ctr), ctr), ctr)
    return XZPoint(X, Z)


def xadd(P: XZPoint, Q: XZPoint, diff: XZPoint, C: MontgomeryCurve, ctr: OpCounter) -> XZPoint:
    """x(P + Q) from x(P), x(Q) and x(P - Q); P = Q is out of scope, use xdbl."""
    u = fe_mul(fe_sub(P.X, P.Z, ctr), fe_add(Q.X, Q.Z, ctr), ctr)
    v = fe_mul(fe_add(P.X, P.Z, ctr), fe_sub(Q.X, Q.Z, ctr), ctr)
    X = fe_mul(diff.Z, fe_sqr(fe_add(u, v, ctr), ctr), ctr)
    Z = fe_mul(diff.X, fe_sqr(fe_sub(u, v, ctr), ctr), ctr)
    return XZPoint(X, Z)


def normalize(P: XZPoint, ctr: OpCounter) -> Optional[FieldElement]:
    if P.is_infinity:
        return None
    return fe_mul(P.X, fe_inv(P.Z, ctr), ctr)


def mont_ladder(k: int, x_P: FieldElement, C: MontgomeryCurve, ctr: OpCounter) -> Optional[FieldElement]:
    """x([k]P), or None when [k]P is the point at infinity.

    The ladder keeps R1 - R0 = P throughout, so every xadd has x(P) as its
    difference.
    """
    if k < 0:
        raise ValueError(f"negative scalar: -0x{-k:x}")
    if k == 0:
        return None
    if fe_is_zero(x_P):
        # (0, 0) has order 2 and x = 0 cannot serve as a difference
        return x_P if k & 1 else None
    base = XZPoint(x_P, C.modulus.one())
    R0, R1 = base, xdbl(base, C, ctr)
    for i in range(k.bit_length() - 2, -1, -1):
        if (k >> i) & 1:
            R0 = xadd(R1, R0, base, C, ctr)
            R1 = xdbl(R1, C, ctr)
        else:
            R1 = xadd(R1, R0, base, C, ctr)
            R0 = xdbl(R0, C, ctr)
    return normalize(R0, ctr)


def weierstrass_model(C: MontgomeryCurve) -> CurveParams:
    """Short Weierstrass curve v^2 = u^3 + a u + b isomorphic to C via u = (3x + A)/(3B), v = y/B."""
    p = C.p
    A, B = C.A.value, C.B.value
    inv_3b = pow(3 * B, -1, p)
    a = 3 * (3 - A * A) * inv_3b * inv_3b % p
    b = (2 * A * A * A - 9 * A) * pow(inv_3b, 3, p) % p
    return CurveParams.create(C.modulus, a, b, C.order, C.name)


def weierstrass_point(C: MontgomeryCurve, x: int, y: int) -> AffinePoint:
    p = C.p
    inv_b = pow(C.B.value, -1, p)
    u = (3 * x + C.A.value) * pow(3 * C.B.value, -1, p) % p
    v = y * inv_b % p
    return make_point(weierstrass_model(C), u, v)


def montgomery_x(C: MontgomeryCurve, point: AffinePoint) -> Optional[int]:
    """Montgomery x of a point on weierstrass_model(C): x = B*u - A/3."""
    if point.is_infinity:
        return None
    p = C.p
    return (C.B.value * point.x.value - C.A.value * pow(3, -1, p)) % p
