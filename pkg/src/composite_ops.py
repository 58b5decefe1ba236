"""Single-inversion composite point operations.

Every intermediate multiple is carried as a fraction x = Nx/U^2, y = Ny/U^3.
A doubling stage multiplies the denominator by q = 2*Ny, an addition stage by
q = Nx2*U1^2 - Nx1*U2^2 times the other chain's denominator, so each stage's
denominator divides the next one and the final point needs a single inversion.
Zero cofactors are detected before that inversion and reported as
DegenerateChain; callers fall back to the primitive group law.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass

from src.curve_core import (
    INFINITY,
    AffinePoint,
    CurveParams,
    point_double,
    scalar_mul_reference,
)
from src.fp_arith import (
    NULL_COUNTER,
    FieldElement,
    OpCounter,
    fe_add,
    fe_inv,
    fe_is_zero,
    fe_mul,
    fe_neg,
    fe_sqr,
    fe_sub,
)

logger = logging.getLogger(__name__)

MAX_CHAIN_DOUBLINGS = 4
MQ_RANGE = range(3, 17)


class DegenerateChain(ArithmeticError):
    def __init__(self, operation: str, stage: str):
        super().__init__(f"{operation}: zero denominator at {stage}")
        self.operation = operation
        self.stage = stage


@dataclass(frozen=True)
class SlopeChain:
    W: FieldElement
    U: FieldElement
    q: FieldElement
    Nx: FieldElement
    Ny: FieldElement
    affine: bool = False


@dataclass(frozen=True)
class CompositeResult:
    point: AffinePoint
    inversions_used: int
    ops: OpCounter
    fallback: bool = False


def chain_start(P: AffinePoint, E: CurveParams, operation: str) -> SlopeChain:
    if P.is_infinity:
        raise DegenerateChain(operation, "input at infinity")
    one = E.modulus.one()
    return SlopeChain(E.modulus.zero(), one, one, P.x, P.y, affine=True)


def chain_double(c: SlopeChain, E: CurveParams, ctr: OpCounter, operation: str, stage: str) -> SlopeChain:
    if fe_is_zero(c.Ny):
        raise DegenerateChain(operation, stage)
    q = fe_add(c.Ny, c.Ny, ctr)
    x_sq = fe_sqr(c.Nx, ctr)
    three_x_sq = fe_add(fe_add(x_sq, x_sq, ctr), x_sq, ctr)
    if c.affine:
        W = fe_add(three_x_sq, E.a, ctr)
        U = q
    else:
        u_sq = fe_sqr(c.U, ctr)
        W = fe_add(three_x_sq, fe_mul(E.a, fe_sqr(u_sq, ctr), ctr), ctr)
        U = fe_mul(c.U, q, ctr)
    q_sq = fe_sqr(q, ctr)
    x_scaled = fe_mul(c.Nx, q_sq, ctr)
    Nx = fe_sub(fe_sqr(W, ctr), fe_add(x_scaled, x_scaled, ctr), ctr)
    y_scaled = fe_mul(c.Ny, fe_mul(q_sq, q, ctr), ctr)
    Ny = fe_sub(fe_mul(W, fe_sub(x_scaled, Nx, ctr), ctr), y_scaled, ctr)
    return SlopeChain(W, U, q, Nx, Ny)


def chain_add(c1: SlopeChain, c2: SlopeChain, E: CurveParams, ctr: OpCounter, operation: str, stage: str) -> SlopeChain:
    if c1.affine and not c2.affine:
        c1, c2 = c2, c1
    if c2.affine:
        # mixed: the second operand has denominator 1
        u1_sq = fe_sqr(c1.U, ctr)
        x1 = c1.Nx
        x2 = fe_mul(c2.Nx, u1_sq, ctr)
        y1 = c1.Ny
        y2 = fe_mul(c2.Ny, fe_mul(u1_sq, c1.U, ctr), ctr)
        base_U = c1.U
    else:
        u1_sq = fe_sqr(c1.U, ctr)
        u2_sq = fe_sqr(c2.U, ctr)
        x1 = fe_mul(c1.Nx, u2_sq, ctr)
        x2 = fe_mul(c2.Nx, u1_sq, ctr)
        y1 = fe_mul(c1.Ny, fe_mul(u2_sq, c2.U, ctr), ctr)
        y2 = fe_mul(c2.Ny, fe_mul(u1_sq, c1.U, ctr), ctr)
        base_U = fe_mul(c1.U, c2.U, ctr)
    q = fe_sub(x2, x1, ctr)
    if fe_is_zero(q):
        raise DegenerateChain(operation, stage)
    W = fe_sub(y2, y1, ctr)
    U = fe_mul(base_U, q, ctr)
    q_sq = fe_sqr(q, ctr)
    x1_scaled = fe_mul(x1, q_sq, ctr)
    x2_scaled = fe_mul(x2, q_sq, ctr)
    Nx = fe_sub(fe_sub(fe_sqr(W, ctr), x1_scaled, ctr), x2_scaled, ctr)
    y1_scaled = fe_mul(y1, fe_mul(q_sq, q, ctr), ctr)
    Ny = fe_sub(fe_mul(W, fe_sub(x1_scaled, Nx, ctr), ctr), y1_scaled, ctr)
    return SlopeChain(W, U, q, Nx, Ny)


def chain_negate(c: SlopeChain, ctr: OpCounter) -> SlopeChain:
    return SlopeChain(c.W, c.U, c.q, c.Nx, fe_neg(c.Ny, ctr), c.affine)


def chain_finish(c: SlopeChain, ctr: OpCounter) -> AffinePoint:
    u_inv = fe_inv(c.U, ctr)
    u_inv_sq = fe_sqr(u_inv, ctr)
    x = fe_mul(c.Nx, u_inv_sq, ctr)
    y = fe_mul(c.Ny, fe_mul(u_inv_sq, u_inv, ctr), ctr)
    return AffinePoint(x, y)


def chain_affine(c: SlopeChain) -> AffinePoint:
    """Uncounted affine view of a chain, for checking the chain algebra."""
    return chain_finish(c, NULL_COUNTER)


def _doubled(c, n, E, ctr, operation, label="2^{}"):
    for i in range(1, n + 1):
        c = chain_double(c, E, ctr, operation, label.format(i))
    return c


def _multiple(m, P, E, ctr, operation):
    """Chain for [m]P by binary double-and-add over chain stages."""
    base = chain_start(P, E, operation)
    c = base
    for i in range(m.bit_length() - 2, -1, -1):
        c = chain_double(c, E, ctr, operation, f"{m}-chain double")
        if (m >> i) & 1:
            c = chain_add(c, base, E, ctr, operation, f"{m}-chain add")
    return c


def _run(operation, build, ctr):
    local = OpCounter()
    try:
        chain = build(local)
        point = chain_finish(chain, local)
    except DegenerateChain:
        logger.debug(f"{operation} degenerate, {local.mul + local.sqr} multiplications spent")
        raise
    finally:
        ctr.absorb(local)
    return CompositeResult(point, local.inv, local)


def double2(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    return _run("double2", lambda c: _doubled(chain_start(P, E, "double2"), 2, E, c, "double2"), ctr)


def double3(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    return _run("double3", lambda c: _doubled(chain_start(P, E, "double3"), 3, E, c, "double3"), ctr)


def double4(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    return _run("double4", lambda c: _doubled(chain_start(P, E, "double4"), 4, E, c, "double4"), ctr)


def triple(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    def build(c):
        base = chain_start(P, E, "triple")
        doubled = chain_double(base, E, c, "triple", "2P")
        return chain_add(doubled, base, E, c, "triple", "2P+P")

    return _run("triple", build, ctr)


def doublek_plus_point(n: int, Q: AffinePoint, P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    """[2^n]Q + P."""
    if n not in range(1, MAX_CHAIN_DOUBLINGS + 1):
        raise ValueError(f"doubling order {n} outside 1..4")
    operation = f"doublek_plus_point({n})"

    def build(c):
        chain = _doubled(chain_start(Q, E, operation), n, E, c, operation)
        if P.is_infinity:
            return chain
        return chain_add(chain, chain_start(P, E, operation), E, c, operation, f"2^{n}Q+P")

    return _run(operation, build, ctr)


def doublek_plus_2q(n: int, P: AffinePoint, Q: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    """[2^n]P + [2]Q; pass -Q for [2^n]P - [2]Q."""
    if n not in range(2, MAX_CHAIN_DOUBLINGS + 1):
        raise ValueError(f"doubling order {n} outside 2..4")
    operation = f"doublek_plus_2q({n})"

    def build(c):
        left = _doubled(chain_start(P, E, operation), n, E, c, operation)
        right = chain_double(chain_start(Q, E, operation), E, c, operation, "2Q")
        return chain_add(left, right, E, c, operation, f"2^{n}P+2Q")

    return _run(operation, build, ctr)


def doublek_plus_mq(n: int, m: int, P: AffinePoint, Q: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    """[2^n]P + [m]Q from two independent chains joined by one cross-chain addition."""
    if n not in range(1, MAX_CHAIN_DOUBLINGS + 1):
        raise ValueError(f"doubling order {n} outside 1..4")
    if m not in MQ_RANGE:
        raise ValueError(f"multiplier {m} outside 3..16")
    operation = f"doublek_plus_mq({n},{m})"

    def build(c):
        left = _doubled(chain_start(P, E, operation), n, E, c, operation)
        right = _multiple(m, Q, E, c, operation)
        return chain_add(left, right, E, c, operation, f"2^{n}P+{m}Q")

    return _run(operation, build, ctr)


def six_q_alt(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    def build(c):
        base = chain_start(P, E, "six_q_alt")
        tripled = chain_add(chain_double(base, E, c, "six_q_alt", "2P"), base, E, c, "six_q_alt", "3P")
        return chain_double(tripled, E, c, "six_q_alt", "6P")

    return _run("six_q_alt", build, ctr)


def ten_q_alt(P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    def build(c):
        base = chain_start(P, E, "ten_q_alt")
        five = chain_add(_doubled(base, 2, E, c, "ten_q_alt"), base, E, c, "ten_q_alt", "5P")
        return chain_double(five, E, c, "ten_q_alt", "10P")

    return _run("ten_q_alt", build, ctr)


Recipe = namedtuple("Recipe", "name inversions evaluate")


def _double_once(P, E, ctr):
    local = OpCounter()
    point = point_double(P, E, local)
    ctr.absorb(local)
    return CompositeResult(point, local.inv, local)


def _doublek_minus(n, P, E, ctr, twice=False):
    """[2^n]P - P, or [2^n]P - [2]P; the subtrahend is negated inside the chain."""
    operation = f"doublek_minus_{'2p' if twice else 'point'}({n})"

    def build(c):
        right = chain_start(P, E, operation)
        if twice:
            right = chain_double(right, E, c, operation, "2P")
        left = _doubled(right, n - 1 if twice else n, E, c, operation)
        return chain_add(left, chain_negate(right, c), E, c, operation, f"2^{n}P-{2 if twice else 1}P")

    return _run(operation, build, ctr)


def _build_mul_small_table():
    table = {
        1: Recipe("identity", 0, None),
        2: Recipe("double", 1, _double_once),
        3: Recipe("triple", 1, triple),
        4: Recipe("double2", 1, double2),
        8: Recipe("double3", 1, double3),
        16: Recipe("double4", 1, double4),
        7: Recipe("doublek_minus_point(3)", 1, lambda P, E, c: _doublek_minus(3, P, E, c)),
        15: Recipe("doublek_minus_point(4)", 1, lambda P, E, c: _doublek_minus(4, P, E, c)),
        14: Recipe("doublek_minus_2p(4)", 1, lambda P, E, c: _doublek_minus(4, P, E, c, twice=True)),
    }
    for n, c in ((2, 5), (3, 9), (4, 17)):
        table[c] = Recipe(f"doublek_plus_point({n})", 1, lambda P, E, ctr, n=n: doublek_plus_point(n, P, P, E, ctr))
    for n, c in ((2, 6), (3, 10), (4, 18)):
        table[c] = Recipe(f"doublek_plus_2q({n})", 1, lambda P, E, ctr, n=n: doublek_plus_2q(n, P, P, E, ctr))
    for c in range(11, 32):
        if c in table:
            continue
        n = 3 if c < 16 else 4
        m = c - (1 << n)
        table[c] = Recipe(f"doublek_plus_mq({n},{m})", 1, lambda P, E, ctr, n=n, m=m: doublek_plus_mq(n, m, P, P, E, ctr))
    return dict(sorted(table.items()))


MUL_SMALL_TABLE = _build_mul_small_table()
MUL_SMALL_COSTS = {c: recipe.inversions for c, recipe in MUL_SMALL_TABLE.items()}


def mul_small(c: int, P: AffinePoint, E: CurveParams, ctr: OpCounter) -> CompositeResult:
    """[c]P for 1 <= c <= 31 through the static recipe table.

    A degenerate chain falls back to the reference multiply; the result is then
    flagged and inversions_used reports what the fallback spent.
    """
    if c not in MUL_SMALL_TABLE:
        raise ValueError(f"multiplier {c} outside 1..31")
    if P.is_infinity:
        return CompositeResult(INFINITY, 0, OpCounter())
    recipe = MUL_SMALL_TABLE[c]
    if recipe.evaluate is None:
        return CompositeResult(P, 0, OpCounter())
    local = OpCounter()
    try:
        point = recipe.evaluate(P, E, local).point
        fallback = False
    except DegenerateChain as e:
        logger.debug(f"mul_small({c}) falling back to primitives: {e}")
        point = scalar_mul_reference(c, P, E, local)
        fallback = True
    ctr.absorb(local)
    return CompositeResult(point, local.inv, local, fallback)
