import logging
from collections import namedtuple
from typing import Dict, Iterable, List, Optional, Sequence

from src import composite_ops
from src.composite_ops import MAX_CHAIN_DOUBLINGS, MQ_RANGE, DegenerateChain
from src.curve_core import (
    INFINITY,
    AffinePoint,
    CurveParams,
    point_add,
    point_double,
    point_negate,
    scalar_mul_reference,
)
from src.fp_arith import NULL_COUNTER, OpCounter
from src.recode import mixed_naf_knapsack, to_base16_digits

logger = logging.getLogger(__name__)

DIRECTION_L2R = "l2r"
DIRECTION_R2L = "r2l"

# roles drive replay_scalar(): l2r traces fold init/promote steps as acc*base + block,
# r2l traces scale a running weight and add block*weight
ROLE_INIT = "init"
ROLE_PROMOTE = "promote"
ROLE_SCALE = "scale"
ROLE_ADD = "add"

TraceStep = namedtuple("TraceStep", "kind block base inv role")


class LadderTrace:
    def __init__(self, algorithm: str, direction: str = DIRECTION_L2R):
        self.algorithm = algorithm
        self.direction = direction
        self.steps: List[TraceStep] = []
        self.total = OpCounter()

    def add(self, kind: str, block: int, base: int, inv: int, role: str):
        self.steps.append(TraceStep(kind, block, base, inv, role))

    @property
    def inversions(self) -> int:
        return sum(step.inv for step in self.steps)

    def lines(self) -> List[str]:
        return [
            f"step {i}: kind={s.kind} block={s.block} base={s.base} inv={s.inv}"
            for i, s in enumerate(self.steps)
        ]

    def replay_scalar(self) -> int:
        acc = 0
        weight = 1
        for step in self.steps:
            if step.role in (ROLE_INIT, ROLE_PROMOTE):
                acc = acc * step.base + step.block
            elif step.role == ROLE_SCALE:
                weight *= step.base
            elif step.role == ROLE_ADD:
                acc += step.block * weight
        return acc


class _Recorder:
    """Attributes counter movement to trace steps; every counted call sits inside a step."""

    def __init__(self, ctr: OpCounter, trace: Optional[LadderTrace]):
        self.ctr = ctr
        self.trace = trace
        self.start = ctr.snapshot()
        self.mark = ctr.inv

    def step(self, kind, block, base, role):
        inv = self.ctr.inv - self.mark
        self.mark = self.ctr.inv
        if self.trace is not None:
            self.trace.add(kind, block, base, inv, role)

    def close(self, result):
        if self.trace is not None:
            self.trace.total = self.ctr.delta(self.start)
        return result


class MultipleMemo:
    """Multiples [m]P of one base point, keyed by |m|; signs are applied on the way out."""

    def __init__(self, P: AffinePoint, E: CurveParams):
        self.base = P
        self.curve = E
        self._points: Dict[int, AffinePoint] = {1: P}

    def __contains__(self, m: int) -> bool:
        return abs(m) in self._points

    def __len__(self):
        return len(self._points)

    def put(self, m: int, point: AffinePoint):
        self._points[abs(m)] = point

    def get(self, m: int, ctr: OpCounter) -> AffinePoint:
        size = abs(m)
        point = self._points.get(size)
        if point is None:
            if size in composite_ops.MUL_SMALL_TABLE:
                point = composite_ops.mul_small(size, self.base, self.curve, ctr).point
            else:
                point = scalar_mul_reference(size, self.base, self.curve, ctr)
            self._points[size] = point
            logger.debug(f"memo filled for |m| = {size}")
        return point_negate(point, self.curve, ctr) if m < 0 else point

    def precompute(self, multiples: Iterable[int], ctr: OpCounter = NULL_COUNTER):
        for m in multiples:
            if m:
                self.get(abs(m), ctr)


def _partition(l: int, last_min: int = 1) -> List[int]:
    blocks = [MAX_CHAIN_DOUBLINGS] * (l // MAX_CHAIN_DOUBLINGS)
    if l % MAX_CHAIN_DOUBLINGS:
        blocks.append(l % MAX_CHAIN_DOUBLINGS)
    if last_min > 1 and len(blocks) > 1 and blocks[-1] < last_min:
        blocks[-2:] = [blocks[-2] + blocks[-1] - last_min, last_min]
    return blocks


def _primitive_doublings(H, n, E, ctr):
    for _ in range(n):
        H = point_double(H, E, ctr)
    return H


def _double_block(n: int, H: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    if n == 1 or H.is_infinity:
        return _primitive_doublings(H, n, E, ctr)
    try:
        return getattr(composite_ops, f"double{n}")(H, E, ctr).point
    except DegenerateChain as e:
        logger.debug(f"block of {n} doublings falls back to primitives: {e}")
        return _primitive_doublings(H, n, E, ctr)


def double_knapsack(H: AffinePoint, l: int, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    """[2^l]H from the fewest composite doubling blocks: ceil(l/4) inversions."""
    for n in _partition(l):
        H = _double_block(n, H, E, ctr)
    return H


def _fused_last_block(n, D, addend, E, ctr, fast):
    # [2^n]D + addend, with the composite form when the chain stays regular
    if D.is_infinity:
        return addend
    try:
        return fast().point
    except DegenerateChain as e:
        logger.debug(f"fused block falls back to primitives: {e}")
        return point_add(_primitive_doublings(D, n, E, ctr), addend, E, ctr)


def double_and_add_knapsack(D: AffinePoint, l: int, P: AffinePoint, E: CurveParams, ctr: OpCounter) -> AffinePoint:
    """[2^l]D + P with the addition fused into the last doubling block."""
    if l == 0:
        return point_add(D, P, E, ctr)
    blocks = _partition(l)
    for n in blocks[:-1]:
        D = _double_block(n, D, E, ctr)
    n = blocks[-1]
    return _fused_last_block(
        n, D, P, E, ctr, lambda: composite_ops.doublek_plus_point(n, D, P, E, ctr)
    )


def radix_promote_and_add(
    D: AffinePoint, m: int, B: int, P: AffinePoint, memo: MultipleMemo, E: CurveParams, ctr: OpCounter
) -> AffinePoint:
    """[B]D + [m]P for a power-of-two radix B."""
    if B < 2 or B & (B - 1):
        raise ValueError(f"radix {B} is not a power of two")
    l = B.bit_length() - 1
    if m == 0:
        return double_knapsack(D, l, E, ctr)
    size = abs(m)
    if D.is_infinity:
        return memo.get(m, ctr)
    blocks = _partition(l, last_min=2 if size == 2 else 1)
    for n in blocks[:-1]:
        D = _double_block(n, D, E, ctr)
    n = blocks[-1]

    if size in memo:
        addend = memo.get(m, ctr)
        fast = lambda: composite_ops.doublek_plus_point(n, D, addend, E, ctr)  # noqa: E731
    elif size == 2 and n >= 2:
        base = point_negate(P, E, ctr) if m < 0 else P
        fast = lambda: composite_ops.doublek_plus_2q(n, D, base, E, ctr)  # noqa: E731
    elif size in MQ_RANGE:
        base = point_negate(P, E, ctr) if m < 0 else P
        fast = lambda: composite_ops.doublek_plus_mq(n, size, D, base, E, ctr)  # noqa: E731
    else:
        addend = memo.get(m, ctr)
        fast = lambda: composite_ops.doublek_plus_point(n, D, addend, E, ctr)  # noqa: E731

    if D.is_infinity:
        return memo.get(m, ctr)
    try:
        return fast().point
    except DegenerateChain as e:
        logger.debug(f"radix promotion falls back to primitives: {e}")
        return point_add(_primitive_doublings(D, n, E, ctr), memo.get(m, ctr), E, ctr)


def _leading(digit, P, E, ctr, memo=None):
    point = composite_ops.mul_small(digit, P, E, ctr).point
    if memo is not None and digit not in memo:
        memo.put(digit, point)
    return point


def r2l_plain(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter, trace: Optional[LadderTrace] = None) -> AffinePoint:
    """Right-to-left double-and-add: one doubling per bit whatever its value."""
    rec = _Recorder(ctr, trace)
    R = INFINITY
    H = P
    for i in range(k.bit_length()):
        if i:
            H = point_double(H, E, ctr)
            rec.step("double", 0, 2, ROLE_SCALE)
        if (k >> i) & 1:
            R = point_add(R, H, E, ctr)
            rec.step("add", 1, 1, ROLE_ADD)
    return rec.close(R)


def _right_to_left(k, P, E, ctr, trace, seed, knapsack):
    rec = _Recorder(ctr, trace)
    R = seed
    H = P
    if k & 1:
        R = point_add(R, H, E, ctr)
        rec.step("add", 1, 1, ROLE_ADD)
    length = k.bit_length()
    position = 0
    i = 1
    while i < length:
        j = i
        while not (k >> j) & 1:
            j += 1
        gap = j - position
        if knapsack:
            H = double_knapsack(H, gap, E, ctr)
            rec.step("double-knapsack", 0, 1 << gap, ROLE_SCALE)
        else:
            while gap:
                n = min(gap, MAX_CHAIN_DOUBLINGS)
                H = _double_block(n, H, E, ctr)
                rec.step("double" if n == 1 else f"double{n}", 0, 1 << n, ROLE_SCALE)
                gap -= n
        position = j
        # R's update is independent of the next block's chain and may overlap it
        R = point_add(R, H, E, ctr)
        rec.step("parallel-add", 1, 1, ROLE_ADD)
        i = j + 1
    return rec.close(R)


def r2l_multiply(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter, trace: Optional[LadderTrace] = None) -> AffinePoint:
    return _right_to_left(k, P, E, ctr, trace, INFINITY, knapsack=False)


def r2l_knapsack(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter, trace: Optional[LadderTrace] = None) -> AffinePoint:
    return _right_to_left(k, P, E, ctr, trace, INFINITY, knapsack=True)


def l2r_double_add(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter, trace: Optional[LadderTrace] = None) -> AffinePoint:
    rec = _Recorder(ctr, trace)
    if k == 0 or P.is_infinity:
        return rec.close(INFINITY)
    D = P
    rec.step("init", 1, 1, ROLE_INIT)
    gap = 0
    for i in range(k.bit_length() - 2, -1, -1):
        gap += 1
        if (k >> i) & 1:
            D = double_and_add_knapsack(D, gap, P, E, ctr)
            rec.step("double-and-add", 1, 1 << gap, ROLE_PROMOTE)
            gap = 0
    if gap:
        D = double_knapsack(D, gap, E, ctr)
        rec.step("double-knapsack", 0, 1 << gap, ROLE_PROMOTE)
    return rec.close(D)


def _promote_digits(D, digits: Sequence[int], widths: Sequence[int], P, memo, E, ctr, rec):
    """Folds digits (most significant first) into D, lumping zero digits into the next promotion."""
    pending = 0
    for digit, width in zip(digits, widths):
        pending += width
        if digit == 0:
            continue
        D = radix_promote_and_add(D, digit, 1 << pending, P, memo, E, ctr)
        rec.step("radix-promote", digit, 1 << pending, ROLE_PROMOTE)
        pending = 0
    if pending:
        D = double_knapsack(D, pending, E, ctr)
        rec.step("double-knapsack", 0, 1 << pending, ROLE_PROMOTE)
    return D


def l2r_naf_mix(k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter, trace: Optional[LadderTrace] = None) -> AffinePoint:
    rec = _Recorder(ctr, trace)
    if k == 0 or P.is_infinity:
        return rec.close(INFINITY)
    r = mixed_naf_knapsack(k)
    memo = MultipleMemo(P, E)
    top = len(r.digits) - 1
    D = _leading(r.digits[top], P, E, ctr, memo)
    rec.step("mul-small", r.digits[top], 1, ROLE_INIT)
    digits = [r.digits[i] for i in range(top - 1, -1, -1)]
    widths = [r.bases[i].bit_length() - 1 for i in range(top - 1, -1, -1)]
    return rec.close(_promote_digits(D, digits, widths, P, memo, E, ctr, rec))


def base16_horner(
    k: int, P: AffinePoint, E: CurveParams, ctr: OpCounter,
    trace: Optional[LadderTrace] = None, memo: Optional[MultipleMemo] = None,
) -> AffinePoint:
    """Horner evaluation over hex digits: D := 16*D + r*P per digit.

    The leading digit is always evaluated with mul_small; a caller-supplied memo
    only serves the added digit multiples.
    """
    rec = _Recorder(ctr, trace)
    if k == 0 or P.is_infinity:
        return rec.close(INFINITY)
    digits = to_base16_digits(k)
    memo = memo if memo is not None else MultipleMemo(P, E)
    D = _leading(digits[0], P, E, ctr)
    rec.step("mul-small", digits[0], 1, ROLE_INIT)
    return rec.close(_promote_digits(D, digits[1:], [4] * (len(digits) - 1), P, memo, E, ctr, rec))


def three_point_ladder(
    k: int, P: AffinePoint, Q: AffinePoint, E: CurveParams, ctr: OpCounter,
    trace: Optional[LadderTrace] = None,
) -> AffinePoint:
    """P + [k]Q with accumulators A = [j]Q, B = [j+1]Q, C = P + [j]Q over the prefix j of k."""
    rec = _Recorder(ctr, trace)
    A, B, C = INFINITY, Q, P
    for i in range(k.bit_length() - 1, -1, -1):
        bit = (k >> i) & 1
        if bit:
            C = point_add(B, C, E, ctr)
            A = point_add(A, B, E, ctr)
            B = point_double(B, E, ctr)
        else:
            C = point_add(A, C, E, ctr)
            B = point_add(A, B, E, ctr)
            A = point_double(A, E, ctr)
        rec.step("ladder-step", bit, 2, ROLE_PROMOTE)
    return rec.close(C)


def _reference(k, P, E, ctr, trace=None):
    rec = _Recorder(ctr, trace)
    result = scalar_mul_reference(k, P, E, ctr)
    rec.step("reference", k, 1, ROLE_INIT)
    return rec.close(result)


def _three_point_multiply(k, P, E, ctr, trace=None):
    return three_point_ladder(k, INFINITY, P, E, ctr, trace)


ALGORITHMS = {
    "ref": _reference,
    "r2l": r2l_multiply,
    "r2l-knap": r2l_knapsack,
    "r2l-plain": r2l_plain,
    "l2r-da": l2r_double_add,
    "l2r-naf": l2r_naf_mix,
    "base16": base16_horner,
    "three-point": _three_point_multiply,
}

ALGORITHM_DIRECTIONS = {
    "r2l": DIRECTION_R2L,
    "r2l-knap": DIRECTION_R2L,
    "r2l-plain": DIRECTION_R2L,
}


def new_trace(algorithm: str) -> LadderTrace:
    return LadderTrace(algorithm, ALGORITHM_DIRECTIONS.get(algorithm, DIRECTION_L2R))


def build_doubles_table(Q: AffinePoint, E: CurveParams, bits: int, ctr: OpCounter = NULL_COUNTER) -> tuple:
    """[2^i]Q for i < bits, the fixed-Q lookup table of the key generation phase."""
    table = [Q]
    for _ in range(1, bits):
        table.append(point_double(table[-1], E, ctr))
    return tuple(table)


def kernel_compute(
    k: int, P: AffinePoint, Q: AffinePoint, E: CurveParams, ctr: OpCounter,
    algorithm: str = "l2r-naf", table: Optional[tuple] = None,
    trace: Optional[LadderTrace] = None,
) -> AffinePoint:
    """P + [k]Q.

    Right-to-left ladders and the three-point ladder start from P; the others
    add P once the multiple is known. With a doubles table only additions remain.
    """
    if table is not None:
        if k.bit_length() > len(table):
            raise ValueError(f"table of {len(table)} doubles too short for a {k.bit_length()}-bit scalar")
        rec = _Recorder(ctr, trace)
        R = P
        for i in range(k.bit_length()):
            if (k >> i) & 1:
                R = point_add(R, table[i], E, ctr)
                rec.step("table-add", 1 << i, 1, ROLE_ADD)
        return rec.close(R)
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm == "three-point":
        return three_point_ladder(k, P, Q, E, ctr, trace)
    if algorithm in ("r2l", "r2l-knap"):
        return _right_to_left(k, Q, E, ctr, trace, P, knapsack=algorithm == "r2l-knap")
    start = ctr.snapshot()
    multiple = ALGORITHMS[algorithm](k, Q, E, ctr, trace)
    mark = ctr.inv
    result = point_add(P, multiple, E, ctr)
    if trace is not None:
        trace.add("kernel-add", 0, 1, ctr.inv - mark, ROLE_PROMOTE if trace.direction == DIRECTION_L2R else ROLE_SCALE)
        trace.total = ctr.delta(start)
    return result
