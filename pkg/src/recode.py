import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from src.composite_ops import MAX_CHAIN_DOUBLINGS, MQ_RANGE, MUL_SMALL_COSTS

logger = logging.getLogger(__name__)

BASE_16 = 16
BASE_32 = 32
WINDOW_16 = 4
WINDOW_32 = 5


@dataclass(frozen=True)
class MixedBaseRepr:
    """Signed digits m_i with radices B_i, least-significant position first.

    k = sum(m_i * prod(B_j for j < i)); the radix of the last position never
    enters the sum.
    """

    digits: Tuple[int, ...]
    bases: Tuple[int, ...]
    source_scalar: int

    def __post_init__(self):
        if len(self.digits) != len(self.bases):
            raise ValueError("digits and bases differ in length")
        if repr_eval(self) != self.source_scalar:
            raise ValueError(f"representation does not reconstruct 0x{self.source_scalar:x}")

    def display_digits(self) -> List[int]:
        return list(reversed(self.digits))

    def display_bases(self) -> List[int]:
        return list(reversed(self.bases))

    def __len__(self):
        return len(self.digits)


@dataclass(frozen=True)
class CostModel:
    """Inversion prices used to compare representations.

    digit_costs: inversions to evaluate [m]P from P, indexed by |m|.
    block_limit: doublings one composite chain can absorb.
    fused_limit: largest |m| whose addition fuses into the last doubling block
    without a stored multiple.
    """

    digit_costs: Dict[int, int] = field(default_factory=dict)
    block_limit: int = MAX_CHAIN_DOUBLINGS
    fused_limit: int = MQ_RANGE.stop - 1

    @classmethod
    def default(cls) -> "CostModel":
        return cls({0: 0, **MUL_SMALL_COSTS})

    def digit_cost(self, m: int) -> int:
        return self.digit_costs[abs(m)]

    def shift_cost(self, bits: int) -> int:
        return -(-bits // self.block_limit)

    def fuses(self, m: int, bits: int) -> bool:
        m = abs(m)
        if m == 1:
            return True
        if m == 2:
            return bits >= 2
        return m <= self.fused_limit


def _bits(base: int) -> int:
    if base < 2 or base & (base - 1):
        raise ValueError(f"radix {base} is not a power of two")
    return base.bit_length() - 1


def repr_eval(r: MixedBaseRepr) -> int:
    total = 0
    for digit, base in zip(reversed(r.digits), reversed(r.bases)):
        total = total * base + digit
    return total


def _build(digits, bases, k) -> MixedBaseRepr:
    return MixedBaseRepr(tuple(digits), tuple(bases), k)


def to_binary(k: int) -> MixedBaseRepr:
    digits = [(k >> i) & 1 for i in range(k.bit_length())]
    return _build(digits, [2] * len(digits), k)


def to_naf(k: int) -> MixedBaseRepr:
    if k < 0:
        raise ValueError(f"negative scalar: -0x{-k:x}")
    digits = []
    rest = k
    while rest:
        if rest & 1:
            digit = 2 - (rest & 3)
            rest -= digit
        else:
            digit = 0
        digits.append(digit)
        rest >>= 1
    return _build(digits, [2] * len(digits), k)


def to_base16_digits(k: int) -> List[int]:
    if k < 0:
        raise ValueError(f"negative scalar: -0x{-k:x}")
    if k == 0:
        return [0]
    return [int(ch, 16) for ch in f"{k:x}"]


def base16_repr(k: int) -> MixedBaseRepr:
    digits = list(reversed(to_base16_digits(k))) if k else []
    return _build(digits, [BASE_16] * len(digits), k)


def _naf_digit(value: int, base: int) -> Tuple[int, int]:
    """Reduce a window value to a signed digit and a carry into the next window."""
    if value > base // 2:
        return value - base, 1
    return value, 0


def mixed_naf_knapsack(k: int, model: CostModel = None) -> MixedBaseRepr:
    """Mixed radix-16/32 signed representation.

    Windows are taken right to left. At each position the 5-bit window plus
    carry is reduced to a signed digit; base 32 is used when that digit is a
    single-inversion entry of the small-multiple table and its promotion costs
    no more per bit than the 4-bit alternative under model. The last window
    becomes the leading digit when its value is optimizable, so it needs no
    radix promotion above it.
    """
    if k < 0:
        raise ValueError(f"negative scalar: -0x{-k:x}")
    model = model or CostModel.default()
    length = k.bit_length()
    digits, bases = [], []
    carry = 0
    i = 0
    while i < length:
        if i + WINDOW_32 >= length:
            # last window: the leading digit stays positive, nothing above absorbs a carry
            value = (k >> i) + carry
            if _optimizable(value, model):
                digits.append(value)
                bases.append(BASE_32 if length - i == WINDOW_32 else BASE_16)
                carry = 0
                break
        wide, wide_carry = _naf_digit(((k >> i) & (BASE_32 - 1)) + carry, BASE_32)
        narrow, narrow_carry = _naf_digit(((k >> i) & (BASE_16 - 1)) + carry, BASE_16)
        if _optimizable(wide, model) and _prefers_wide(wide, narrow, model):
            digits.append(wide)
            bases.append(BASE_32)
            carry = wide_carry
            i += WINDOW_32
        else:
            digits.append(narrow)
            bases.append(BASE_16)
            carry = narrow_carry
            i += WINDOW_16
    if carry > 0:
        digits.append(carry)
        bases.append(bases[-1])
    result = _build(digits, bases, k)
    logger.debug(f"mixed recoding of 0x{k:x}: {result.display_digits()} / {result.display_bases()}")
    return result


def _optimizable(value: int, model: CostModel) -> bool:
    return abs(value) in model.digit_costs and model.digit_cost(value) <= 1


def _window_cost(digit: int, bits: int, model: CostModel) -> int:
    if digit == 0:
        return 0
    cost = model.shift_cost(bits)
    if not model.fuses(digit, bits):
        cost += model.digit_cost(digit)
    return cost


def _prefers_wide(wide: int, narrow: int, model: CostModel) -> bool:
    # inversions per scanned bit, cross-multiplied
    return _window_cost(wide, WINDOW_32, model) * WINDOW_16 <= _window_cost(narrow, WINDOW_16, model) * WINDOW_32


def hamming_density(r: MixedBaseRepr) -> float:
    if not r.digits:
        return 0.0
    return sum(1 for d in r.digits if d) / len(r.digits)


def estimate_inversions(r: MixedBaseRepr, model: CostModel = None) -> int:
    """Inversions a left-to-right evaluation of r spends under model.

    The leading digit is looked up in the small-multiple table; afterwards
    doublings accumulate until the next nonzero digit, where they are paid in
    blocks of at most block_limit with the addition fused into the last block.
    Digits too large to fuse are evaluated once and reused.
    """
    model = model or CostModel.default()
    nonzero = [i for i, d in enumerate(r.digits) if d]
    if not nonzero:
        return 0
    top = nonzero[-1]
    cost = model.digit_cost(r.digits[top])
    stored = {abs(r.digits[top])}
    pending = 0
    for i in range(top - 1, -1, -1):
        pending += _bits(r.bases[i])
        digit = r.digits[i]
        if digit == 0:
            continue
        cost += model.shift_cost(pending)
        if not model.fuses(digit, pending) and abs(digit) not in stored:
            cost += model.digit_cost(digit)
            stored.add(abs(digit))
        pending = 0
    return cost + model.shift_cost(pending)
