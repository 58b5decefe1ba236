import re
from dataclasses import dataclass, field, fields
from enum import IntEnum

import gmpy2

MILLER_RABIN_ROUNDS = 32
HEX_PATTERN = re.compile(r"[0-9a-fA-F]+")


class ModulusMismatchError(ValueError):
    pass


class NotInvertibleError(ZeroDivisionError):
    pass


class NotPrimeError(ValueError):
    pass


class OpKind(IntEnum):
    MUL = 0
    SQR = 1
    ADD_SUB = 2
    INV = 3
    NEG = 4


@dataclass(frozen=True)
class PrimeModulus:
    p: int
    bit_length: int = field(init=False)

    def __post_init__(self):
        if self.p <= 3 or self.p % 2 == 0:
            raise NotPrimeError(f"modulus must be an odd prime > 3, got {self.p}")
        if not gmpy2.is_prime(self.p, MILLER_RABIN_ROUNDS):
            raise NotPrimeError(f"modulus {self.p:x} is not prime")
        object.__setattr__(self, "bit_length", self.p.bit_length())

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise ValueError(f"residue {self.value} outside [0, p)")

    def __repr__(self):
        return f"FieldElement(0x{self.value:x})"


@dataclass
class OpCounter:
    """Field operation tallies for one counting scope.

    A counter belongs to a single thread of execution. Composite code counts into
    a private counter and hands the result to its caller through absorb().
    """

    mul: int = 0
    sqr: int = 0
    add_sub: int = 0
    inv: int = 0
    neg: int = 0

    def snapshot(self) -> "OpCounter":
        return OpCounter(self.mul, self.sqr, self.add_sub, self.inv, self.neg)

    def delta(self, since: "OpCounter") -> "OpCounter":
        return OpCounter(
            self.mul - since.mul,
            self.sqr - since.sqr,
            self.add_sub - since.add_sub,
            self.inv - since.inv,
            self.neg - since.neg,
        )

    def absorb(self, other: "OpCounter"):
        self.mul += other.mul
        self.sqr += other.sqr
        self.add_sub += other.add_sub
        self.inv += other.inv
        self.neg += other.neg

    def folded(self) -> "OpCounter":
        """View with squarings folded into multiplications."""
        return OpCounter(self.mul + self.sqr, 0, self.add_sub, self.inv, self.neg)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def __add__(self, other: "OpCounter") -> "OpCounter":
        total = self.snapshot()
        total.absorb(other)
        return total


COUNTER_COLUMNS = {
    OpKind.MUL: "mul",
    OpKind.SQR: "sqr",
    OpKind.ADD_SUB: "add_sub",
    OpKind.INV: "inv",
    OpKind.NEG: "neg",
}


class NullCounter(OpCounter):
    """Counter that discards every tally; oracle and setup code count into it."""

    def __setattr__(self, name, value):
        pass

    def absorb(self, other: OpCounter):
        pass


NULL_COUNTER = NullCounter()


def _check(a: FieldElement, b: FieldElement):
    if a.modulus is not b.modulus and a.modulus != b.modulus:
        raise ModulusMismatchError(
            f"cannot mix residues mod {a.modulus.p:x} and mod {b.modulus.p:x}"
        )


def fe_add(a: FieldElement, b: FieldElement, ctr: OpCounter) -> FieldElement:
    _check(a, b)
    ctr.add_sub += 1
    s = a.value + b.value
    p = a.modulus.p
    return FieldElement(s - p if s >= p else s, a.modulus)


def fe_sub(a: FieldElement, b: FieldElement, ctr: OpCounter) -> FieldElement:
    _check(a, b)
    ctr.add_sub += 1
    d = a.value - b.value
    return FieldElement(d + a.modulus.p if d < 0 else d, a.modulus)


def fe_mul(a: FieldElement, b: FieldElement, ctr: OpCounter) -> FieldElement:
    _check(a, b)
    ctr.mul += 1
    return FieldElement(a.value * b.value % a.modulus.p, a.modulus)


def fe_sqr(a: FieldElement, ctr: OpCounter) -> FieldElement:
    ctr.sqr += 1
    return FieldElement(a.value * a.value % a.modulus.p, a.modulus)


def fe_inv(a: FieldElement, ctr: OpCounter) -> FieldElement:
    # GMP's extended gcd; one tally whatever it does internally
    if a.value == 0:
        raise NotInvertibleError("inverse of zero requested")
    ctr.inv += 1
    return FieldElement(int(gmpy2.invert(a.value, a.modulus.p)), a.modulus)


def fe_neg(a: FieldElement, ctr: OpCounter) -> FieldElement:
    ctr.neg += 1
    return FieldElement((a.modulus.p - a.value) % a.modulus.p, a.modulus)


def fe_is_zero(a: FieldElement) -> bool:
    return a.value == 0


def fe_to_hex(a: FieldElement) -> str:
    return f"{a.value:x}"


def parse_hex(text: str) -> int:
    """Big-endian hex without prefix or sign; lowercase is canonical."""
    text = text.strip()
    if not HEX_PATTERN.fullmatch(text):
        raise ValueError(f"not a hex value: {text!r}")
    return int(text, 16)

