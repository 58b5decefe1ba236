from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

from src import composite_ops
from src.curve_core import INFINITY, point_add, scalar_mul_reference
from src.curve_file import CurveFile, CurveFileError, parse_curve_text, serialize_curve
from src.fp_arith import NULL_COUNTER, OpCounter, fe_is_zero
from src.formatting import format_hex, format_point
from src.ladders import ALGORITHMS, kernel_compute
from src.montgomery_baseline import mont_ladder, montgomery_x
from src.rng import XorShift64Star

Failure = namedtuple("Failure", "curve algo k point")

# composite name -> (multiple of P, evaluation)
COMPOSITE_CHECKS = {
    "double2": (4, lambda P, E, c: composite_ops.double2(P, E, c)),
    "double3": (8, lambda P, E, c: composite_ops.double3(P, E, c)),
    "double4": (16, lambda P, E, c: composite_ops.double4(P, E, c)),
    "triple": (3, lambda P, E, c: composite_ops.triple(P, E, c)),
    "six_q_alt": (6, lambda P, E, c: composite_ops.six_q_alt(P, E, c)),
    "ten_q_alt": (10, lambda P, E, c: composite_ops.ten_q_alt(P, E, c)),
}
for _n in range(1, 5):
    COMPOSITE_CHECKS[f"doublek_plus_point({_n})"] = (
        (1 << _n) + 1,
        lambda P, E, c, n=_n: composite_ops.doublek_plus_point(n, P, P, E, c),
    )
for _n in range(2, 5):
    COMPOSITE_CHECKS[f"doublek_plus_2q({_n})"] = (
        (1 << _n) + 2,
        lambda P, E, c, n=_n: composite_ops.doublek_plus_2q(n, P, P, E, c),
    )
for _n in range(1, 5):
    for _m in composite_ops.MQ_RANGE:
        COMPOSITE_CHECKS[f"doublek_plus_mq({_n},{_m})"] = (
            (1 << _n) + _m,
            lambda P, E, c, n=_n, m=_m: composite_ops.doublek_plus_mq(n, m, P, P, E, c),
        )


def format_failure(failure: Failure) -> str:
    return f"FAIL curve={failure.curve} algo={failure.algo} k={format_hex(failure.k)} point={format_point(failure.point)}"


@dataclass
class VerifyResult:
    checks: int = 0
    degenerate: int = 0
    failures: List[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "VerifyResult"):
        self.checks += other.checks
        self.degenerate += other.degenerate
        self.failures.extend(other.failures)


class Verifier:
    """Oracle sweeps: every composite, every mul_small entry and every ladder against scalar_mul_reference."""

    def __init__(self, curve: CurveFile, logger, exhaustive_bits=10, random_trials=100, seed=1, workers=4):
        if exhaustive_bits < 0 or random_trials < 0:
            raise ValueError("sweep sizes must not be negative")
        self.curve = curve
        self.logger = logger
        self.exhaustive_bits = exhaustive_bits
        self.random_trials = random_trials
        self.workers = max(1, workers)
        self.E = curve.params
        self.G = curve.base_point()
        rng = XorShift64Star(seed)
        scalar_stream, point_stream = rng.fork(0), rng.fork(1)
        bound = curve.order or curve.p
        bits = max(bound.bit_length(), 1)
        self.random_scalars = [scalar_stream.randbits(bits) for _ in range(random_trials)]
        self.random_points = [
            scalar_mul_reference(point_stream.randrange(1, bound), self.G, self.E, NULL_COUNTER)
            for _ in range(random_trials)
        ]

    @property
    def enabled(self) -> bool:
        return self.exhaustive_bits > 0 or self.random_trials > 0

    def scalars(self):
        if self.exhaustive_bits > 0:
            yield from range(1 << self.exhaustive_bits)
        yield from self.random_scalars

    def _fail(self, result, algo, k, point):
        failure = Failure(self.curve.name, algo, k, point)
        self.logger.warning(format_failure(failure))
        result.failures.append(failure)

    def check_curve_file(self) -> VerifyResult:
        result = VerifyResult(checks=1)
        try:
            same = parse_curve_text(serialize_curve(self.curve), source=self.curve.name) == self.curve
        except CurveFileError:
            same = False
        if not same:
            self._fail(result, "curve-file", 0, None)
        return result

    def check_composites(self) -> VerifyResult:
        result = VerifyResult()
        points = [self.G, *self.random_points] if self.enabled else []
        for name, (multiple, evaluate) in COMPOSITE_CHECKS.items():
            for P in points:
                if P.is_infinity:
                    continue
                expected = scalar_mul_reference(multiple, P, self.E, NULL_COUNTER)
                ctr = OpCounter()
                result.checks += 1
                try:
                    outcome = evaluate(P, self.E, ctr)
                except composite_ops.DegenerateChain:
                    result.degenerate += 1
                    continue
                if outcome.point != expected or ctr.inv != 1:
                    self._fail(result, name, multiple, P)
        for c in composite_ops.MUL_SMALL_TABLE:
            for P in points:
                result.checks += 1
                outcome = composite_ops.mul_small(c, P, self.E, NULL_COUNTER)
                if outcome.point != scalar_mul_reference(c, P, self.E, NULL_COUNTER):
                    self._fail(result, f"mul_small({c})", c, P)
        return result

    def _expected_multiples(self):
        # exhaustive multiples by repeated addition, random ones directly
        expected = {}
        if self.exhaustive_bits > 0:
            current = INFINITY
            for k in range(1 << self.exhaustive_bits):
                expected[k] = current
                current = point_add(current, self.G, self.E, NULL_COUNTER)
        for k in self.random_scalars:
            expected[k] = scalar_mul_reference(k, self.G, self.E, NULL_COUNTER)
        return expected

    def check_ladder(self, name, expected) -> VerifyResult:
        result = VerifyResult()
        ladder = ALGORITHMS[name]
        for k in self.scalars():
            result.checks += 1
            if ladder(k, self.G, self.E, NULL_COUNTER) != expected[k]:
                self._fail(result, name, k, self.G)
        for k, Q in zip(self.random_scalars, self.random_points):
            result.checks += 1
            target = point_add(self.G, scalar_mul_reference(k, Q, self.E, NULL_COUNTER), self.E, NULL_COUNTER)
            if kernel_compute(k, self.G, Q, self.E, NULL_COUNTER, algorithm=name) != target:
                self._fail(result, f"kernel-{name}", k, Q)
        return result

    def check_montgomery(self, expected) -> VerifyResult:
        result = VerifyResult()
        C = self.curve.montgomery
        x_G = C.modulus.element(self.curve.gx)
        for k in self.scalars():
            result.checks += 1
            ctr = OpCounter()
            x = mont_ladder(k, x_G, C, ctr)
            want = montgomery_x(C, expected[k])
            # one inversion per finite result; none at infinity or from the order-2 point
            spent = 0 if x is None or fe_is_zero(x_G) else 1
            if (x.value if x is not None else None) != want or ctr.inv != spent:
                self._fail(result, "montgomery-xz", k, self.G)
        return result

    def run(self) -> VerifyResult:
        total = VerifyResult()
        if not self.enabled:
            self.logger.info("Nothing to verify")
            return total
        total.merge(self.check_curve_file())
        expected = self._expected_multiples()
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(self.check_composites)]
            futures.extend(pool.submit(self.check_ladder, name, expected) for name in ALGORITHMS)
            if self.curve.is_montgomery:
                futures.append(pool.submit(self.check_montgomery, expected))
            for future in futures:
                total.merge(future.result())
        self.logger.info(
            f"{total.checks} checks, {total.degenerate} degenerate chains, {len(total.failures)} failures"
        )
        return total
