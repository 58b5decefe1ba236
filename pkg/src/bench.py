import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

from src import composite_ops
from src.curve_core import point_negate, scalar_mul_reference
from src.curve_file import CurveFile
from src.formatting import format_ns
from src.fp_arith import NULL_COUNTER, OpCounter
from src.ladders import ALGORITHMS
from src.montgomery_baseline import mont_ladder
from src.report import CostReport
from src.rng import XorShift64Star

Routine = namedtuple("Routine", "name run")

MONTGOMERY_ROUTINE = "montgomery-xz"

# (label, multiple, composite evaluation); every composite row is followed by
# the reference double-and-add for the same multiple
COMPOSITE_ROWS = (
    ("3P", 3, lambda P, E, c: composite_ops.triple(P, E, c)),
    ("4P", 4, lambda P, E, c: composite_ops.double2(P, E, c)),
    ("5P", 5, lambda P, E, c: composite_ops.doublek_plus_point(2, P, P, E, c)),
    ("6P", 6, lambda P, E, c: composite_ops.doublek_plus_2q(2, P, P, E, c)),
    ("6P-alt", 6, lambda P, E, c: composite_ops.six_q_alt(P, E, c)),
    ("8P", 8, lambda P, E, c: composite_ops.double3(P, E, c)),
    ("10P", 10, lambda P, E, c: composite_ops.doublek_plus_2q(3, P, P, E, c)),
    ("10P-alt", 10, lambda P, E, c: composite_ops.ten_q_alt(P, E, c)),
    ("11P", 11, lambda P, E, c: composite_ops.doublek_plus_mq(3, 3, P, P, E, c)),
    ("14P", 14, lambda P, E, c: composite_ops.doublek_plus_2q(4, P, point_negate(P, E, NULL_COUNTER), E, c)),
    ("16P", 16, lambda P, E, c: composite_ops.double4(P, E, c)),
)


def bench_scalar(curve: CurveFile, seed: int) -> int:
    """Fixed nonzero scalar for the ladder rows, a function of the seed only."""
    rng = XorShift64Star(seed)
    bound = curve.order or curve.p
    return rng.randrange(1, bound)


class BenchRunner:
    def __init__(self, curve: CurveFile, logger, trials=100, seed=1, workers=4, fold_squarings=False):
        if trials < 1:
            raise ValueError(f"trials must be positive, got {trials}")
        self.curve = curve
        self.logger = logger
        self.trials = trials
        self.seed = seed
        self.workers = max(1, workers)
        self.fold_squarings = fold_squarings

    def routines(self):
        E = self.curve.params
        P = self.curve.base_point()
        for label, multiple, composite in COMPOSITE_ROWS:
            yield Routine(f"composite-{label}", lambda c, f=composite: f(P, E, c))
            yield Routine(f"primitive-{label}", lambda c, m=multiple: scalar_mul_reference(m, P, E, c))
        k = bench_scalar(self.curve, self.seed)
        self.logger.info(f"Ladder rows use k = {k:x}")
        for name, ladder in ALGORITHMS.items():
            yield Routine(f"ladder-{name}", lambda c, f=ladder: f(k, P, E, c))
        if self.curve.is_montgomery:
            C = self.curve.montgomery
            x_P = C.modulus.element(self.curve.gx)
            yield Routine(f"ladder-{MONTGOMERY_ROUTINE}", lambda c: mont_ladder(k, x_P, C, c))

    def _trial(self, routine: Routine):
        ctr = OpCounter()
        start = time.perf_counter_ns()
        try:
            routine.run(ctr)
            degenerate = False
        except composite_ops.DegenerateChain:
            degenerate = True
        elapsed = time.perf_counter_ns() - start
        return (ctr.folded() if self.fold_squarings else ctr), elapsed, degenerate

    def run(self) -> CostReport:
        report = CostReport(self.curve.name, self.trials)
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            for routine in self.routines():
                results = list(pool.map(self._trial, [routine] * self.trials))
                if results[0][2]:
                    self.logger.warning(f"{routine.name} hits a degenerate chain on this base point")
                row = report.add(routine.name, [r[0] for r in results], [r[1] for r in results])
                self.logger.debug(f"{routine.name}: inv={row.inv} wall={format_ns(row.wall_ns_mean)}")
        return report
