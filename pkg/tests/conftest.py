import os

import pytest

from src.curve_core import CurveParams, make_point, scalar_mul_reference
from src.curve_file import load_curve_file
from src.fp_arith import NULL_COUNTER, PrimeModulus
from src.montgomery_baseline import MontgomeryCurve
from src.rng import XorShift64Star

CURVES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "curves")
SMALL_CURVES = ((97, 2, 3), (263, -1, 1), (103, 0, 7))


def curve_path(name):
    return os.path.join(CURVES_DIR, name)


def square_roots(p):
    roots = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    return roots


def enumerate_points(E: CurveParams):
    """Every finite point, by trying each x against a table of squares."""
    p = E.p
    roots = square_roots(p)
    points = []
    for x in range(p):
        rhs = (x * x * x + E.a.value * x + E.b.value) % p
        for y in roots.get(rhs, []):
            points.append(make_point(E, x, y))
    return points


def small_curve(p, a, b, name=""):
    return CurveParams.create(PrimeModulus(p), a, b, name=name or f"E{p}")


def find_curve_of_order(order):
    for p in range(47, 90):
        try:
            modulus = PrimeModulus(p)
        except ValueError:
            continue
        roots = square_roots(p)
        for a in range(1, p):
            for b in range(1, p):
                if (4 * a ** 3 + 27 * b * b) % p == 0:
                    continue
                count = 1 + sum(len(roots.get((x ** 3 + a * x + b) % p, [])) for x in range(p))
                if count == order:
                    return CurveParams.create(modulus, a, b, order, name=f"order{order}")
    raise LookupError(f"no curve of order {order}")


def montgomery_points(C: MontgomeryCurve):
    """Finite affine points (x, y) of B y^2 = x^3 + A x^2 + x."""
    p = C.p
    inv_b = pow(C.B.value, -1, p)
    roots = square_roots(p)
    points = []
    for x in range(p):
        rhs = (x * x * x + C.A.value * x * x + x) * inv_b % p
        for y in roots.get(rhs, []):
            points.append((x, y))
    return points


def montgomery_add(C: MontgomeryCurve, P, Q):
    """Chord-tangent law straight from the Montgomery equation; None is the point at infinity."""
    p = C.p
    A, B = C.A.value, C.B.value
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        slope = (3 * x1 * x1 + 2 * A * x1 + 1) * pow(2 * B * y1, -1, p) % p
    else:
        slope = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (B * slope * slope - A - x1 - x2) % p
    y3 = (slope * (x1 - x3) - y1) % p
    return x3, y3


@pytest.fixture(scope="session")
def curve97():
    return small_curve(*SMALL_CURVES[0])


@pytest.fixture(scope="session")
def points97(curve97):
    return enumerate_points(curve97)


@pytest.fixture(scope="session", params=SMALL_CURVES, ids=lambda c: f"p{c[0]}")
def small_group(request):
    E = small_curve(*request.param)
    return E, enumerate_points(E)


@pytest.fixture(scope="session")
def curve61():
    return find_curve_of_order(61)


@pytest.fixture(scope="session")
def p521():
    return load_curve_file(curve_path("p521.curve"))


@pytest.fixture(scope="session")
def toy97():
    return load_curve_file(curve_path("toy97.curve"))


@pytest.fixture(scope="session")
def mont101():
    return load_curve_file(curve_path("mont101.curve"))


@pytest.fixture
def rng():
    return XorShift64Star(2024)


@pytest.fixture
def random_point(p521):
    """Maker of random multiples of the P-521 generator."""
    def make(generator):
        k = generator.randrange(1, p521.order)
        return scalar_mul_reference(k, p521.base_point(), p521.params, NULL_COUNTER)

    return make
