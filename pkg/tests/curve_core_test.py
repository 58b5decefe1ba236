import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.curve_core import (
    INFINITY,
    AffinePoint,
    CurveParams,
    HasseBoundError,
    MissingOrderError,
    OffCurveError,
    SingularCurveError,
    complement_scalar,
    hamming_weight,
    is_on_curve,
    make_point,
    point_add,
    point_double,
    point_negate,
    scalar_mul_complement,
    scalar_mul_reference,
    validate_hasse,
)
from src.fp_arith import NULL_COUNTER, OpCounter, PrimeModulus
from src.rng import XorShift64Star
from tests.conftest import enumerate_points, small_curve


def test_infinity_is_on_curve(curve97):
    assert is_on_curve(INFINITY, curve97)


def test_enumerated_points_are_on_curve(small_group):
    E, points = small_group
    assert points
    assert all(is_on_curve(P, E) for P in points)


def test_off_curve_point(curve97):
    m = curve97.modulus
    assert not is_on_curve(AffinePoint(m.element(0), m.element(1)), curve97)
    with pytest.raises(OffCurveError):
        make_point(curve97, 0, 1)


def test_singular_curve():
    with pytest.raises(SingularCurveError):
        CurveParams.create(PrimeModulus(97), 0, 0)


def test_identity_and_inverse(small_group):
    E, points = small_group
    for P in points:
        assert point_add(P, INFINITY, E, NULL_COUNTER) == P
        assert point_add(INFINITY, P, E, NULL_COUNTER) == P
        assert point_add(P, point_negate(P, E, NULL_COUNTER), E, NULL_COUNTER) == INFINITY
        assert point_negate(point_negate(P, E, NULL_COUNTER), E, NULL_COUNTER) == P
    assert point_negate(INFINITY, E, NULL_COUNTER) == INFINITY


def test_commutativity_and_closure(curve97, points97):
    for P in points97[::3]:
        for Q in points97[::5]:
            R = point_add(P, Q, curve97, NULL_COUNTER)
            assert R == point_add(Q, P, curve97, NULL_COUNTER)
            assert is_on_curve(R, curve97)


def test_associativity(small_group):
    E, points = small_group
    rng = XorShift64Star(7)
    for _ in range(200):
        P, Q, R = (points[rng.randbelow(len(points))] for _ in range(3))
        left = point_add(point_add(P, Q, E, NULL_COUNTER), R, E, NULL_COUNTER)
        right = point_add(P, point_add(Q, R, E, NULL_COUNTER), E, NULL_COUNTER)
        assert left == right


def test_add_of_equal_points_doubles(curve97, points97):
    for P in points97[:10]:
        assert point_add(P, P, curve97, NULL_COUNTER) == point_double(P, curve97, NULL_COUNTER)


def test_double_of_two_torsion():
    E = small_curve(103, 1, 0)
    P = make_point(E, 0, 0)
    assert point_double(P, E, NULL_COUNTER) == INFINITY
    assert point_double(INFINITY, E, NULL_COUNTER) == INFINITY


def test_primitive_costs(curve97, points97):
    P, Q = points97[1], points97[7]
    ctr = OpCounter()
    point_add(P, Q, curve97, ctr)
    assert ctr.inv == 1
    ctr = OpCounter()
    point_double(P, curve97, ctr)
    assert ctr.inv == 1


def test_reference_multiply_small_scalars(curve97, points97):
    P = points97[4]
    assert scalar_mul_reference(0, P, curve97, NULL_COUNTER) == INFINITY
    assert scalar_mul_reference(1, P, curve97, NULL_COUNTER) == P
    total = INFINITY
    for _ in range(49):
        total = point_add(total, P, curve97, NULL_COUNTER)
    assert scalar_mul_reference(49, P, curve97, NULL_COUNTER) == total
    with pytest.raises(ValueError):
        scalar_mul_reference(-1, P, curve97, NULL_COUNTER)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 500), st.integers(0, 500), st.integers(0, 200))
def test_reference_multiply_is_linear(m, n, index):
    E = small_curve(263, -1, 1)
    points = _points263()
    P = points[index % len(points)]
    lhs = scalar_mul_reference(m + n, P, E, NULL_COUNTER)
    rhs = point_add(scalar_mul_reference(m, P, E, NULL_COUNTER), scalar_mul_reference(n, P, E, NULL_COUNTER), E, NULL_COUNTER)
    assert lhs == rhs


_POINTS263 = []


def _points263():
    if not _POINTS263:
        _POINTS263.extend(enumerate_points(small_curve(263, -1, 1)))
    return _POINTS263


def test_hamming_weight():
    assert hamming_weight(0) == 0
    assert hamming_weight(49) == 3
    assert hamming_weight(12) == 2


def test_complement_of_49(curve61):
    assert complement_scalar(49, curve61) == (12, True)
    assert complement_scalar(0, curve61) == (0, False)
    assert complement_scalar(12, curve61) == (12, False)


def test_complement_preserves_the_point(curve61):
    points = enumerate_points(curve61)
    assert len(points) + 1 == 61
    P = points[0]
    for k in range(62):
        assert scalar_mul_complement(k, P, curve61, NULL_COUNTER) == scalar_mul_reference(k, P, curve61, NULL_COUNTER)


def test_complement_requires_order(curve97, curve61):
    with pytest.raises(MissingOrderError):
        complement_scalar(5, curve97)
    with pytest.raises(ValueError):
        complement_scalar(62, curve61)


def test_hasse_bound(p521):
    assert validate_hasse(p521.params)
    m = PrimeModulus(97)
    assert CurveParams.create(m, 2, 3, order=98).order == 98
    assert not validate_hasse(CurveParams(m, m.element(2), m.element(3), order=3 * 97))
    with pytest.raises(HasseBoundError):
        CurveParams.create(m, 2, 3, order=3 * 97)
    with pytest.raises(MissingOrderError):
        validate_hasse(CurveParams(m, m.element(2), m.element(3)))


def test_p521_generator(p521):
    G = p521.base_point()
    assert is_on_curve(G, p521.params)
    assert scalar_mul_reference(p521.order, G, p521.params, NULL_COUNTER) == INFINITY
