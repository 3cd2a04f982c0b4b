import json
from collections import Counter
from fractions import Fraction as F
from itertools import islice

import pytest

from hecm.curvegen import (MULTIPLES, T_PARAM, BadReduction, ConditionViolation, CurveParams,
                           DegenerateAddition, base_point, build_curve_system, certificate_json,
                           check_conditions, clear_denominators, curve_stream, derive_kummer_constants,
                           derive_rosenhain, double_rational, initial_point, jacobi_add,
                           jacobi_contains, jacobi_double, nth_curve, t_parameters, torsion_class)
from hecm.kummer import on_surface
from hecm.modring import Ring


def proj_eq_q(a, b):
    return all(a[i] * b[j] == a[j] * b[i] for i in range(4) for j in range(4))


def test_jacobi_contains():
    s = F(3)
    assert jacobi_contains(s, 1, 1 - 1 / s ** 2)
    assert jacobi_contains(F(1, 2), 2, 9)
    assert not jacobi_contains(F(1, 2), 2, 8)


def test_jacobi_double_examples():
    assert jacobi_double(F(3), (1, F(8, 9))) == (2, F(11, 9))
    assert jacobi_double(F(1, 2), (1, -3)) == (2, 9)
    assert jacobi_double(F(3), (0, 1)) == (0, 1)


def test_jacobi_add_group_law():
    s = F(3)
    P = (F(1), F(8, 9))
    assert jacobi_add(s, P, (0, 1)) == P
    assert jacobi_add(s, P, (-P[0], P[1])) == (0, 1)
    assert jacobi_add(s, P, P) == jacobi_double(s, P)
    Q = jacobi_add(s, jacobi_double(s, P), P)
    assert jacobi_contains(s, *Q)
    assert jacobi_add(s, Q, P) == jacobi_double(s, jacobi_double(s, P))


def test_jacobi_degenerate_addition():
    # 1 - d u1^2 u2^2 = 0 with d = 1/s^2 when u1 u2 = s
    s = F(2)
    with pytest.raises(DegenerateAddition):
        jacobi_add(s, (F(1), F(0)), (F(2), F(0)))


def test_rosenhain_worked_example():
    ros = derive_rosenhain(CurveParams(F(1, 2), 2, 9))
    assert (ros.nu, ros.mu, ros.lam) == (F(5, 4), F(9, 4), F(9, 20))
    assert ros.q in (F(3, 2), F(-3, 2))
    assert ros.q ** 2 == ros.mu * (ros.mu - ros.nu) == F(9, 4)
    # f = x(x - 1)(x - 9/20)(x - 9/4)(x - 5/4)
    for r in (0, 1, F(9, 20), F(9, 4), F(5, 4)):
        assert sum(c * r ** i for i, c in enumerate(ros.f_coeffs)) == 0
    assert ros.f_coeffs[-1] == 1 and len(ros.f_coeffs) == 6


@pytest.mark.parametrize("params, clause", [
    ((F(1, 2), F(1, 2), 1), "s != +-u"),
    ((F(1), 2, 9), "s not in {0, 1, -1}"),
    ((F(1, 2), 1, 9), "u not in {0, 1, -1}"),
    ((F(1, 2), 2, 0), "v != 0"),
    ((F(4), 2, 1), "s != +-u^2"),
    ((F(1, 2), 2, 8), "(u, v) on the Jacobi quartic"),
])
def test_condition_violations(params, clause):
    with pytest.raises(ConditionViolation) as exc:
        check_conditions(CurveParams(*params))
    assert exc.value.clause == clause


def test_kummer_constants_worked_example(worked_curve):
    K = worked_curve.kummer
    assert K.theta == (1, 2, F(9, 10), 1)
    assert K.inv_theta == (18, 9, 20, 18)
    assert proj_eq_q([F(1, c) for c in K.inv_theta], K.theta)
    assert proj_eq_q([F(1, c) for c in K.inv_hadamard], (K.A, K.B, K.C, K.D))
    assert K.eps_times_phi == F(11, 10)
    assert K.E0 == F(11, 4)


def test_inv_theta_matches_closed_form(stream_curves):
    for cs in stream_curves:
        s, u, v = cs.params.s, cs.params.u, cs.params.v
        want = (s ** 4 * v ** 2, s ** 5 * v ** 2, s * (u ** 2 - s ** 2) * (u ** 2 - 1), s ** 4 * v ** 2)
        assert proj_eq_q(cs.kummer.inv_theta, want)


def test_theta_relations(stream_curves):
    for cs in stream_curves:
        K, ros = cs.kummer, cs.rosenhain
        al, be, ga, de = K.theta
        assert al == de == 1
        assert ros.lam == al * ga / (be * de)
        # mu = gamma eps/(delta phi), nu = alpha eps/(beta phi)
        assert ros.mu == ga * K.eps_over_phi / de
        assert ros.nu == al * K.eps_over_phi / be
        assert K.E0 == K.eps_times_phi * K.eps_over_phi


def test_initial_point_worked_example(worked_curve):
    assert worked_curve.point == (-272, 272, 63, -140)
    assert initial_point(worked_curve.params, Ring(83003)) == tuple(c % 83003 for c in (-272, 272, 63, -140))


def test_initial_points_on_surface(stream_curves):
    p = 1000003
    for cs in stream_curves:
        P = tuple(c % p for c in cs.point)
        assert P[1] == -P[0] % p
        assert on_surface(P, cs.kummer, p)


def test_double_rational_stays_on_surface(worked_curve):
    p = 1000003
    P = double_rational(tuple(F(c) for c in worked_curve.point), worked_curve.kummer)
    assert on_surface(tuple(c % p for c in clear_denominators(P)), worked_curve.kummer, p)


def test_stream_determinism_and_first_multiple():
    a = [cs.params for cs in islice(curve_stream(7), 10)]
    b = [cs.params for cs in islice(curve_stream(7), 10)]
    assert a == b
    first = a[0]
    assert (first.u, first.v) == (2, 1 + 2 / first.s ** 2)


def test_stream_skips_are_counted():
    skips = Counter()
    list(islice(curve_stream(0, strategy=T_PARAM, skips=skips), 100))
    assert all(isinstance(k, str) for k in skips)
    skips = Counter()
    gen = curve_stream(1, max_height_bits=8, skips=skips)
    list(islice(gen, 3))
    assert skips["height bound"] > 0


def test_t_parametrization():
    p = t_parameters(F(1))
    assert p.s == 2 and p.u == 2 and p.v == F(3, 2)
    assert jacobi_contains(p.s, p.u, p.v)
    for cs in islice(curve_stream(3, strategy=T_PARAM), 10):
        assert cs.params.u == 2


def test_nth_curve():
    cs = nth_curve(5, 3)
    assert cs.index == 3
    assert cs.params == list(islice(curve_stream(5), 4))[3].params


@pytest.mark.parametrize("pattern, minus_one_square, want", [
    ((True, True, True), True, (True, False)),
    ((True, False, True), True, (True, False)),
    ((True, False, True), False, (False, False)),
    ((True, False, False), True, (False, True)),
])
def test_torsion_table_rows(pattern, minus_one_square, want):
    # search small (s, u, p) realizing the wanted residue pattern
    from sympy import primerange

    from hecm.curvegen import legendre

    for p in primerange(5, 400):
        if (p % 4 == 1) != minus_one_square:
            continue
        for s in range(2, 20):
            for u in range(2, 20):
                vals = (s * s - u * u, s * s - 1, u * u - 1)
                if any(x % p == 0 for x in vals):
                    continue
                if tuple(legendre(x, p) == 1 for x in vals) == pattern:
                    tc = torsion_class(s, u, p)
                    assert (tc.curve_has_4torsion, tc.twist_has_4torsion) == want
                    return
    pytest.fail("pattern not realized")


def test_torsion_class_bad_reduction():
    with pytest.raises(BadReduction):
        torsion_class(3, 3 + 7, 7)      # s^2 - u^2 = 9 - 100 = -91 = 0 mod 7


def test_certificate_json(worked_curve):
    data = json.loads(certificate_json(worked_curve))
    assert data["schema"] == 1
    assert (data["s"], data["u"], data["v"]) == ("1/2", "2", "9")
    assert data["initial_point"] == [-272, 272, 63, -140]
    roots = sorted(tuple(e["roots"]) for e in data["elliptic_curves"])
    assert roots == [("1", "1/25", "1/121"), ("1", "25", "121")]


def test_worked_constants_fit_a_word():
    ros = derive_rosenhain(CurveParams(F(1, 2), 2, 9))
    K = derive_kummer_constants(ros, CurveParams(F(1, 2), 2, 9))
    assert K.single_word


def test_single_word_flag(stream_curves):
    for cs in stream_curves:
        fits = all(abs(c) < 2 ** 63 for c in cs.kummer.inv_theta + cs.kummer.inv_hadamard + cs.inv_point)
        assert cs.single_word == fits


def test_build_curve_system_strategies():
    assert next(curve_stream(0, strategy=MULTIPLES)).origin.startswith("s=")
    with pytest.raises(ValueError):
        next(curve_stream(0, strategy="nope"))
    assert build_curve_system(CurveParams(F(1, 2), 2, 9)).origin == "explicit"
