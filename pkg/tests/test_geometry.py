import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effbounds import geometry as ge
from effbounds import verify as vf
from effbounds.geometry import (
    HomogeneousPolynomial,
    ParameterizedCurve,
    PlaneChowPoint,
    Poly,
    ProjectivePoint,
)

import oracles


def P(*coords):
    return ProjectivePoint(coords)


# ---------------------------------------------------------------------------
# points and embeddings

def test_normalization_idempotent_and_scale_invariant():
    p = P(0, 4, 6)
    n1 = p.normalized()
    assert n1.coords == (0, 1, Fraction(3, 2))
    assert n1.normalized().coords == n1.coords
    assert p == p.scaled(Fraction(-7, 3))


def test_veronese_examples():
    assert ge.veronese_embed(P(1, 1, 1), 2) == P(1, 1, 1, 1, 1, 1)
    assert ge.veronese_embed(P(1, 0), 3) == P(1, 0, 0, 0)
    assert ge.veronese_embed(P(1, 2), 2) == P(1, 2, 4)


@given(scale=st.fractions(min_value=Fraction(-20), max_value=Fraction(20)),
       l=st.integers(min_value=1, max_value=3))
@settings(max_examples=40, deadline=None)
def test_veronese_projective_invariance(scale, l):
    if scale == 0:
        return
    p = P(1, 2, 3)
    assert ge.veronese_embed(p, l) == ge.veronese_embed(p.scaled(scale), l)


def test_perturb_veronese_identity():
    forms = ge.perturb_veronese(2, 2, seed=1, eps=0)
    expos = ge.monomial_exponents(3, 2)
    for f, mu in zip(forms, expos):
        assert f.terms == {mu: Fraction(1)}


def test_perturb_veronese_seeded():
    forms = ge.perturb_veronese(2, 2, seed=7, eps=Fraction(1, 1000),
                                sample_count=20)
    assert len(forms) == 6
    again = ge.perturb_veronese(2, 2, seed=7, eps=Fraction(1, 1000),
                                sample_count=20)
    assert all(a == b for a, b in zip(forms, again))  # deterministic


def test_perturbation_rejected_on_equal_forms():
    mono = ge.monomial_exponents(3, 2)[0]
    f = HomogeneousPolynomial(3, {mono: 1})
    with pytest.raises(ge.PerturbationRejected):
        ge.validate_perturbation([f, f, f, f, f, f], 2)


def test_segre_examples():
    assert ge.segre_embed([P(1, 0), P(1, 0)]) == P(1, 0, 0, 0)
    assert ge.segre_embed([P(1, 1), P(1, 1)]) == P(1, 1, 1, 1)
    assert ge.segre_embed([P(1, 2), P(3, 1)]) == P(3, 1, 6, 2)


# ---------------------------------------------------------------------------
# projections

def test_build_projections_structure():
    pis = ge.build_projections(3, 3, [1, 2, 3])
    for pi in pis:
        assert [c != 0 for c in pi.rows[0]] == [True, False, False, False]
        assert [c != 0 for c in pi.rows[2]] == [False, False, True, False]
    rows = [[b ** a for a in range(1, 4)] for b in (1, 2, 3)]
    assert ge.determinant(rows) == 12


def test_build_projections_invalid_betas():
    with pytest.raises(ge.InvalidBetas):
        ge.build_projections(3, 3, [1, 1, 2])
    with pytest.raises(ge.InvalidBetas):
        ge.build_projections(3, 5, [1, 2, 3])


def test_apply_projection_example():
    pi = ge.build_projections(3, 1, [1])[0]
    img = ge.apply_projection(P(1, 2, 3, 4), pi)
    assert img == P(1, 9, 3)
    assert ge.apply_projection(P(5, 10, 15, 20), pi) == img  # projectivity


def test_apply_projection_light_source():
    pi = ge.build_projections(3, 1, [2])[0]
    # kernel of all three rows: x0 = x2 = 0 and 2*x1 + 8*x3 = 0
    with pytest.raises(ge.InLightSource):
        pi.apply(P(0, -4, 0, 1))


def test_vandermonde_nondegeneracy_exhaustive():
    res = vf.suite_nondegeneracy()
    assert res.ok and res.trials == 195


# ---------------------------------------------------------------------------
# sampling

def test_sample_curve_examples():
    tc = ParameterizedCurve([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1]])
    pts = ge.sample_curve(tc, [0, 1, 2])
    assert pts == [P(1, 0, 0, 0), P(1, 1, 1, 1), P(1, 2, 4, 8)]
    line = ParameterizedCurve([[1], [0, 1]])
    assert ge.sample_curve(line, [0, 1]) == [P(1, 0), P(1, 1)]


def test_sample_curve_zero_vector():
    c = ParameterizedCurve([[0, 1], [0, 0, 1]])  # common factor t
    with pytest.raises(ge.ZeroVector):
        ge.sample_curve(c, [0, 1])


def test_sample_curve_reports_duplicates():
    c = ParameterizedCurve([[1], [0, 0, 1]])  # t and -t collide
    with pytest.raises(ValueError):
        ge.sample_curve(c, [1, -1])


# ---------------------------------------------------------------------------
# recovery

def test_recover_line():
    chow = ge.recover_plane_curve([P(1, 0, 1), P(0, 1, 1)], 1)
    assert chow == PlaneChowPoint(1, (1, 1, -1))


def test_recover_circle():
    pts = [P(1, 0, 1), P(0, 1, 1), P(-1, 0, 1), P(0, -1, 1),
           P(Fraction(3, 5), Fraction(4, 5), 1)]
    for p in pts:  # the sample really lies on x^2 + y^2 - z^2
        assert p.coords[0] ** 2 + p.coords[1] ** 2 - p.coords[2] ** 2 == 0
    chow = ge.recover_plane_curve(pts, 2)
    assert chow == PlaneChowPoint(2, (1, 0, 0, 1, 0, -1))


def test_recover_collinear_ambiguous():
    pts = [P(1, t, 0) for t in range(5)]
    with pytest.raises(ge.AmbiguousCurve) as err:
        ge.recover_plane_curve(pts, 2)
    assert err.value.nullity == 3


def test_recovery_round_trip_suite():
    res = vf.suite_recovery(seed=424, trials=40)
    assert res.ok and res.passed == 40


# ---------------------------------------------------------------------------
# cofactor vector

def test_chow_determinant_vector_line_is_cross_product():
    moving = [[Poly([1]), Poly([0, 1]), Poly([1, 1])],
              [Poly([1]), Poly([0, 2]), Poly([1, 2])]]
    got = ge.chow_determinant_vector(moving, 1, 3)
    p1 = (Fraction(1), Fraction(3), Fraction(4))
    p2 = (Fraction(1), Fraction(6), Fraction(7))
    cross = (p1[1] * p2[2] - p1[2] * p2[1],
             -(p1[0] * p2[2] - p1[2] * p2[0]),
             p1[0] * p2[1] - p1[1] * p2[0])
    assert got == PlaneChowPoint(1, cross)


def test_chow_determinant_vector_circle():
    consts = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1),
              (Fraction(3, 5), Fraction(4, 5), 1)]
    moving = [[Poly([c]) for c in pt] for pt in consts]
    got = ge.chow_determinant_vector(moving, 2, 4)
    assert got == PlaneChowPoint(2, (1, 0, 0, 1, 0, -1))
    assert got == ge.recover_plane_curve([P(*c) for c in consts], 2)


def test_chow_determinant_vector_degenerate():
    moving = [[Poly([1]), Poly([i]), Poly([0])] for i in range(5)]
    with pytest.raises(ge.DegenerateSubsystem):
        ge.chow_determinant_vector(moving, 2, 0)


def test_cramer_consistency_suite():
    res = vf.suite_cramer(seed=3030, trials=40)
    assert res.ok


# ---------------------------------------------------------------------------
# projecting curves

def test_project_twisted_cubic():
    tc = ParameterizedCurve([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1]])
    pi = ge.build_projections(3, 1, [2])[0]
    rec = ge.project_curve_to_plane_chow(tc, 1, pi)
    assert rec.degree == 3 and rec.expected_degree == 3
    assert rec.multiplicity_estimate == 1


def test_project_conic_identity_gives_implicit_conic():
    conic = ParameterizedCurve([[1], [0, 1], [0, 0, 1]])
    ident = ge.LinearProjection(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    rec = ge.project_curve_to_plane_chow(conic, 1, ident)
    # xz - y^2 in the order (x^2, xy, xz, y^2, yz, z^2)
    assert rec.chow == PlaneChowPoint(2, (0, 0, 1, -1, 0, 0))


def test_project_image_is_point():
    line = ParameterizedCurve([[1], [0, 1], [0], [0]])
    pi = ge.LinearProjection(((1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)))
    with pytest.raises(ge.ImageIsPoint):
        ge.project_curve_to_plane_chow(line, 1, pi)


def test_project_with_perturbed_forms():
    conic = ParameterizedCurve([[1], [0, 1], [0, 0, 1]])
    forms = ge.perturb_veronese(2, 2, seed=3, eps=0)
    pi = ge.build_projections(5, 1, [2])[0]
    rec = ge.project_curve_to_plane_chow(conic, 2, pi, forms=forms)
    assert rec.expected_degree == 4
    assert rec.degree == 4


# ---------------------------------------------------------------------------
# matching

def test_match_identical():
    tc = ParameterizedCurve([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1]])
    pis = ge.build_projections(3, 4, [1, 2, 3, 4])
    assert ge.match_via_projections(tc, tc, pis, 1).matched


def test_match_distinguishes_cubic_from_line():
    tc = ParameterizedCurve([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1]])
    line = ParameterizedCurve([[1], [0, 1], [0], [0]])
    res = ge.match_via_projections(tc, line, ge.build_projections(3, 1, [3]), 1)
    assert not res.matched and res.distinguished_at == 1


def test_match_suite_quartics():
    res = vf.suite_matching(seed=800, trials=30)
    assert res.ok


# ---------------------------------------------------------------------------
# image dimension check

def test_image_check_line():
    line = ParameterizedCurve([[1], [0, 1], [0]])
    f0 = HomogeneousPolynomial.monomial(3, (1, 0, 0))
    f1 = HomogeneousPolynomial.monomial(3, (0, 1, 0))
    f2 = HomogeneousPolynomial.monomial(3, (0, 0, 1))
    chk = ge.image_dimension_check(f0, f1, f2, line, 12)
    assert chk.kind == "Curve" and chk.degree == 1 and chk.degree_matches


def test_image_check_collapses_to_point():
    # on the conic xz = y^2: f0 = xz, f1 = y^2, f2 = (xz + y^2)/2 satisfy
    # f0 - f1 = 0 and f0 - f2 = 0 along the curve
    conic = ParameterizedCurve([[1], [0, 1], [0, 0, 1]])
    f0 = HomogeneousPolynomial(3, {(1, 0, 1): 1})
    f1 = HomogeneousPolynomial(3, {(0, 2, 0): 1})
    f2 = HomogeneousPolynomial(3, {(1, 0, 1): Fraction(1, 2),
                                   (0, 2, 0): Fraction(1, 2)})
    chk = ge.image_dimension_check(f0, f1, f2, conic, 12)
    assert chk.kind == "Point"


def test_image_check_undefined():
    line = ParameterizedCurve([[1], [0, 1], [0]])
    f = HomogeneousPolynomial.monomial(3, (0, 0, 1))  # z vanishes on the line
    chk = ge.image_dimension_check(f, f, f, line, 12)
    assert chk.kind == "Undefined"


def test_image_check_random_forms_on_conic():
    # degree law at the curve's own threshold (2g-2)/delta + (4m-4) with
    # g = 0, delta = 2, m = 2: l >= 3
    threshold = Fraction(2 * 0 - 2, 2) + (4 * 2 - 4)
    l = 3
    assert l >= threshold
    conic = ParameterizedCurve([[1], [0, 1], [0, 0, 1]])
    rng = random.Random(606)
    expos = ge.monomial_exponents(3, l)
    hits = 0
    for _ in range(50):
        def rand_form():
            terms = {e: rng.randint(-3, 3) for e in expos}
            terms = {e: c for e, c in terms.items() if c}
            if not terms:
                terms[expos[0]] = 1
            return HomogeneousPolynomial(3, terms)
        chk = ge.image_dimension_check(rand_form(), rand_form(), rand_form(),
                                       conic, 30)
        hits += (chk.kind == "Curve" and chk.degree == 2 * l)
    assert hits == 50


# ---------------------------------------------------------------------------
# segre pushforward

def _det_form():
    return HomogeneousPolynomial(4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1},
                                 blocks=(2, 2))


def test_segre_pushforward_det_form():
    eqs = ge.segre_pushforward_equations(_det_form(), 1, 2)
    assert all(eq.degree == 2 for eq in eqs)
    # Z00*Z11 - Z10^2 from the assignment (1, 0), variables (Z00,Z01,Z10,Z11)
    wanted = HomogeneousPolynomial(4, {(1, 0, 0, 1): 1, (0, 0, 2, 0): -1})
    assert wanted in eqs
    segre_relation = HomogeneousPolynomial(4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})
    assert segre_relation in eqs


def test_segre_pushforward_x0y0():
    f = HomogeneousPolynomial(4, {(1, 0, 1, 0): 1}, blocks=(2, 2))
    eqs = ge.segre_pushforward_equations(f, 1, 2)
    squared = HomogeneousPolynomial(4, {(2, 0, 0, 0): 1})
    assert squared in eqs
    assert all(eq.degree == 2 for eq in eqs)


def test_segre_pushforward_vanishing_random():
    eqs = ge.segre_pushforward_equations(_det_form(), 1, 2)
    rng = random.Random(99)
    for _ in range(100):
        p = P(rng.randint(1, 9), rng.randint(-9, 9))
        q = p.scaled(Fraction(rng.randint(1, 9), rng.randint(1, 9)))
        assert _det_form().evaluate(tuple(p.coords) + tuple(q.coords)) == 0
        z = ge.segre_embed([p, q])
        assert all(eq.evaluate(z.coords) == 0 for eq in eqs)


def test_segre_pushforward_shape_mismatch():
    with pytest.raises(ge.ShapeMismatch):
        ge.segre_pushforward_equations(_det_form(), 2, 2)
    plain = HomogeneousPolynomial(4, {(1, 0, 0, 1): 1})
    with pytest.raises(ge.ShapeMismatch):
        ge.segre_pushforward_equations(plain, 1, 2)


def test_segre_degree_bound_suite():
    res = vf.suite_segre(seed=77, trials=30, degree_trials=30)
    assert res.ok


# ---------------------------------------------------------------------------
# transversality budget

def test_dual_degree_transversality_budget():
    assert ge.dual_degree_transversality_budget(1, 3) == 35
    assert ge.dual_degree_transversality_budget(2, 3) == 165
    # definitional composition with the toy Q
    assert 1 * 3 * ge.dual_degree_transversality_budget(1, 3) == 105


def test_degree_law_suite_sample():
    res = vf.suite_degree_law(seed=12121, trials=24)
    assert res.passed >= 23  # >= 95% with seeds logged for any exception
