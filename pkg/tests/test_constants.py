import json
from decimal import Decimal
from fractions import Fraction

import pytest

from effbounds import constants as ct
from effbounds import magnitude as mg
from effbounds.constants import FamilyParams
from effbounds.magnitude import Magnitude, Ordering

import oracles


def exact(n):
    return Magnitude.exact(n)


# ---------------------------------------------------------------------------
# derive_base

@pytest.mark.parametrize("g,q,s,m,d,l", [
    (2, 2, 0, 5000, 10, 19997),
    (2, 2, 1, 6250, 10, 24997),
    (3, 2, 0, 7500, 20, 29997),
])
def test_derive_base(g, q, s, m, d, l):
    c = ct.derive_base(FamilyParams(g, q, s))
    assert c.m.value == m and c.d.value == d and c.l.value == l
    assert c.delta0.value == l * d
    assert c.N.value == (l * d) ** 2 + 1


def test_derive_base_220_exact_values():
    c = ct.derive_base(FamilyParams(2, 2, 0))
    assert c.delta0.value == 199970
    assert c.N.value == 39988000901
    assert c.M.value == oracles.binomial_exact(24997, 5000) - 1


def test_derive_base_rejects_low_genus():
    with pytest.raises(ct.InvalidParams):
        ct.derive_base(FamilyParams(2, 1, 0))
    with pytest.raises(ct.InvalidParams):
        FamilyParams(1, 2, 0)


# ---------------------------------------------------------------------------
# Q, D, A, graph bound

def test_compute_Q_toys():
    c1 = ct.inject_constants(m=1, d=1, l=1, M=3)
    assert ct.compute_Q(c1).value == 105  # 1*3*C(7,3)
    c2 = ct.inject_constants(m=1, d=2, l=1, M=3)
    assert ct.compute_Q(c2).value == 990  # 2*3*C(11,3)


def test_compute_Q_real_contains_oracle():
    c = ct.derive_base(FamilyParams(2, 2, 0))
    q = ct.compute_Q(c)
    assert q.height == 1
    oracle = Decimal(str(oracles.log10_Q(2, 2, 0)))
    assert q.body.lo - Decimal("1e-35") <= oracle <= q.body.hi + Decimal("1e-35")
    assert str(oracle).startswith("4339426966.33715522796635")


def test_Q_theorem_and_lemma_forms_agree():
    c = ct.derive_base(FamilyParams(2, 2, 0))
    ct.compute_Q(c)
    names = [t.name for t in c.trace]
    assert "Q" in names and "Q_expanded" in names
    by_name = {t.name: t.magnitude for t in c.trace}
    assert by_name["Q"].body.overlaps(by_name["Q_expanded"].body)


def test_compute_D_real_matches_oracle_product():
    p = FamilyParams(2, 2, 0)
    c = ct.derive_base(p)
    d = ct.compute_D(c, p)
    assert d.value == oracles.d_constant(2, 2, 0)
    assert d.value == 19994300405 * 19997 ** 2 * 10 * 500 * 39988000901 * 4


def test_compute_D_toy_injection():
    c = ct.inject_constants(m=1, d=2, l=1, N=5)
    p = FamilyParams(2, 0, 1)  # gq+s = 1
    assert ct.compute_D(c, p).value == 25000


def test_compute_D_positive():
    # gq+s = 0 is unreachable: s >= 0 and g, q >= 2 force gq >= 4
    p = FamilyParams(2, 2, 0)
    c = ct.derive_base(p)
    assert ct.compute_D(c, p).value > 0


def test_compute_A_toys():
    c = ct.inject_constants(m=1, d=2, l=1, Q=3)  # ld = 2, C(4,2) = 6
    assert ct.compute_A(c).value == 216
    c0 = ct.inject_constants(m=1, d=2, l=1, Q=0)
    assert ct.compute_A(c0).value == 1


def test_compute_A_real_body():
    p = FamilyParams(2, 2, 0)
    c = ct.derive_base(p)
    ct.compute_Q(c)
    a = ct.compute_A(c)
    assert a.height == 2
    oracle = (oracles.log10_Q(2, 2, 0)
              + oracles.mpmath.log10(oracles.log10_of_int(19994300406)))
    od = Decimal(str(oracle))
    assert a.body.lo - Decimal("1e-20") <= od <= a.body.hi + Decimal("1e-20")


def test_graph_degree_bound_toys():
    g, direct, _ = ct.assemble_shafarevich(2, exact(1), exact(105), exact(25000))
    assert g.value == 2625006
    g0, _, _ = ct.assemble_shafarevich(2, exact(1), exact(0), exact(12345))
    assert g0.value == 6


def test_graph_degree_bound_real_consistent():
    p = FamilyParams(2, 2, 0)
    c = ct.derive_base(p)
    ct.compute_Q(c)
    ct.compute_D(c, p)
    g = ct.graph_degree_bound(p, c)
    prod = mg.multiply(c.Q, c.D)
    assert g.height == 1
    assert g.body.overlaps(prod.body)


# ---------------------------------------------------------------------------
# chow components and the final bound

def test_chow_components_toys():
    assert ct.chow_components_bound(exact(2), exact(1), exact(1), 1).value == 729
    assert ct.chow_components_bound(exact(1), exact(2), exact(1), 1).value == 256


def test_chow_k1_simplification():
    import random
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 4)
        d1 = rng.randint(1, 3)
        d2 = rng.randint(1, 3)
        got = ct.chow_components_bound(exact(n), exact(d1), exact(d2), 1)
        mx = max(d1, d2)
        expected = (oracles.binomial_exact((n + 1) * mx, n)
                    ** ((n + 1) * (d2 * d2 + 1)))
        assert got.value == expected


def test_shafarevich_toy_injection():
    _, direct, assembled = ct.assemble_shafarevich(2, exact(1), exact(1), exact(1))
    expected = 7 * oracles.binomial_exact(35, 4) ** 250
    assert direct.value == expected
    assert assembled.value == expected


def test_shafarevich_real_overlap():
    rep = ct.shafarevich_report(FamilyParams(2, 2, 0))
    assert rep.bound.height >= 3
    assert mg.compare(rep.bound, rep.bound_assembled) is Ordering.INDETERMINATE


def test_shafarevich_monotone_grid():
    b0 = ct.shafarevich_bound(FamilyParams(2, 2, 0))
    b1 = ct.shafarevich_bound(FamilyParams(2, 2, 1))
    b2 = ct.shafarevich_bound(FamilyParams(2, 2, 2))
    assert b0.height == b1.height == b2.height
    assert mg.compare(b0, b1) is Ordering.LESS
    assert mg.compare(b1, b2) is Ordering.LESS


def test_low_genus_reroute():
    lg = ct.shafarevich_report(FamilyParams(2, 1, 0))
    assert lg.rerouted_from == FamilyParams(2, 2, 0)
    inner = ct.shafarevich_bound(FamilyParams(2, 2, 0))
    s2 = ct.defranchis_severi_S(2)
    composed = mg.multiply(s2, inner)
    assert lg.bound.height == composed.height
    assert lg.bound.body.overlaps(composed.body)
    notes = [t.citation for t in lg.trace]
    assert any("q replaced by 2" in c for c in notes)


def test_low_genus_q0():
    lg = ct.shafarevich_report(FamilyParams(2, 0, 3))
    assert lg.rerouted_from == FamilyParams(2, 2, 6)
    with pytest.raises(ct.InvalidParams):
        ct.shafarevich_bound_low_genus(FamilyParams(2, 2, 0))


# ---------------------------------------------------------------------------
# S(g)

def test_defranchis_severi_S2():
    got = ct.defranchis_severi_S(2).value
    oracle = oracles.defranchis_value(2)
    assert oracle <= got <= oracle + 1
    assert got == 8571920656


def test_defranchis_severi_lower_bound():
    for g in range(2, 11):
        assert ct.defranchis_severi_S(g).value >= 42 * (g - 1)


def test_defranchis_severi_precision_stable():
    a = ct.defranchis_severi_S(3)
    b = ct.defranchis_severi_S(3, precision_digits=60)
    assert a.value == b.value


# ---------------------------------------------------------------------------
# kollar

def test_kollar_toys():
    c = ct.inject_constants(m=1, d=1, l=2)
    p = FamilyParams(2, 0, 0)
    kb = ct.kollar_degree_bound(c, p)
    assert kb.power_exponent.value == 7
    assert kb.rank_bound.value == 8
    c2 = ct.inject_constants(m=2, d=1, l=1)
    kb2 = ct.kollar_degree_bound(c2, p)
    assert kb2.power_exponent.value == 1
    assert kb2.rank_bound.value == 3


def test_kollar_real_comparison():
    p = FamilyParams(2, 2, 0)
    c = ct.derive_base(p)
    kb = ct.kollar_degree_bound(c, p)
    assert kb.q_vs_rank in (Ordering.GREATER, Ordering.INDETERMINATE)
    assert kb.q_vs_rank is Ordering.GREATER
    assert kb.equation_degree_bound is c.Q


# ---------------------------------------------------------------------------
# parshin family constants / clemens threshold

def test_parshin_family_constants_real():
    p = FamilyParams(2, 2, 0)
    c = ct.derive_base(p)
    pf = ct.parshin_family_constants(p, c)
    assert pf.sections.value == 39988000901
    assert pf.section_degree_bound.value == 500 * 39988000901 * 4
    assert pf.section_degree_bound.value == 79976001802000
    assert pf.q_prime_bound.value == 100 * 39988000901 ** 2 * 4
    assert pf.tau_degree_bound.value == 200 * 39988000901 ** 2 * 4


def test_parshin_family_constants_toy():
    c = ct.inject_constants(m=1, d=1, l=1, N=5)
    p = FamilyParams(2, 0, 1)  # gq+s = 1
    pf = ct.parshin_family_constants(p, c)
    assert pf.q_prime_bound.value == 2500
    assert pf.tau_degree_bound.value == 5000
    assert pf.kx_degree_bound.value == 500
    assert pf.section_degree_bound.value == 2500


def test_clemens_threshold():
    t, ok = ct.clemens_threshold(2, 10, 5000)
    assert t == Fraction(99981, 5) and float(t) == 19996.2 and ok
    t2, ok2 = ct.clemens_threshold(2, 1, 1)
    assert t2 == 2 and not ok2
    t3, ok3 = ct.clemens_threshold(2, 2, 123)
    assert ok3  # boundary delta = 2g-2


# ---------------------------------------------------------------------------
# determinism

def test_pipeline_determinism():
    def run():
        rep = ct.shafarevich_report(FamilyParams(2, 2, 0))
        return json.dumps([t.as_record() for t in rep.trace], sort_keys=True)
    assert run() == run()


def test_trace_entries_carry_citations():
    rep = ct.shafarevich_report(FamilyParams(2, 2, 0))
    assert all(t.citation for t in rep.trace)
    assert all("magnitude" in t.as_record() for t in rep.trace)
