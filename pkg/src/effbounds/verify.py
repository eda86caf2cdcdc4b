"""Seeded property suites for the geometry engine.

Each suite runs deterministic randomized trials and reports pass/fail counts
with the seeds of any failures, so every exception is reproducible.  The CLI
surfaces these as ``geom-verify``; the acceptance tests call them directly.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import geometry as ge


@dataclass
class SuiteResult:
    name: str
    trials: int
    passed: int
    failures: list = field(default_factory=list)  # dicts with seed + detail
    logged: list = field(default_factory=list)    # tolerated, seed-tagged exceptions
    extra: dict = field(default_factory=dict)
    elapsed: float = 0.0
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_record(self) -> dict:
        rec = {"suite": self.name, "seed": self.seed, "trials": self.trials,
               "passed": self.passed, "failed": len(self.failures),
               "failures": self.failures, "elapsed_s": round(self.elapsed, 3)}
        if self.logged:
            rec["logged"] = self.logged
        if self.extra:
            rec.update(self.extra)
        return rec


NAMED_CURVES = {
    "twisted-cubic": lambda: ge.ParameterizedCurve([[1], [0, 1], [0, 0, 1], [0, 0, 0, 1]]),
    "line": lambda: ge.ParameterizedCurve([[1], [0, 1], [0], [0]]),
    "conic": lambda: ge.ParameterizedCurve([[1], [0, 1], [0, 0, 1], [0]]),
}


# ---------------------------------------------------------------------------
# random constructions

def _random_lines(rng: random.Random, d: int) -> list:
    """d pairwise non-proportional rational lines in the plane."""
    lines = []
    while len(lines) < d:
        cand = (rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
        if cand == (0, 0, 0):
            continue
        cand_pt = ge.ProjectivePoint(cand)
        if any(cand_pt == ge.ProjectivePoint(existing) for existing in lines):
            continue
        lines.append(cand)
    return lines


def _points_on_line(rng: random.Random, line, count: int, avoid_lines) -> list:
    """Rational points on the line, none on any of the other lines."""
    a, b, c = [Fraction(v) for v in line]
    # kernel basis of (a, b, c)
    if a != 0:
        p, q = (-b / a, 1, 0), (-c / a, 0, 1)
    elif b != 0:
        p, q = (1, 0, 0), (0, -c / b, 1)
    else:
        p, q = (1, 0, 0), (0, 1, 0)
    out = []
    t = 0
    while len(out) < count:
        t += 1
        lam = Fraction(t + rng.randint(0, 2), 1 + rng.randint(0, 1))
        coords = tuple(pp + lam * qq for pp, qq in zip(p, q))
        if all(v == 0 for v in coords):
            continue
        pt = ge.ProjectivePoint(coords)
        on_other = any(sum(Fraction(o) * x for o, x in zip(other, pt.coords)) == 0
                       for other in avoid_lines)
        if on_other or pt in out:
            continue
        out.append(pt)
    return out


def _line_product_curve(rng: random.Random, d: int):
    """A split degree-d plane curve (product of d lines) with known
    coefficients, plus d+1 smooth rational points per component."""
    lines = _random_lines(rng, d)
    form = ge.HomogeneousPolynomial(3, {(1, 0, 0): lines[0][0],
                                        (0, 1, 0): lines[0][1],
                                        (0, 0, 1): lines[0][2]})
    for a, b, c in lines[1:]:
        form = form * ge.HomogeneousPolynomial(3, {(1, 0, 0): a, (0, 1, 0): b,
                                                   (0, 0, 1): c})
    coeffs = [form.terms.get(e, Fraction(0)) for e in ge.monomial_exponents(3, d)]
    points = []
    for i, line in enumerate(lines):
        others = lines[:i] + lines[i + 1:]
        points.extend(_points_on_line(rng, line, d + 1, others))
    return ge.PlaneChowPoint(d, coeffs), points


def _random_space_curve(rng: random.Random, dim: int, degree: int) -> ge.ParameterizedCurve:
    """Rational curve in projective dim-space, first coordinate 1; every
    other coordinate has exact parameter degree (nonzero leading term), so
    no coordinate hyperplane plays a degenerate role."""
    coords = [[1]]
    for _ in range(dim):
        poly = [rng.randint(-4, 4) for _ in range(degree + 1)]
        while poly[degree] == 0:
            poly[degree] = rng.randint(-4, 4)
        coords.append(poly)
    return ge.ParameterizedCurve(coords)


def _perturb_one_coefficient(rng: random.Random, curve: ge.ParameterizedCurve
                             ) -> ge.ParameterizedCurve:
    coords = [list(p.coeffs) for p in curve.coords]
    while True:
        i = rng.randrange(1, len(coords))
        j = rng.randrange(len(coords[i])) if coords[i] else 0
        delta = rng.choice([-2, -1, 1, 2])
        new = [row[:] for row in coords]
        if not new[i]:
            new[i] = [delta]
        else:
            new[i][j] += delta
        try:
            cand = ge.ParameterizedCurve(new)
        except ge.ZeroVector:
            continue
        if cand.degree == curve.degree and [list(p.coeffs) for p in cand.coords] != coords:
            return cand


# ---------------------------------------------------------------------------
# suites

def suite_recovery(seed: int, trials: int = 100, max_degree: int = 4) -> SuiteResult:
    """Round-trip: split plane curves of degree <= max_degree are recovered
    from smooth rational points exactly (up to scale)."""
    t0 = time.time()
    res = SuiteResult("recovery", trials, 0, seed=seed)
    for i in range(trials):
        trial_seed = seed + i
        rng = random.Random(trial_seed)
        d = rng.randint(1, max_degree)
        try:
            expected, points = _line_product_curve(rng, d)
            got = ge.recover_plane_curve(points, d)
            if got == expected:
                res.passed += 1
            else:
                res.failures.append({"seed": trial_seed, "degree": d,
                                     "detail": "coefficients differ"})
        except ge.GeometryError as exc:
            res.failures.append({"seed": trial_seed, "degree": d,
                                 "detail": f"{type(exc).__name__}: {exc}"})
    res.elapsed = time.time() - t0
    return res


def suite_matching(seed: int, trials: int = 100, curves=None,
                   projection_count: int = 12, identical_every: int = 10) -> SuiteResult:
    """Distinct curve pairs in projective 3-space must be Distinguished by
    some Vandermonde projection; identical pairs must Match."""
    t0 = time.time()
    pis = ge.build_projections(3, projection_count, list(range(1, projection_count + 1)))
    if curves is not None:
        c1, c2 = (NAMED_CURVES[name.strip()]() for name in curves)
        outcome = ge.match_via_projections(c1, c2, pis, 1)
        res = SuiteResult("matching", 1, 0, seed=seed)
        want_match = curves[0].strip() == curves[1].strip()
        if outcome.matched == want_match:
            res.passed = 1
        else:
            res.failures.append({"seed": seed, "detail": str(outcome)})
        res.elapsed = time.time() - t0
        res.extra["outcome"] = str(outcome)
        return res
    res = SuiteResult("matching", trials, 0, seed=seed)
    for i in range(trials):
        trial_seed = seed + i
        rng = random.Random(trial_seed)
        degree = rng.randint(1, 4)
        try:
            c1 = _random_space_curve(rng, 3, degree)
            if i % identical_every == 0:
                outcome = ge.match_via_projections(c1, c1, pis, 1)
                ok = outcome.matched
            else:
                c2 = _perturb_one_coefficient(rng, c1)
                outcome = ge.match_via_projections(c1, c2, pis, 1)
                ok = not outcome.matched
            if ok:
                res.passed += 1
            else:
                res.failures.append({"seed": trial_seed, "degree": degree,
                                     "detail": str(outcome)})
        except ge.GeometryError as exc:
            res.failures.append({"seed": trial_seed, "degree": degree,
                                 "detail": f"{type(exc).__name__}: {exc}"})
    res.elapsed = time.time() - t0
    return res


def suite_nondegeneracy(seed: int = 0, trials: int = 0) -> SuiteResult:
    """Exhaustive exact check that every M x M minor of the Vandermonde
    coefficient family is nonzero, for M <= 6."""
    t0 = time.time()
    checks = 0
    res = SuiteResult("nondegeneracy", 0, 0, seed=seed)
    for M in range(3, 7):
        betas = list(range(1, M + 4))
        for subset in itertools.combinations(betas, M):
            checks += 1
            rows = [[b ** a for a in range(1, M + 1)] for b in subset]
            if ge.determinant(rows) == 0:
                res.failures.append({"seed": seed, "M": M, "betas": subset,
                                     "detail": "vanishing minor"})
    res.trials = checks
    res.passed = checks - len(res.failures)
    res.elapsed = time.time() - t0
    return res


def suite_degree_law(seed: int, trials: int = 200, min_rate: float = 0.95) -> SuiteResult:
    """Veronese degree l in {2,3} on a degree-delta rational curve projects
    to a plane curve of degree l*delta for seeded Vandermonde projections.

    Pseudo-generic choices can fail occasionally; the suite passes when the
    success rate is >= min_rate and every exception carries its seed."""
    t0 = time.time()
    res = SuiteResult("degree-law", trials, 0, seed=seed)
    combos = [(l, d) for l in (2, 3) for d in (1, 2, 3)]
    for i in range(trials):
        trial_seed = seed + i
        rng = random.Random(trial_seed)
        l, delta = combos[i % len(combos)]
        try:
            curve = _random_space_curve(rng, 3, delta)
            m = 3
            big_m = math.comb(l + m, m) - 1
            beta = rng.randint(2, 5)  # small betas keep exact entries compact
            pi = ge.build_projections(big_m, 1, [beta])[0]
            rec = ge.project_curve_to_plane_chow(curve, l, pi)
            if rec.degree == l * delta:
                res.passed += 1
            else:
                res.failures.append({"seed": trial_seed, "l": l, "delta": delta,
                                     "detail": f"recovered degree {rec.degree}"})
        except ge.GeometryError as exc:
            res.failures.append({"seed": trial_seed, "l": l, "delta": delta,
                                 "detail": f"{type(exc).__name__}: {exc}"})
    res.elapsed = time.time() - t0
    if res.passed >= min_rate * trials:
        # within the tolerated pseudo-genericity rate: keep the exceptions
        # visible (with their seeds) but do not fail the suite
        res.logged = res.failures
        res.failures = []
    res.extra["success_rate"] = round(res.passed / trials, 4) if trials else 1.0
    return res


def suite_segre(seed: int, trials: int = 100, degree_trials: int = 50) -> SuiteResult:
    """Pushforward equations vanish on embedded zeros; emitted degrees stay
    within max(r, d_1+...+d_r)."""
    t0 = time.time()
    res = SuiteResult("segre", trials + degree_trials, 0, seed=seed)
    det_form = ge.HomogeneousPolynomial(4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1},
                                        blocks=(2, 2))
    eqs = ge.segre_pushforward_equations(det_form, 1, 2)
    for i in range(trials):
        trial_seed = seed + i
        rng = random.Random(trial_seed)
        p = ge.ProjectivePoint([rng.randint(1, 9), rng.randint(-9, 9)])
        scale = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        q = p.scaled(scale)  # proportional pair is exactly the zero locus
        z = ge.segre_embed([p, q])
        if det_form.evaluate(tuple(p.coords) + tuple(q.coords)) != 0:
            res.failures.append({"seed": trial_seed, "detail": "pair not a zero"})
            continue
        if all(eq.evaluate(z.coords) == 0 for eq in eqs):
            res.passed += 1
        else:
            res.failures.append({"seed": trial_seed, "detail": "equation not vanishing"})
    for i in range(degree_trials):
        trial_seed = seed + trials + i
        rng = random.Random(trial_seed)
        r = rng.randint(1, 3)
        k = rng.randint(1, 2)
        multi = [rng.randint(1, 3) for _ in range(r)]
        form = _random_multihomogeneous(rng, k, multi)
        try:
            emitted = ge.segre_pushforward_equations(form, k, r)
            bound = max(r, sum(multi))
            if all(eq.degree <= bound for eq in emitted):
                res.passed += 1
            else:
                res.failures.append({"seed": trial_seed, "detail": "degree bound broken"})
        except ge.GeometryError as exc:
            res.failures.append({"seed": trial_seed,
                                 "detail": f"{type(exc).__name__}: {exc}"})
    res.elapsed = time.time() - t0
    return res


def _random_multihomogeneous(rng: random.Random, k: int, multidegree) -> ge.HomogeneousPolynomial:
    blocks = tuple(k + 1 for _ in multidegree)
    per_block = [ge.monomial_exponents(k + 1, d) for d in multidegree]
    terms = {}
    for combo in itertools.product(*per_block):
        if rng.random() < 0.5:
            flat = tuple(e for block in combo for e in block)
            terms[flat] = Fraction(rng.randint(-5, 5))
    terms = {e: c for e, c in terms.items() if c != 0}
    if not terms:
        flat = tuple(e for block in (p[0] for p in per_block) for e in block)
        terms[flat] = Fraction(1)
    return ge.HomogeneousPolynomial(sum(blocks), terms, blocks=blocks)


def suite_cramer(seed: int, trials: int = 100) -> SuiteResult:
    """Signed-cofactor recovery agrees projectively with nullspace recovery."""
    t0 = time.time()
    res = SuiteResult("cramer", trials, 0, seed=seed)
    for i in range(trials):
        trial_seed = seed + i
        rng = random.Random(trial_seed)
        d = rng.randint(1, 2)
        K = len(ge.monomial_exponents(3, d))
        try:
            moving, t0_val = _nondegenerate_moving_points(rng, d, K - 1)
            cof = ge.chow_determinant_vector(moving, d, t0_val)
            pts = [ge.ProjectivePoint([p(t0_val) for p in coords]) for coords in moving]
            rec = ge.recover_plane_curve(pts, d)
            if cof == rec:
                res.passed += 1
            else:
                res.failures.append({"seed": trial_seed, "detail": "vectors differ"})
        except ge.GeometryError as exc:
            res.failures.append({"seed": trial_seed,
                                 "detail": f"{type(exc).__name__}: {exc}"})
    res.elapsed = time.time() - t0
    return res


def _nondegenerate_moving_points(rng: random.Random, d: int, count: int):
    for _ in range(50):
        moving = []
        for _ in range(count):
            coords = [ge.Poly([rng.randint(-5, 5) for _ in range(3)]) for _ in range(3)]
            moving.append(coords)
        t0_val = Fraction(rng.randint(-5, 5))
        try:
            pts = [ge.ProjectivePoint([p(t0_val) for p in coords]) for coords in moving]
            if len(set(pts)) != count:
                continue
            ge.chow_determinant_vector(moving, d, t0_val)
            return moving, t0_val
        except ge.GeometryError:
            continue
    raise ge.DegenerateSubsystem("could not draw a nondegenerate configuration")


ALL_SUITES = {
    "recovery": suite_recovery,
    "matching": suite_matching,
    "nondegeneracy": suite_nondegeneracy,
    "degree-law": suite_degree_law,
    "segre": suite_segre,
    "cramer": suite_cramer,
}


def run_suites(names=None, seed: int = 0, trials=None, curves=None) -> list:
    out = []
    for name in (names or list(ALL_SUITES)):
        fn = ALL_SUITES[name]
        kwargs = {}
        if trials is not None and name != "nondegeneracy":
            kwargs["trials"] = trials
        if curves is not None and name == "matching":
            kwargs["curves"] = curves
        out.append(fn(seed, **kwargs))
    return out
