"""Exact-rational projective geometry engine.

Desk-scale verification of the constructive machinery behind the bound
pipeline: Veronese and Segre embeddings, Vandermonde-structured plane
projections, recovery of a plane curve from points on it, and the
cofactor-vector form of that recovery.

Everything here is exact: points and polynomials carry ``Fraction``
coordinates, the linear algebra is fraction-free integer elimination, and
projective equality is decided, never approximated.  No floating point
enters this module.

Monomials of a fixed degree are always ordered descending-lexicographically
by exponent vector, e.g. for plane conics: x^2, xy, xz, y^2, yz, z^2.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class GeometryError(Exception):
    pass


class InvalidBetas(GeometryError):
    pass


class InLightSource(GeometryError):
    """The point lies in the projection center; the image is undefined."""


class ZeroVector(GeometryError):
    pass


class AmbiguousCurve(GeometryError):
    def __init__(self, nullity: int):
        super().__init__(f"points fail to determine a unique curve "
                         f"(nullspace dimension {nullity})")
        self.nullity = nullity


class NoCurve(GeometryError):
    pass


class DegenerateSubsystem(GeometryError):
    pass


class ImageIsPoint(GeometryError):
    pass


class PerturbationRejected(GeometryError):
    pass


class ShapeMismatch(GeometryError):
    pass


# ---------------------------------------------------------------------------
# monomials

def monomial_exponents(nvars: int, degree: int) -> list:
    """All exponent vectors with |mu| = degree, descending lexicographic."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomial_exponents(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def _as_fraction_tuple(coords: Iterable) -> tuple:
    return tuple(Fraction(c) for c in coords)


def _clear_denominators(coords: Sequence[Fraction]) -> tuple:
    """Scale a rational tuple to coprime integers (projectively harmless)."""
    lcm = 1
    for c in coords:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coords]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# points, polynomials, curves

class ProjectivePoint:
    """Point of projective space with exact rational coordinates.

    Equality and hashing are up to nonzero scale; ``normalized`` rescales so
    the first nonzero coordinate is 1 (idempotent, canonical).
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        cs = _as_fraction_tuple(coords)
        if not cs or all(c == 0 for c in cs):
            raise ZeroVector("projective point needs a nonzero coordinate")
        self.coords = cs

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def normalized(self) -> "ProjectivePoint":
        pivot = next(c for c in self.coords if c != 0)
        return ProjectivePoint(tuple(c / pivot for c in self.coords))

    def scaled(self, factor) -> "ProjectivePoint":
        f = Fraction(factor)
        if f == 0:
            raise ZeroVector("scale factor must be nonzero")
        return ProjectivePoint(tuple(c * f for c in self.coords))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if len(self.coords) != len(other.coords):
            return False
        return self.normalized().coords == other.normalized().coords

    def __hash__(self):
        return hash(self.normalized().coords)

    def __repr__(self):
        return f"ProjectivePoint({list(self.coords)})"


class HomogeneousPolynomial:
    """Sparse (multi)homogeneous polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  With ``blocks``
    set, the variables are grouped and every term must have the same
    per-block degree vector (the multidegree).
    """

    __slots__ = ("nvars", "terms", "blocks", "degree", "multidegree")

    def __init__(self, nvars: int, terms: dict, blocks: Optional[tuple] = None):
        clean = {}
        for expo, coeff in terms.items():
            c = Fraction(coeff)
            if c == 0:
                continue
            expo = tuple(int(e) for e in expo)
            if len(expo) != nvars or any(e < 0 for e in expo):
                raise ShapeMismatch(f"bad exponent {expo} for {nvars} variables")
            clean[expo] = c
        if not clean:
            raise ShapeMismatch("zero polynomial is not homogeneous of a degree")
        degrees = {sum(e) for e in clean}
        if len(degrees) != 1:
            raise ShapeMismatch(f"mixed total degrees {sorted(degrees)}")
        self.nvars = nvars
        self.terms = clean
        self.degree = degrees.pop()
        self.blocks = tuple(blocks) if blocks else None
        self.multidegree = None
        if self.blocks is not None:
            if sum(self.blocks) != nvars:
                raise ShapeMismatch("block sizes do not cover the variables")
            multis = set()
            for expo in clean:
                offs, md = 0, []
                for b in self.blocks:
                    md.append(sum(expo[offs:offs + b]))
                    offs += b
                multis.add(tuple(md))
            if len(multis) != 1:
                raise ShapeMismatch(f"mixed multidegrees {sorted(multis)}")
            self.multidegree = multis.pop()

    @staticmethod
    def monomial(nvars: int, expo: Sequence[int], coeff=1) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(nvars, {tuple(expo): Fraction(coeff)})

    def evaluate(self, coords: Sequence) -> Fraction:
        cs = _as_fraction_tuple(coords)
        if len(cs) != self.nvars:
            raise ShapeMismatch(f"expected {self.nvars} coordinates, got {len(cs)}")
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            prod = coeff
            for c, e in zip(cs, expo):
                if e:
                    prod *= c ** e
            total += prod
        return total

    def __mul__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ShapeMismatch("cannot multiply forms on different variable sets")
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        blocks = self.blocks if self.blocks == other.blocks else None
        return HomogeneousPolynomial(self.nvars, terms, blocks=blocks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return (f"HomogeneousPolynomial(nvars={self.nvars}, degree={self.degree}, "
                f"{len(self.terms)} terms)")


class Poly:
    """Univariate polynomial over the rationals (curve coordinate functions)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"


class ParameterizedCurve:
    """Rational curve t -> [p_0(t) : ... : p_n(t)] in projective n-space."""

    def __init__(self, coords: Sequence):
        ps = tuple(p if isinstance(p, Poly) else Poly(p) for p in coords)
        if len(ps) < 2 or all(p.is_zero() for p in ps):
            raise ZeroVector("curve needs >= 2 coordinates, not all zero")
        self.coords = ps

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.coords)

    def point_at(self, t) -> ProjectivePoint:
        vals = [p(t) for p in self.coords]
        if all(v == 0 for v in vals):
            raise ZeroVector(f"all coordinates vanish at t = {t}")
        return ProjectivePoint(vals)


def sample_curve(curve: ParameterizedCurve, ts: Sequence) -> list:
    """Evaluate at pairwise-distinct parameters; projective duplicates among
    the images are reported (ValueError), never silently dropped."""
    ts = [Fraction(t) for t in ts]
    if len(set(ts)) != len(ts):
        raise ValueError("parameters must be pairwise distinct")
    points = [curve.point_at(t) for t in ts]
    if len(set(points)) != len(points):
        dupes = [t for t, p in zip(ts, points) if points.count(p) > 1]
        raise ValueError(f"duplicate projective images at parameters {dupes[:4]}")
    return points


def parameter_stream():
    yield Fraction(0)
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        k += 1


# ---------------------------------------------------------------------------
# fraction-free exact linear algebra

def _bareiss_echelon(rows: list) -> tuple:
    """In-place fraction-free (Bareiss) row echelon; returns (pivot columns,
    reduced rows).  Entries must be Python ints."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    piv_cols = []
    prev = 1
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            mrc = m[r][c]
            for j in range(c + 1, ncols):
                m[i][j] = (mrc * m[i][j] - mic * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return piv_cols, m


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list:
    """Basis of the right kernel of an integer matrix, as integer vectors."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        basis = []
        for c in range(ncols):
            v = [0] * ncols
            v[c] = 1
            basis.append(v)
        return basis
    piv_cols, m = _bareiss_echelon(rows)
    free_cols = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i in reversed(range(len(piv_cols))):
            pc = piv_cols[i]
            s = Fraction(0)
            for j in range(pc + 1, ncols):
                if vec[j]:
                    s += m[i][j] * vec[j]
            vec[pc] = -s / m[i][pc]
        basis.append(list(_clear_denominators(vec)))
    return basis


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for c in range(n - 1):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        for i in range(c + 1, n):
            mic = m[i][c]
            mcc = m[c][c]
            for j in range(c + 1, n):
                m[i][j] = (mcc * m[i][j] - mic * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# embeddings and projections

def veronese_embed(pt: ProjectivePoint, l: int) -> ProjectivePoint:
    """All degree-l monomials of the coordinates, descending-lex order."""
    if l < 1:
        raise ValueError("Veronese degree must be >= 1")
    expos = monomial_exponents(len(pt.coords), l)
    vals = []
    for expo in expos:
        prod = Fraction(1)
        for c, e in zip(pt.coords, expo):
            if e:
                prod *= c ** e
        vals.append(prod)
    return ProjectivePoint(vals)


def perturb_veronese(l: int, m: int, seed: int, eps=Fraction(1, 1000),
                     sample_count: int = 20) -> list:
    """Degree-l forms Z^mu + eps * (random small form), one per monomial.

    Injectivity of the induced map is not proven; the forms are accepted only
    after the fixed sample set maps to pairwise distinct images
    (PerturbationRejected otherwise; retry with a new seed).
    """
    eps = Fraction(eps)
    expos = monomial_exponents(m + 1, l)
    if len(expos) > 5000:
        raise GeometryError("perturbation space too large for desk scale")
    rng = random.Random(seed)
    forms = []
    for mu in expos:
        terms = {mu: Fraction(1)}
        if eps != 0:
            for nu in expos:
                c = rng.randint(-999, 999)
                if c:
                    terms[nu] = terms.get(nu, Fraction(0)) + eps * Fraction(c, 1000)
        forms.append(HomogeneousPolynomial(m + 1, terms))
    validate_perturbation(forms, m, sample_count=sample_count)
    return forms


def validate_perturbation(forms: Sequence[HomogeneousPolynomial], m: int,
                          sample_count: int = 20) -> None:
    """A-posteriori check: the induced map sends a fixed rational sample set
    to pairwise distinct points of the target space."""
    stream = parameter_stream()
    points = []
    while len(points) < sample_count:
        t = next(stream)
        coords = [Fraction(1)] + [t ** j for j in range(1, m + 1)]
        points.append(ProjectivePoint(coords))
    images = []
    for p in points:
        vals = [f.evaluate(p.coords) for f in forms]
        if all(v == 0 for v in vals):
            raise PerturbationRejected(f"all forms vanish at {p}")
        images.append(ProjectivePoint(vals))
    if len(set(images)) != len(images):
        raise PerturbationRejected("two sample points share an image")


@dataclass(frozen=True)
class LinearProjection:
    """Projection to the plane given by three independent linear forms on
    projective M-space; undefined on the codimension-3 kernel locus."""

    rows: tuple  # 3 rows of M+1 Fractions

    def __post_init__(self):
        if len(self.rows) != 3:
            raise GeometryError("projection needs exactly 3 rows")
        ints = [_clear_denominators(r) for r in self.rows]
        width = len(ints[0])
        if any(len(r) != width for r in ints) or width < 3:
            raise GeometryError("projection rows need equal length M+1 >= 3")
        rank = len(_bareiss_echelon([list(r) for r in ints])[0])
        if rank != 3:
            raise GeometryError("projection matrix must have rank 3")

    @property
    def source_dim(self) -> int:
        return len(self.rows[0]) - 1

    def apply(self, pt: ProjectivePoint) -> ProjectivePoint:
        if len(pt.coords) != len(self.rows[0]):
            raise ShapeMismatch("point dimension does not match projection")
        vals = [sum(a * c for a, c in zip(row, pt.coords)) for row in self.rows]
        if all(v == 0 for v in vals):
            raise InLightSource(f"{pt} lies in the projection center")
        return ProjectivePoint(vals)


def build_projections(M: int, count: int, betas: Sequence[int]) -> list:
    """Vandermonde family: rows (e_0, (beta^alpha)_alpha, e_2) per beta.

    Powers of distinct positive betas make every M x M minor of the middle
    rows a Vandermonde determinant times a positive monomial, hence nonzero:
    the family is nondegenerate by construction.
    """
    betas = [int(b) for b in betas]
    if len(set(betas)) != len(betas) or any(b < 1 for b in betas):
        raise InvalidBetas("betas must be pairwise distinct positive integers")
    if M < 3:
        raise GeometryError("projection source needs M >= 3")
    if count > len(betas):
        raise InvalidBetas("fewer betas than requested projections")
    e0 = (Fraction(1),) + (Fraction(0),) * M
    e2 = tuple(Fraction(1 if i == 2 else 0) for i in range(M + 1))
    out = []
    for b in betas[:count]:
        mid = (Fraction(0),) + tuple(Fraction(b) ** a for a in range(1, M + 1))
        out.append(LinearProjection((e0, mid, e2)))
    return out


def apply_projection(pt: ProjectivePoint, pi: LinearProjection) -> ProjectivePoint:
    return pi.apply(pt)


# ---------------------------------------------------------------------------
# plane-curve recovery

class PlaneChowPoint:
    """Degree-d plane curve as its coefficient tuple, indexed by the
    descending-lex monomials of degree d in (x, y, z)."""

    __slots__ = ("degree", "point")

    def __init__(self, degree: int, coefficients: Iterable):
        self.degree = degree
        self.point = (coefficients if isinstance(coefficients, ProjectivePoint)
                      else ProjectivePoint(coefficients))
        if len(self.point.coords) != len(monomial_exponents(3, degree)):
            raise ShapeMismatch("coefficient count does not match the degree")

    @property
    def coefficients(self) -> tuple:
        return self.point.coords

    def contains(self, pt: ProjectivePoint) -> bool:
        total = Fraction(0)
        for coeff, expo in zip(self.point.coords, monomial_exponents(3, self.degree)):
            prod = coeff
            for c, e in zip(pt.coords, expo):
                if e:
                    prod *= c ** e
            total += prod
        return total == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlaneChowPoint):
            return NotImplemented
        return self.degree == other.degree and self.point == other.point

    def __hash__(self):
        return hash((self.degree, self.point))

    def __repr__(self):
        return f"PlaneChowPoint(degree={self.degree}, {self.point})"


def _monomial_row(coords_int: Sequence[int], expos: Sequence[tuple]) -> list:
    row = []
    for expo in expos:
        prod = 1
        for c, e in zip(coords_int, expo):
            if e:
                prod *= c ** e
        row.append(prod)
    return row


def recover_plane_curve(points: Sequence[ProjectivePoint], d: int) -> PlaneChowPoint:
    """Unique degree-d plane curve through the given points.

    Solves the linear system of monomial evaluations by exact fraction-free
    elimination.  NoCurve if only the zero form fits, AmbiguousCurve if the
    nullspace has dimension > 1.
    """
    if d < 1:
        raise ValueError("curve degree must be >= 1")
    if any(p.dim != 2 for p in points):
        raise ShapeMismatch("recovery needs points of the projective plane")
    if len(set(points)) != len(points):
        raise ValueError("points must be pairwise projectively distinct")
    expos = monomial_exponents(3, d)
    rows = [_monomial_row(_clear_denominators(p.coords), expos) for p in points]
    basis = nullspace(rows, len(expos))
    if not basis:
        raise NoCurve(f"the points lie on no curve of degree {d}")
    if len(basis) > 1:
        raise AmbiguousCurve(len(basis))
    return PlaneChowPoint(d, basis[0])


def chow_determinant_vector(moving_points: Sequence[Sequence[Poly]], d: int,
                            t0) -> PlaneChowPoint:
    """Coefficient tuple of the degree-d curve through moving points at t0,
    as the signed-cofactor vector of the (K-1) x K evaluation matrix
    (K = C(d+2, 2)); position k contributes sign (-1)^k (0-based).

    Agrees projectively with recover_plane_curve whenever both succeed.
    """
    expos = monomial_exponents(3, d)
    K = len(expos)
    if len(moving_points) != K - 1:
        raise ShapeMismatch(f"need exactly {K - 1} moving points for degree {d}")
    t0 = Fraction(t0)
    rows = []
    for coords in moving_points:
        vals = [(p if isinstance(p, Poly) else Poly(p))(t0) for p in coords]
        if all(v == 0 for v in vals):
            raise ZeroVector(f"moving point degenerates at t = {t0}")
        rows.append(_monomial_row(_clear_denominators(vals), expos))
    cof = []
    for k in range(K):
        minor = [r[:k] + r[k + 1:] for r in rows]
        cof.append((-1) ** k * determinant(minor))
    if all(c == 0 for c in cof):
        raise DegenerateSubsystem(f"all maximal minors vanish at t = {t0}")
    return PlaneChowPoint(d, cof)


# ---------------------------------------------------------------------------
# projecting parameterized curves to plane Chow points

@dataclass(frozen=True)
class CurveRecovery:
    chow: PlaneChowPoint
    degree: int
    expected_degree: int

    @property
    def multiplicity_estimate(self) -> Optional[int]:
        if self.degree and self.expected_degree % self.degree == 0:
            return self.expected_degree // self.degree
        return None


def _recover_with_verification(points: Sequence[ProjectivePoint], d: int):
    """recover_plane_curve on a minimal subsystem, verified on the rest.

    Returns the PlaneChowPoint, raises NoCurve/AmbiguousCurve like the full
    elimination would, but avoids eliminating all rows in the common case.
    """
    K = len(monomial_exponents(3, d))
    head = list(points[:K + 1])
    try:
        chow = recover_plane_curve(head, d)
    except AmbiguousCurve:
        return recover_plane_curve(points, d)  # let every row vote
    if all(chow.contains(p) for p in points[K + 1:]):
        return chow
    raise NoCurve(f"the points lie on no curve of degree {d}")


def _composite_images(curve: ParameterizedCurve, l: int, pi: LinearProjection,
                      forms: Optional[Sequence[HomogeneousPolynomial]],
                      needed: int, budget: int):
    images = []
    seen = set()
    skipped = 0
    stream = parameter_stream()
    for _ in range(budget):
        t = next(stream)
        try:
            p = curve.point_at(t)
            if forms is not None:
                vals = [f.evaluate(p.coords) for f in forms]
                q = pi.apply(ProjectivePoint(vals))
            else:
                q = pi.apply(veronese_embed(p, l))
        except (ZeroVector, InLightSource):
            skipped += 1
            continue
        if q not in seen:
            seen.add(q)
            images.append(q)
        if len(images) >= needed:
            return images
    return images


def project_curve_to_plane_chow(curve: ParameterizedCurve, l: int,
                                pi: LinearProjection,
                                forms: Optional[Sequence[HomogeneousPolynomial]] = None
                                ) -> CurveRecovery:
    """Chow point of the plane image of the curve under (perturbed) Veronese
    followed by the projection.

    Samples (l*deg)^2 + 1 distinct image points and recovers the curve of
    lowest degree through them; a recovered degree below l*deg(curve) is a
    multiplicity/degeneration diagnostic, not an error.
    """
    expected = l * curve.degree
    if expected < 1:
        raise GeometryError("constant curves have no plane image curve")
    needed = expected * expected + 1
    budget = 8 * needed + 64
    images = _composite_images(curve, l, pi, forms, needed, budget)
    if not images:
        raise ImageIsPoint("the composite map is undefined on every sample")
    if len(images) == 1:
        raise ImageIsPoint(f"all samples map to {images[0]}")
    if len(images) < needed:
        raise GeometryError(
            f"only {len(images)} distinct images in {budget} samples "
            f"(needed {needed}); the composite looks degenerate")
    chow, degree = _recover_minimal_degree(images, expected)
    return CurveRecovery(chow=chow, degree=degree, expected_degree=expected)


def _recover_minimal_degree(images: Sequence[ProjectivePoint], expected: int):
    """(chow, actual degree) of the unique curve through the images.

    Recovery at the expected degree is unique exactly when no lower-degree
    curve carries every point, so the common case needs one elimination;
    ambiguity triggers an ascending probe for the actual (smaller) degree.
    """
    try:
        return _recover_with_verification(images, expected), expected
    except AmbiguousCurve as ambiguous:
        for dd in range(1, expected):
            try:
                return _recover_with_verification(images, dd), dd
            except (NoCurve, AmbiguousCurve):
                continue
        raise ambiguous
    except NoCurve:
        for dd in range(1, expected):
            try:
                return _recover_with_verification(images, dd), dd
            except (NoCurve, AmbiguousCurve):
                continue
        raise


@dataclass(frozen=True)
class MatchResult:
    matched: bool
    distinguished_at: Optional[int] = None  # 1-based projection index

    def __str__(self):
        return "Match" if self.matched else f"Distinguished({self.distinguished_at})"


def match_via_projections(c1: ParameterizedCurve, c2: ParameterizedCurve,
                          pis: Sequence[LinearProjection], l: int) -> MatchResult:
    """Compare two curves through their projected plane Chow points.

    Match is returned only when every projection yields projectively equal
    recovered curves; the first disagreement wins.
    """
    for idx, pi in enumerate(pis, start=1):
        r1 = project_curve_to_plane_chow(c1, l, pi)
        r2 = project_curve_to_plane_chow(c2, l, pi)
        if r1.degree != r2.degree or r1.chow != r2.chow:
            return MatchResult(matched=False, distinguished_at=idx)
    return MatchResult(matched=True)


@dataclass(frozen=True)
class ImageCheck:
    kind: str  # "Curve" | "Point" | "Undefined"
    degree: Optional[int] = None
    expected_degree: Optional[int] = None

    @property
    def degree_matches(self) -> Optional[bool]:
        if self.degree is None or self.expected_degree is None:
            return None
        return self.degree == self.expected_degree


def image_dimension_check(f0: HomogeneousPolynomial, f1: HomogeneousPolynomial,
                          f2: HomogeneousPolynomial, curve: ParameterizedCurve,
                          sample_count: int) -> ImageCheck:
    """Is the image of the curve under [f0, f1, f2] a point or a curve?

    Evaluates the triple along the curve; when the image is a curve its
    degree is recovered and compared against l * deg(curve).
    """
    if not (f0.degree == f1.degree == f2.degree):
        raise ShapeMismatch("the three forms must share one degree")
    l = f0.degree
    stream = parameter_stream()
    images = []
    seen = set()
    defined = 0
    for _ in range(sample_count):
        t = next(stream)
        try:
            p = curve.point_at(t)
        except ZeroVector:
            continue
        vals = [f0.evaluate(p.coords), f1.evaluate(p.coords), f2.evaluate(p.coords)]
        if all(v == 0 for v in vals):
            continue
        defined += 1
        q = ProjectivePoint(vals)
        if q not in seen:
            seen.add(q)
            images.append(q)
    if defined == 0:
        return ImageCheck(kind="Undefined")
    expected = l * curve.degree
    if len(images) == 1:
        return ImageCheck(kind="Point", expected_degree=expected)
    needed = expected * expected + 1
    while len(images) < needed:
        t = next(stream)
        try:
            p = curve.point_at(t)
        except ZeroVector:
            continue
        vals = [f0.evaluate(p.coords), f1.evaluate(p.coords), f2.evaluate(p.coords)]
        if all(v == 0 for v in vals):
            continue
        q = ProjectivePoint(vals)
        if q not in seen:
            seen.add(q)
            images.append(q)
    try:
        _, degree = _recover_minimal_degree(images, expected)
    except GeometryError:
        return ImageCheck(kind="Curve", degree=None, expected_degree=expected)
    return ImageCheck(kind="Curve", degree=degree, expected_degree=expected)


# ---------------------------------------------------------------------------
# Segre embeddings

def segre_embed(pts: Sequence[ProjectivePoint]) -> ProjectivePoint:
    """Products of one coordinate per factor, row-major index order."""
    if not pts:
        raise ZeroVector("segre_embed needs at least one point")
    vals = []
    for combo in itertools.product(*[p.coords for p in pts]):
        prod = Fraction(1)
        for c in combo:
            prod *= c
        vals.append(prod)
    return ProjectivePoint(vals)


def _flat_index(idx: Sequence[int], k: int, r: int) -> int:
    out = 0
    for i in idx:
        out = out * (k + 1) + i
    return out


def segre_pushforward_equations(F: HomogeneousPolynomial, k: int, r: int) -> list:
    """Equations cutting out the Segre image of the hypersurface {F = 0}.

    Emits the substituted forms F_{i_1..i_r} (degree d_1+...+d_r) plus the
    rank-1 binomial relations of the Segre image (degree 2); every emitted
    equation has degree <= max(r, d_1+...+d_r).
    """
    if F.blocks is None or F.blocks != (k + 1,) * r:
        raise ShapeMismatch(f"need a multihomogeneous form on {r} blocks of "
                            f"{k + 1} variables")
    nz = (k + 1) ** r
    total_degree = sum(F.multidegree)
    out = []
    seen_forms = set()
    for assign in itertools.product(range(k + 1), repeat=r):
        terms: dict = {}
        for expo, coeff in F.terms.items():
            z_expo = [0] * nz
            offs = 0
            for j in range(r):
                block = expo[offs:offs + k + 1]
                offs += k + 1
                for t, e in enumerate(block):
                    if e:
                        idx = list(assign)
                        idx[j] = t
                        z_expo[_flat_index(idx, k, r)] += e
            key = tuple(z_expo)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            continue
        poly = HomogeneousPolynomial(nz, terms)
        if poly.degree != total_degree:
            raise ShapeMismatch("substituted form has unexpected degree")
        if poly not in seen_forms:
            seen_forms.add(poly)
            out.append(poly)
    if r >= 2:
        out.extend(_segre_relations(k, r))
    for poly in out:
        if poly.degree > max(r, total_degree):
            raise ShapeMismatch("emitted equation exceeds the degree bound")
    return out


def _segre_relations(k: int, r: int) -> list:
    """Binomial quadrics Z_I Z_J - Z_I' Z_J' (swap one differing position)."""
    nz = (k + 1) ** r
    indices = list(itertools.product(range(k + 1), repeat=r))
    rels = []
    seen = set()
    for I, J in itertools.combinations(indices, 2):
        diff = [p for p in range(r) if I[p] != J[p]]
        if len(diff) < 2:
            continue  # swapping the only differing slot is the same monomial pair
        for p in diff:
            K = list(I)
            L = list(J)
            K[p], L[p] = J[p], I[p]
            a, b = _flat_index(I, k, r), _flat_index(J, k, r)
            c, d = _flat_index(K, k, r), _flat_index(L, k, r)
            left = tuple(sorted((a, b)))
            right = tuple(sorted((c, d)))
            if left == right:
                continue
            key = (min(left, right), max(left, right))
            if key in seen:
                continue
            seen.add(key)
            terms: dict = {}
            for pair, sgn in ((left, 1), (right, -1)):
                expo = [0] * nz
                expo[pair[0]] += 1
                expo[pair[1]] += 1
                key2 = tuple(expo)
                terms[key2] = terms.get(key2, Fraction(0)) + sgn
            terms = {e: c2 for e, c2 in terms.items() if c2 != 0}
            if terms:
                rels.append(HomogeneousPolynomial(nz, terms))
    return rels


def dual_degree_transversality_budget(delta0: int, M: int) -> int:
    """Candidate hyperplane count C(4*delta0 + M, M) guaranteeing one that
    meets any pair of degree-delta0 curves transversally."""
    if delta0 < 1 or M < 3:
        raise ValueError("need delta0 >= 1 and M >= 3")
    return math.comb(4 * delta0 + M, M)


# ---------------------------------------------------------------------------
# plain-text serialization (rational tuples and sparse term lists)

def point_record(pt: ProjectivePoint) -> list:
    return [str(c) for c in pt.coords]


def point_from_record(rec: Sequence[str]) -> ProjectivePoint:
    return ProjectivePoint([Fraction(c) for c in rec])


def polynomial_record(f: HomogeneousPolynomial) -> dict:
    rec = {"nvars": f.nvars,
           "terms": {",".join(map(str, e)): str(c) for e, c in sorted(f.terms.items())}}
    if f.blocks is not None:
        rec["blocks"] = list(f.blocks)
    return rec


def polynomial_from_record(rec: dict) -> HomogeneousPolynomial:
    terms = {tuple(int(x) for x in key.split(",")): Fraction(val)
             for key, val in rec["terms"].items()}
    blocks = tuple(rec["blocks"]) if rec.get("blocks") else None
    return HomogeneousPolynomial(rec["nvars"], terms, blocks=blocks)


def curve_record(c: ParameterizedCurve) -> list:
    return [[str(v) for v in p.coeffs] for p in c.coords]


def curve_from_record(rec: Sequence) -> ParameterizedCurve:
    return ParameterizedCurve([[Fraction(v) for v in coeffs] for coeffs in rec])
