"""Independent oracles for the test suite.

Everything here is computed with gmpy2 (GMP integers) and mpmath, entirely
separate from the package's decimal-based interval engine, so agreement is a
genuine cross-check.  Plain-integer formula re-implementations double-check
the constant pipeline.
"""

from __future__ import annotations

import sys

import gmpy2
import mpmath

mpmath.mp.dps = 50
sys.set_int_max_str_digits(20_000_000)


def binomial_exact(n: int, k: int) -> int:
    return int(gmpy2.bincoef(n, k))


def factorial_exact(n: int) -> int:
    return int(gmpy2.fac(n))


def log10_of_int(x: int) -> mpmath.mpf:
    return mpmath.log10(mpmath.mpf(x))


def log10_binomial(n: int, k: int) -> mpmath.mpf:
    c = binomial_exact(n, k)
    return log10_of_int(c) if c > 1 else mpmath.mpf(0)


def log10_factorial(n: int) -> mpmath.mpf:
    """Via loggamma, accurate to well below the package enclosure widths."""
    return mpmath.loggamma(mpmath.mpf(n) + 1) / mpmath.log(10)


def log10_wide_binomial(big_m: int, c: int) -> mpmath.mpf:
    """log10 C(big_m + c, c) when big_m dwarfs c.

    sum_{j=1..c} log10(big_m + j) = c*log10(big_m) + E with
    0 < E < c*(c+1)/(2*big_m*ln 10), utterly negligible here.
    """
    return c * log10_of_int(big_m) - log10_of_int(factorial_exact(c))


def defranchis_value(g: int) -> mpmath.mpf:
    gm1 = mpmath.mpf(g - 1)
    core = mpmath.mpf("0.5") * (2 * mpmath.sqrt(6) * gm1 + 1) ** (2 + 2 * g * g)
    core = core * g * g * gm1 * mpmath.sqrt(2) ** (g * (g - 1))
    return 42 * gm1 * (core + 1)


# ---------------------------------------------------------------------------
# plain-integer re-implementations of the constant pipeline

def base_constants(g: int, q: int, s: int) -> dict:
    m = 1250 * (g * q + s)
    d = 5 * (2 * g - 2)
    l = 4 * m - 3
    delta0 = l * d
    return {
        "m": m, "d": d, "l": l, "delta0": delta0,
        "N": delta0 * delta0 + 1,
        "chow_dim": (delta0 + 2) * (delta0 + 1) // 2,  # C(ld+2, 2)
    }


def d_constant(g: int, q: int, s: int) -> int:
    c = base_constants(g, q, s)
    return (c["chow_dim"] - 1) * c["l"] ** 2 * c["d"] * 500 * c["N"] * (g * q + s)


def log10_Q(g: int, q: int, s: int) -> mpmath.mpf:
    c = base_constants(g, q, s)
    big_m = binomial_exact(c["l"] + c["m"], c["m"]) - 1
    return (log10_of_int(c["delta0"]) + log10_of_int(big_m)
            + log10_wide_binomial(big_m, 4 * c["delta0"]))


def mordell_g_prime(g: int) -> int:
    return 2 + 2 ** (2 * g + 1) * (g - 1)


def mordell_theta(g: int) -> int:
    t = 2 ** (2 * g)
    return t * (t - 1) * 2 ** (2 * (1 + t * (g - 1))) * 2


def mordell_C(g: int, q: int, s: int) -> int:
    theta = mordell_theta(g)
    return 1 + theta * (q - 1) + (theta - 1) * s
