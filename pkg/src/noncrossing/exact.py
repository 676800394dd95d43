"""Exact counting formulas for uniform non-crossing partitions.

Arbitrary-precision rational arithmetic throughout: Catalan numbers,
block-count moments, per-size moments and covariances, the marked
counting polynomials extracted by Lagrange inversion, the closed-form
singleton generating function, and the bounded-block-size series behind
the largest-block law.  Only the asymptotic_* leading-term evaluators
return floats; everything else never rounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .series import BivPoly, ExactSeries, QPoly

POLYNOMIAL_GUARD = 200
SERIES_GUARD = 4096


class ConsistencyError(ArithmeticError):
    """Two formulas that must agree exactly did not. Should never fire."""


def _binom(a: int, b: int) -> int:
    """Binomial coefficient with the zero convention off the triangle."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.comb(2 * n, n) // (n + 1)


def mean_blocks(n: int) -> Fraction:
    """Expected number of blocks: (n+1)/2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(n + 1, 2)


def var_blocks_total(n: int) -> Fraction:
    """Variance of the number of blocks: (n^2-1)/(4(2n-1))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(n * n - 1, 4 * (2 * n - 1))


def mean_blocks_of_size(n: int, l: int) -> Fraction:
    """Expected number of size-l blocks.

    Computes the product form n/2^(l+1) * prod_{j=0..l} (1 + (2-j)/(2n-j))
    and cross-checks it against the equivalent binomial quotient
    binom(2n-l-1, n-1)/Catalan(n); a mismatch raises ConsistencyError.
    """
    if not 1 <= l <= n:
        raise ValueError("need 1 <= l <= n")
    product = Fraction(n, 2 ** (l + 1))
    for j in range(l + 1):
        product *= Fraction(2 * n - j + (2 - j), 2 * n - j)
    binomial_form = Fraction(_binom(2 * n - l - 1, n - 1), catalan(n))
    if product != binomial_form:
        raise ConsistencyError(
            f"product form {product} != binomial form {binomial_form} "
            f"for n={n}, l={l}"
        )
    return product


def second_factorial_moment(n: int, l: int) -> Fraction:
    """E[X(X-1)] for the number of size-l blocks."""
    if not 1 <= l <= n:
        raise ValueError("need 1 <= l <= n")
    return Fraction(n * _binom(2 * n - 2 * l - 2, n - 2), catalan(n))


def var_blocks_of_size(n: int, l: int) -> Fraction:
    """Exact variance via the second factorial moment."""
    mean = mean_blocks_of_size(n, l)
    return second_factorial_moment(n, l) + mean - mean * mean


def cross_moment(n: int, k: int, l: int) -> Fraction:
    """E[X^(k) X^(l)] for counts of two distinct block sizes."""
    if k == l:
        raise ValueError("sizes must differ; use the variance path for k == l")
    if not (1 <= k <= n and 1 <= l <= n):
        raise ValueError("sizes must lie in 1..n")
    return Fraction(n * _binom(2 * n - k - l - 2, n - 2), catalan(n))


def covariance(n: int, k: int, l: int) -> Fraction:
    return cross_moment(n, k, l) - mean_blocks_of_size(n, k) * mean_blocks_of_size(n, l)


def asymptotic_var(l: int, n: int) -> float:
    """Leading term of the size-l count variance: n[2^(l+2)-(l-1)^2-2]/2^(2l+3)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return n * (2 ** (l + 2) - (l - 1) ** 2 - 2) / 2 ** (2 * l + 3)


def asymptotic_cov(k: int, l: int, n: int) -> float:
    """Leading term of the covariance: -n[2+(k-1)(l-1)]/2^(k+l+3)."""
    if k < 1 or l < 1:
        raise ValueError("sizes must be >= 1")
    return -n * (2 + (k - 1) * (l - 1)) / 2 ** (k + l + 3)


def _check_poly_guard(n: int, guard: int) -> None:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > guard:
        raise ValueError(f"n={n} above guard {guard}; raise the guard explicitly")


def blocks_polynomial(n: int, l: int, *, guard: int = POLYNOMIAL_GUARD) -> QPoly:
    """Counting polynomial of size-l blocks over NC partitions of [n].

    The q^k coefficient counts partitions with exactly k blocks of size l.
    Extracted by Lagrange inversion: the coefficients sit inside
    [u^n] (1/(1-u) + u^l (q-1))^(n+1) / (n+1), expanded binomially.
    """
    _check_poly_guard(n, guard)
    if not 1 <= l <= max(n, 1):
        raise ValueError("need 1 <= l <= n")
    if n == 0:
        return QPoly.one()
    acc = [0] * (n // l + 1)
    for j in range(n // l + 1):
        weight = math.comb(n + 1, j) * _binom(2 * n - j * (l + 1), n - j * l)
        if not weight:
            continue
        # distribute weight * (q-1)^j over powers of q
        for i in range(j + 1):
            acc[i] += weight * math.comb(j, i) * (-1 if (j - i) % 2 else 1)
    coeffs = []
    for value in acc:
        q, r = divmod(value, n + 1)
        if r:
            raise ConsistencyError("counting polynomial is not integral")
        coeffs.append(Fraction(q))
    return QPoly(coeffs)


def joint_polynomial(
    n: int, k: int, l: int, *, guard: int = POLYNOMIAL_GUARD
) -> BivPoly:
    """Joint counting polynomial of size-k and size-l block counts.

    Coefficient of p^a q^b counts NC partitions of [n] with a blocks of
    size k and b blocks of size l.  Same Lagrange extraction with a
    three-term bracket.
    """
    _check_poly_guard(n, guard)
    if k == l:
        raise ValueError("marked sizes must differ")
    if not (1 <= k and 1 <= l):
        raise ValueError("sizes must be >= 1")
    terms: dict[tuple[int, int], int] = {}
    for a in range(n // k + 1):
        for b in range((n - a * k) // l + 1):
            m = n - a * k - b * l
            weight = (
                math.comb(n + 1, a)
                * math.comb(n + 1 - a, b)
                * _binom(m + n - a - b, m)
            )
            if not weight:
                continue
            for i in range(a + 1):
                wa = weight * math.comb(a, i) * (-1 if (a - i) % 2 else 1)
                for j in range(b + 1):
                    w = wa * math.comb(b, j) * (-1 if (b - j) % 2 else 1)
                    terms[i, j] = terms.get((i, j), 0) + w
    out: dict[tuple[int, int], Fraction] = {}
    for key, value in terms.items():
        q, r = divmod(value, n + 1)
        if r:
            raise ConsistencyError("joint counting polynomial is not integral")
        out[key] = Fraction(q)
    return BivPoly(out)


def singleton_gf_series(order: int, *, guard: int = POLYNOMIAL_GUARD) -> ExactSeries:
    """Closed-form generating function of singleton counts, as a series.

    Expands (1 + (1-q)z - sqrt(1 - 2(1+q)z + (q^2+2q-3)z^2)) / (2z(1+(1-q)z))
    with polynomial-in-q coefficients; the z^n coefficient must equal
    blocks_polynomial(n, 1), which the tests enforce coefficient by
    coefficient.
    """
    _check_poly_guard(order, guard)
    work = order + 1
    one = QPoly.one()
    zero = QPoly.zero()
    radicand = ExactSeries(
        [one, QPoly((-2, -2)), QPoly((-3, 2, 1))] + [zero] * (work - 2), work
    )
    root = radicand.sqrt()
    numerator = [one - root.coefficient(0), QPoly((1, -1)) - root.coefficient(1)]
    numerator += [-root.coefficient(i) for i in range(2, work + 1)]
    shifted = ExactSeries(numerator, work).shift_down()
    denominator = ExactSeries([one, QPoly((1, -1))] + [zero] * (order - 1), order)
    return (shifted / denominator).scale(Fraction(1, 2))


def max_block_series(k: int, n_max: int, *, guard: int = SERIES_GUARD) -> ExactSeries:
    """Series y(z) counting NC partitions with all blocks of size <= k.

    y = z * (1 + y + ... + y^k) solved degree by degree; the coefficient
    of z^(n+1) counts the partitions of [n] whose blocks all have size at
    most k.  Intended for moderate orders; single large coefficients are
    cheaper through bounded_block_count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_poly_guard(n_max, guard)
    y = [0] * (n_max + 1)
    if n_max >= 1:
        y[1] = 1
    # powers[j][d] = coefficient of z^d in y^j, filled degree by degree
    powers: list[list[int]] = [[0] * (n_max + 1) for _ in range(k + 1)]
    powers[0][0] = 1
    if k >= 1:
        powers[1] = y
    for n in range(2, n_max + 1):
        d = n - 1
        for j in range(2, k + 1):
            total = 0
            upper = d - (j - 1)
            prev = powers[j - 1]
            for i in range(1, upper + 1):
                if y[i] and prev[d - i]:
                    total += y[i] * prev[d - i]
            powers[j][d] = total
        y[n] = sum(powers[j][d] for j in range(1, k + 1))
    return ExactSeries([Fraction(v) for v in y], n_max)


def bounded_block_counts(n: int, ks: Iterable[int]) -> dict[int, int]:
    """Count NC partitions of [n] with all blocks of size <= k, for many k.

    Lagrange inversion gives the alternating sum
    sum_j (-1)^j binom(n+1, j) binom(2n - j(k+1), n) / (n+1); one
    descending sweep of binom(a, n) over a = 2n..n serves every k at once.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    ks = sorted(set(ks))
    if any(k < 1 for k in ks):
        raise ValueError("k must be >= 1")
    if n == 0:
        return {k: 1 for k in ks}
    # schedule[a] lists (k, j, sign); running binomials binom(n+1, j) are
    # updated per k as its arithmetic progression is visited
    schedule: dict[int, list[int]] = {}
    for idx, k in enumerate(ks):
        for j in range(n // (k + 1) + 1):
            schedule.setdefault(2 * n - j * (k + 1), []).append(idx)
    sums = [0] * len(ks)
    next_j = [0] * len(ks)
    running_binom = [1] * len(ks)  # binom(n+1, j) for the next j of each k
    value = math.comb(2 * n, n)
    for a in range(2 * n, n - 1, -1):
        for idx in schedule.get(a, ()):
            j = next_j[idx]
            term = running_binom[idx] * value
            sums[idx] += -term if j % 2 else term
            running_binom[idx] = running_binom[idx] * (n + 1 - j) // (j + 1)
            next_j[idx] = j + 1
        if a > n:
            value = value * (a - n) // a
    out = {}
    for idx, k in enumerate(ks):
        q, r = divmod(sums[idx], n + 1)
        if r:
            raise ConsistencyError("bounded-block count is not integral")
        out[k] = q
    return out


def bounded_block_count(n: int, k: int) -> int:
    """Count NC partitions of [n] with all blocks of size <= k."""
    return bounded_block_counts(n, [k])[k]


def largest_block_cdf_exact(
    n: int, k: int, *, guard: int = SERIES_GUARD
) -> Fraction:
    """P[largest block <= k] for a uniform NC partition of [n], exactly."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if n > guard:
        raise ValueError(f"n={n} above guard {guard}; raise the guard explicitly")
    return Fraction(bounded_block_count(n, k), catalan(n))


def lagrange_coefficient(phi: ExactSeries, n: int) -> Fraction:
    """n-th coefficient of the inverse of z = u/phi(u): (1/n)[u^(n-1)] phi^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if phi.coefficient(0) == 0:
        raise ValueError("phi must have a nonzero constant term")
    if phi.order < n - 1:
        raise ValueError("phi is truncated below order n-1")
    truncated = ExactSeries(phi.coeffs[:n], n - 1)
    powered = truncated.pow(n)
    return Fraction(powered.coefficient(n - 1)) / n
