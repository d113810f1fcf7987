"""Generating series as exact rational fractions with denominators that
are products of factors (1 - Z^k).

A series is a pair: an integer numerator polynomial (list of coefficients,
increasing degree) and a multiset of denominator exponents.  Nothing is
ever cancelled silently; rewriting to another denominator is an exact
polynomial division that either succeeds or reports failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .polynomials import fine_degree, monomials_of_degree


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (0,)


def poly_mul(a, b) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _one_minus_z(k: int) -> list[int]:
    coeffs = [0] * (k + 1)
    coeffs[0] = 1
    coeffs[k] = -1
    return coeffs


def expand_denominator(exponents) -> list[int]:
    out = [1]
    for k in exponents:
        out = poly_mul(out, _one_minus_z(k))
    return out


def poly_divide_exact(num, den):
    """Quotient of integer polynomials, or None when the division has a
    remainder.  Coefficient lists, increasing degree; exact arithmetic."""
    num = [Fraction(c) for c in num]
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("zero denominator polynomial")
    deg_d = len(den) - 1
    lead = Fraction(den[-1])
    quot = [Fraction(0)] * max(1, len(num) - deg_d)
    work = list(num)
    for i in range(len(work) - 1, deg_d - 1, -1):
        c = work[i]
        if not c:
            continue
        q = c / lead
        quot[i - deg_d] = q
        for j, d in enumerate(den):
            work[i - deg_d + j] -= q * d
    if any(work[:deg_d]) or any(not q.denominator == 1 for q in quot):
        return None
    return [int(q) for q in quot]


@dataclass(frozen=True)
class RationalSeries:
    """numerator / product over den of (1 - Z^k)."""

    num: tuple[int, ...]
    den: tuple[int, ...]

    @staticmethod
    def make(num, den) -> "RationalSeries":
        den = tuple(sorted(den))
        if not den:
            raise ValueError("denominator multiset must be nonempty")
        if any(k < 1 for k in den):
            raise ValueError("denominator exponents must be positive")
        return RationalSeries(_trim(list(num)), den)

    def coefficients(self, upto: int) -> list[int]:
        """Series coefficients c_0 .. c_upto by power-series expansion."""
        c = [0] * (upto + 1)
        for i, v in enumerate(self.num[: upto + 1]):
            c[i] = v
        for k in self.den:
            # divide by (1 - Z^k): running partial sums with stride k
            for i in range(k, upto + 1):
                c[i] += c[i - k]
        return c

    def coefficient(self, n: int) -> int:
        return self.coefficients(n)[n]

    def rewrite(self, new_den) -> "RationalSeries | None":
        """Exact change of denominator, or None when a pole is not cleared."""
        new_den = tuple(sorted(new_den))
        num = list(self.num)
        for k in new_den:
            num = poly_mul(num, _one_minus_z(k))
        for k in self.den:
            num = poly_divide_exact(num, _one_minus_z(k))
            if num is None:
                return None
        return RationalSeries.make(num, new_den)

    def __str__(self):
        return f"{format_z_polynomial(self.num)} / {format_denominator(self.den)}"

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": list(self.den)}

    @staticmethod
    def from_json(data: dict) -> "RationalSeries":
        return RationalSeries.make(data["num"], data["den"])


def format_z_polynomial(coeffs) -> str:
    chunks = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            body = str(abs(c))
        else:
            z = "Z" if i == 1 else f"Z^{i}"
            body = z if abs(c) == 1 else f"{abs(c)}{z}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(("+" if c > 0 else "-") + body)
    return "".join(chunks) if chunks else "0"


def format_denominator(den) -> str:
    return "".join("(1-Z)" if k == 1 else f"(1-Z^{k})" for k in sorted(den))


class SeriesFitError(ValueError):
    """Raised when a coefficient sequence does not fit over a denominator."""


def fit_series(counts: list[int], den, margin: int) -> RationalSeries:
    """Recover the integer numerator of sum(counts[n] Z^n) over the given
    denominator, verifying ``margin`` coefficients beyond its degree.

    The numerator is the convolution of the counts with the expanded
    denominator; the fit is rejected at the first surplus coefficient.
    """
    den = tuple(sorted(den))
    dpoly = expand_denominator(den)
    deg_d = len(dpoly) - 1
    need = deg_d + margin + 1
    if len(counts) < need:
        raise SeriesFitError(f"need {need} coefficients, got {len(counts)}")
    num = [0] * need
    for i in range(need):
        num[i] = sum(
            counts[i - j] * dpoly[j] for j in range(min(i, deg_d) + 1)
        )
    for i in range(deg_d + 1, need):
        if num[i]:
            raise SeriesFitError(
                f"denominator {den} insufficient: surplus coefficient at degree {i}"
            )
    return RationalSeries.make(num[: deg_d + 1], den)


def hilbert_series(G, den, margin: int = 10) -> RationalSeries:
    """Hilbert series of the invariant ring of ``G`` over the given
    denominator, from orbit counts per degree."""
    from .orbits import orbit_count

    den = tuple(sorted(den))
    upto = sum(den) + margin
    counts = [orbit_count(G, n) for n in range(upto + 1)]
    return fit_series(counts, den, margin)


# -- nonnegativity search ----------------------------------------------------

@dataclass(frozen=True)
class NonnegativitySearch:
    """Outcome of the search for a denominator giving a nonnegative numerator."""

    found: "RationalSeries | None"
    tried: tuple[tuple[int, ...], ...]

    @property
    def exhausted(self) -> bool:
        return self.found is None


def denominator_candidates(max_factors: int, max_exp: int):
    """Multisets {1 = n_1 <= ... <= n_j}, j <= max_factors, exponents
    bounded by max_exp, in graded order (size, then sum, then lex)."""
    out = []
    for j in range(1, max_factors + 1):
        for rest in itertools.combinations_with_replacement(range(1, max_exp + 1), j - 1):
            out.append((1,) + rest)
    out.sort(key=lambda d: (len(d), sum(d), d))
    return out


def nonnegativity_search(s: RationalSeries, max_factors: int, max_exp: int) -> NonnegativitySearch:
    if max_factors < 1 or max_exp < 1:
        raise ValueError("bounds must be positive")
    tried = []
    for den in denominator_candidates(max_factors, max_exp):
        tried.append(den)
        rewritten = s.rewrite(den)
        if rewritten is not None and all(c >= 0 for c in rewritten.num):
            return NonnegativitySearch(rewritten, tuple(tried))
    return NonnegativitySearch(None, tuple(tried))


# -- quasi-polynomial form ---------------------------------------------------

@dataclass(frozen=True)
class QuasiPolynomial:
    """value(n) = P_{n mod period}(n) for n >= threshold, with rational
    coefficient polynomials stored lowest degree first."""

    period: int
    polynomials: tuple[tuple[Fraction, ...], ...]
    threshold: int

    def evaluate(self, n: int) -> Fraction:
        coeffs = self.polynomials[n % self.period]
        acc = Fraction(0)
        power = 1
        for c in coeffs:
            acc += c * power
            power *= n
        return acc

    @property
    def degree(self) -> int:
        return max(
            (len(p) - 1 - next(i for i, c in enumerate(reversed(p)) if c or len(p) == 1))
            for p in self.polynomials
        )


def _fit_poly(points: list[tuple[int, Fraction]]) -> tuple[Fraction, ...]:
    """Interpolating polynomial through the points, by exact elimination."""
    k = len(points)
    rows = []
    for x, y in points:
        rows.append([Fraction(x) ** j for j in range(k)] + [Fraction(y)])
    # Gaussian elimination with partial pivoting over the rationals
    for col in range(k):
        pivot = next(r for r in range(col, k) if rows[r][col])
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(k):
            if r != col and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    coeffs = [rows[i][k] for i in range(k)]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def quasi_polynomial(s: RationalSeries, verify: int = 50) -> QuasiPolynomial:
    """Eventual quasi-polynomial form of the series coefficients.

    One polynomial of degree < number of denominator factors is fitted
    per residue class modulo the lcm of the exponents, then checked
    against ``verify`` further coefficients.
    """
    period = lcm(*s.den)
    k = len(s.den)
    deg_num = len(s.num) - 1
    deg_den = sum(s.den)
    threshold = max(0, deg_num - deg_den + 1)
    upto = threshold + period * k + period * 2 + verify
    coeffs = s.coefficients(upto)
    polys = []
    for r in range(period):
        start = threshold + ((r - threshold) % period)
        xs = [start + period * i for i in range(k)]
        polys.append(_fit_poly([(x, Fraction(coeffs[x])) for x in xs]))
    qp = QuasiPolynomial(period, tuple(polys), threshold)
    for n in range(threshold, upto + 1):
        if qp.evaluate(n) != coeffs[n]:
            raise SeriesFitError(f"quasi-polynomial mismatch at n={n}")
    return qp


# -- fine Hilbert data --------------------------------------------------------

def fine_hilbert_table(G, bound) -> dict[tuple[int, ...], int]:
    """Orbit counts per fine degree, over the box 0 <= r <= bound."""
    from .orbits import orbit_partition

    bound = tuple(bound)
    if len(bound) != G.n:
        raise ValueError("bound must have one entry per layer size")
    table: dict[tuple[int, ...], int] = {}
    boxes = [range(b + 1) for b in bound]
    degrees = sorted({sum((i + 1) * r for i, r in enumerate(reps))
                      for reps in itertools.product(*boxes)})
    by_degree = {n: orbit_partition(G, n) for n in degrees}
    for reps in itertools.product(*boxes):
        n = sum((i + 1) * r for i, r in enumerate(reps))
        table[reps] = sum(
            1 for o in by_degree[n] if fine_degree(next(iter(o))) == reps
        )
    return table
