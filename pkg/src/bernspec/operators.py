"""Isometries on digit words, exponential expansions, and the scaled operator.

The two isometries act on basis exponentials indexed by spectrum points:
one sends a point to 2n times it (prepend bit 0), the other to 2n times it
plus n/2 (prepend bit 1).  Together they satisfy the Cuntz relations: each
adjoint strips a matching leading bit and annihilates otherwise, and the
two ranges resolve the identity.  The scaled operator sends the basis
exponential at gamma to the exponential at p*gamma; its column at gamma is
the expansion of that exponential back in the basis, with coefficients
given by the transform at difference arguments.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple

from bernspec.exact import (
    BernoulliParams,
    QuarterInt,
    _terms_for,
    in_zero_set,
    mu_hat,
    mu_hat_product,
)
from bernspec.report import CheckReport
from bernspec.spectrum import (
    Word,
    _check_word,
    enumerate_spectrum,
    scale_value,
    word_to_bits,
    word_value,
)

_EPS = sys.float_info.epsilon


# ---------------------------------------------------------------------------
# word-level isometries


def prepend_zero(word: Word) -> Word:
    """Isometry gamma -> 2n * gamma; fixes the zero word."""
    _check_word(word)
    return (0,) + word if word else ()


def prepend_one(word: Word) -> Word:
    """Isometry gamma -> 2n * gamma + n/2."""
    _check_word(word)
    return (1,) + word


def strip_zero(word: Word) -> Word | None:
    """Adjoint of prepend_zero: remove a leading 0 bit, else annihilate."""
    _check_word(word)
    if not word:
        return ()
    return word[1:] if word[0] == 0 else None


def strip_one(word: Word) -> Word | None:
    """Adjoint of prepend_one: remove a leading 1 bit, else annihilate."""
    _check_word(word)
    if word and word[0] == 1:
        return word[1:]
    return None


def verify_cuntz_relations(params: BernoulliParams, max_digits: int) -> CheckReport:
    """Check the Cuntz relations on every word of the truncated spectrum.

    Covers: adjoints invert their isometries, mismatched adjoints
    annihilate, the two ranges resolve the identity (each word is in the
    range of exactly one isometry, counting the zero word under bit 0),
    value-level semantics of both isometries, and the inner-product
    adjointness on all word pairs.
    """
    report = CheckReport(f"cuntz(n={params.n}, digits<={max_digits})")
    words = enumerate_spectrum(params, max_digits)
    base, half = params.base, params.half_n
    for w in words:
        report.checked += 6
        if strip_zero(prepend_zero(w)) != w:
            report.add(f"strip0(prepend0) != id at {word_to_bits(w)!r}")
        if strip_one(prepend_one(w)) != w:
            report.add(f"strip1(prepend1) != id at {word_to_bits(w)!r}")
        if strip_one(prepend_zero(w)) is not None:
            report.add(f"strip1(prepend0) != 0 at {word_to_bits(w)!r}")
        if strip_zero(prepend_one(w)) is not None:
            report.add(f"strip0(prepend1) != 0 at {word_to_bits(w)!r}")
        # resolution of identity at the basis level
        from_zero = strip_zero(w)
        from_one = strip_one(w)
        hits = (from_zero is not None and prepend_zero(from_zero) == w) + (
            from_one is not None and prepend_one(from_one) == w)
        if hits != 1:
            report.add(f"identity resolution fails at {word_to_bits(w)!r}")
        value = word_value(w, params)
        if word_value(prepend_zero(w), params) != base * value:
            report.add(f"prepend0 value wrong at {word_to_bits(w)!r}")
        if word_value(prepend_one(w), params) != base * value + half:
            report.add(f"prepend1 value wrong at {word_to_bits(w)!r}")
    # adjointness <S_i w, v> == <w, S_i* v> over all pairs
    for v in words:
        sv0, sv1 = strip_zero(v), strip_one(v)
        for w in words:
            report.checked += 2
            if (prepend_zero(w) == v) != (sv0 == w):
                report.add(f"adjointness(0) fails at {word_to_bits(w)!r},"
                           f"{word_to_bits(v)!r}")
            if (prepend_one(w) == v) != (sv1 == w):
                report.add(f"adjointness(1) fails at {word_to_bits(w)!r},"
                           f"{word_to_bits(v)!r}")
    return report


# ---------------------------------------------------------------------------
# expansions in the exponential basis


@dataclass
class CoeffVector:
    """Expansion of a vector over basis exponentials of the spectrum.

    Exact-zero coefficients are never stored.  residual_bound bounds the
    squared mass a unit vector can carry outside the stored support, padded
    for the coefficient error bounds.
    """

    coefficients: dict[Word, float]
    error_bounds: dict[Word, float]
    residual_bound: float

    def support(self) -> list[Word]:
        return sorted(self.coefficients, key=lambda w: (len(w), tuple(reversed(w))))

    def norm_sq(self) -> float:
        return sum(c * c for c in self.coefficients.values())

    def get(self, word: Word) -> tuple[float, float]:
        """(coefficient, error_bound), zero for words outside the support."""
        if word in self.coefficients:
            return self.coefficients[word], self.error_bounds[word]
        return 0.0, 0.0

    def to_json_obj(self) -> dict:
        return {
            "entries": [
                {
                    "word": word_to_bits(w),
                    "coefficient": self.coefficients[w],
                    "error_bound": self.error_bounds[w],
                }
                for w in self.support()
            ],
            "residual_bound": self.residual_bound,
        }


def _coefficient(t: QuarterInt | float, point: QuarterInt,
                 params: BernoulliParams, tol: float):
    # transform at t - point; None encodes an exact zero
    if isinstance(t, QuarterInt):
        result = mu_hat(t - point, params, tol)
        if result.exact_zero:
            return None
        return result.value, result.error_bound
    diff = t - float(point)
    terms = _terms_for(diff if diff != 0.0 else 1.0, params.base, tol)
    result = mu_hat_product(diff, params, terms)
    if result.exact_zero:
        return None
    # the float subtraction perturbs the argument by <= eps/2 * (|t|+|point|);
    # the transform has derivative bounded by 2 pi / (2n - 1)
    slack = (2.0 * math.pi / (params.base - 1)) \
        * 0.5 * _EPS * (abs(t) + abs(float(point)))
    return result.value, result.error_bound + slack


def expand_exponential(
    t: QuarterInt | float,
    params: BernoulliParams,
    max_digits: int,
    tol: float = 1e-12,
) -> CoeffVector:
    """Expand the exponential at frequency t over the truncated spectrum.

    Coefficient at gamma is the transform evaluated at t - gamma.  With a
    quarter-integer t every coefficient is certified exact-or-bounded; a
    spectrum point t yields exactly its own delta vector.
    """
    coefficients: dict[Word, float] = {}
    error_bounds: dict[Word, float] = {}
    for w in enumerate_spectrum(params, max_digits):
        entry = _coefficient(t, word_value(w, params), params, tol)
        if entry is None:
            continue
        coefficients[w], error_bounds[w] = entry
    accounted = sum(c * c for c in coefficients.values())
    padding = 2.0 * sum(
        abs(coefficients[w]) * error_bounds[w] for w in coefficients)
    residual = max(0.0, 1.0 - accounted + padding)
    return CoeffVector(coefficients, error_bounds, residual)


def operator_column(
    word: Word,
    params: BernoulliParams,
    max_digits: int,
    tol: float = 1e-12,
) -> CoeffVector:
    """Column of the scaled operator at a spectrum word.

    The operator sends the exponential at gamma to the exponential at
    p*gamma, so the column is the expansion of the latter.
    """
    return expand_exponential(
        scale_value(word, params), params, max_digits, tol)


class ParsevalSum(NamedTuple):
    value: float
    error_bound: float


def parseval_partial(
    t: QuarterInt | float,
    params: BernoulliParams,
    max_digits: int,
    basis: str = "spectrum",
    tol: float = 1e-12,
) -> ParsevalSum:
    """Partial Parseval sum of |<exp(t), exp(b)>|^2 over a truncated basis.

    basis "spectrum" sums over the spectrum points, "scaled" over p times
    them.  For a complete orthonormal family the full sum is 1, so the
    partial sums increase toward 1 as max_digits grows.
    """
    if basis not in ("spectrum", "scaled"):
        raise ValueError(f"unknown basis {basis!r}")
    total = 0.0
    err = 0.0
    for w in enumerate_spectrum(params, max_digits):
        point = word_value(w, params)
        if basis == "scaled":
            point = params.require_p() * point
        entry = _coefficient(t, point, params, tol)
        if entry is None:
            continue
        coeff, coeff_err = entry
        total += coeff * coeff
        err += 2.0 * abs(coeff) * coeff_err + coeff_err * coeff_err
        err += _EPS * abs(total)  # summation rounding
    return ParsevalSum(total, err)
