"""The canonical spectrum, its digit words, and its strata.

Spectrum points are the finite sums  sum_i b_i * (n/2) * (2n)^i  with bits
b_i in {0, 1}.  A point is held as its digit word (b_0, ..., b_m), stored
low digit first and canonical: empty, or ending in a 1.  The spectrum
splits into the zero point and the strata indexed by the number of leading
zero bits; for n = 2 the stratum of index 0 splits further by the gap
between the first two 1-bits.
"""

from __future__ import annotations

from bernspec.exact import BernoulliParams, QuarterInt

Word = tuple[int, ...]

# classification labels for the finer split of stratum 0 (defined for n = 2)
TILDE_ONE_POINT = "one-point"
TILDE_OTHER = "other"


def is_canonical_word(word: Word) -> bool:
    """A digit word is canonical when empty or ending in a nonzero bit."""
    if any(bit not in (0, 1) for bit in word):
        return False
    return not word or word[-1] == 1


def _check_word(word: Word) -> None:
    if not is_canonical_word(word):
        raise ValueError(f"not a canonical digit word: {word!r}")


def word_value(word: Word, params: BernoulliParams) -> QuarterInt:
    """The spectrum point of a digit word: sum_i b_i (n/2) (2n)^i."""
    _check_word(word)
    base = params.base
    numer = 0
    power = base  # 4 * (n/2) * (2n)^i = (2n)^(i+1)
    for bit in word:
        if bit:
            numer += power
        power *= base
    return QuarterInt(numer)


def word_from_value(t: QuarterInt, params: BernoulliParams) -> Word | None:
    """Invert word_value; None when t is not a spectrum point."""
    base = params.base
    if t.numerator == 0:
        return ()
    if t.numerator < 0 or t.numerator % base != 0:
        return None
    rest = t.numerator // base
    bits = []
    while rest:
        rest, bit = divmod(rest, base)
        if bit > 1:
            return None
        bits.append(bit)
    return tuple(bits)


def word_to_bits(word: Word) -> str:
    """Serialize low digit first; the zero word is the empty string."""
    _check_word(word)
    return "".join(str(bit) for bit in word)


def parse_word(text: str) -> Word:
    body = text.strip()
    if any(ch not in "01" for ch in body):
        raise ValueError(f"digit words use characters 0/1 only: {text!r}")
    word = tuple(int(ch) for ch in body)
    _check_word(word)
    return word


def enumerate_spectrum(
    params: BernoulliParams, max_digits: int, order: str = "value"
) -> list[Word]:
    """All spectrum words of length <= max_digits, in a deterministic order.

    order "value" sorts by the spectrum point; order "strata" puts the zero
    word first, then each stratum in increasing index, value-sorted inside.
    """
    if max_digits < 0:
        raise ValueError("max_digits must be >= 0")
    words: list[Word] = [()]
    for length in range(1, max_digits + 1):
        # all words of exact length: free bits below a forced top 1
        for mask in range(1 << (length - 1)):
            bits = tuple((mask >> i) & 1 for i in range(length - 1)) + (1,)
            words.append(bits)
    if order == "value":
        words.sort(key=lambda w: word_value(w, params).numerator)
    elif order == "strata":
        words.sort(key=lambda w: (
            -1 if not w else stratum_index(w),
            word_value(w, params).numerator,
        ))
    else:
        raise ValueError(f"unknown order {order!r}")
    return words


def stratum_index(word: Word) -> int | None:
    """Leading-zero count of a nonzero word; None for the zero word.

    Stratum k collects the points (2n)^k * (n/2 + 2n * gamma) over spectrum
    points gamma, which is exactly the words starting with k zero bits.
    """
    _check_word(word)
    if not word:
        return None
    return word.index(1)


def tilde_stratum_index(word: Word, params: BernoulliParams) -> int | str:
    """Classify a stratum-0 word by the gap between its first two 1-bits.

    For n = 2: the word of the point 1 is its own class (TILDE_ONE_POINT);
    a word (1, 0^k, 1, ...) belongs to class k.  For other n no such split
    is defined and every word maps to TILDE_OTHER.  Words outside stratum 0
    are rejected.
    """
    _check_word(word)
    if not word or word[0] != 1:
        raise ValueError(f"word is not in stratum 0: {word!r}")
    if params.n != 2:
        return TILDE_OTHER
    if word == (1,):
        return TILDE_ONE_POINT
    return word.index(1, 1) - 1


def scale_value(word: Word, params: BernoulliParams) -> QuarterInt:
    """The spectrum point scaled by p."""
    return params.require_p() * word_value(word, params)
