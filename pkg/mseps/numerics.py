"""Scalar modes, the forward-difference operator and near-zero policies.

Two arithmetic modes are supported:

- Rational: values are :class:`fractions.Fraction`, every operation is exact.
- Float: values are ``mpf`` numbers from a private mpmath context with a fixed
  number of mantissa bits, so two precisions never share global state.

Examples
--------
>>> seq = SequencePrefix.from_values(["1", "1/2", "5/6", "7/12"], label="ln2")
>>> forward_difference(seq, 3, 0)
Fraction(-17, 12)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from mpmath.ctx_mp import MPContext

from .constants import DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS
from .errors import IndexOutOfRange, ParseError
from .imports import Any, Iterable, Iterator, Optional, Sequence, Tuple, Union

Scalar = Union[Fraction, Any]  # Fraction or mpf

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[+-]?\d+)?$")
_DECIMAL_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


@lru_cache(maxsize=None)
def _float_context(precision_bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = precision_bits
    return ctx


@dataclass(frozen=True)
class ScalarMode:
    """Arithmetic mode shared by every value of one computation.

    ``precision_bits=None`` means exact rational arithmetic.
    """

    precision_bits: Optional[int] = None

    def __post_init__(self) -> None:
        if self.precision_bits is not None and self.precision_bits < MIN_PRECISION_BITS:
            raise ValueError(
                f"precision_bits must be >= {MIN_PRECISION_BITS}, got {self.precision_bits}"
            )

    @property
    def is_rational(self) -> bool:
        return self.precision_bits is None

    @property
    def context(self) -> MPContext:
        if self.precision_bits is None:
            raise TypeError("rational mode has no mpmath context")
        return _float_context(self.precision_bits)

    @property
    def digits(self) -> int:
        """Decimal digits printed for a float value of this mode."""
        if self.precision_bits is None:
            return 0
        return int(self.precision_bits * math.log10(2)) + 2

    def zero(self) -> Scalar:
        return self.coerce(0)

    def one(self) -> Scalar:
        return self.coerce(1)

    def coerce(self, value: Any) -> Scalar:
        if isinstance(value, str):
            return parse_scalar(value, self)
        if self.precision_bits is None:
            if isinstance(value, bool) or not isinstance(value, (int, Rational)):
                raise ParseError(f"{value!r} is not a rational value")
            return Fraction(value)
        ctx = self.context
        if isinstance(value, Rational) and not isinstance(value, int):
            return ctx.mpf(value.numerator) / value.denominator
        return ctx.mpf(value)

    def abs(self, value: Scalar) -> Scalar:
        return abs(value)

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self)

    def default_policy(self) -> "ZeroPolicy":
        return default_zero_policy(self)

    def format(self, value: Scalar) -> str:
        return format_scalar(value, self)

    def __str__(self) -> str:
        return "rational" if self.precision_bits is None else f"float@{self.precision_bits}"


RATIONAL = ScalarMode()


def float_mode(precision_bits: int = DEFAULT_PRECISION_BITS) -> ScalarMode:
    return ScalarMode(precision_bits)


def classify_literal(text: str) -> str:
    """Return ``"rational"`` or ``"float"`` for a scalar literal."""
    token = text.strip()
    if _RATIONAL_RE.match(token):
        return "rational"
    if _DECIMAL_RE.match(token):
        return "float"
    raise ParseError(f"cannot parse scalar {text!r}")


def parse_scalar(text: str, mode: ScalarMode = RATIONAL) -> Scalar:
    """Parse ``p/q``, an integer or a decimal float into ``mode``."""
    token = text.strip()
    kind = classify_literal(token)
    if kind == "rational":
        num, _, den = token.partition("/")
        if den and int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        value = Fraction(int(num), int(den) if den else 1)
        return value if mode.is_rational else mode.coerce(value)
    if mode.is_rational:
        raise ParseError(f"{text!r} is not a rational value")
    return mode.context.mpf(token)


def format_scalar(value: Scalar, mode: ScalarMode) -> str:
    if mode.is_rational:
        frac = Fraction(value)
        if frac.denominator == 1:
            return str(frac.numerator)
        return f"{frac.numerator}/{frac.denominator}"
    return mode.context.nstr(value, mode.digits)


@dataclass(frozen=True)
class SequencePrefix:
    """Finite prefix S_0..S_N of a scalar sequence.

    Terms are coerced to ``mode`` on construction; indexing is zero based.
    """

    terms: Tuple[Scalar, ...]
    label: str = field(default="", compare=False)
    mode: ScalarMode = RATIONAL

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.mode.coerce(t) for t in self.terms))

    @classmethod
    def from_values(
        cls, values: Iterable[Any], label: str = "", mode: ScalarMode = RATIONAL
    ) -> "SequencePrefix":
        return cls(tuple(values), label, mode)

    @property
    def N(self) -> int:
        return len(self.terms) - 1

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.terms)

    def __getitem__(self, index: int) -> Scalar:
        if not 0 <= index <= self.N:
            raise IndexOutOfRange(f"term S_{index} outside prefix S_0..S_{self.N}")
        return self.terms[index]

    def extended(self, term: Any) -> "SequencePrefix":
        return SequencePrefix(self.terms + (self.mode.coerce(term),), self.label, self.mode)

    def truncated(self, length: int) -> "SequencePrefix":
        return SequencePrefix(self.terms[:length], self.label, self.mode)

    def affine(self, a: Any, b: Any) -> "SequencePrefix":
        """The sequence a*S_n + b."""
        a, b = self.mode.coerce(a), self.mode.coerce(b)
        return SequencePrefix(tuple(a * t + b for t in self.terms), f"{a}*{self.label}+{b}", self.mode)

    def with_mode(self, mode: ScalarMode) -> "SequencePrefix":
        return SequencePrefix(tuple(mode.coerce(t) for t in self.terms), self.label, mode)


@dataclass(frozen=True)
class ZeroPolicy:
    """When a denominator counts as zero.

    Rational mode ignores the thresholds. Float mode treats ``x`` as zero when
    ``|x| <= tau`` or ``|x| <= rho * |scale|``.
    """

    mode: ScalarMode = RATIONAL
    tau: Optional[Scalar] = None
    rho: Optional[Scalar] = None

    def __post_init__(self) -> None:
        if self.mode.is_rational:
            return
        if self.tau is None or self.rho is None or self.tau <= 0 or self.rho <= 0:
            raise ValueError("float zero policy needs tau > 0 and rho > 0")


def default_zero_policy(mode: ScalarMode) -> ZeroPolicy:
    if mode.is_rational:
        return ZeroPolicy(mode)
    ctx = mode.context
    threshold = ctx.mpf(2) ** (-ctx.mpf(mode.precision_bits) / 2)
    return ZeroPolicy(mode, threshold, threshold)


def is_effectively_zero(x: Scalar, scale: Scalar, policy: ZeroPolicy) -> bool:
    if policy.mode.is_rational:
        return x == 0
    magnitude = abs(x)
    return bool(magnitude <= policy.tau or magnitude <= policy.rho * abs(scale))


def forward_difference(seq: SequencePrefix, order: int, start: int) -> Scalar:
    """Δ^i S_n by the binomial expansion Σ (-1)^(i-j) C(i, j) S_(n+j)."""
    if order < 0 or start < 0:
        raise IndexOutOfRange(f"negative index in Δ^{order} S_{start}")
    if start + order > seq.N:
        raise IndexOutOfRange(f"Δ^{order} S_{start} needs S_{start + order}, prefix ends at S_{seq.N}")
    total = seq.mode.zero()
    for j in range(order + 1):
        coeff = math.comb(order, j)
        if (order - j) % 2:
            coeff = -coeff
        total += coeff * seq.terms[start + j]
    return total


def forward_difference_recursive(seq: SequencePrefix, order: int, start: int) -> Scalar:
    """Δ^(i+1) S_n = Δ^i S_(n+1) - Δ^i S_n; kept as a cross-check."""
    if order < 0 or start < 0 or start + order > seq.N:
        raise IndexOutOfRange(f"Δ^{order} S_{start} outside prefix S_0..S_{seq.N}")
    if order == 0:
        return seq.terms[start]
    return forward_difference_recursive(seq, order - 1, start + 1) - forward_difference_recursive(
        seq, order - 1, start
    )


def difference_sequence(seq: SequencePrefix, order: int) -> SequencePrefix:
    if order < 0 or order > seq.N:
        raise IndexOutOfRange(f"Δ^{order} of a prefix with N={seq.N}")
    if order == 0:
        return seq
    terms = tuple(forward_difference(seq, order, j) for j in range(seq.N - order + 1))
    return SequencePrefix(terms, f"Δ^{order} {seq.label}".strip(), seq.mode)


def max_magnitude(values: Sequence[Scalar], mode: ScalarMode) -> Scalar:
    best = mode.zero()
    for v in values:
        if abs(v) > best:
            best = abs(v)
    return best
