"""Test problems and sequence files.

- `generate`: partial sums of the catalogued series.
- `generate_kernel`: sequences satisfying S_n = S + Σ a_i Δ^(im) S_n exactly.
- `load_sequence` / `save_sequence`: CSV (one value per line) and JSON files.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .constants import (
    BUILTIN_GEOMETRIC,
    BUILTIN_LN2,
    BUILTIN_POWER,
    CSV_COMMENT_PREFIX,
    CSV_FIELD_SEPARATOR,
    DEFAULT_PRECISION_BITS,
    JSON_LABEL_KEY,
    JSON_TERMS_KEY,
    RANDOM_DENOMINATOR_BOUND,
    RANDOM_NUMERATOR_BOUND,
)
from .errors import (
    DegenerateRecurrence,
    EmptyFile,
    InvalidSpec,
    ParseError,
    SeedCountMismatch,
)
from .imports import Any, List, Optional, Path, Sequence, Tuple, Union, np, pd
from .numerics import (
    RATIONAL,
    Scalar,
    ScalarMode,
    SequencePrefix,
    classify_literal,
    default_zero_policy,
    float_mode,
    format_scalar,
    forward_difference,
    is_effectively_zero,
    parse_scalar,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlternatingHarmonic:
    """S_n = Σ_{j=1}^{n+1} (-1)^(j+1)/j, converging to ln 2."""


@dataclass(frozen=True)
class Geometric:
    limit: Any
    coefficient: Any
    ratio: Any


@dataclass(frozen=True)
class PowerSeriesPartialSums:
    coefficients: Tuple[Any, ...]
    x: Any


@dataclass(frozen=True)
class Explicit:
    values: Tuple[Any, ...]


SeriesKind = Union[AlternatingHarmonic, Geometric, PowerSeriesPartialSums, Explicit]


@dataclass(frozen=True)
class SeriesSpec:
    kind: SeriesKind
    length: Optional[int] = None
    mode: ScalarMode = RATIONAL
    label: str = ""


@dataclass(frozen=True)
class KernelSpec:
    """A sequence with S_n = S + Σ_{i=1}^k a_i Δ^(im) S_n, seeded by S_0..S_(km-1)."""

    m: int
    k: int
    coefficients: Tuple[Any, ...]
    limit: Any
    seeds: Tuple[Any, ...]
    mode: ScalarMode = RATIONAL


def _series_length(spec: SeriesSpec) -> int:
    if isinstance(spec.kind, Explicit):
        length = len(spec.kind.values) if spec.length is None else min(spec.length, len(spec.kind.values))
    else:
        if spec.length is None:
            raise InvalidSpec("series length is required")
        length = spec.length
    if length < 2:
        raise InvalidSpec(f"series length must be >= 2, got {length}")
    return length


def generate(spec: SeriesSpec) -> SequencePrefix:
    mode = spec.mode
    length = _series_length(spec)
    kind = spec.kind
    terms: List[Scalar] = []
    if isinstance(kind, AlternatingHarmonic):
        total = mode.zero()
        for j in range(1, length + 1):
            term = mode.coerce(Fraction((-1) ** (j + 1), j))
            total += term
            terms.append(total)
        label = spec.label or BUILTIN_LN2
    elif isinstance(kind, Geometric):
        limit, c, ratio = (mode.coerce(v) for v in (kind.limit, kind.coefficient, kind.ratio))
        if ratio == 1:
            raise InvalidSpec("geometric ratio must differ from 1")
        power = mode.one()
        for _ in range(length):
            terms.append(limit + c * power)
            power *= ratio
        label = spec.label or f"{BUILTIN_GEOMETRIC}:{kind.limit},{kind.coefficient},{kind.ratio}"
    elif isinstance(kind, PowerSeriesPartialSums):
        if not kind.coefficients:
            raise InvalidSpec("power series needs at least one coefficient")
        x = mode.coerce(kind.x)
        coeffs = [mode.coerce(c) for c in kind.coefficients]
        total, power = mode.zero(), mode.one()
        for j in range(length):
            if j < len(coeffs):
                total += coeffs[j] * power
            terms.append(total)
            power *= x
        label = spec.label or f"{BUILTIN_POWER}:{kind.x}"
    elif isinstance(kind, Explicit):
        terms = [mode.coerce(v) for v in kind.values[:length]]
        label = spec.label or "explicit"
    else:
        raise InvalidSpec(f"unknown series kind {kind!r}")
    return SequencePrefix(tuple(terms), label, mode)


def _recurrence_weights(spec: KernelSpec) -> List[Scalar]:
    """Coefficients w_j of Σ_j w_j S_(n+j) = S, j = 0..km."""
    mode = spec.mode
    order = spec.k * spec.m
    weights = [mode.zero() for _ in range(order + 1)]
    weights[0] = mode.one()
    for i, a in enumerate(spec.coefficients, start=1):
        a = mode.coerce(a)
        depth = i * spec.m
        for j in range(depth + 1):
            sign = -1 if (depth - j) % 2 else 1
            weights[j] -= a * sign * math.comb(depth, j)
    return weights


def generate_kernel(spec: KernelSpec, length: int) -> SequencePrefix:
    mode = spec.mode
    if spec.m < 1 or spec.k < 1:
        raise InvalidSpec("kernel needs m >= 1 and k >= 1")
    if len(spec.coefficients) != spec.k:
        raise InvalidSpec(f"expected {spec.k} coefficients, got {len(spec.coefficients)}")
    order = spec.k * spec.m
    if len(spec.seeds) != order:
        raise SeedCountMismatch(f"kernel (m={spec.m}, k={spec.k}) needs {order} seeds, got {len(spec.seeds)}")
    if length < order:
        raise InvalidSpec(f"length {length} shorter than the {order} seeds")
    policy = default_zero_policy(mode)
    a_k = mode.coerce(spec.coefficients[-1])
    if is_effectively_zero(a_k, mode.one(), policy):
        raise InvalidSpec("a_k must be nonzero")

    limit = mode.coerce(spec.limit)
    weights = _recurrence_weights(spec)
    lead = weights[order]
    if is_effectively_zero(lead, a_k, policy):
        raise DegenerateRecurrence(f"leading recurrence weight vanished (m={spec.m}, k={spec.k})")
    terms = [mode.coerce(s) for s in spec.seeds]
    while len(terms) < length:
        n = len(terms) - order
        rest = sum((weights[j] * terms[n + j] for j in range(order)), mode.zero())
        terms.append((limit - rest) / lead)

    seq = SequencePrefix(tuple(terms), f"kernel(m={spec.m},k={spec.k})", mode)
    _verify_kernel(seq, spec, limit)
    logger.debug("kernel sequence m=%d k=%d length=%d verified", spec.m, spec.k, length)
    return seq


def _verify_kernel(seq: SequencePrefix, spec: KernelSpec, limit: Scalar) -> None:
    mode = seq.mode
    policy = default_zero_policy(mode)
    coeffs = [mode.coerce(a) for a in spec.coefficients]
    for n in range(seq.N - spec.k * spec.m + 1):
        rhs = limit + sum(
            (a * forward_difference(seq, i * spec.m, n) for i, a in enumerate(coeffs, start=1)),
            mode.zero(),
        )
        if not is_effectively_zero(seq.terms[n] - rhs, seq.terms[n], policy):
            raise DegenerateRecurrence(f"kernel relation fails at n={n}")


def random_rational(
    rng: np.random.Generator,
    numerator_bound: int = RANDOM_NUMERATOR_BOUND,
    denominator_bound: int = RANDOM_DENOMINATOR_BOUND,
    nonzero: bool = False,
) -> Fraction:
    while True:
        num = int(rng.integers(-numerator_bound, numerator_bound + 1))
        den = int(rng.integers(1, denominator_bound + 1))
        if num or not nonzero:
            return Fraction(num, den)


def random_rational_sequence(
    rng: np.random.Generator, length: int, mode: ScalarMode = RATIONAL, label: str = "random"
) -> SequencePrefix:
    """Small random rationals; reproducible from the generator state."""
    values = [random_rational(rng) for _ in range(length)]
    return SequencePrefix(tuple(values), label, mode)


def random_kernel_spec(rng: np.random.Generator, m: int, k: int, mode: ScalarMode = RATIONAL) -> KernelSpec:
    coeffs = [random_rational(rng) for _ in range(k - 1)]
    coeffs.append(random_rational(rng, nonzero=True))
    seeds = tuple(random_rational(rng) for _ in range(k * m))
    return KernelSpec(m, k, tuple(coeffs), random_rational(rng), seeds, mode)


def parse_builtin(name: str, length: int, mode: ScalarMode = RATIONAL) -> SequencePrefix:
    """``ln2``, ``geometric:S,c,lambda`` or ``power:x,c0,c1,...``."""
    head, _, tail = name.partition(":")
    args = [a for a in tail.split(",") if a.strip()] if tail else []
    if head == BUILTIN_LN2 and not args:
        return generate(SeriesSpec(AlternatingHarmonic(), length, mode))
    if head == BUILTIN_GEOMETRIC and len(args) == 3:
        values = [parse_scalar(a, mode) for a in args]
        return generate(SeriesSpec(Geometric(*values), length, mode, label=name))
    if head == BUILTIN_POWER and len(args) >= 2:
        x = parse_scalar(args[0], mode)
        coeffs = tuple(parse_scalar(a, mode) for a in args[1:])
        return generate(SeriesSpec(PowerSeriesPartialSums(coeffs, x), length, mode, label=name))
    raise InvalidSpec(f"unknown builtin series {name!r}")


def is_builtin(name: str) -> bool:
    return name.partition(":")[0] in (BUILTIN_LN2, BUILTIN_GEOMETRIC, BUILTIN_POWER)


def _mode_for(literals: Sequence[str], precision_bits: int) -> ScalarMode:
    if all(classify_literal(t) == "rational" for t in literals):
        return RATIONAL
    return float_mode(precision_bits)


def _read_csv(path: Path) -> Tuple[str, List[str]]:
    try:
        frame = pd.read_csv(
            path,
            header=None,
            sep=CSV_FIELD_SEPARATOR,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        return path.stem, []
    except pd.errors.ParserError as exc:
        raise ParseError(f"expected one value per line ({exc})") from exc
    frame = frame.fillna("")
    literals: List[str] = []
    # row i of the frame is line i + 1 of the file
    for row, values in enumerate(frame.itertuples(index=False)):
        line = str(values[0]).strip()
        if not line or line.startswith(CSV_COMMENT_PREFIX):
            continue
        if any(str(extra).strip() for extra in values[1:]):
            raise ParseError("expected one value per line", line=row + 1)
        try:
            classify_literal(line)
        except ParseError as exc:
            raise ParseError(str(exc), line=row + 1) from exc
        literals.append(line)
    return path.stem, literals


def _read_json(path: Path) -> Tuple[str, List[str]]:
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(payload, dict) or not isinstance(payload.get(JSON_TERMS_KEY), list):
        raise ParseError(f"expected an object with a '{JSON_TERMS_KEY}' list")
    literals = []
    for pos, item in enumerate(payload[JSON_TERMS_KEY]):
        text = str(item)
        try:
            classify_literal(text)
        except ParseError as exc:
            raise ParseError(f"term {pos}: {exc}") from exc
        literals.append(text)
    return str(payload.get(JSON_LABEL_KEY, path.stem)), literals


def load_sequence(
    path: Union[str, Path], fmt: Optional[str] = None, precision_bits: int = DEFAULT_PRECISION_BITS
) -> SequencePrefix:
    """Read a sequence; the mode is Rational iff every literal is rational."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    readers = {"csv": _read_csv, "json": _read_json}
    if fmt not in readers:
        raise ParseError(f"unsupported sequence format {fmt!r}")
    try:
        label, literals = readers[fmt](path)
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not valid UTF-8 ({exc.reason} at byte {exc.start})") from exc
    if not literals:
        raise EmptyFile(f"{path} contains no values")
    mode = _mode_for(literals, precision_bits)
    return SequencePrefix(tuple(parse_scalar(t, mode) for t in literals), label, mode)


def save_sequence(seq: SequencePrefix, path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    literals = [format_scalar(t, seq.mode) for t in seq.terms]
    if fmt == "json":
        path.write_text(json.dumps({JSON_LABEL_KEY: seq.label, JSON_TERMS_KEY: literals}, indent=2), encoding="utf-8")
    elif fmt == "csv":
        with path.open("w", encoding="utf-8", newline="") as handle:
            if seq.label:
                handle.write(f"{CSV_COMMENT_PREFIX} {seq.label}\n")
            pd.DataFrame({"term": literals}).to_csv(
                handle, header=False, index=False, sep=CSV_FIELD_SEPARATOR, lineterminator="\n"
            )
    else:
        raise ParseError(f"unsupported sequence format {fmt!r}")
    return path
