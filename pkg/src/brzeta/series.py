"""Exact truncated multivariate series over a weighted alphabet.

An :class:`Alphabet` lists the simple-module classes in play.  Entry ``i``
carries a residue-field size ``q_i >= 2`` and a matrix size ``r_i >= 1``, so
the free commutative generator ``z_i`` has multiplicative norm ``q_i**r_i``.
Monomials are plain exponent tuples, one slot per entry; their norm is the
product of entry norms raised to the exponents.

A :class:`TruncatedSeries` keeps exact :class:`~fractions.Fraction`
coefficients for every monomial of total degree at most ``bound`` and drops
everything above.  All arithmetic stays inside that quotient, so two series
may be combined only when their alphabets and bounds agree; re-truncate
explicitly with :meth:`TruncatedSeries.truncated` first.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import (
    AlphabetMismatchError,
    CompletenessWarning,
    NonUnitError,
    PseudoConvergenceError,
    SchemaError,
    TruncationBoundError,
)

#: Exponent vector of a monomial; one nonnegative entry per alphabet slot.
Monomial = tuple[int, ...]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """Whether ``a`` divides ``b`` componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


@dataclass(frozen=True)
class AlphabetEntry:
    label: str
    q: int
    r: int = 1

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise SchemaError("alphabet entry needs a nonempty string label")
        if self.q < 2:
            raise SchemaError(f"entry {self.label!r}: residue size q must be >= 2, got {self.q}")
        if self.r < 1:
            raise SchemaError(f"entry {self.label!r}: matrix size r must be >= 1, got {self.r}")

    @property
    def norm(self) -> int:
        return self.q**self.r


class Alphabet:
    """Ordered tuple of entries; fixes the exponent-vector layout."""

    __slots__ = ("entries", "_by_label")

    def __init__(self, entries: Iterable[AlphabetEntry | tuple]):
        # empty alphabets are legal: the series ring degenerates to constants
        ents = tuple(e if isinstance(e, AlphabetEntry) else AlphabetEntry(*e) for e in entries)
        labels = [e.label for e in ents]
        if len(set(labels)) != len(labels):
            raise SchemaError(f"duplicate alphabet labels in {labels}")
        self.entries = ents
        self._by_label = {e.label: i for i, e in enumerate(ents)}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[AlphabetEntry]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> AlphabetEntry:
        return self.entries[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"{e.label}:q^r={e.q}^{e.r}" for e in self.entries)
        return f"Alphabet({inner})"

    def index(self, label: str) -> int:
        return self._by_label[label]

    def zero(self) -> Monomial:
        return (0,) * len(self.entries)

    def unit(self, i: int) -> Monomial:
        """Exponent vector of the single generator ``z_i``."""
        return tuple(1 if j == i else 0 for j in range(len(self.entries)))

    def mono_norm(self, exps: Monomial) -> int:
        n = 1
        for e, entry in zip(exps, self.entries):
            if e:
                n *= entry.norm**e
        return n

    def format_monomial(self, exps: Monomial) -> str:
        parts = []
        for e, entry in zip(exps, self.entries):
            if e == 1:
                parts.append(entry.label)
            elif e > 1:
                parts.append(f"{entry.label}^{e}")
        return "*".join(parts) if parts else "1"

    def to_json(self) -> list[dict]:
        return [{"label": e.label, "q": e.q, "r": e.r} for e in self.entries]

    @classmethod
    def from_json(cls, payload) -> "Alphabet":
        if not isinstance(payload, list):
            raise SchemaError("alphabet payload must be a list of entries")
        ents = []
        for item in payload:
            try:
                ents.append(AlphabetEntry(item["label"], int(item["q"]), int(item.get("r", 1))))
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"bad alphabet entry {item!r}: {exc}") from exc
        return cls(ents)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise SchemaError(f"coefficients must be exact rationals, got {type(value).__name__}")


class TruncatedSeries:
    """Finitely supported exact series, complete through total degree ``bound``."""

    __slots__ = ("alphabet", "bound", "coeffs")

    def __init__(self, alphabet: Alphabet, bound: int, coeffs: Mapping[Monomial, Fraction | int] | None = None):
        if bound < 0:
            raise TruncationBoundError(f"bound must be >= 0, got {bound}")
        self.alphabet = alphabet
        self.bound = bound
        clean: dict[Monomial, Fraction] = {}
        if coeffs:
            n = len(alphabet)
            for exps, c in coeffs.items():
                exps = tuple(exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise SchemaError(f"bad exponent vector {exps} for {n}-entry alphabet")
                c = _as_fraction(c)
                if c and mono_degree(exps) <= bound:
                    clean[exps] = c
        self.coeffs = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, alphabet: Alphabet, bound: int) -> "TruncatedSeries":
        return cls(alphabet, bound)

    @classmethod
    def one(cls, alphabet: Alphabet, bound: int) -> "TruncatedSeries":
        return cls(alphabet, bound, {alphabet.zero(): Fraction(1)})

    @classmethod
    def monomial(cls, alphabet: Alphabet, bound: int, exps: Monomial, coeff=1) -> "TruncatedSeries":
        return cls(alphabet, bound, {tuple(exps): _as_fraction(coeff)})

    @classmethod
    def geometric(cls, alphabet: Alphabet, bound: int, exps: Monomial, scalar=1) -> "TruncatedSeries":
        """``(1 - scalar*m)**-1`` expanded directly; ``m`` must have degree >= 1."""
        exps = tuple(exps)
        d = mono_degree(exps)
        if d < 1:
            raise TruncationBoundError("geometric series needs a monomial of degree >= 1")
        scalar = _as_fraction(scalar)
        out: dict[Monomial, Fraction] = {}
        cur = alphabet.zero()
        val = Fraction(1)
        k = 0
        while k * d <= bound:
            out[cur] = val
            cur = mono_mul(cur, exps)
            val *= scalar
            k += 1
        return cls(alphabet, bound, out)

    # -- inspection ------------------------------------------------------

    def coefficient(self, exps: Monomial) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get(self.alphabet.zero(), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_degree(self) -> int | None:
        """Least total degree with a nonzero coefficient, or None if zero."""
        return min((mono_degree(k) for k in self.coeffs), default=None)

    def max_degree(self) -> int:
        return max((mono_degree(k) for k in self.coeffs), default=0)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.coeffs.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.alphabet == other.alphabet
            and self.bound == other.bound
            and self.coeffs == other.coeffs
        )

    def agrees_with(self, other: "TruncatedSeries", up_to: int | None = None) -> bool:
        """Coefficientwise agreement through ``up_to`` (default: smaller bound)."""
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(f"{self.alphabet!r} vs {other.alphabet!r}")
        cut = min(self.bound, other.bound) if up_to is None else up_to
        if cut > min(self.bound, other.bound):
            raise TruncationBoundError(f"agreement through {cut} exceeds bounds {self.bound}, {other.bound}")
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys if mono_degree(k) <= cut)

    def first_disagreement(self, other: "TruncatedSeries", up_to: int | None = None):
        """(monomial, self-coeff, other-coeff) at the least disagreeing monomial, or None."""
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(f"{self.alphabet!r} vs {other.alphabet!r}")
        cut = min(self.bound, other.bound) if up_to is None else up_to
        keys = sorted(
            (k for k in set(self.coeffs) | set(other.coeffs) if mono_degree(k) <= cut),
            key=lambda k: (mono_degree(k), k),
        )
        for k in keys:
            a, b = self.coefficient(k), other.coefficient(k)
            if a != b:
                return k, a, b
        return None

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exps, c in sorted(self.coeffs.items(), key=lambda kv: (mono_degree(kv[0]), kv[0])):
            mono = self.alphabet.format_monomial(exps)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    # -- ring operations ---------------------------------------------------

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(f"{self.alphabet!r} vs {other.alphabet!r}")
        if self.bound != other.bound:
            raise TruncationBoundError(f"bound {self.bound} vs {other.bound}; re-truncate explicitly")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries(self.alphabet, self.bound, {self.alphabet.zero(): _as_fraction(other)})
        self._check_compatible(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return TruncatedSeries(self.alphabet, self.bound, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.alphabet, self.bound, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._check_compatible(other)
        bound = self.bound
        out: dict[Monomial, Fraction] = {}
        # iterate the sparser operand outside
        a, b = (self, other) if len(self.coeffs) <= len(other.coeffs) else (other, self)
        for ka, ca in a.coeffs.items():
            da = mono_degree(ka)
            for kb, cb in b.coeffs.items():
                if da + mono_degree(kb) > bound:
                    continue
                k = mono_mul(ka, kb)
                out[k] = out.get(k, Fraction(0)) + ca * cb
        return TruncatedSeries(self.alphabet, bound, out)

    __rmul__ = __mul__

    def scaled(self, scalar) -> "TruncatedSeries":
        scalar = _as_fraction(scalar)
        if not scalar:
            return TruncatedSeries.zero(self.alphabet, self.bound)
        return TruncatedSeries(self.alphabet, self.bound, {k: c * scalar for k, c in self.coeffs.items()})

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        acc = TruncatedSeries.one(self.alphabet, self.bound)
        for _ in range(n):
            acc = acc * self
        return acc

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c = self.constant_term
        if not c:
            raise NonUnitError("cannot invert a series with zero constant term")
        # f = c*(1 - g) with g of degree >= 1, so 1/f = (1/c) * sum g^k.
        one = TruncatedSeries.one(self.alphabet, self.bound)
        g = one - self.scaled(Fraction(1, 1) / c)
        acc = one
        power = one
        for _ in range(self.bound):
            power = power * g
            if power.is_zero():
                break
            acc = acc + power
        return acc.scaled(Fraction(1, 1) / c)

    # -- truncation management ----------------------------------------------

    def truncated(self, new_bound: int) -> "TruncatedSeries":
        """Forget coefficients above ``new_bound`` (must not exceed ``bound``)."""
        if new_bound > self.bound:
            raise TruncationBoundError(
                f"cannot raise bound {self.bound} -> {new_bound} without new information; "
                "use extended() only on exact polynomials"
            )
        return TruncatedSeries(self.alphabet, new_bound, self.coeffs)

    def extended(self, new_bound: int) -> "TruncatedSeries":
        """Restate an exact polynomial at a larger bound.

        Only sound when the series is complete (nothing was ever dropped);
        the caller asserts that.
        """
        if new_bound < self.bound:
            return self.truncated(new_bound)
        return TruncatedSeries(self.alphabet, new_bound, self.coeffs)

    # -- substitution ---------------------------------------------------------

    def substitute(
        self,
        out_alphabet: Alphabet,
        mapping: Mapping[int, tuple],
        out_bound: int | None = None,
    ) -> "TruncatedSeries":
        """Push through the monomial substitution ``z_i -> scalar_i * m_i``.

        ``mapping[i] = (scalar_i, exps_i)`` with ``exps_i`` an exponent vector
        over ``out_alphabet`` of total degree >= 1 and ``scalar_i`` a positive
        rational.  Truncation stays sound because any dropped source monomial
        (degree > ``self.bound``) lands above ``(self.bound+1)*t_min``, which
        must exceed ``out_bound``.
        """
        n = len(self.alphabet)
        if set(mapping) != set(range(n)):
            raise SchemaError(f"substitution must map every entry index 0..{n - 1}")
        scalars: list[Fraction] = []
        targets: list[Monomial] = []
        m = len(out_alphabet)
        for i in range(n):
            scalar, exps = mapping[i]
            scalar = _as_fraction(scalar)
            exps = tuple(exps)
            if scalar <= 0:
                raise SchemaError(f"substitution scalar for entry {i} must be positive, got {scalar}")
            if len(exps) != m or any(e < 0 for e in exps):
                raise SchemaError(f"bad target exponent vector {exps} over {m}-entry alphabet")
            if mono_degree(exps) < 1:
                raise TruncationBoundError(f"target for entry {i} has degree 0; truncation would be unsound")
            scalars.append(scalar)
            targets.append(exps)
        t_min = min(mono_degree(t) for t in targets)
        if out_bound is None:
            out_bound = self.bound
        if out_bound >= (self.bound + 1) * t_min:
            raise TruncationBoundError(
                f"out_bound {out_bound} not certified by source bound {self.bound} "
                f"with min target degree {t_min}"
            )
        out: dict[Monomial, Fraction] = {}
        for exps, c in self.coeffs.items():
            acc = [0] * m
            val = c
            for i, e in enumerate(exps):
                if not e:
                    continue
                t = targets[i]
                for j in range(m):
                    acc[j] += t[j] * e
                val *= scalars[i] ** e
            key = tuple(acc)
            if mono_degree(key) <= out_bound:
                out[key] = out.get(key, Fraction(0)) + val
        return TruncatedSeries(out_alphabet, out_bound, out)

    # -- monomial division -------------------------------------------------

    def divided_by_monomial(self, exps: Monomial) -> "TruncatedSeries":
        """Exact division by a monomial; every term must be divisible.

        The result is complete through ``bound - degree(exps)``.
        """
        exps = tuple(exps)
        d = mono_degree(exps)
        out: dict[Monomial, Fraction] = {}
        for k, c in self.coeffs.items():
            if not mono_divides(exps, k):
                raise NonUnitError(
                    f"monomial {self.alphabet.format_monomial(exps)} does not divide "
                    f"term {self.alphabet.format_monomial(k)}"
                )
            out[mono_quotient(k, exps)] = c
        return TruncatedSeries(self.alphabet, self.bound - d, out)

    # -- Dirichlet extraction ------------------------------------------------

    def dirichlet_coeffs(self, n_max: int) -> dict[int, Fraction]:
        """Coefficients of the Dirichlet series ``z_i -> norm_i**-s``, by norm <= n_max.

        Warns when the truncation cannot certify completeness, i.e. when a
        dropped degree-(bound+1) monomial could still have norm <= n_max.
        """
        q_min = min((e.norm for e in self.alphabet), default=None)
        if q_min is not None and q_min ** (self.bound + 1) <= n_max:
            warnings.warn(
                f"norms up to {n_max} may receive contributions beyond degree {self.bound} "
                f"(min entry norm {q_min}); coefficients are a lower truncation",
                CompletenessWarning,
                stacklevel=2,
            )
        out: dict[int, Fraction] = {}
        for exps, c in self.coeffs.items():
            n = self.alphabet.mono_norm(exps)
            if n <= n_max:
                out[n] = out.get(n, Fraction(0)) + c
        return {n: out[n] for n in sorted(out) if out[n]}

    # -- integrality ----------------------------------------------------------

    def assert_integral(self, require_nonnegative: bool = True) -> "TruncatedSeries":
        """Check all coefficients are integers (and by default >= 0)."""
        from .errors import FormulaViolationError

        for k in sorted(self.coeffs, key=lambda k: (mono_degree(k), k)):
            c = self.coeffs[k]
            if c.denominator != 1 or (require_nonnegative and c < 0):
                raise FormulaViolationError(
                    "series coefficient is not a nonnegative integer",
                    monomial=self.alphabet.format_monomial(k),
                    expected="nonnegative integer",
                    actual=str(c),
                )
        return self

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = [
            {"exp": list(k), "num": c.numerator, "den": c.denominator}
            for k, c in sorted(self.coeffs.items())
        ]
        return {"alphabet": self.alphabet.to_json(), "bound": self.bound, "terms": terms}

    @classmethod
    def from_json_dict(cls, payload) -> "TruncatedSeries":
        try:
            alphabet = Alphabet.from_json(payload["alphabet"])
            bound = int(payload["bound"])
            raw = payload["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad series payload: {exc}") from exc
        coeffs: dict[Monomial, Fraction] = {}
        for term in raw:
            try:
                exps = tuple(int(e) for e in term["exp"])
                c = Fraction(int(term["num"]), int(term["den"]))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"bad series term {term!r}: {exc}") from exc
            if mono_degree(exps) > bound:
                raise SchemaError(f"term {term['exp']} exceeds declared bound {bound}")
            if exps in coeffs:
                raise SchemaError(f"duplicate exponent vector {term['exp']}")
            coeffs[exps] = c
        return cls(alphabet, bound, coeffs)


def product_eval(
    alphabet: Alphabet,
    bound: int,
    factors: Iterable[tuple[int, TruncatedSeries]],
    stall_limit: int = 20000,
) -> TruncatedSeries:
    """Evaluate a (possibly infinite) product of unit series at a truncation.

    ``factors`` yields ``(floor, series)`` pairs: factor k equals 1 strictly
    below degree ``floor_k``, and the floors are nondecreasing and unbounded.
    Factors whose floor exceeds ``bound`` are identically 1 at this truncation,
    so iteration stops at the first such factor; the declared floors are
    verified against the actual series.
    """
    acc = TruncatedSeries.one(alphabet, bound)
    last_floor = 0
    count = 0
    for floor, factor in factors:
        if floor < last_floor:
            raise PseudoConvergenceError(f"floor sequence decreased: {last_floor} -> {floor}")
        last_floor = floor
        if floor > bound:
            break
        count += 1
        if count > stall_limit:
            raise PseudoConvergenceError(
                f"{stall_limit} factors consumed without the floor passing {bound}; "
                "the product is not certified to converge at this truncation"
            )
        if factor.alphabet != alphabet:
            raise AlphabetMismatchError("product factor over a different alphabet")
        if factor.bound != bound:
            raise TruncationBoundError(f"factor bound {factor.bound} != product bound {bound}")
        if factor.constant_term != 1:
            raise PseudoConvergenceError(f"product factor has constant term {factor.constant_term} != 1")
        low = min(
            (mono_degree(k) for k in factor.coeffs if mono_degree(k) > 0),
            default=None,
        )
        if low is not None and low < floor:
            raise PseudoConvergenceError(f"factor declared floor {floor} but has a degree-{low} term")
        acc = acc * factor
    return acc


def slice_coefficient(series: TruncatedSeries, h: Monomial, first_count: int) -> TruncatedSeries:
    """Extract the coefficient of a second-copy monomial from a split alphabet.

    The alphabet is read as ``first_count`` leading entries plus a trailing
    block; ``h`` is an exponent vector over the full alphabet supported on the
    trailing block.  Returns the series over the leading block that multiplies
    the trailing monomial; it is complete through ``bound - degree(h)``.
    """
    n = len(series.alphabet)
    h = tuple(h)
    if len(h) != n:
        raise SchemaError(f"slice monomial has {len(h)} slots, alphabet has {n}")
    if any(h[i] for i in range(first_count)):
        raise SchemaError("slice monomial must be supported on the trailing block")
    d = mono_degree(h)
    if d > series.bound:
        raise TruncationBoundError(f"slice degree {d} exceeds bound {series.bound}")
    tail = h[first_count:]
    sub_alphabet = Alphabet(series.alphabet.entries[:first_count])
    out: dict[Monomial, Fraction] = {}
    for k, c in series.coeffs.items():
        if k[first_count:] == tail:
            out[k[:first_count]] = c
    return TruncatedSeries(sub_alphabet, series.bound - d, out)
