"""Assembly of full submodule counts from counts over a designated slice.

The module M sits over a ring with an invertible ideal I; the slice M/IM is
small (semisimple, a free module over a discrete valuation slice, or a
lattice over a chain order), and a permutation sigma records how tensoring
with I permutes the simple classes.  Every finite-colength submodule X of M
is rebuilt layer by layer from its images in M/IM, which turns the full count
into a sum over sequences of slice classes of substituted slice counts: the
layer-j substitution sends each class variable to a degree-(j+1) monomial
with a hom-count scalar, so the sum is finite under any truncation bound.

Also here: the layered product form for split slices, Dirichlet
specializations (one-class ideal counts, the integer power-series ring count
assembled prime by prime, hom-weighted slices), and the factored form that
pulls the class-independent base count out of every layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _iter_product

from . import hereditary as _her
from .errors import (
    FormulaViolationError,
    ResourceBudgetError,
    SchemaError,
    TruncationBoundError,
)
from .hey import SemisimpleData, SemisimpleEntry, hey_product
from .qcomb import gaussian_binomial, partition_count
from .series import (
    Alphabet,
    AlphabetEntry,
    Monomial,
    TruncatedSeries,
    mono_degree,
    product_eval,
    slice_coefficient,
)

ClassVec = tuple[int, ...]

DEFAULT_SEQUENCE_BUDGET = 200_000


# -- permutations -------------------------------------------------------------


def validate_permutation(sigma, n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(n)):
        raise SchemaError(f"sigma must be a bijection of 0..{n - 1}, got {sigma}")
    return sigma


def perm_apply(sigma: tuple[int, ...], vec: ClassVec) -> ClassVec:
    """Push a class vector through sigma: entry i moves to slot sigma[i]."""
    out = [0] * len(vec)
    for i, v in enumerate(vec):
        out[sigma[i]] = v
    return tuple(out)


# -- slice data ----------------------------------------------------------------


class SliceBase:
    """The slice M/IM plus the class permutation induced by tensoring with I.

    Kinds: ``semisimple`` (split module, one variable per simple class),
    ``dvr`` (free rank-m module over a discrete valuation slice, one class),
    ``hereditary`` (chain-order lattice, classes 1..n).
    """

    def __init__(self, kind, *, data=None, q=None, m=None, order=None, module=None, sigma=None):
        self.kind = kind
        if kind == "semisimple":
            if not isinstance(data, SemisimpleData):
                raise SchemaError("semisimple base needs SemisimpleData")
            self.data = data
            n = len(data.entries)
        elif kind == "dvr":
            if q is None or m is None or q < 2 or m < 0:
                raise SchemaError(f"dvr base needs q >= 2 and m >= 0, got q={q}, m={m}")
            self.q, self.m = int(q), int(m)
            n = 1
        elif kind == "hereditary":
            if not isinstance(order, _her.HereditaryOrderSpec) or not isinstance(
                module, _her.HereditaryModuleSpec
            ):
                raise SchemaError("hereditary base needs order and module specs")
            self.order, self.module = order, module
            n = order.n
        else:
            raise SchemaError(f"unknown slice kind {kind!r}")
        self.n_classes = n
        self.sigma = validate_permutation(sigma if sigma is not None else range(n), n)

    @classmethod
    def semisimple(cls, data: SemisimpleData, sigma=None) -> "SliceBase":
        return cls("semisimple", data=data, sigma=sigma)

    @classmethod
    def dvr(cls, q: int, m: int) -> "SliceBase":
        return cls("dvr", q=q, m=m)

    @classmethod
    def hereditary(cls, order, module, sigma=None) -> "SliceBase":
        return cls("hereditary", order=order, module=module, sigma=sigma)

    def __repr__(self) -> str:
        if self.kind == "semisimple":
            core = repr(self.data)
        elif self.kind == "dvr":
            core = f"q={self.q}, m={self.m}"
        else:
            core = f"{self.order}, {self.module}"
        return f"SliceBase({self.kind}, {core}, sigma={self.sigma})"

    # -- class bookkeeping -------------------------------------------------

    def alphabet(self) -> Alphabet:
        if self.kind == "semisimple":
            return self.data.alphabet()
        if self.kind == "dvr":
            return Alphabet((AlphabetEntry("z", self.q, 1),))
        return _her.z_alphabet(self.order)

    def class_qs(self) -> tuple[int, ...]:
        if self.kind == "semisimple":
            return tuple(e.q for e in self.data.entries)
        if self.kind == "dvr":
            return (self.q,)
        return (self.order.q,) * self.order.n

    def top_class(self) -> ClassVec:
        if self.kind == "semisimple":
            return tuple(e.m for e in self.data.entries)
        if self.kind == "dvr":
            return (self.m,)
        return self.module.top_vector(self.order.n)

    def fibre_classes(self) -> list[ClassVec]:
        """All classes a layer image can take (unrealizable steps count zero)."""
        if self.kind == "semisimple":
            ranges = [range(e.m + 1) for e in self.data.entries]
            return [tuple(v) for v in _iter_product(*ranges)]
        if self.kind == "dvr":
            return [(self.m,)]
        # lattice classes of the same rank: compositions of r into n parts
        r, n = self.module.r, self.order.n
        out = []

        def rec(slots, remaining, acc):
            if slots == 1:
                out.append(tuple(acc + [remaining]))
                return
            for v in range(remaining + 1):
                rec(slots - 1, remaining - v, acc + [v])

        rec(n, r, [])
        return out

    def hom_count(self, rho: ClassVec, ell: ClassVec) -> int:
        """Size of the hom space from the projective of top rho to the class ell."""
        out = 1
        for qi, a, b in zip(self.class_qs(), rho, ell):
            if a and b:
                out *= qi ** (a * b)
        return out

    # -- slice counts --------------------------------------------------------

    def pair_zeta(self, upper: ClassVec, lower: ClassVec, bound: int, budget=None) -> TruncatedSeries:
        """Count of submodules of class ``lower`` inside a slice module of class
        ``upper``, by colength monomial over the slice alphabet."""
        al = self.alphabet()
        if self.kind == "semisimple":
            coeff = 1
            exps = []
            for e, a, b in zip(self.data.entries, upper, lower):
                if b > a:
                    return TruncatedSeries.zero(al, bound)
                coeff *= gaussian_binomial(a, b, e.q)
                exps.append(a - b)
            return TruncatedSeries(al, bound, {tuple(exps): Fraction(coeff)})
        if self.kind == "dvr":
            if lower != upper:
                return TruncatedSeries.zero(al, bound)
            return _hey_single(al, bound, self.q, upper[0])
        mod = _module_of_class(upper)
        kw = {} if budget is None else {"budget": budget}
        return _her.partial_zeta(self.order, mod, _her.TopClass(lower), bound, **kw)

    def total_zeta(self, bound: int, budget=None) -> TruncatedSeries:
        """Count of all finite-colength submodules of the slice module."""
        al = self.alphabet()
        if self.kind == "semisimple":
            out = TruncatedSeries.zero(al, bound)
            for lower in self.fibre_classes():
                out = out + self.pair_zeta(self.top_class(), lower, bound)
            return out
        if self.kind == "dvr":
            return _hey_single(al, bound, self.q, self.m)
        kw = {} if budget is None else {"budget": budget}
        return _her.total_zeta(self.order, self.module, bound, **kw)

    def all_submodules_isomorphic(self) -> bool:
        """True when every finite-colength submodule of the slice is a copy of it."""
        if self.kind == "dvr":
            return True
        if self.kind == "hereditary":
            return self.order.n == 1
        return False

    @classmethod
    def from_json(cls, payload) -> "SliceBase":
        if not isinstance(payload, dict):
            raise SchemaError("slice base must be an object")
        spec = payload.get("base", payload)
        kind = spec.get("kind")
        raw_sigma = payload.get("sigma", spec.get("sigma"))
        if kind == "semisimple":
            data = SemisimpleData.from_json(spec.get("entries", spec.get("classes", [])))
            sigma = sigma_from_one_based(raw_sigma, len(data.entries))
            return cls.semisimple(data, sigma)
        if kind == "dvr":
            try:
                base = cls.dvr(int(spec["q"]), int(spec["m"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"dvr base needs q and m: {exc}") from exc
            if raw_sigma is not None and sigma_from_one_based(raw_sigma, 1) != (0,):
                raise SchemaError("dvr base has a single class; sigma must be [1]")
            return base
        if kind == "hereditary":
            order, module = _her.hereditary_from_json(spec)
            sigma = sigma_from_one_based(raw_sigma, order.n)
            return cls.hereditary(order, module, sigma)
        raise SchemaError(f"unknown slice kind {kind!r}")


def sigma_from_one_based(raw, n: int):
    if raw is None:
        return None
    if not isinstance(raw, (list, tuple)):
        raise SchemaError("sigma must be a list of 1-based images")
    return validate_permutation([int(x) - 1 for x in raw], n)


def _hey_single(al: Alphabet, bound: int, q: int, m: int) -> TruncatedSeries:
    out = TruncatedSeries.one(al, bound)
    unit = al.unit(0)
    for j in range(m):
        out = out * TruncatedSeries.geometric(al, bound, unit, q**j)
    return out


def _module_of_class(rho: ClassVec) -> _her.HereditaryModuleSpec:
    cols = []
    for i, v in enumerate(rho, start=1):
        cols.extend([i] * v)
    return _her.HereditaryModuleSpec(tuple(cols))


# -- class sequences and chains ----------------------------------------------


@dataclass(frozen=True)
class ClassSequence:
    """Finite prefix of a class sequence; the last stored entry repeats forever."""

    entries: tuple[ClassVec, ...]

    def __post_init__(self):
        if not self.entries:
            raise SchemaError("class sequence needs at least one entry")

    def at(self, j: int) -> ClassVec:
        return self.entries[min(j, len(self.entries) - 1)]


@dataclass(frozen=True)
class ChainData:
    """Increasing chain of slice submodules by class: tops of the Y_j and the
    classes of the successive quotients Y_{j+1}/Y_j; constant beyond the
    stored prefix (all later quotients zero)."""

    y_tops: tuple[ClassVec, ...]
    quotients: tuple[ClassVec, ...]

    def __post_init__(self):
        if len(self.y_tops) != len(self.quotients) + 1:
            raise SchemaError(
                f"{len(self.y_tops)} chain levels need {len(self.y_tops) - 1} quotients, "
                f"got {len(self.quotients)}"
            )
        widths = {len(v) for v in self.y_tops} | {len(v) for v in self.quotients}
        if len(widths) > 1:
            raise SchemaError(f"mixed class-vector widths {widths}")
        for v in self.y_tops + self.quotients:
            if any(x < 0 for x in v):
                raise SchemaError(f"negative class multiplicity in {v}")

    def top_at(self, j: int) -> ClassVec:
        return self.y_tops[min(j, len(self.y_tops) - 1)]

    def quotient_at(self, j: int) -> ClassVec:
        if j < len(self.quotients):
            return self.quotients[j]
        return (0,) * len(self.y_tops[0])


def change_of_variable(base: SliceBase, seq, j: int) -> dict[int, tuple[Fraction, Monomial]]:
    """Layer-j substitution targets: z_i -> scalar_i * prod_k z_{sigma^k(i)}.

    ``seq`` supplies the classes P_0..P_j (a ClassSequence or plain sequence);
    the scalar divides out the hom count from P_j and multiplies the hom counts
    from P_{j-k} against the k-times-twisted class, so the j=0 map is the
    identity.  Targets have degree j+1, which keeps truncation sound.
    """
    if j < 0:
        raise SchemaError(f"layer index must be >= 0, got {j}")
    at = seq.at if isinstance(seq, ClassSequence) else lambda k: seq[min(k, len(seq) - 1)]
    n = base.n_classes
    sigma = base.sigma
    mapping: dict[int, tuple[Fraction, Monomial]] = {}
    for i in range(n):
        exps = [0] * n
        num = Fraction(1)
        tgt = i
        for k in range(j + 1):
            exps[tgt] += 1
            unit = tuple(1 if s == tgt else 0 for s in range(n))
            num *= base.hom_count(at(j - k), unit)
            tgt = sigma[tgt]
        unit_i = tuple(1 if s == i else 0 for s in range(n))
        mapping[i] = (num / base.hom_count(at(j), unit_i), tuple(exps))
    return mapping


def fundamental_fiber_product(base: SliceBase, chain: ChainData, bound: int) -> TruncatedSeries:
    """Contribution of one stabilizing chain: a single scaled monomial.

    Layer j contributes the hom counts of the earlier levels against the
    twisted quotient class and the twisted-class monomials; the layer's own
    hom count cancels, so the constant chain gives 1.
    """
    al = base.alphabet()
    n = base.n_classes
    if len(chain.y_tops[0]) != n:
        raise SchemaError(f"chain class width {len(chain.y_tops[0])} != {n} slice classes")
    if chain.y_tops[-1] != base.top_class():
        raise SchemaError("chain does not stabilize at the class of the slice module")
    coeff = Fraction(1)
    exps = [0] * n
    for j, ell in enumerate(chain.quotients):
        if not any(ell):
            continue
        twisted = ell
        for k in range(j + 1):
            for idx, v in enumerate(twisted):
                exps[idx] += v
            if k:
                coeff *= base.hom_count(chain.top_at(j - k), twisted)
            twisted = perm_apply(base.sigma, twisted)
    return TruncatedSeries(al, bound, {tuple(exps): coeff})


def semisimple_partial_zeta(
    a: int, b: int, q: int, entry: int, bound: int, alphabet: Alphabet | None = None
) -> TruncatedSeries:
    """Submodule count of one split class: gaussian_binomial(a,b,q) z_entry^(a-b)."""
    if not 0 <= b <= a:
        raise SchemaError(f"need 0 <= b <= a, got a={a}, b={b}")
    if alphabet is None:
        alphabet = Alphabet((AlphabetEntry("z", q, 1),))
    exps = [0] * len(alphabet)
    exps[entry] = a - b
    return TruncatedSeries(alphabet, bound, {tuple(exps): Fraction(gaussian_binomial(a, b, q))})


# -- proliferation sums -------------------------------------------------------


def _sequence_budget_guard(base: SliceBase, bound: int, budget: int):
    leaves = len(base.fibre_classes()) ** max(bound, 0)
    if leaves > budget:
        raise ResourceBudgetError(
            "class-sequence search tree too large", required=leaves, budget=budget
        )


def _proliferation_dfs(base: SliceBase, bound: int, pair_series, budget: int) -> TruncatedSeries:
    """Sum over class sequences of the product of substituted layer counts.

    ``pair_series(upper, lower, src_bound)`` supplies the layer count in the
    slice alphabet; layers at positions >= bound reduce to 1 at this bound
    because a class jump at position j costs degree >= j+1.
    """
    al = base.alphabet()
    if bound < 0:
        raise TruncationBoundError(f"bound must be >= 0, got {bound}")
    one = TruncatedSeries.one(al, bound)
    if bound == 0:
        return one
    _sequence_budget_guard(base, bound, budget)
    top = base.top_class()
    classes = base.fibre_classes()
    total = TruncatedSeries.zero(al, bound)
    cache: dict[tuple[ClassVec, ClassVec, int], TruncatedSeries] = {}

    def raw_pair(upper: ClassVec, lower: ClassVec, src_bound: int) -> TruncatedSeries:
        key = (upper, lower, src_bound)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = pair_series(upper, lower, src_bound)
        return hit

    def rec(j: int, seq: tuple[ClassVec, ...], acc: TruncatedSeries):
        nonlocal total
        if j == bound:
            total = total + acc
            return
        src_bound = bound // (j + 1)
        for upper in classes if j + 1 < bound else [top]:
            raw = raw_pair(upper, seq[j], src_bound)
            if raw.is_zero():
                continue
            mapping = change_of_variable(base, seq + (upper,), j)
            factor = raw.substitute(al, mapping, bound)
            nxt = acc * factor
            if nxt.is_zero():
                continue
            rec(j + 1, seq + (upper,), nxt)

    for p0 in classes:
        rec(0, (p0,), one)
    return total


def proliferation_sum(base: SliceBase, bound: int, budget: int = DEFAULT_SEQUENCE_BUDGET) -> TruncatedSeries:
    """Full submodule count of M assembled from slice counts over class sequences."""
    return _proliferation_dfs(base, bound, lambda u, l, b: base.pair_zeta(u, l, b), budget)


def single_sliver(base: SliceBase, bound: int, assert_isomorphic: bool = False) -> TruncatedSeries:
    """Product form when all finite-colength slice submodules are copies of the slice.

    Automatic for dvr bases (and one-class lattice bases); other bases need
    the caller to assert the hypothesis explicitly.
    """
    if not (base.all_submodules_isomorphic() or assert_isomorphic):
        raise SchemaError(
            "single-sliver form needs all finite-colength slice submodules isomorphic; "
            "pass assert_isomorphic=True to override"
        )
    al = base.alphabet()
    if bound < 0:
        raise TruncationBoundError(f"bound must be >= 0, got {bound}")
    top = ClassSequence((base.top_class(),))

    def factors():
        for j in range(bound):
            src = base.total_zeta(bound // (j + 1))
            mapping = change_of_variable(base, top, j)
            yield j + 1, src.substitute(al, mapping, bound)

    return product_eval(al, bound, factors())


def lifted_hey(data: SemisimpleData, sigma, bound: int) -> TruncatedSeries:
    """Layered product for a module whose slice is split: layer n >= 0 twists
    the class orbit n+1 steps and contributes factors of degree n+1.

    Layer n, class i, step j < m_i contributes
    (1 - q_i^(j - m_i) * prod_{k=0}^n w_{sigma^k(i)})^{-1} with w_i = q_i^(m_i) z_i.
    """
    entries = data.entries
    al = data.alphabet()
    if bound < 0:
        raise TruncationBoundError(f"bound must be >= 0, got {bound}")
    n_cls = len(entries)
    if n_cls == 0:
        return TruncatedSeries.one(al, bound)
    sigma = validate_permutation(sigma if sigma is not None else range(n_cls), n_cls)

    def factors():
        for layer in range(bound):
            for i, e in enumerate(entries):
                exps = [0] * n_cls
                w_scalar = Fraction(1)
                tgt = i
                for _ in range(layer + 1):
                    exps[tgt] += 1
                    w_scalar *= entries[tgt].q ** entries[tgt].m
                    tgt = sigma[tgt]
                for j in range(e.m):
                    scalar = w_scalar * Fraction(e.q) ** (j - e.m)
                    yield layer + 1, TruncatedSeries.geometric(al, bound, tuple(exps), scalar)

    return product_eval(al, bound, factors())


# -- Dirichlet specializations -------------------------------------------------


def _int_coeffs(mapping: dict[int, Fraction], what: str) -> dict[int, int]:
    out = {}
    for k, c in sorted(mapping.items()):
        if c.denominator != 1:
            raise FormulaViolationError(
                f"{what} produced a non-integer count", monomial=str(k), actual=str(c)
            )
        out[k] = c.numerator
    return out


def hom_slice_dirichlet(q: int, r: int, m: int, s_count: int, n_max: int) -> dict[int, int]:
    """Norm-indexed counts when all simple slice components match.

    Expands prod_{n>=0} prod_{j<m} (1 - q^(j+mn) z^(n+1))^(-s_count) with z of
    norm q^r, then groups by norm up to n_max.
    """
    if q < 2 or r < 1 or m < 0 or s_count < 0:
        raise SchemaError(f"bad parameters q={q}, r={r}, m={m}, s_count={s_count}")
    if n_max < 1:
        return {}
    al = Alphabet((AlphabetEntry("z", q, r),))
    bound = 0
    while (q**r) ** (bound + 1) <= n_max:
        bound += 1
    out = TruncatedSeries.one(al, bound)
    for layer in range(bound):
        for j in range(m):
            factor = TruncatedSeries.geometric(al, bound, (layer + 1,), q ** (j + m * layer))
            out = out * factor**s_count
    return _int_coeffs(out.dirichlet_coeffs(n_max), "hom-weighted slice count")


def lustig_coeffs(q: int, i_max: int) -> list[int]:
    """Ideal counts of the one-class power-series ring, colength 0..i_max.

    Computed two ways — partition sums sum_j p(i,j) q^(i-j) and the layered
    product prod_{n>=0} (1 - q^n z^(n+1))^(-1) — which must agree.
    """
    if q < 2 or i_max < 0:
        raise SchemaError(f"bad parameters q={q}, i_max={i_max}")
    by_partitions = []
    for i in range(i_max + 1):
        if i == 0:
            by_partitions.append(1)
        else:
            by_partitions.append(sum(partition_count(i, j) * q ** (i - j) for j in range(1, i + 1)))
    al = Alphabet((AlphabetEntry("z", q, 1),))
    series = TruncatedSeries.one(al, i_max)
    for layer in range(i_max):
        series = series * TruncatedSeries.geometric(al, i_max, (layer + 1,), q**layer)
    by_product = [int(series.coefficient((i,))) for i in range(i_max + 1)]
    if by_partitions != by_product:
        raise FormulaViolationError(
            "partition-sum and layered-product ideal counts disagree",
            expected=str(by_partitions),
            actual=str(by_product),
        )
    return by_partitions


def _dirichlet_mul(a: dict[int, int], b: dict[int, int], n_max: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for x, cx in a.items():
        for y, cy in b.items():
            if x * y <= n_max:
                out[x * y] = out.get(x * y, 0) + cx * cy
    return out


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rossmann_coeffs(n_max: int) -> dict[int, int]:
    """Ideal counts of the integer power-series ring by index, two ways.

    Path one multiplies shifted Riemann factors: index-n^j terms with weight
    n^(j-1) for each j >= 1.  Path two is multiplicative, assembling each n
    from one-class counts at its prime powers.  The two must agree.
    """
    if n_max < 1:
        return {}
    by_factors = {1: 1}
    j = 1
    while 2**j <= n_max:
        layer = {1: 1}
        k = 2
        while k**j <= n_max:
            layer[k**j] = k ** (j - 1)
            k += 1
        by_factors = _dirichlet_mul(by_factors, layer, n_max)
        j += 1
    lustig_cache: dict[int, list[int]] = {}
    by_primes = {}
    for n in range(1, n_max + 1):
        val = 1
        for p, e in _factorize(n).items():
            if p not in lustig_cache:
                emax = 0
                while p ** (emax + 1) <= n_max:
                    emax += 1
                lustig_cache[p] = lustig_coeffs(p, emax)
            val *= lustig_cache[p][e]
        by_primes[n] = val
    if by_factors != by_primes:
        diffs = {n: (by_factors.get(n), by_primes.get(n)) for n in sorted(set(by_factors) | set(by_primes)) if by_factors.get(n) != by_primes.get(n)}
        raise FormulaViolationError(
            "shifted-factor and prime-local ideal counts disagree",
            actual=str(diffs),
        )
    return by_factors


# -- factored form over one-block lattice bases ---------------------------------


def zjv_factor(ell: int, q: int, j: int, bound: int) -> TruncatedSeries:
    """Layer-j image of the rank-ell base count: v -> q^(j*ell) v^(j+1).

    Cross-checked against the closed form prod_{i<ell} (1 - q^(i+j*ell) v^(j+1))^{-1}.
    """
    if ell < 0 or j < 0:
        raise SchemaError(f"need ell >= 0 and j >= 0, got ell={ell}, j={j}")
    al = Alphabet((AlphabetEntry("v", q, 1),))
    src = _her.solomon_hey_factor(ell, q, bound // (j + 1))
    out = src.substitute(al, {0: (Fraction(q) ** (j * ell), (j + 1,))}, bound)
    closed = TruncatedSeries.one(al, bound)
    for i in range(ell):
        closed = closed * TruncatedSeries.geometric(al, bound, (j + 1,), q ** (i + j * ell))
    if out != closed:
        raise FormulaViolationError(
            "substituted and closed-form layer factors disagree",
            expected=str(closed),
            actual=str(out),
        )
    return out


def _as_hereditary(base: SliceBase) -> tuple[_her.HereditaryOrderSpec, _her.HereditaryModuleSpec, SliceBase]:
    if base.kind == "hereditary":
        return base.order, base.module, base
    if base.kind == "dvr":
        if base.m < 1:
            raise SchemaError("factored form needs a nonzero module")
        order = _her.HereditaryOrderSpec(base.q, 1)
        module = _her.HereditaryModuleSpec((1,) * base.m)
        return order, module, SliceBase.hereditary(order, module, base.sigma)
    raise SchemaError("factored form needs a lattice (hereditary or dvr) base")


def brs_factored_prolif(
    base: SliceBase, bound: int, budget: int = DEFAULT_SEQUENCE_BUDGET
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Split the assembled count into (class-independent prefactor, remainder).

    The prefactor collects the layer images of the rank-r base count; the
    remainder is the class-sequence sum with each layer count replaced by its
    polynomial part.  Their product must reproduce the plain assembled sum.
    """
    order, module, her_base = _as_hereditary(base)
    q, n, r = order.q, order.n, module.r
    al = her_base.alphabet()
    if bound < 0:
        raise TruncationBoundError(f"bound must be >= 0, got {bound}")
    v_exps = (1,) * n
    top_seq = ClassSequence((her_base.top_class(),))

    def prefactor_layers():
        for j in range(bound):
            src = _her.solomon_hey_factor(r, q, bound // (j + 1), al, v_exps)
            mapping = change_of_variable(her_base, top_seq, j)
            yield (j + 1) * n, src.substitute(al, mapping, bound)

    prefactor = product_eval(al, bound, prefactor_layers())

    f_cache: dict[ClassVec, TruncatedSeries] = {}

    def pair_poly(upper: ClassVec, lower: ClassVec, src_bound: int) -> TruncatedSeries:
        poly = f_cache.get(upper)
        if poly is None:
            mod = _module_of_class(upper)
            poly = f_cache[upper] = _her.brs_F(order, mod, 2 * r * n + r)
        sliced = slice_coefficient(poly, (0,) * n + lower, n)
        return sliced.extended(src_bound) if src_bound >= sliced.bound else sliced.truncated(src_bound)

    remainder = _proliferation_dfs(her_base, bound, pair_poly, budget)
    direct = proliferation_sum(her_base, bound, budget)
    if prefactor * remainder != direct:
        raise FormulaViolationError(
            "factored assembly disagrees with the direct class-sequence sum",
            expected=str(direct),
            actual=str(prefactor * remainder),
        )
    return prefactor, remainder
