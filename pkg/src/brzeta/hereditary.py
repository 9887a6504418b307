"""Two-variable submodule counts over basic orders with a cyclic radical chain.

The order is determined by (q, n): residue field size q and n simple classes
whose projective covers form a chain of column lattices.  A lattice M is a
multiset of column types c_1 <= ... <= c_r.  The count assembled here is

    sum over finite-colength sublattices X of  w^{iso class of X} z^{colength},

computed by stratifying X by the image of X + pi*M_1 inside M_1/pi*M_1 =
F_q^r, counting each stratum with a chain polynomial (enumerated over actual
subspace chains), a Hermite-form stratum polynomial in v = z_1...z_n, and the
rank-r one-variable base count.  The assembled sum is exactly divisible by a
fixed column-shift monomial u; non-divisibility is a formula violation.

Every returned term has w-degree exactly r, so a z-truncation at B is
complete once the total-degree bound is B + r.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gfq
from .errors import FormulaViolationError, NonUnitError, SchemaError, TruncationBoundError
from .series import Alphabet, AlphabetEntry, Monomial, TruncatedSeries, mono_degree, slice_coefficient

DEFAULT_BUDGET = gfq.DEFAULT_BUDGET


@dataclass(frozen=True)
class HereditaryOrderSpec:
    """q = residue field size, n = number of simple classes in the chain."""

    q: int
    n: int

    def __post_init__(self):
        if self.q < 2:
            raise SchemaError(f"residue field size must be >= 2, got {self.q}")
        if self.n < 1:
            raise SchemaError(f"chain length must be >= 1, got {self.n}")


@dataclass(frozen=True)
class HereditaryModuleSpec:
    """Column-type multiset c_1..c_r (stored sorted), one slot per projective summand."""

    columns: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(sorted(int(c) for c in self.columns))
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise SchemaError("module needs at least one column")
        if cols[0] < 1:
            raise SchemaError(f"column types start at 1, got {cols}")

    @property
    def r(self) -> int:
        return len(self.columns)

    def flag_dim(self, j: int) -> int:
        """dim of the coordinate subspace of columns with type >= j."""
        return sum(1 for c in self.columns if c >= j)

    def shift_length(self, i: int) -> int:
        """Number of columns of type < i (the z_i-exponent of u)."""
        return sum(1 for c in self.columns if c < i)

    def top_vector(self, n: int) -> tuple[int, ...]:
        """Multiplicity of each simple class in M's top."""
        return tuple(sum(1 for c in self.columns if c == i) for i in range(1, n + 1))


@dataclass(frozen=True)
class TopClass:
    """Isomorphism class of a full-rank sublattice: projective multiplicities."""

    rho: tuple[int, ...]

    def __post_init__(self):
        rho = tuple(int(x) for x in self.rho)
        object.__setattr__(self, "rho", rho)
        if any(x < 0 for x in rho):
            raise SchemaError(f"class multiplicities must be >= 0, got {rho}")


def _validate_pair(order: HereditaryOrderSpec, module: HereditaryModuleSpec):
    if module.columns[-1] > order.n:
        raise SchemaError(
            f"column type {module.columns[-1]} exceeds the order's chain length {order.n}"
        )


def z_alphabet(order: HereditaryOrderSpec) -> Alphabet:
    n = order.n
    labels = ["z"] if n == 1 else [f"z{i}" for i in range(1, n + 1)]
    return Alphabet(tuple(AlphabetEntry(lab, order.q, 1) for lab in labels))


def doubled_alphabet(order: HereditaryOrderSpec) -> Alphabet:
    n = order.n
    z_labels = ["z"] if n == 1 else [f"z{i}" for i in range(1, n + 1)]
    w_labels = ["w"] if n == 1 else [f"w{i}" for i in range(1, n + 1)]
    return Alphabet(tuple(AlphabetEntry(lab, order.q, 1) for lab in z_labels + w_labels))


def substitution_data(
    order: HereditaryOrderSpec, module: HereditaryModuleSpec
) -> tuple[Monomial, Monomial, list[Monomial]]:
    """(u, v, t_1..t_n) as exponent vectors over the doubled alphabet.

    u shifts by the columns already past each class, v is the product of all
    z_i, and t_j couples the class-j marker w_j with the z's strictly above j.
    """
    _validate_pair(order, module)
    n = order.n
    u = tuple(module.shift_length(i) for i in range(1, n + 1)) + (0,) * n
    v = (1,) * n + (0,) * n
    t = []
    for j in range(1, n + 1):
        z_part = tuple(1 if i > j else 0 for i in range(1, n + 1))
        w_part = tuple(1 if i == j else 0 for i in range(1, n + 1))
        t.append(z_part + w_part)
    return u, v, t


def filtered_dims(
    order: HereditaryOrderSpec, module: HereditaryModuleSpec, ybar: gfq.SubspaceRep
) -> gfq.FilteredSpace:
    """Dimension vector of the column filtration induced by a stratum Ybar.

    d_j = dim(Ybar meet m_j) + (r - dim Ybar), with m_j the coordinate span of
    the columns of type >= j; always starts at d_1 = r.
    """
    _validate_pair(order, module)
    r = module.r
    if ybar.ambient != r:
        raise SchemaError(f"stratum lives in F^{ybar.ambient}, expected F^{r}")
    field = ybar.field
    dims = []
    for j in range(1, order.n + 1):
        coords = [k for k, c in enumerate(module.columns) if c >= j]
        if len(coords) == r:
            inter_dim = ybar.dim
        else:
            rows = np.zeros((len(coords), r), dtype=np.int64)
            for row_i, k in enumerate(coords):
                rows[row_i, k] = 1
            mj = gfq.SubspaceRep(field, r, rows, np.array(coords, dtype=np.int64))
            inter_dim = gfq.intersection(ybar, mj).dim
        dims.append(inter_dim + (r - ybar.dim))
    return gfq.FilteredSpace(tuple(dims))


_chain_count_cache: dict[tuple[int, tuple[int, ...]], dict[tuple[int, ...], int]] = {}


def chain_degree_counts(
    q: int, dims: tuple[int, ...], budget: int = DEFAULT_BUDGET
) -> dict[tuple[int, ...], int]:
    """How many chains in the model filtered space have each degree vector."""
    key = (q, tuple(dims))
    hit = _chain_count_cache.get(key)
    if hit is None:
        field = gfq.GF(q)
        fs = gfq.FilteredSpace(tuple(dims))
        counts: dict[tuple[int, ...], int] = {}
        for ch in gfq.enumerate_chains(field, fs, budget):
            vec = gfq.chain_degree_vector(fs, ch)
            counts[vec] = counts.get(vec, 0) + 1
        hit = _chain_count_cache[key] = counts
    return hit


def filtered_poly(
    filtered: gfq.FilteredSpace,
    q: int,
    t_exps: list[Monomial],
    alphabet: Alphabet,
    bound: int,
    budget: int = DEFAULT_BUDGET,
) -> TruncatedSeries:
    """Chain-sum polynomial: sum over chains of prod_j t_j^(step dimension).

    Depends on the filtered space only through its dimension vector.
    """
    if len(t_exps) != filtered.n:
        raise SchemaError(f"{filtered.n} filtration levels need {filtered.n} t-monomials")
    width = len(alphabet)
    coeffs: dict[Monomial, Fraction] = {}
    for degvec, cnt in chain_degree_counts(q, filtered.dims, budget).items():
        exps = [0] * width
        for j, d in enumerate(degvec):
            if d:
                tj = t_exps[j]
                for idx in range(width):
                    exps[idx] += tj[idx] * d
        key = tuple(exps)
        if mono_degree(key) <= bound:
            coeffs[key] = coeffs.get(key, Fraction(0)) + cnt
    return TruncatedSeries(alphabet, bound, coeffs)


def hermite_Q(m: int, r: int, q: int) -> list[int]:
    """Stratum weight v^(r-m) * prod_{i=1}^m (1 - q^(i-1) v), as v-coefficients."""
    if not 0 <= m <= r:
        raise SchemaError(f"stratum dimension must satisfy 0 <= m <= r, got m={m}, r={r}")
    coeffs = [0] * (r - m) + [1]
    for i in range(1, m + 1):
        scale = q ** (i - 1)
        nxt = coeffs + [0]
        for k in range(len(coeffs)):
            nxt[k + 1] -= scale * coeffs[k]
        coeffs = nxt
    return coeffs


def poly_in_monomial(alphabet: Alphabet, bound: int, coeffs, exps: Monomial) -> TruncatedSeries:
    """sum_k coeffs[k] * m^k for a degree >= 1 monomial m."""
    exps = tuple(exps)
    d = mono_degree(exps)
    if d < 1:
        raise TruncationBoundError("polynomial base monomial must have degree >= 1")
    out: dict[Monomial, Fraction] = {}
    cur = (0,) * len(alphabet)
    for k, c in enumerate(coeffs):
        if k * d > bound:
            break
        if c:
            out[cur] = Fraction(c)
        cur = tuple(a + b for a, b in zip(cur, exps))
    return TruncatedSeries(alphabet, bound, out)


def solomon_hey_factor(
    r: int,
    q: int,
    bound: int,
    alphabet: Alphabet | None = None,
    v_exps: Monomial | None = None,
) -> TruncatedSeries:
    """Base count of the rank-r free lattice: prod_{j=0}^{r-1} (1 - q^j v)^{-1}."""
    if r < 0:
        raise SchemaError(f"rank must be >= 0, got {r}")
    if alphabet is None:
        alphabet = Alphabet((AlphabetEntry("v", q, 1),))
        v_exps = (1,)
    if v_exps is None:
        raise SchemaError("custom alphabet needs explicit v exponents")
    out = TruncatedSeries.one(alphabet, bound)
    for j in range(r):
        out = out * TruncatedSeries.geometric(alphabet, bound, v_exps, q**j)
    return out


def hermite_orbit_sum(m: int, r: int, q: int, bound: int) -> TruncatedSeries:
    """Orbit-by-orbit count prod_{j=m+1}^{r} v/(1 - q^(j-1) v) in the v variable.

    Equals hermite_Q(m,r,q) times solomon_hey_factor(r,q) as truncated series.
    """
    if not 0 <= m <= r:
        raise SchemaError(f"stratum dimension must satisfy 0 <= m <= r, got m={m}, r={r}")
    alphabet = Alphabet((AlphabetEntry("v", q, 1),))
    out = TruncatedSeries.monomial(alphabet, bound, (r - m,))
    for j in range(m + 1, r + 1):
        out = out * TruncatedSeries.geometric(alphabet, bound, (1,), q ** (j - 1))
    return out


def brz_two_variable(
    order: HereditaryOrderSpec,
    module: HereditaryModuleSpec,
    z_bound: int,
    budget: int = DEFAULT_BUDGET,
) -> TruncatedSeries:
    """Joint class/colength count over the doubled alphabet (z block, w block).

    Returned at total-degree bound z_bound + r; since every term has w-degree
    exactly r, all colength degrees up to z_bound are complete.
    """
    _validate_pair(order, module)
    if z_bound < 0:
        raise TruncationBoundError(f"bound must be >= 0, got {z_bound}")
    q, n, r = order.q, order.n, module.r
    alphabet = doubled_alphabet(order)
    u_exps, v_exps, t_exps = substitution_data(order, module)
    deg_u = mono_degree(u_exps)
    internal_bound = z_bound + r + deg_u
    field = gfq.GF(q)

    groups: dict[tuple[tuple[int, ...], int], int] = {}
    for ybar in gfq.enumerate_subspaces(field, r, budget=budget):
        dims = filtered_dims(order, module, ybar).dims
        key = (dims, ybar.dim)
        groups[key] = groups.get(key, 0) + 1

    acc = TruncatedSeries.zero(alphabet, internal_bound)
    for (dims, m), count in sorted(groups.items()):
        p_series = filtered_poly(
            gfq.FilteredSpace(dims), q, t_exps, alphabet, internal_bound, budget
        )
        q_series = poly_in_monomial(alphabet, internal_bound, hermite_Q(m, r, q), v_exps)
        acc = acc + (p_series * q_series).scaled(count)

    shifted = acc * solomon_hey_factor(r, q, internal_bound, alphabet, v_exps)
    try:
        return shifted.divided_by_monomial(u_exps)
    except NonUnitError as exc:
        raise FormulaViolationError(
            f"assembled stratum sum is not divisible by the column-shift monomial: {exc}"
        ) from exc


def brs_F(
    order: HereditaryOrderSpec,
    module: HereditaryModuleSpec,
    bound: int,
    budget: int = DEFAULT_BUDGET,
) -> TruncatedSeries:
    """Exact polynomial F with Z(M; z, w) = F * (rank-r base count in v).

    Computed without truncation loss (all ingredients are polynomials with an
    a-priori degree bound), then restated at the requested bound.  Raises a
    formula violation if coefficients are non-integral or the degree does not
    sit below the requested bound.
    """
    _validate_pair(order, module)
    q, n, r = order.q, order.n, module.r
    alphabet = doubled_alphabet(order)
    u_exps, v_exps, t_exps = substitution_data(order, module)
    # every factor is an exact polynomial: chain sums have z-degree <= r(n-1)
    # and stratum weights z-degree <= rn, so 2rn total covers the assembly
    exact_bound = 2 * r * n + r
    field = gfq.GF(q)
    groups: dict[tuple[tuple[int, ...], int], int] = {}
    for ybar in gfq.enumerate_subspaces(field, r, budget=budget):
        dims = filtered_dims(order, module, ybar).dims
        key = (dims, ybar.dim)
        groups[key] = groups.get(key, 0) + 1
    acc = TruncatedSeries.zero(alphabet, exact_bound)
    for (dims, m), count in sorted(groups.items()):
        p_series = filtered_poly(gfq.FilteredSpace(dims), q, t_exps, alphabet, exact_bound, budget)
        q_series = poly_in_monomial(alphabet, exact_bound, hermite_Q(m, r, q), v_exps)
        acc = acc + (p_series * q_series).scaled(count)
    try:
        poly = acc.divided_by_monomial(u_exps)
    except NonUnitError as exc:
        raise FormulaViolationError(
            f"polynomial factor is not divisible by the column-shift monomial: {exc}"
        ) from exc
    poly.assert_integral(require_nonnegative=False)
    if poly.max_degree() > bound:
        raise FormulaViolationError(
            "polynomial factor does not stabilize below the requested bound",
            expected=f"degree < {bound}",
            actual=f"degree {poly.max_degree()}",
        )
    return poly.extended(bound) if bound >= poly.bound else poly.truncated(bound)


def partial_zeta(
    order: HereditaryOrderSpec,
    module: HereditaryModuleSpec,
    top: TopClass,
    z_bound: int,
    budget: int = DEFAULT_BUDGET,
) -> TruncatedSeries:
    """Count of sublattices in one isomorphism class, by colength monomial."""
    rho = top.rho if isinstance(top, TopClass) else TopClass(tuple(top)).rho
    n = order.n
    if len(rho) != n:
        raise SchemaError(f"class vector has {len(rho)} slots, order has {n} classes")
    if sum(rho) != module.r:
        return TruncatedSeries.zero(z_alphabet(order), z_bound)
    joint = brz_two_variable(order, module, z_bound, budget)
    return slice_coefficient(joint, (0,) * n + tuple(rho), n)


def total_zeta(
    order: HereditaryOrderSpec,
    module: HereditaryModuleSpec,
    z_bound: int,
    budget: int = DEFAULT_BUDGET,
) -> TruncatedSeries:
    """Colength count with the class markers forgotten (all w_i -> 1)."""
    joint = brz_two_variable(order, module, z_bound, budget)
    n = order.n
    out: dict[Monomial, Fraction] = {}
    for exps, c in joint.items():
        zpart = exps[:n]
        if mono_degree(zpart) <= z_bound:
            out[zpart] = out.get(zpart, Fraction(0)) + c
    return TruncatedSeries(z_alphabet(order), z_bound, out)


def hereditary_from_json(payload) -> tuple[HereditaryOrderSpec, HereditaryModuleSpec]:
    if not isinstance(payload, dict):
        raise SchemaError("hereditary input must be an object with q, n, columns")
    try:
        q = int(payload["q"])
        n = int(payload["n"])
        columns = tuple(int(c) for c in payload["columns"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"hereditary input needs q, n, columns: {exc}") from exc
    order = HereditaryOrderSpec(q, n)
    module = HereditaryModuleSpec(columns)
    _validate_pair(order, module)
    return order, module
