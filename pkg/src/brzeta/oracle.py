"""Brute-force ground truth over explicit finite quotient models.

Each model realizes a module over a finite quotient of the ring of interest
as a finite-field row space with generator action matrices (vectors are rows;
a ring element acts on the right).  Submodules of colength <= B are found by
repeated descent to maximal submodules, deduplicated by canonical echelon
form; quotient composition classes and top classes are read off idempotent
blocks.  A depth guard keeps truncation honest: when the model is a quotient
of an infinite module by a kernel inside radical-power depth d, enumeration
and labeling at colength <= B are faithful only if d >= B + 1, and that
inequality is enforced rather than assumed.

Also here: Jordan types and Hall numbers over chain models, chain counting
with prescribed isomorphism types, and the fiber chart sending a submodule X
to its tower of slice images ((M meet I^-j X) + IM)/IM.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gfq
from .errors import FormulaViolationError, ResourceBudgetError, SchemaError
from .prolif import ChainData
from .series import Alphabet, AlphabetEntry, Monomial, TruncatedSeries

DEFAULT_NODE_BUDGET = 200_000


def _z_alphabet(q: int, n: int) -> Alphabet:
    if n == 1:
        return Alphabet((AlphabetEntry("z", q, 1),))
    return Alphabet(tuple(AlphabetEntry(f"z{i + 1}", q, 1) for i in range(n)))


def _doubled_alphabet(q: int, n: int) -> Alphabet:
    zs = tuple(_z_alphabet(q, n))
    if n == 1:
        ws = (AlphabetEntry("w", q, 1),)
    else:
        ws = tuple(AlphabetEntry(f"w{i + 1}", q, 1) for i in range(n))
    return Alphabet(zs + ws)


@dataclass
class RingModel:
    """A finite module with ring generator actions.

    ``gens`` maps generator names to square int64 matrices acting on row
    vectors; ``rad_names`` generate the radical as a two-sided ideal;
    ``idem_names`` list one idempotent per simple class, in class order
    (every simple class here is one-dimensional over its idempotent block).
    ``depth``: the kernel of the defining quotient lies inside radical-power
    ``depth`` of the true module; ``exact`` marks models that are the object
    of study itself rather than a truncation.
    """

    kind: str
    field: gfq.FieldSpec
    dim: int
    gens: dict
    rad_names: tuple
    idem_names: tuple
    alphabet: Alphabet
    depth: int
    params: dict
    slice_gen: str | None = None
    exact: bool = False

    @property
    def n_classes(self) -> int:
        return len(self.idem_names)

    def full(self) -> gfq.SubspaceRep:
        return gfq.full_space(self.field, self.dim)

    def matrix(self, name: str) -> np.ndarray:
        return self.gens[name]


# -- model constructors ----------------------------------------------------


def chain_module(q: int, c: int, rank: int = 1, exact: bool = False) -> RingModel:
    """Free rank-``rank`` module over F_q[t]/(t^c); basis (copy, t-power)."""
    if c < 1 or rank < 1:
        raise SchemaError(f"need c >= 1 and rank >= 1, got c={c}, rank={rank}")
    field = gfq.GF(q)
    dim = rank * c

    def idx(i, a):
        return i * c + a

    t_mat = np.zeros((dim, dim), dtype=np.int64)
    for i in range(rank):
        for a in range(c - 1):
            t_mat[idx(i, a), idx(i, a + 1)] = 1
    gens = {"t": t_mat, "e1": np.eye(dim, dtype=np.int64)}
    return RingModel(
        kind="chain",
        field=field,
        dim=dim,
        gens=gens,
        rad_names=("t",),
        idem_names=("e1",),
        alphabet=_z_alphabet(q, 1),
        depth=c,
        params={"kind": "chain", "q": q, "c": c, "rank": rank},
        exact=exact,
    )


def local2d_module(q: int, c: int, rank: int = 1) -> RingModel:
    """Free rank-``rank`` module over F_q[u,t]/m^c, m = (u,t); basis u^a t^b."""
    if c < 1 or rank < 1:
        raise SchemaError(f"need c >= 1 and rank >= 1, got c={c}, rank={rank}")
    field = gfq.GF(q)
    monos = [(a, b) for a in range(c) for b in range(c - a)]
    pos = {m: k for k, m in enumerate(monos)}
    block = len(monos)
    dim = rank * block

    def shift(da, db):
        mat = np.zeros((dim, dim), dtype=np.int64)
        for i in range(rank):
            for (a, b), k in pos.items():
                if a + da + b + db < c:
                    mat[i * block + k, i * block + pos[(a + da, b + db)]] = 1
        return mat

    gens = {"u": shift(1, 0), "t": shift(0, 1), "e1": np.eye(dim, dtype=np.int64)}
    return RingModel(
        kind="local2d",
        field=field,
        dim=dim,
        gens=gens,
        rad_names=("u", "t"),
        idem_names=("e1",),
        alphabet=_z_alphabet(q, 1),
        depth=c,
        params={"kind": "local2d", "q": q, "c": c, "rank": rank},
        slice_gen="u",
    )


def _column_basis(n: int, c: int, tau: int):
    """Basis of one column-``tau`` lattice mod pi^c: (coordinate, pi-power).

    Coordinate i carries pi-powers a with offset <= a < offset + c where the
    offset is 1 below the diagonal cut (i > tau) and 0 above.
    """
    basis = []
    for i in range(1, n + 1):
        off = 1 if i > tau else 0
        for a in range(off, off + c):
            basis.append((i, a))
    return basis


def _column_maps(n: int, c: int, tau: int):
    """Matrices of the corner generator g and the idempotents on one column."""
    basis = _column_basis(n, c, tau)
    pos = {b: k for k, b in enumerate(basis)}
    d = len(basis)
    g_mat = np.zeros((d, d), dtype=np.int64)
    for (i, a), k in pos.items():
        # g sends coordinate i to i-1, wrapping 1 -> n with one extra pi
        j, b = (i - 1, a) if i > 1 else (n, a + 1)
        if (j, b) in pos:
            g_mat[k, pos[(j, b)]] = 1
    idems = []
    for cls in range(1, n + 1):
        e = np.zeros((d, d), dtype=np.int64)
        for (i, a), k in pos.items():
            if i == cls:
                e[k, k] = 1
        idems.append(e)
    return d, g_mat, idems


def _block_diag(mats):
    total = sum(m.shape[0] for m in mats)
    out = np.zeros((total, total), dtype=np.int64)
    at = 0
    for m in mats:
        d = m.shape[0]
        out[at : at + d, at : at + d] = m
        at += d
    return out


def triangular_module(q: int, n: int, c: int, columns) -> RingModel:
    """Direct sum of column lattices over the n x n triangular order mod pi^c.

    The order sits inside n x n matrices over F_q[[pi]] with below-diagonal
    entries divisible by pi; its radical is generated by the corner matrix g
    (superdiagonal ones plus pi in the lower-left), and g^n acts as pi.
    """
    columns = tuple(sorted(int(x) for x in columns))
    if n < 1 or c < 1 or not columns:
        raise SchemaError(f"need n >= 1, c >= 1, nonempty columns; got n={n}, c={c}, columns={columns}")
    if any(x < 1 or x > n for x in columns):
        raise SchemaError(f"column types must lie in 1..{n}, got {columns}")
    field = gfq.GF(q)
    g_blocks, idem_blocks = [], [[] for _ in range(n)]
    for tau in columns:
        d, g_mat, idems = _column_maps(n, c, tau)
        g_blocks.append(g_mat)
        for i in range(n):
            idem_blocks[i].append(idems[i])
    gens = {"g": _block_diag(g_blocks)}
    for i in range(n):
        gens[f"e{i + 1}"] = _block_diag(idem_blocks[i])
    return RingModel(
        kind="triangular",
        field=field,
        dim=gens["g"].shape[0],
        gens=gens,
        rad_names=("g",),
        idem_names=tuple(f"e{i + 1}" for i in range(n)),
        alphabet=_z_alphabet(q, n),
        depth=n * c,
        params={"kind": "triangular", "q": q, "n": n, "c": c, "columns": list(columns)},
    )


def skew_module(q: int, n: int, c_pi: int, c_t: int) -> RingModel:
    """The triangular order's power-series extension mod (t^c_t, pi^c_pi),
    as a module over itself: one copy of each column, tensored with t-digits.
    t is central; the slice by I = (t) is the triangular order itself.
    """
    if n < 1 or c_pi < 1 or c_t < 1:
        raise SchemaError(f"need n, c_pi, c_t >= 1; got n={n}, c_pi={c_pi}, c_t={c_t}")
    base = triangular_module(q, n, c_pi, tuple(range(1, n + 1)))
    d0 = base.dim
    dim = d0 * c_t

    def extend(mat):
        out = np.zeros((dim, dim), dtype=np.int64)
        for b in range(c_t):
            out[b * d0 : (b + 1) * d0, b * d0 : (b + 1) * d0] = mat
        return out

    t_mat = np.zeros((dim, dim), dtype=np.int64)
    for b in range(c_t - 1):
        for k in range(d0):
            t_mat[b * d0 + k, (b + 1) * d0 + k] = 1
    gens = {"g": extend(base.gens["g"]), "t": t_mat}
    for name in base.idem_names:
        gens[name] = extend(base.gens[name])
    return RingModel(
        kind="skew_poly",
        field=base.field,
        dim=dim,
        gens=gens,
        rad_names=("g", "t"),
        idem_names=base.idem_names,
        alphabet=_z_alphabet(q, n),
        depth=min(c_t, n * c_pi),
        params={"kind": "skew_poly", "q": q, "n": n, "c_pi": c_pi, "c_t": c_t},
        slice_gen="t",
    )


def model_from_json(payload) -> RingModel:
    if not isinstance(payload, dict):
        raise SchemaError("model description must be an object")
    kind = payload.get("kind")
    try:
        if kind == "chain":
            return chain_module(
                int(payload["q"]), int(payload["c"]),
                int(payload.get("rank", 1)), bool(payload.get("exact", False)),
            )
        if kind == "local2d":
            return local2d_module(int(payload["q"]), int(payload["c"]), int(payload.get("rank", 1)))
        if kind == "triangular":
            return triangular_module(
                int(payload["q"]), int(payload["n"]), int(payload["c"]), payload["columns"]
            )
        if kind == "skew_poly":
            return skew_module(
                int(payload["q"]), int(payload["n"]), int(payload["c_pi"]), int(payload["c_t"])
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad {kind} model parameters: {exc}") from exc
    raise SchemaError(f"unknown model kind {kind!r}")


# -- structural validation ---------------------------------------------------


def _mm(field, a, b):
    return gfq.mat_mul(field, a, b)


def radical_filtration(model: RingModel, start: gfq.SubspaceRep | None = None) -> list[gfq.SubspaceRep]:
    """J^k X for k = 0, 1, ... down to zero."""
    cur = start if start is not None else model.full()
    out = [cur]
    while cur.dim > 0:
        cur = radical_subspace(model, cur)
        out.append(cur)
    return out


def validate_model(model: RingModel) -> int:
    """Check the structural identities; return the radical nilpotency index."""
    f = model.field
    eye = np.eye(model.dim, dtype=np.int64)
    idems = [model.gens[name] for name in model.idem_names]
    for i, e in enumerate(idems):
        if not np.array_equal(_mm(f, e, e), e):
            raise SchemaError(f"idempotent {model.idem_names[i]} is not idempotent")
        for j, e2 in enumerate(idems):
            if i != j and _mm(f, e, e2).any():
                raise SchemaError("idempotents are not orthogonal")
    total = np.zeros_like(eye)
    for e in idems:
        total = total + e  # 0/1 diagonal blocks, disjoint by orthogonality
    if not np.array_equal(total, eye):
        raise SchemaError("idempotents do not sum to the identity")
    if model.kind == "local2d":
        u, t = model.gens["u"], model.gens["t"]
        if not np.array_equal(_mm(f, u, t), _mm(f, t, u)):
            raise SchemaError("u and t do not commute")
    if model.kind in ("triangular", "skew_poly"):
        g = model.gens["g"]
        n = model.n_classes
        # ring relation e_i g = g e_{i+1} (indices mod n): right-action matrices
        # compose in reverse, so check G @ E_i == E_{i+1} @ G
        for i in range(n):
            lhs = _mm(f, g, idems[i])
            rhs = _mm(f, idems[(i + 1) % n], g)
            if not np.array_equal(lhs, rhs):
                raise SchemaError(f"corner generator does not shift class {i + 1}")
        gn = eye
        for _ in range(n):
            gn = _mm(f, gn, g)
        for name, mat in model.gens.items():
            if not np.array_equal(_mm(f, gn, mat), _mm(f, mat, gn)):
                raise SchemaError(f"g^{n} (= pi) does not commute with {name}")
    if model.kind == "skew_poly":
        t = model.gens["t"]
        for name, mat in model.gens.items():
            if not np.array_equal(_mm(f, t, mat), _mm(f, mat, t)):
                raise SchemaError(f"t is not central: fails against {name}")
    filt = radical_filtration(model)
    index = len(filt) - 1
    if index < model.depth:
        raise SchemaError(
            f"radical nilpotency index {index} below the declared kernel depth {model.depth}"
        )
    p = model.params
    if model.kind == "chain":
        expected = p["rank"] * p["c"]
    elif model.kind == "local2d":
        expected = p["rank"] * p["c"] * (p["c"] + 1) // 2
    elif model.kind == "triangular":
        expected = len(p["columns"]) * p["n"] * p["c"]
    elif model.kind == "skew_poly":
        expected = p["n"] ** 2 * p["c_pi"] * p["c_t"]
    else:
        raise SchemaError(f"unknown model kind {model.kind!r}")
    if model.dim != expected:
        raise SchemaError(f"model dimension {model.dim} != expected {expected}")
    return index


# -- submodule machinery -------------------------------------------------------


def module_closure(model: RingModel, rows: np.ndarray) -> gfq.SubspaceRep:
    """Smallest action-stable row space containing the given rows."""
    sub = gfq.SubspaceRep.from_rows(model.field, model.dim, rows)
    while True:
        stack = [sub.rows]
        for mat in model.gens.values():
            stack.append(_mm(model.field, sub.rows, mat))
        bigger = gfq.SubspaceRep.from_rows(model.field, model.dim, np.vstack(stack))
        if bigger.dim == sub.dim:
            return sub
        sub = bigger


def radical_subspace(model: RingModel, rep: gfq.SubspaceRep) -> gfq.SubspaceRep:
    """J X for an action-stable X: closure of the radical generators' images."""
    if rep.dim == 0:
        return rep
    stack = [np.zeros((0, model.dim), dtype=np.int64)]
    for name in model.rad_names:
        stack.append(_mm(model.field, rep.rows, model.gens[name]))
    return module_closure(model, np.vstack(stack))


def _top_blocks(model: RingModel, rep: gfq.SubspaceRep):
    """(JX, quotient X/JX, per-class block subspaces in quotient coordinates)."""
    jx = radical_subspace(model, rep)
    quo = gfq.QuotientSpace(model.field, lower=jx, upper=rep)
    blocks = []
    for name in model.idem_names:
        if rep.dim == 0 or quo.dim == 0:
            blocks.append(gfq.zero_space(model.field, quo.dim))
            continue
        rows = quo.project(_mm(model.field, rep.rows, model.gens[name]))
        blocks.append(gfq.SubspaceRep.from_rows(model.field, quo.dim, rows))
    return jx, quo, blocks


def top_class(model: RingModel, rep: gfq.SubspaceRep) -> Monomial:
    """Multiplicity of each simple class in X/JX."""
    _, _, blocks = _top_blocks(model, rep)
    return tuple(b.dim for b in blocks)


def composition_class(model: RingModel, upper: gfq.SubspaceRep, lower: gfq.SubspaceRep) -> Monomial:
    """Composition multiplicities of upper/lower, one slot per simple class.

    The idempotent is exact on composition factors and every simple here is
    one-dimensional over its block, so the multiplicity of class i is just
    the F_q-dimension of e_i(upper/lower).
    """
    if not upper.contains(lower):
        raise SchemaError("composition class needs lower <= upper")
    out = []
    for name in model.idem_names:
        image = _mm(model.field, upper.rows, model.gens[name])
        joined = gfq.SubspaceRep.from_rows(model.field, model.dim, np.vstack([lower.rows, image]))
        out.append(joined.dim - lower.dim)
    return tuple(out)


def maximal_submodules(model: RingModel, rep: gfq.SubspaceRep, budget: int = DEFAULT_NODE_BUDGET):
    """All maximal submodules of X, each tagged with its simple quotient class.

    They are the pullbacks of block hyperplanes of the top X/JX; the action on
    each block is scalar, so every linear hyperplane of a block is stable.
    """
    jx, quo, blocks = _top_blocks(model, rep)
    out = []
    for bi, block in enumerate(blocks):
        d = block.dim
        if d == 0:
            continue
        others = [b.rows for j, b in enumerate(blocks) if j != bi and b.dim > 0]
        for hyper in gfq.enumerate_subspaces(model.field, d, dims=d - 1, budget=budget):
            pieces = [jx.rows]
            if hyper.dim > 0:
                pieces.append(quo.lift(_mm(model.field, hyper.rows, block.rows)))
            for rows in others:
                pieces.append(quo.lift(rows))
            child = gfq.SubspaceRep.from_rows(model.field, model.dim, np.vstack(pieces))
            out.append((child, bi))
    return out


@dataclass
class SubmoduleNode:
    rep: gfq.SubspaceRep
    colength: int
    cls: Monomial  # composition class of (start module)/X


def submodule_bfs(
    model: RingModel,
    bound: int,
    start: gfq.SubspaceRep | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
) -> list[SubmoduleNode]:
    """Every submodule of colength <= bound, deduplicated, with its class.

    Descends through maximal submodules; a node found at level k has colength
    exactly k, so levels never collide.  The depth guard rejects truncation
    models too shallow to label colength-``bound`` quotients faithfully.
    """
    if bound < 0:
        raise SchemaError(f"colength bound must be >= 0, got {bound}")
    if not model.exact and model.depth < bound + 1:
        raise SchemaError(
            f"model depth {model.depth} cannot certify colength {bound}; "
            f"need depth >= {bound + 1}"
        )
    n = model.n_classes
    start = start if start is not None else model.full()
    root = SubmoduleNode(start, 0, (0,) * n)
    nodes = {start: root}
    frontier = [root]
    for level in range(1, bound + 1):
        nxt: dict[gfq.SubspaceRep, SubmoduleNode] = {}
        for parent in frontier:
            for child, bi in maximal_submodules(model, parent.rep, budget):
                if child in nxt or child in nodes:
                    continue
                cls = tuple(c + (1 if i == bi else 0) for i, c in enumerate(parent.cls))
                nxt[child] = SubmoduleNode(child, level, cls)
                if len(nodes) + len(nxt) > budget:
                    raise ResourceBudgetError(
                        "submodule lattice too large",
                        required=len(nodes) + len(nxt),
                        budget=budget,
                    )
        nodes.update(nxt)
        frontier = list(nxt.values())
        if not frontier:
            break
    out = list(nodes.values())
    out.sort(key=lambda nd: (nd.colength, nd.rep.rows.tobytes()))
    return out


def empirical_zeta(
    model: RingModel,
    bound: int,
    partial=None,
    joint: bool = False,
    budget: int = DEFAULT_NODE_BUDGET,
) -> TruncatedSeries:
    """Sum of quotient-class monomials over enumerated submodules.

    ``partial`` restricts to X whose top class equals the given vector (tops
    classify the projectives in scope).  ``joint`` appends the top class as a
    second block of variables, at bound ``bound + (generic length of M)``.
    """
    nodes = submodule_bfs(model, bound, budget=budget)
    n = model.n_classes
    q = model.params["q"]
    if partial is not None:
        partial = tuple(int(x) for x in partial)
        if len(partial) != n:
            raise SchemaError(f"top vector has {len(partial)} slots, model has {n} classes")
    if joint:
        r = sum(top_class(model, model.full()))
        alphabet = _doubled_alphabet(q, n)
        out_bound = bound + r
    else:
        alphabet = model.alphabet
        out_bound = bound
    coeffs: dict[Monomial, Fraction] = {}
    for node in nodes:
        if partial is not None or joint:
            top = top_class(model, node.rep)
        if partial is not None and top != partial:
            continue
        key = node.cls + top if joint else node.cls
        coeffs[key] = coeffs.get(key, Fraction(0)) + 1
    return TruncatedSeries(alphabet, out_bound, coeffs)


# -- Jordan types and Hall numbers (chain models) -------------------------------


def _as_partition(spec) -> tuple[int, ...]:
    parts = tuple(sorted((int(x) for x in spec), reverse=True))
    if any(p < 1 for p in parts):
        raise SchemaError(f"partition parts must be >= 1, got {parts}")
    return parts


def _partition_from_ranks(ranks: list[int]) -> tuple[int, ...]:
    ranks = ranks + [0, 0]
    parts = []
    for j in range(1, len(ranks) - 1):
        mult = ranks[j - 1] - 2 * ranks[j] + ranks[j + 1]
        if mult < 0:
            raise FormulaViolationError("rank sequence is not convex", actual=str(ranks))
        parts.extend([j] * mult)
    return tuple(sorted(parts, reverse=True))


def jordan_type(model: RingModel, rep: gfq.SubspaceRep, lower: gfq.SubspaceRep | None = None) -> tuple[int, ...]:
    """Partition of t-power ranks of X (or of X/lower) over a chain model."""
    if "t" not in model.gens:
        raise SchemaError(f"jordan_type needs a t action; model kind is {model.kind}")
    t = model.gens["t"]
    base = lower.dim if lower is not None else 0
    cur = rep.rows
    ranks = []
    while True:
        if lower is not None:
            space = gfq.SubspaceRep.from_rows(model.field, model.dim, np.vstack([lower.rows, cur]))
            rank = space.dim - base
        else:
            rank = gfq.SubspaceRep.from_rows(model.field, model.dim, cur).dim
        ranks.append(rank)
        if rank == 0:
            break
        cur = _mm(model.field, cur, t)
    return _partition_from_ranks(ranks)


def hall_number(
    model: RingModel,
    ambient: gfq.SubspaceRep,
    quotient_type,
    sub_type,
    budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """Count D <= A with D of type ``sub_type`` and A/D of type ``quotient_type``."""
    b = _as_partition(quotient_type)
    c = _as_partition(sub_type)
    colen = sum(b)
    if sum(c) + colen != ambient.dim:
        return 0  # lengths cannot match, so no D qualifies
    count = 0
    for node in submodule_bfs(model, colen, start=ambient, budget=budget):
        if node.colength != colen:
            continue
        if jordan_type(model, node.rep) != c:
            continue
        if jordan_type(model, ambient, lower=node.rep) != b:
            continue
        count += 1
    return count


def chain_type_count(
    model: RingModel,
    ambient: gfq.SubspaceRep,
    steps,
    budget: int = DEFAULT_NODE_BUDGET,
) -> int:
    """Chains D_0 <= D_1 <= ... <= A with prescribed (sub, quotient) types.

    ``steps`` lists, outermost first, pairs (type of D_j, type of D_{j+1}/D_j);
    the count enumerates directly, for cross-checking the Hall-number product.
    """
    steps = list(steps)
    if not steps:
        return 1
    (sub_t, quo_t), rest = steps[0], steps[1:]
    b = _as_partition(quo_t)
    c = _as_partition(sub_t)
    colen = sum(b)
    total = 0
    for node in submodule_bfs(model, colen, start=ambient, budget=budget):
        if node.colength != colen:
            continue
        if jordan_type(model, node.rep) != c:
            continue
        if jordan_type(model, ambient, lower=node.rep) != b:
            continue
        total += chain_type_count(model, node.rep, rest, budget)
    return total


# -- fiber charts ---------------------------------------------------------------


class FiberContext:
    """Slice data for the chart X -> ((M meet I^-j X) + IM)/IM.

    Built once per model: the image IM of the principal ideal generator, the
    quotient coordinates on the slice M/IM, the induced slice model, and the
    cached powers of the generator's matrix.
    """

    def __init__(self, model: RingModel):
        if model.slice_gen is None:
            raise SchemaError(f"model kind {model.kind} has no designated ideal generator")
        self.model = model
        f = model.field
        u = model.gens[model.slice_gen]
        self.u = u
        self.im = gfq.SubspaceRep.from_rows(f, model.dim, u)
        self.quo = gfq.QuotientSpace(f, lower=self.im)
        slice_gens = {}
        for name, mat in model.gens.items():
            slice_gens[name] = self.quo.project(_mm(f, self.quo.lift_rows, mat))
        self.slice_model = RingModel(
            kind=f"{model.kind}_slice",
            field=f,
            dim=self.quo.dim,
            gens=slice_gens,
            rad_names=model.rad_names,
            idem_names=model.idem_names,
            alphabet=model.alphabet,
            depth=model.depth,
            params=dict(model.params, slice_of=model.kind),
            exact=model.exact,
        )
        self.slice_full = gfq.full_space(f, self.quo.dim)
        self._powers = [np.eye(model.dim, dtype=np.int64)]

    def _power(self, j: int) -> np.ndarray:
        while len(self._powers) <= j:
            self._powers.append(_mm(self.model.field, self._powers[-1], self.u))
        return self._powers[j]

    def chart(self, rep: gfq.SubspaceRep, max_level: int) -> ChainData:
        """Class-level chain data of the slice tower of X; must stabilize."""
        f = self.model.field
        towers = []
        for j in range(max_level + 1):
            pre = gfq.left_kernel(f, rep.reduce(self._power(j)))
            rows = self.quo.project(pre.rows) if pre.dim else np.zeros((0, self.quo.dim), dtype=np.int64)
            y = gfq.SubspaceRep.from_rows(f, self.quo.dim, rows)
            towers.append(y)
            if y == self.slice_full:
                break
        else:
            raise SchemaError(
                f"slice tower did not stabilize within {max_level} levels; "
                "raise the model depth"
            )
        tops = tuple(top_class(self.slice_model, y) for y in towers)
        quots = tuple(
            composition_class(self.slice_model, towers[j + 1], towers[j])
            for j in range(len(towers) - 1)
        )
        return ChainData(tops, quots)


def fiber_partition(
    model: RingModel, bound: int, budget: int = DEFAULT_NODE_BUDGET
) -> dict[ChainData, list[SubmoduleNode]]:
    """All submodules of colength <= bound, grouped by their slice chart."""
    ctx = FiberContext(model)
    out: dict[ChainData, list[SubmoduleNode]] = {}
    for node in submodule_bfs(model, bound, budget=budget):
        chain = ctx.chart(node.rep, bound)
        out.setdefault(chain, []).append(node)
    return out


def fiber_enumerate(
    model: RingModel, chain: ChainData, bound: int, budget: int = DEFAULT_NODE_BUDGET
) -> list[SubmoduleNode]:
    """The submodules of colength <= bound whose slice chart equals ``chain``."""
    return fiber_partition(model, bound, budget).get(chain, [])


def fiber_sum(model: RingModel, nodes, bound: int) -> TruncatedSeries:
    """Sum of quotient-class monomials of the given nodes, over the z alphabet."""
    coeffs: dict[Monomial, Fraction] = {}
    for node in nodes:
        coeffs[node.cls] = coeffs.get(node.cls, Fraction(0)) + 1
    return TruncatedSeries(model.alphabet, bound, coeffs)
