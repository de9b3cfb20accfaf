"""Exact Dunkl-type operators on a truncated standard module.

The slice is k[V]_{<= N} tensor E for a matrix representation E.  The
lowering operators act at the degenerate parameter level by

    y . (f ox e) = - sum_s det(s) c_s <y, alpha_s> ((s.f - f)/alpha_s) ox s.e

with the sum over all reflections; multiplication by a linear form raises
degree by one, and the group acts diagonally.  Everything is exact, so the
defining commutation relations can be checked as identities of sparse
matrices, not numerically.

``check_bracket`` verifies, on the slice of the regular representation,

    [y, x] = sum_s (det(s) - 1) c_s (<y, alpha_s><alpha_s^vee, x> /
                                     <alpha_s^vee, alpha_s>) s
    [x, x'] = [y, y'] = 0

and reports a witness basis element on any failure.  ``euler_on_verma``
returns the scalar by which the Euler element acts on the module, which
must agree with the trace form ``c_from_trace`` and with the k-coordinate
form ``c_from_k_formula``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cyclotomic_numerics import QQ, canonical_scalar, cyclo_dot, zeta
from .reflection_groups import ParamC, ParamK, ReflectionGroup, pair
from .characters import ClassFunction, Representation, class_of_element

__all__ = [
    "VermaSlice",
    "OperatorOnSlice",
    "BracketReport",
    "regular_representation",
    "dunkl_act",
    "check_bracket",
    "euler_on_verma",
    "c_from_trace",
    "c_from_k_formula",
]


def _monomials_upto(dim: int, n: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(n + 1):
        for combo in itertools.combinations_with_replacement(range(dim), total):
            mono = [0] * dim
            for i in combo:
                mono[i] += 1
            out.append(tuple(mono))
    # graded lexicographic, stable and unique
    return sorted(set(out), key=lambda m: (sum(m), m))


def _poly_add_term(poly: dict, mono: tuple, coeff) -> None:
    cur = poly.get(mono)
    new = coeff if cur is None else cur + coeff
    new = canonical_scalar(new)
    if new == 0:
        poly.pop(mono, None)
    else:
        poly[mono] = new


def _linear_power(form: tuple, p: int, dim: int) -> dict:
    """(sum_j form[j] x_j)^p as a monomial dict."""
    poly = {tuple([0] * dim): QQ(1)}
    for _ in range(p):
        nxt: dict = {}
        for mono, c in poly.items():
            for j in range(dim):
                if form[j] == 0:
                    continue
                m2 = list(mono)
                m2[j] += 1
                _poly_add_term(nxt, tuple(m2), c * form[j])
        poly = nxt
    return poly


def _act_monomial(W: ReflectionGroup, elt: int, mono: tuple) -> dict:
    """w . x^mono = x^mono composed with w^{-1}, expanded exactly."""
    key = ("mono_action", elt, mono)
    cached = W.cache.get(key)
    if cached is not None:
        return cached
    inv = W.elements[W.inverse[elt]]
    dim = W.dim
    poly = {tuple([0] * dim): QQ(1)}
    for i, p in enumerate(mono):
        if p == 0:
            continue
        form = tuple(inv[i][j] for j in range(dim))
        factor = _linear_power(form, p, dim)
        nxt: dict = {}
        for m1, c1 in poly.items():
            for m2, c2 in factor.items():
                merged = tuple(a + b for a, b in zip(m1, m2))
                _poly_add_term(nxt, merged, c1 * c2)
        poly = nxt
    W.cache[key] = poly
    return poly


def _divide_by_linear(poly: dict, alpha: tuple) -> dict:
    """Exact quotient of a polynomial divisible by the linear form alpha."""
    j_star = next(j for j, a in enumerate(alpha) if a != 0)
    lead_inv = 1 / alpha[j_star]
    work = dict(poly)
    quotient: dict = {}
    while work:
        mono = max(work)
        coeff = work[mono]
        if mono[j_star] == 0:
            raise ArithmeticError("polynomial is not divisible by the form")
        qm = list(mono)
        qm[j_star] -= 1
        qm = tuple(qm)
        qc = canonical_scalar(coeff * lead_inv)
        _poly_add_term(quotient, qm, qc)
        for j, a in enumerate(alpha):
            if a == 0:
                continue
            m2 = list(qm)
            m2[j] += 1
            _poly_add_term(work, tuple(m2), -qc * a)
    return quotient


def _division_tables(W: ReflectionGroup, n: int) -> list[list[list[tuple]]]:
    """For each reflection r and monomial index m, the terms of
    (r.x^m - x^m)/alpha_r as (monomial index, coefficient) pairs.
    Parameter-independent, cached on the group."""
    key = ("dunkl_division", n)
    cached = W.cache.get(key)
    if cached is not None:
        return cached
    monos = _monomials_upto(W.dim, n)
    index = {m: i for i, m in enumerate(monos)}
    tables = []
    for r in W.reflections:
        per_mono = []
        for mono in monos:
            moved = dict(_act_monomial(W, r.element, mono))
            _poly_add_term(moved, mono, QQ(-1))
            quot = _divide_by_linear(moved, r.root) if moved else {}
            per_mono.append([(index[m], c) for m, c in sorted(quot.items())])
        tables.append(per_mono)
    W.cache[key] = tables
    return tables


def regular_representation(W: ReflectionGroup) -> Representation:
    """The left regular representation as permutation matrices."""
    cached = W.cache.get("regular_representation")
    if cached is not None:
        return cached
    mats = []
    for g in range(W.order):
        col_to_row = [W.product(g, u) for u in range(W.order)]
        mats.append(tuple(
            tuple(QQ(1) if col_to_row[u] == v else QQ(0)
                  for u in range(W.order))
            for v in range(W.order)))
    rep = Representation(W.name, "regular", W.order, tuple(mats))
    W.cache["regular_representation"] = rep
    return rep


@dataclass
class VermaSlice:
    """Degree-truncated standard module k[V]_{<=N} ox E."""

    W: ReflectionGroup
    c: ParamC
    E: Representation
    N: int
    monomials: list = field(init=False)
    mono_index: dict = field(init=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("slice needs N >= 1")
        if self.E.group != self.W.name:
            raise ValueError("representation built for a different group")
        self.monomials = _monomials_upto(self.W.dim, self.N)
        self.mono_index = {m: i for i, m in enumerate(self.monomials)}
        self._rep_cols: dict[int, list] = {}

    @property
    def dim(self) -> int:
        return len(self.monomials) * self.E.dim

    def basis_index(self, mono: tuple, k: int) -> int:
        return self.mono_index[mono] * self.E.dim + k

    def basis_label(self, idx: int) -> tuple[tuple, int]:
        return self.monomials[idx // self.E.dim], idx % self.E.dim

    def rep_columns(self, elt: int) -> list:
        """Sparse columns of E(elt): list over k of [(row, value), ...]."""
        got = self._rep_cols.get(elt)
        if got is None:
            mat = self.E.matrices[elt]
            got = [[(row, mat[row][k]) for row in range(self.E.dim)
                    if mat[row][k] != 0] for k in range(self.E.dim)]
            self._rep_cols[elt] = got
        return got


@dataclass
class OperatorOnSlice:
    """Sparse exact operator: columns[i] maps row index -> scalar.

    Columns may cover only part of the basis (a raising operator is not
    defined on the top degree); compositions and comparisons guard that.
    """

    slice: VermaSlice
    columns: dict

    def apply(self, vec: dict) -> dict:
        terms: dict = {}
        for idx, coeff in vec.items():
            col = self.columns.get(idx)
            if col is None:
                raise KeyError(f"operator undefined on basis index {idx}")
            for row, val in col.items():
                terms.setdefault(row, []).append((coeff, val))
        out: dict = {}
        for row, pairs in terms.items():
            total = cyclo_dot(pairs)
            if total != 0:
                out[row] = total
        return out

    def compose(self, other: "OperatorOnSlice") -> "OperatorOnSlice":
        cols = {idx: self.apply(col)
                for idx, col in other.columns.items()}
        return OperatorOnSlice(self.slice, cols)

    def sub(self, other: "OperatorOnSlice") -> "OperatorOnSlice":
        domain = set(self.columns) & set(other.columns)
        cols = {}
        for idx in domain:
            col = dict(self.columns[idx])
            for row, val in other.columns[idx].items():
                _vec_add(col, row, -val)
            cols[idx] = col
        return OperatorOnSlice(self.slice, cols)

    def add(self, other: "OperatorOnSlice") -> "OperatorOnSlice":
        domain = set(self.columns) & set(other.columns)
        cols = {}
        for idx in domain:
            col = dict(self.columns[idx])
            for row, val in other.columns[idx].items():
                _vec_add(col, row, val)
            cols[idx] = col
        return OperatorOnSlice(self.slice, cols)

    def scale(self, scalar) -> "OperatorOnSlice":
        return OperatorOnSlice(self.slice, {
            idx: {row: canonical_scalar(val * scalar)
                  for row, val in col.items() if val * scalar != 0}
            for idx, col in self.columns.items()})

    def is_zero(self) -> bool:
        return all(not col for col in self.columns.values())

    def first_nonzero_column(self):
        for idx in sorted(self.columns):
            if self.columns[idx]:
                return idx
        return None


def _vec_add(col: dict, row: int, val) -> None:
    new = canonical_scalar(col.get(row, QQ(0)) + val)
    if new == 0:
        col.pop(row, None)
    else:
        col[row] = new


def y_operator(slice_: VermaSlice, y: tuple) -> OperatorOnSlice:
    """The lowering operator attached to the vector y, on the whole slice."""
    W = slice_.W
    tables = _division_tables(W, slice_.N)
    cd = slice_.c.as_dict()
    dim_e = slice_.E.dim
    cols: dict = {}
    scales = []
    for r in W.reflections:
        scales.append(canonical_scalar(
            -r.det * cd[r.class_id] * pair(r.root, y)))
    for mi in range(len(slice_.monomials)):
        for k in range(dim_e):
            col: dict = {}
            for ri, r in enumerate(W.reflections):
                s0 = scales[ri]
                if s0 == 0:
                    continue
                rep_col = slice_.rep_columns(r.element)[k]
                for qm, qc in tables[ri][mi]:
                    for row_k, rv in rep_col:
                        _vec_add(col, qm * dim_e + row_k, s0 * qc * rv)
            cols[mi * dim_e + k] = col
    return OperatorOnSlice(slice_, cols)


def x_operator(slice_: VermaSlice, x: tuple) -> OperatorOnSlice:
    """Multiplication by the linear form x (covector coordinates), defined
    away from the top degree."""
    dim_e = slice_.E.dim
    cols: dict = {}
    for mi, mono in enumerate(slice_.monomials):
        if sum(mono) >= slice_.N:
            continue
        for k in range(dim_e):
            col: dict = {}
            for j, coeff in enumerate(x):
                if coeff == 0:
                    continue
                m2 = list(mono)
                m2[j] += 1
                target = slice_.mono_index[tuple(m2)]
                _vec_add(col, target * dim_e + k, coeff)
            cols[mi * dim_e + k] = col
    return OperatorOnSlice(slice_, cols)


def w_operator(slice_: VermaSlice, elt: int) -> OperatorOnSlice:
    """The diagonal action of a group element on the slice."""
    W = slice_.W
    dim_e = slice_.E.dim
    cols: dict = {}
    for mi, mono in enumerate(slice_.monomials):
        poly = _act_monomial(W, elt, mono)
        for k in range(dim_e):
            col: dict = {}
            rep_col = slice_.rep_columns(elt)[k]
            for m2, c2 in poly.items():
                target = slice_.mono_index[m2]
                for row_k, rv in rep_col:
                    _vec_add(col, target * dim_e + row_k, c2 * rv)
            cols[mi * dim_e + k] = col
    return OperatorOnSlice(slice_, cols)


def dunkl_act(slice_: VermaSlice, y: tuple, vec: dict) -> dict:
    """Apply the lowering operator for y to a vector in slice coordinates."""
    return y_operator(slice_, y).apply(vec)


@dataclass(frozen=True)
class BracketReport:
    group: str
    N: int
    status: str        # "ok" or "failed"
    pairs_checked: int
    witnesses: tuple   # (relation, basis label, column dict) on failure


def check_bracket(W: ReflectionGroup, c: ParamC, N: int = 6) -> BracketReport:
    """Exact check of the defining relations on the regular-representation
    slice; returns a witness basis element for any failed relation."""
    E = regular_representation(W)
    slice_ = VermaSlice(W, c, E, N)
    dim = W.dim
    basis_cov = [tuple(QQ(1) if j == i else QQ(0) for j in range(dim))
                 for i in range(dim)]
    ys = [y_operator(slice_, bv) for bv in basis_cov]
    # x-multiplications and reflection actions do not depend on c; their
    # sparse columns are safe to share because operator algebra never
    # mutates existing columns
    fixture_key = ("bracket_fixtures", N)
    fixtures = W.cache.get(fixture_key)
    if fixtures is None:
        xs_cols = [x_operator(slice_, bv).columns for bv in basis_cov]
        refl_cols = [w_operator(slice_, r.element).columns
                     for r in W.reflections]
        fixtures = (xs_cols, refl_cols)
        W.cache[fixture_key] = fixtures
    xs = [OperatorOnSlice(slice_, cols) for cols in fixtures[0]]
    refl_ops = [OperatorOnSlice(slice_, cols) for cols in fixtures[1]]
    cd = c.as_dict()
    witnesses = []
    pairs = 0

    for i in range(dim):
        for j in range(dim):
            pairs += 1
            lhs = ys[i].compose(xs[j]).sub(xs[j].compose(ys[i]))
            expected = None
            for ri, r in enumerate(W.reflections):
                scale = canonical_scalar(
                    (r.det - 1) * cd[r.class_id]
                    * pair(r.root, basis_cov[i]) * r.coroot[j]
                    / pair(r.coroot, r.root))
                if scale == 0:
                    continue
                term = refl_ops[ri].scale(scale)
                expected = term if expected is None else expected.add(term)
            if expected is None:
                expected = OperatorOnSlice(slice_, {
                    idx: {} for idx in lhs.columns})
            diff = lhs.sub(expected)
            if not diff.is_zero():
                idx = diff.first_nonzero_column()
                witnesses.append(("[y,x]", slice_.basis_label(idx),
                                  dict(diff.columns[idx])))

    def _cap_degree(op: OperatorOnSlice, max_deg: int) -> OperatorOnSlice:
        cols = {idx: col for idx, col in op.columns.items()
                if sum(slice_.basis_label(idx)[0]) <= max_deg}
        return OperatorOnSlice(slice_, cols)

    xs_low = [_cap_degree(op, N - 2) for op in xs]
    for i in range(dim):
        for j in range(i + 1, dim):
            pairs += 2
            diff = ys[i].compose(ys[j]).sub(ys[j].compose(ys[i]))
            if not diff.is_zero():
                idx = diff.first_nonzero_column()
                witnesses.append(("[y,y]", slice_.basis_label(idx),
                                  dict(diff.columns[idx])))
            diff = xs[i].compose(xs_low[j]).sub(xs[j].compose(xs_low[i]))
            if not diff.is_zero():
                idx = diff.first_nonzero_column()
                witnesses.append(("[x,x]", slice_.basis_label(idx),
                                  dict(diff.columns[idx])))

    status = "ok" if not witnesses else "failed"
    return BracketReport(W.name, N, status, pairs, tuple(witnesses))


# ---------------------------------------------------------------------------
# Euler scalars


def euler_on_verma(W: ReflectionGroup, c: ParamC, E: Representation):
    """Scalar action of the Euler element on the standard module of E.

    On the lowest-degree slice the lowering part vanishes, so the scalar is
    the one by which sum_s det(s) c_s E(s) acts; that matrix is asserted to
    be scalar."""
    if E.group != W.name:
        raise ValueError("representation built for a different group")
    cd = c.as_dict()
    n = E.dim
    acc = [[QQ(0)] * n for _ in range(n)]
    for r in W.reflections:
        coeff = r.det * cd[r.class_id]
        mat = E.matrices[r.element]
        for a in range(n):
            for b in range(n):
                if mat[a][b] != 0:
                    acc[a][b] = acc[a][b] + coeff * mat[a][b]
    value = canonical_scalar(acc[0][0])
    for a in range(n):
        for b in range(n):
            got = canonical_scalar(acc[a][b])
            want = value if a == b else QQ(0)
            if got != want:
                raise AssertionError(
                    f"Euler element is not scalar on {E.name} of {W.name}")
    return value


def c_from_trace(W: ReflectionGroup, chi: ClassFunction, c: ParamC):
    """(1/chi(1)) sum over reflections of det(s) chi(s) c_s."""
    cd = c.as_dict()
    lookup = class_of_element(W)
    total = QQ(0)
    for r in W.reflections:
        total = total + r.det * chi.values[lookup[r.element]] * cd[r.class_id]
    return canonical_scalar(total / QQ(int(chi.dim)))


def c_from_k_formula(W: ReflectionGroup, chi: ClassFunction, k: ParamK):
    """The same scalar assembled from k-coordinates: for each hyperplane
    orbit, the isotypic multiplicities of the restriction to the cyclic
    pointwise stabilizer weight the k-values,

        sum_{orbit, j} m_j * |orbit| * e / chi(1) * k_{orbit, -j mod e}

    with m_j = <Res chi, det^j> computed by character sums."""
    kd = k.as_dict()
    lookup = class_of_element(W)
    dim = int(chi.dim)
    total = QQ(0)
    for orb in W.orbits:
        e = orb.order
        hid = orb.hyperplanes[0]
        dist = next(W.reflections[ri] for ri in orb.reflections
                    if W.reflections[ri].hyperplane == hid
                    and W.reflections[ri].power == 1)
        powers = [0] * e
        cur = 0
        for i in range(e):
            powers[i] = cur
            cur = W.product(cur, dist.element)
        for j in range(e):
            m = QQ(0)
            for i in range(e):
                m = m + chi.values[lookup[powers[i]]] * zeta(e, (-i * j) % e)
            m = canonical_scalar(m / QQ(e))
            if not isinstance(m, type(QQ(0))) or m.denominator != 1 or m < 0:
                raise AssertionError(
                    f"restriction multiplicity of {chi.name} is not a "
                    f"nonnegative integer: {m}")
            if m == 0:
                continue
            total = total + m * QQ(orb.size * e, dim) * kd[(orb.id, (-j) % e)]
    return canonical_scalar(total)
