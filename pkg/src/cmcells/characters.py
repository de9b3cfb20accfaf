"""Class functions, irreducible characters and graded multiplicity data.

Irreducible characters are produced in closed form per group family (the
built-in groups are cyclic, dihedral and B2, all of whose character tables
are classical), together with explicit matrix models used downstream by the
Verma-slice checks.  Fake degrees are computed from the graded isotypic
multiplicity series

    f_chi(t) = prod_i (1 - t^{d_i}) * (1/|W|) sum_w conj(chi(w)) / det(1 - t w|_V)

and the bigraded refinement of that identity over the doubled space V + V*
is exposed by ``center_hilbert_identity`` in two independently computed
forms so they can be compared coefficientwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic_numerics import (
    QQ,
    Cyclotomic,
    UniPoly,
    canonical_scalar,
    conj_scalar,
    zeta,
)
from .reflection_groups import (
    ReflectionGroup,
    degrees,
    det_one_minus_tw,
    identity_matrix,
    mat_inv,
    mat_mul,
    series_inverse,
)

__all__ = [
    "ClassFunction",
    "Representation",
    "GradedSeries",
    "conjugacy_classes",
    "class_of_element",
    "irr_characters",
    "irr_representations",
    "character_by_name",
    "representation_by_name",
    "fake_degrees",
    "b_invariant",
    "center_hilbert_identity",
]


@dataclass(frozen=True)
class ClassFunction:
    """A function on conjugacy classes, stored in class order."""

    group: str
    name: str
    values: tuple

    @property
    def dim(self):
        # identity class is first by construction
        return self.values[0]

    def value_on_class(self, cls_index: int):
        return self.values[cls_index]


@dataclass(frozen=True)
class Representation:
    """A matrix model: one exact matrix per group element, element order."""

    group: str
    name: str
    dim: int
    matrices: tuple


@dataclass(frozen=True)
class GradedSeries:
    """Truncated power series in one or two variables.

    ``coeffs`` maps exponent tuples to rationals; terms of total degree
    above ``trunc`` are not stored and not compared.
    """

    variables: tuple[str, ...]
    trunc: int
    coeffs: tuple  # sorted tuple of (exponents, value)

    @staticmethod
    def build(variables, trunc, mapping) -> "GradedSeries":
        items = tuple(sorted(
            (tuple(k), canonical_scalar(v)) for k, v in mapping.items()
            if sum(k) <= trunc and canonical_scalar(v) != 0))
        return GradedSeries(tuple(variables), trunc, items)

    def coefficient(self, exponents) -> object:
        key = tuple(exponents)
        for k, v in self.coeffs:
            if k == key:
                return v
        return QQ(0)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for exps, val in self.coeffs:
            mono = "*".join(f"{v}^{e}" for v, e in zip(self.variables, exps)
                            if e) or "1"
            terms.append(f"{val}*{mono}")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# conjugacy classes


def conjugacy_classes(W: ReflectionGroup) -> list[tuple[int, tuple[int, ...]]]:
    """Classes as (representative, members), ordered by smallest member;
    the identity class comes first."""
    cached = W.cache.get("conjugacy_classes")
    if cached is not None:
        return cached
    seen = [False] * W.order
    classes = []
    for start in range(W.order):
        if seen[start]:
            continue
        members = set()
        frontier = [start]
        while frontier:
            x = frontier.pop()
            if x in members:
                continue
            members.add(x)
            for g in range(W.order):
                y = W.product(W.product(g, x), W.inverse[g])
                if y not in members:
                    frontier.append(y)
        members = tuple(sorted(members))
        for m in members:
            seen[m] = True
        classes.append((members[0], members))
    classes.sort(key=lambda cm: cm[0])
    W.cache["conjugacy_classes"] = classes
    return classes


def class_of_element(W: ReflectionGroup) -> list[int]:
    """element index -> index of its class in conjugacy_classes(W)."""
    cached = W.cache.get("class_of_element")
    if cached is not None:
        return cached
    lookup = [0] * W.order
    for ci, (_, members) in enumerate(conjugacy_classes(W)):
        for m in members:
            lookup[m] = ci
    W.cache["class_of_element"] = lookup
    return lookup


# ---------------------------------------------------------------------------
# irreducible characters and matrix models


def _element_values_to_class_function(W, name, per_element) -> ClassFunction:
    classes = conjugacy_classes(W)
    values = []
    for rep, members in classes:
        vals = {canonical_scalar(per_element[m]) for m in members}
        if len(vals) != 1:
            raise AssertionError(
                f"{name} is not constant on a conjugacy class of {W.name}")
        values.append(canonical_scalar(per_element[rep]))
    return ClassFunction(W.name, name, tuple(values))


def _matrices_from_generator_images(W, images: dict) -> tuple:
    mats = [None] * W.order
    dim = len(next(iter(images.values())))
    mats[0] = identity_matrix(dim)
    for i, word in enumerate(W.words):
        if i == 0:
            continue
        prefix = W.word_index[word[:-1]] if len(word) > 1 else 0
        mats[i] = mat_mul(mats[prefix], images[word[-1]])
    return tuple(mats)


def _trace(mat):
    return canonical_scalar(sum((mat[i][i] for i in range(len(mat))), QQ(0)))


def _linear_character(W, name, gen_values: dict) -> tuple:
    """Per-element values of the linear character with the given generator
    values (must be constant on relations, which holds for the values used
    here)."""
    per_element = []
    for word in W.words:
        if word == "1":
            per_element.append(QQ(1))
            continue
        val = QQ(1)
        for letter in word:
            val = val * gen_values[letter]
        per_element.append(canonical_scalar(val))
    return tuple(per_element)


def irr_characters(W: ReflectionGroup) -> list[ClassFunction]:
    cached = W.cache.get("irr_characters")
    if cached is not None:
        return cached
    chars = [_element_values_to_class_function(W, name, vals)
             for name, vals in _irr_element_values(W)]
    W.cache["irr_characters"] = chars
    return chars


def irr_representations(W: ReflectionGroup) -> list[Representation]:
    cached = W.cache.get("irr_representations")
    if cached is not None:
        return cached
    reps = []
    for name, mats in _irr_matrix_models(W):
        reps.append(Representation(W.name, name, len(mats[0]), tuple(mats)))
    W.cache["irr_representations"] = reps
    return reps


def character_by_name(W: ReflectionGroup, name: str) -> ClassFunction:
    for chi in irr_characters(W):
        if chi.name == name:
            return chi
    raise KeyError(f"{W.name} has no irreducible character {name!r}")


def representation_by_name(W: ReflectionGroup, name: str) -> Representation:
    for rep in irr_representations(W):
        if rep.name == name:
            return rep
    raise KeyError(f"{W.name} has no representation {name!r}")


def _irr_element_values(W) -> list[tuple[str, tuple]]:
    if W.family == "cyclic":
        d = W.parameter
        out = []
        for j in range(d):
            name = "1" if j == 0 else ("det" if j == 1 else f"det^{j}")
            out.append((name,
                        tuple(zeta(d, (j * k) % d) for k in range(d))))
        return out
    if W.family == "b2" or (W.family == "dihedral" and W.parameter % 2 == 0):
        m = 4 if W.family == "b2" else W.parameter
        out = [("1", _linear_character(W, "1", {"s": QQ(1), "t": QQ(1)})),
               ("eps_s", _linear_character(W, "eps_s",
                                           {"s": QQ(-1), "t": QQ(1)})),
               ("eps_t", _linear_character(W, "eps_t",
                                           {"s": QQ(1), "t": QQ(-1)})),
               ("eps", _linear_character(W, "eps",
                                         {"s": QQ(-1), "t": QQ(-1)}))]
        out.extend(_dihedral_two_dim_values(W, m))
        return out
    if W.family == "dihedral":
        m = W.parameter
        out = [("1", _linear_character(W, "1", {"s": QQ(1), "t": QQ(1)})),
               ("eps", _linear_character(W, "eps",
                                         {"s": QQ(-1), "t": QQ(-1)}))]
        out.extend(_dihedral_two_dim_values(W, m))
        return out
    raise AssertionError(f"no character table for family {W.family}")


def _dihedral_two_dim_values(W, m) -> list[tuple[str, tuple]]:
    """Traces of the 2-dimensional models chi_j, via matrix powers of the
    group's own elements (a rotation has det 1, a reflection det -1)."""
    njs = (m - 1) // 2 if m % 2 else m // 2 - 1
    out = []
    mods = _irr_matrix_models_two_dim(W, m)
    for j in range(1, njs + 1):
        name = "chi" if njs == 1 else f"chi_{j}"
        out.append((name, tuple(_trace(mat) for mat in mods[j - 1][1])))
    return out


def _irr_matrix_models(W) -> list[tuple[str, tuple]]:
    if W.family == "cyclic":
        d = W.parameter
        out = []
        for j in range(d):
            name = "1" if j == 0 else ("det" if j == 1 else f"det^{j}")
            out.append((name, tuple(((zeta(d, (j * k) % d),),)
                                    for k in range(d))))
        return out
    m = 4 if W.family == "b2" else W.parameter
    out = []
    for name, vals in _irr_element_values(W):
        if name.startswith("chi"):
            break
        out.append((name, tuple(((v,),) for v in vals)))
    out.extend(_irr_matrix_models_two_dim(W, m))
    return out


def _irr_matrix_models_two_dim(W, m) -> list[tuple[str, tuple]]:
    njs = (m - 1) // 2 if m % 2 else m // 2 - 1
    out = []
    for j in range(1, njs + 1):
        name = "chi" if njs == 1 else f"chi_{j}"
        if W.family == "b2":
            mats = tuple(W.elements)
        else:
            images = {"s": ((QQ(0), QQ(1)), (QQ(1), QQ(0))),
                      "t": ((QQ(0), zeta(m, (-j) % m)), (zeta(m, j), QQ(0)))}
            mats = _matrices_from_generator_images(W, images)
        out.append((name, mats))
    return out


# ---------------------------------------------------------------------------
# pairing and graded data


def inner_product(W: ReflectionGroup, phi: ClassFunction,
                  psi: ClassFunction):
    """Hermitian pairing (1/|W|) sum_w phi(w) conj(psi(w)), exact."""
    classes = conjugacy_classes(W)
    total = QQ(0)
    for ci, (_, members) in enumerate(classes):
        total = total + QQ(len(members)) * (
            phi.values[ci] * conj_scalar(psi.values[ci]))
    return canonical_scalar(total / QQ(W.order))


def fake_degrees(W: ReflectionGroup) -> dict[str, UniPoly]:
    """Graded multiplicity polynomial of each irreducible character in the
    coinvariant algebra; integer coefficients, f_chi(1) = chi(1)."""
    cached = W.cache.get("fake_degrees")
    if cached is not None:
        return cached
    degs = degrees(W)
    n_terms = sum(d - 1 for d in degs) + 1
    class_index = class_of_element(W)
    inv_series = [series_inverse(det_one_minus_tw(mat), n_terms)
                  for mat in W.elements]
    chars = irr_characters(W)
    # prod (1 - t^{d_i}) as plain coefficient list
    prefactor = [QQ(1)]
    for d in degs:
        nxt = [QQ(0)] * (len(prefactor) + d)
        for i, cval in enumerate(prefactor):
            nxt[i] = nxt[i] + cval
            nxt[i + d] = nxt[i + d] - cval
        prefactor = nxt
    out = {}
    for chi in chars:
        acc = [QQ(0)] * n_terms
        for w in range(W.order):
            cval = conj_scalar(chi.values[class_index[w]])
            series = inv_series[w]
            for i in range(n_terms):
                acc[i] = acc[i] + cval * series[i]
        # multiply by the prefactor, truncating at n_terms
        coeffs = [QQ(0)] * n_terms
        for i, pval in enumerate(prefactor):
            if pval == 0 or i >= n_terms:
                continue
            for k in range(n_terms - i):
                coeffs[i + k] = coeffs[i + k] + pval * acc[k]
        final = []
        for x in coeffs:
            val = canonical_scalar(x / QQ(W.order))
            if isinstance(val, Cyclotomic):
                raise AssertionError("fake degree coefficient not rational")
            if val.denominator != 1:
                raise AssertionError("fake degree coefficient not integral")
            final.append(val)
        poly = UniPoly(final)
        if poly(QQ(1)) != chi.dim:
            raise AssertionError(f"fake degree of {chi.name} fails f(1)=dim")
        out[chi.name] = poly
    W.cache["fake_degrees"] = out
    return out


def b_invariant(W: ReflectionGroup, chi: ClassFunction) -> int:
    """Valuation of the fake degree (lowest power of t with nonzero
    coefficient)."""
    poly = fake_degrees(W)[chi.name]
    return next(i for i, c in enumerate(poly.coeffs) if c != 0)


def center_hilbert_identity(W: ReflectionGroup, n_max: int = 12
                            ) -> tuple[GradedSeries, GradedSeries]:
    """Two computations of the same bigraded series, as (lhs, rhs).

    lhs averages 1/(det(1 - t w|_{V*}) det(1 - u w|_V)) over the group;
    rhs assembles sum_chi f_chi(t) f_chi(u) / prod (1-t^{d_i})(1-u^{d_i}).
    Both are truncated at total degree n_max.
    """
    if n_max < 0 or n_max > 24:
        raise ValueError("n_max must lie in 0..24")
    n_terms = n_max + 1
    lhs_acc: dict[tuple[int, int], object] = {}
    for w in range(W.order):
        mat = W.elements[w]
        # det(1 - t w|_{V*}) = det(1 - t w^{-1}|_V)
        a = series_inverse(det_one_minus_tw(W.elements[W.inverse[w]]), n_terms)
        b = series_inverse(det_one_minus_tw(mat), n_terms)
        for i in range(n_terms):
            if not a[i]:
                continue
            for j in range(n_terms - i):
                if b[j]:
                    key = (i, j)
                    lhs_acc[key] = lhs_acc.get(key, QQ(0)) + a[i] * b[j]
    lhs_map = {}
    for key, val in lhs_acc.items():
        scaled = canonical_scalar(val)
        if isinstance(scaled, Cyclotomic):
            raise AssertionError("bigraded coefficient not rational")
        lhs_map[key] = scaled / QQ(W.order)
    lhs = GradedSeries.build(("t", "u"), n_max, lhs_map)

    degs = degrees(W)
    fdeg = fake_degrees(W)
    inv_prod = [QQ(1)] + [QQ(0)] * (n_terms - 1)
    for d in degs:
        geom = [QQ(1) if i % d == 0 else QQ(0) for i in range(n_terms)]
        inv_prod = _convolve(inv_prod, geom, n_terms)
    rhs_acc: dict[tuple[int, int], object] = {}
    for chi in irr_characters(W):
        f = [QQ(c) for c in fdeg[chi.name].coeffs]
        side = _convolve(f, inv_prod, n_terms)
        for i in range(n_terms):
            if not side[i]:
                continue
            for j in range(n_terms - i):
                if side[j]:
                    key = (i, j)
                    rhs_acc[key] = rhs_acc.get(key, QQ(0)) + side[i] * side[j]
    rhs = GradedSeries.build(("t", "u"), n_max, rhs_acc)
    return lhs, rhs


def _convolve(a: list, b: list, n_terms: int) -> list:
    out = [QQ(0)] * n_terms
    for i, x in enumerate(a[:n_terms]):
        if not x:
            continue
        for j in range(min(len(b), n_terms - i)):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return out
