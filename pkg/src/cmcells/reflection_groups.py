"""Complex reflection groups on a small vector space, with exact matrices.

A group is built from generator matrices by breadth-first closure; element
names are the shortlex-minimal generator words ("1", "s", "st", ...).  For
every reflection (an element with rank(w - 1) = 1) the module extracts a
root/coroot pair normalized so that <coroot, root> = 1 and the root's first
nonzero coordinate is 1, which makes the root double as the canonical key
of its fixed hyperplane.  Reflections are classified by (hyperplane orbit,
determinant exponent): two reflections are conjugate exactly when those
match, and that pair is the key under which coupling parameters are stored.

Parameters come in two equivalent coordinate systems: ``ParamC`` (one value
per reflection conjugacy class) and ``ParamK`` (one value per pair (orbit,
residue j), summing to zero over j for each orbit).  ``kappa`` and
``kappa_inverse`` convert between them by a finite Fourier transform along
each orbit's cyclic subgroup, with the j = 0 slot of ParamC pinned to zero.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cyclotomic_numerics import (
    QQ,
    Cyclotomic,
    as_scalar,
    canonical_scalar,
    zeta,
)

__all__ = [
    "ReflectionGroup",
    "Reflection",
    "HyperplaneOrbit",
    "ParamC",
    "ParamK",
    "build_cyclic",
    "build_weyl_b2",
    "build_dihedral",
    "group_from_config",
    "kappa",
    "kappa_inverse",
    "param_c",
    "param_k",
    "param_c_zero",
    "regular_vector",
    "degrees",
    "mat_mul",
    "det_one_minus_tw",
    "series_inverse",
    "molien_series",
    "mat_vec",
    "mat_inv",
    "mat_det",
    "identity_matrix",
    "pair",
]

#: BFS closure gives up beyond this many elements.
ORDER_CAP = 4000


# ---------------------------------------------------------------------------
# exact little linear algebra on tuple matrices


def identity_matrix(n: int):
    return tuple(tuple(QQ(1) if i == j else QQ(0) for j in range(n))
                 for i in range(n))


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(canonical_scalar(sum((a[i][k] * b[k][j] for k in range(m)),
                                   QQ(0)))
              for j in range(p))
        for i in range(n))


def mat_vec(a, v):
    return tuple(canonical_scalar(sum((a[i][k] * v[k] for k in range(len(v))),
                                      QQ(0)))
                 for i in range(len(a)))


def pair(cov, vec):
    """Pairing of a covector with a vector (plain dot of coordinates)."""
    return canonical_scalar(sum((c * v for c, v in zip(cov, vec)), QQ(0)))


def mat_det(a):
    n = len(a)
    if n == 1:
        return canonical_scalar(a[0][0])
    if n == 2:
        return canonical_scalar(a[0][0] * a[1][1] - a[0][1] * a[1][0])
    total = QQ(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term = term * a[i][perm[i]]
        total = total + term
    return canonical_scalar(total)


def mat_inv(a):
    n = len(a)
    rows = [[as_scalar(x) for x in row]
            + [QQ(1) if j == i else QQ(0) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if _nonzero(rows[i][col])), None)
        if piv is None:
            raise ValueError("singular matrix")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = _scalar_inv(rows[col][col])
        rows[col] = [x * inv for x in rows[col]]
        for i in range(n):
            if i != col and _nonzero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return tuple(tuple(canonical_scalar(x) for x in row[n:]) for row in rows)


def _nonzero(x) -> bool:
    return bool(x) if isinstance(x, Cyclotomic) else x != 0


def _scalar_inv(x):
    if isinstance(x, Cyclotomic):
        return x.inverse()
    return QQ(1) / x


def _mat_rank(a) -> int:
    rows = [list(row) for row in a]
    n, m = len(rows), len(rows[0])
    rank = 0
    row = 0
    for col in range(m):
        piv = next((i for i in range(row, n) if _nonzero(rows[i][col])), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = _scalar_inv(rows[row][col])
        rows[row] = [x * inv for x in rows[row]]
        for i in range(n):
            if i != row and _nonzero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[row])]
        rank += 1
        row += 1
    return rank


# ---------------------------------------------------------------------------
# group data


@dataclass(frozen=True)
class Reflection:
    """One reflection: element index plus root data.

    root is a covector on V (its kernel is the fixed hyperplane, first
    nonzero coordinate normalized to 1 so it doubles as the hyperplane
    key); coroot is a vector with <coroot, root> = 1, scaled so that
    w(y) = y - (1 - det) <y, root> coroot.
    """

    element: int
    word: str
    root: tuple
    coroot: tuple
    det: object
    hyperplane: int
    orbit: int
    power: int  # det = zeta_e ^ power for the hyperplane's cyclic order e

    @property
    def class_id(self) -> tuple[int, int]:
        return (self.orbit, self.power)


@dataclass(frozen=True)
class HyperplaneOrbit:
    id: int
    order: int                  # common |W_H| = e for hyperplanes in the orbit
    hyperplanes: tuple[int, ...]
    reflections: tuple[int, ...]  # indices into ReflectionGroup.reflections

    @property
    def size(self) -> int:
        return len(self.hyperplanes)


class ReflectionGroup:
    """A finite group of exact matrices with reflection bookkeeping."""

    def __init__(self, name: str, family: str, parameter: Optional[int],
                 generators: Sequence[tuple[str, tuple]]):
        self.name = name
        self.family = family
        self.parameter = parameter
        self.dim = len(generators[0][1])
        self.generators = [(g, tuple(tuple(as_scalar(x) for x in row)
                                     for row in m)) for g, m in generators]
        self.cache: dict = {}
        self._close()
        self._find_reflections()

    # -- construction -------------------------------------------------------

    def _close(self) -> None:
        ident = identity_matrix(self.dim)
        self.elements: list = [ident]
        self.words: list[str] = ["1"]
        self.index: dict = {ident: 0}
        frontier = [(ident, "")]
        while frontier:
            new_frontier = []
            for mat, word in frontier:
                for letter, gen in self.generators:
                    prod = mat_mul(mat, gen)
                    if prod not in self.index:
                        if len(self.elements) >= ORDER_CAP:
                            raise ValueError(
                                f"group closure exceeded {ORDER_CAP} elements")
                        self.index[prod] = len(self.elements)
                        self.elements.append(prod)
                        self.words.append(word + letter)
                        new_frontier.append((prod, word + letter))
            frontier = new_frontier
        self.order = len(self.elements)
        self.word_index = {w: i for i, w in enumerate(self.words)}
        self.inverse = [self.index[mat_inv(m)] for m in self.elements]
        self._mult: dict[tuple[int, int], int] = {}
        self.det_char = [mat_det(m) for m in self.elements]

    def product(self, i: int, j: int) -> int:
        key = (i, j)
        got = self._mult.get(key)
        if got is None:
            got = self.index[mat_mul(self.elements[i], self.elements[j])]
            self._mult[key] = got
        return got

    # -- reflection data ------------------------------------------------------

    def _find_reflections(self) -> None:
        ident = identity_matrix(self.dim)
        hyper_keys: dict[tuple, int] = {}
        raw: list[dict] = []
        for idx, mat in enumerate(self.elements):
            if idx == 0:
                continue
            diff = tuple(tuple(mat[i][j] - ident[i][j]
                               for j in range(self.dim))
                         for i in range(self.dim))
            if _mat_rank(diff) != 1:
                continue
            row = next(r for r in diff if any(_nonzero(x) for x in r))
            j0, lead = next((j, x) for j, x in enumerate(row) if _nonzero(x))
            lead_inv = _scalar_inv(lead)
            root = tuple(canonical_scalar(x * lead_inv) for x in row)
            det = self.det_char[idx]
            scale = _scalar_inv(det - 1) * lead
            coroot = tuple(canonical_scalar(diff[i][j0] * lead_inv * scale)
                           for i in range(self.dim))
            if pair(coroot, root) != 1:
                raise AssertionError("coroot normalization broke")
            hkey = root
            hid = hyper_keys.setdefault(hkey, len(hyper_keys))
            raw.append({"element": idx, "root": root, "coroot": coroot,
                        "det": det, "hyperplane": hid})
        self._hyperplane_keys = {v: k for k, v in hyper_keys.items()}

        # orbit structure on hyperplanes under the full group action
        nhyp = len(hyper_keys)
        parent = list(range(nhyp))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        inv_mats = [mat_inv(self.elements[i]) for i in range(self.order)]
        for hid in range(nhyp):
            cov = self._hyperplane_keys[hid]
            for g in range(self.order):
                image = tuple(
                    canonical_scalar(sum((cov[i] * inv_mats[g][i][j]
                                          for i in range(self.dim)), QQ(0)))
                    for j in range(self.dim))
                lead = next(x for x in image if _nonzero(x))
                image = tuple(canonical_scalar(x * _scalar_inv(lead))
                              for x in image)
                other = hyper_keys[image]
                ra, rb = find(hid), find(other)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

        per_hyper: dict[int, list[int]] = {}
        for i, r in enumerate(raw):
            per_hyper.setdefault(r["hyperplane"], []).append(i)

        roots_of_orbits = sorted({find(h) for h in range(nhyp)})
        orbit_of_root = {r: i for i, r in enumerate(roots_of_orbits)}

        reflections: list[Reflection] = []
        orbit_members: dict[int, set[int]] = {}
        orbit_orders: dict[int, int] = {}
        orbit_refl: dict[int, list[int]] = {}
        for i, r in enumerate(raw):
            hid = r["hyperplane"]
            e = len(per_hyper[hid]) + 1
            oid = orbit_of_root[find(hid)]
            prev = orbit_orders.setdefault(oid, e)
            if prev != e:
                raise AssertionError("orbit mixes hyperplane orders")
            power = next(k for k in range(1, e) if zeta(e, k) == r["det"])
            orbit_members.setdefault(oid, set()).add(hid)
            refl = Reflection(element=r["element"],
                              word=self.words[r["element"]],
                              root=r["root"], coroot=r["coroot"],
                              det=r["det"], hyperplane=hid, orbit=oid,
                              power=power)
            orbit_refl.setdefault(oid, []).append(len(reflections))
            reflections.append(refl)

        self.reflections = reflections
        self.orbits = [HyperplaneOrbit(
            id=oid,
            order=orbit_orders[oid],
            hyperplanes=tuple(sorted(orbit_members[oid])),
            reflections=tuple(orbit_refl[oid]))
            for oid in sorted(orbit_orders)]
        self.reflection_of_element = {r.element: i
                                      for i, r in enumerate(reflections)}
        self.classes = sorted({r.class_id for r in reflections})
        self.class_names = self._name_classes()

    def _name_classes(self) -> dict[tuple[int, int], str]:
        if self.family == "cyclic":
            return {(orb, j): f"c{j}" for orb, j in self.classes}
        if len(self.orbits) == 1 and all(j == 1 for _, j in self.classes):
            return {self.classes[0]: "a"}
        if len(self.orbits) == 2 and all(j == 1 for _, j in self.classes):
            first_gen = self.generators[0][0]
            gen_refl = next(r for r in self.reflections if r.word == first_gen)
            names = {}
            for orb, j in self.classes:
                names[(orb, j)] = "a" if orb == gen_refl.orbit else "b"
            return names
        return {(orb, j): f"c{orb}_{j}" for orb, j in self.classes}

    # -- actions ---------------------------------------------------------------

    def act_vector(self, i: int, v: tuple) -> tuple:
        return mat_vec(self.elements[i], v)

    def act_covector(self, i: int, cov: tuple) -> tuple:
        inv = self.elements[self.inverse[i]]
        return tuple(
            canonical_scalar(sum((cov[k] * inv[k][j]
                                  for k in range(self.dim)), QQ(0)))
            for j in range(self.dim))

    def reflection_class(self, refl: Reflection) -> tuple[int, int]:
        return refl.class_id

    def __repr__(self) -> str:
        return (f"ReflectionGroup({self.name}, order={self.order}, "
                f"dim={self.dim}, reflections={len(self.reflections)})")


# ---------------------------------------------------------------------------
# builders


def build_cyclic(d: int) -> ReflectionGroup:
    """Z/d acting on a line by the primitive d-th root of unity."""
    if d < 2:
        raise ValueError("cyclic group needs d >= 2")
    gen = ((zeta(d),),)
    return ReflectionGroup(f"cyclic({d})", "cyclic", d, [("s", gen)])


def build_weyl_b2() -> ReflectionGroup:
    """The Weyl group of type B2 with its standard coordinate matrices:
    s swaps the two coordinates, t negates the first."""
    s = ((QQ(0), QQ(1)), (QQ(1), QQ(0)))
    t = ((QQ(-1), QQ(0)), (QQ(0), QQ(1)))
    return ReflectionGroup("b2", "b2", None, [("s", s), ("t", t)])


def build_dihedral(m: int) -> ReflectionGroup:
    """Dihedral group of order 2m in complex-diagonal coordinates, so all
    matrix entries stay in Q(zeta_m)."""
    if m < 3:
        raise ValueError("dihedral group needs m >= 3")
    s = ((QQ(0), QQ(1)), (QQ(1), QQ(0)))
    t = ((QQ(0), zeta(m, m - 1)), (zeta(m), QQ(0)))
    return ReflectionGroup(f"dihedral({m})", "dihedral", m,
                           [("s", s), ("t", t)])


def group_from_config(config: dict) -> ReflectionGroup:
    """Build a group from a JSON-style config dict."""
    if not isinstance(config, dict) or "group" not in config:
        raise ValueError("config must be a dict with a 'group' key")
    kind = config["group"]
    allowed = {"cyclic": {"group", "d"}, "b2": {"group"},
               "dihedral": {"group", "m"}}
    if kind not in allowed:
        raise ValueError(f"unknown group kind {kind!r}")
    extra = set(config) - allowed[kind]
    if extra:
        raise ValueError(f"unknown config keys for {kind}: {sorted(extra)}")
    if kind == "cyclic":
        if "d" not in config:
            raise ValueError("cyclic config needs 'd'")
        return build_cyclic(int(config["d"]))
    if kind == "b2":
        return build_weyl_b2()
    if "m" not in config:
        raise ValueError("dihedral config needs 'm'")
    return build_dihedral(int(config["m"]))


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ParamC:
    """Coupling constants keyed by reflection conjugacy class (orbit, j)."""

    group: str
    values: tuple  # sorted tuple of ((orbit, j), scalar)

    def value(self, class_id):
        for key, val in self.values:
            if key == class_id:
                return val
        raise KeyError(class_id)

    def as_dict(self) -> dict:
        return dict(self.values)

    def is_zero(self) -> bool:
        return all(not _nonzero(v) for _, v in self.values)


@dataclass(frozen=True)
class ParamK:
    """Parameters keyed by (hyperplane orbit, residue j), zero-sum per orbit."""

    group: str
    values: tuple  # sorted tuple of ((orbit, j), scalar)

    def value(self, key):
        for k, val in self.values:
            if k == key:
                return val
        raise KeyError(key)

    def as_dict(self) -> dict:
        return dict(self.values)


def param_c(W: ReflectionGroup, spec) -> ParamC:
    """Build ParamC from a dict keyed by class name/class id, or a flat list
    ordered like W.classes."""
    if isinstance(spec, (list, tuple)):
        if len(spec) != len(W.classes):
            raise ValueError(
                f"expected {len(W.classes)} class values, got {len(spec)}")
        values = {cid: as_scalar(v) for cid, v in zip(W.classes, spec)}
    else:
        by_name = {name: cid for cid, name in W.class_names.items()}
        values = {}
        for key, v in spec.items():
            if key in by_name:
                cid = by_name[key]
            elif key in W.class_names:
                cid = key
            else:
                raise ValueError(f"unknown reflection class {key!r}")
            values[cid] = as_scalar(v)
        missing = set(W.classes) - set(values)
        if missing:
            raise ValueError(f"missing class values for {sorted(missing)}")
    items = tuple(sorted((cid, canonical_scalar(values[cid]))
                         for cid in W.classes))
    return ParamC(W.name, items)


def param_c_zero(W: ReflectionGroup) -> ParamC:
    return param_c(W, [0] * len(W.classes))


def param_k(W: ReflectionGroup, spec) -> ParamK:
    """Build ParamK from a dict keyed by (orbit, j) or a flat list running
    through orbits in order, j = 0..e-1 within each orbit."""
    slots = [(orb.id, j) for orb in W.orbits for j in range(orb.order)]
    if isinstance(spec, (list, tuple)):
        if len(spec) != len(slots):
            raise ValueError(f"expected {len(slots)} k-values, got {len(spec)}")
        values = {slot: as_scalar(v) for slot, v in zip(slots, spec)}
    else:
        values = {}
        for key, v in spec.items():
            if tuple(key) not in slots:
                raise ValueError(f"unknown k slot {key!r}")
            values[tuple(key)] = as_scalar(v)
        missing = set(slots) - set(values)
        if missing:
            raise ValueError(f"missing k values for {sorted(missing)}")
    for orb in W.orbits:
        total = canonical_scalar(
            sum((values[(orb.id, j)] for j in range(orb.order)), QQ(0)))
        if _nonzero(total):
            raise ValueError(
                f"k values for orbit {orb.id} sum to {total}, expected 0")
    items = tuple(sorted((slot, canonical_scalar(values[slot]))
                         for slot in slots))
    return ParamK(W.name, items)


def kappa(c: ParamC, W: ReflectionGroup) -> ParamK:
    """Fourier transform of the class parameters along each orbit:
    k_{orbit,j} = (1/e) sum_{i=1..e-1} zeta_e^{-i(j-1)} c_{orbit,i}."""
    _check_group(c, W)
    cd = c.as_dict()
    values = {}
    for orb in W.orbits:
        e = orb.order
        for j in range(e):
            total = QQ(0)
            for i in range(1, e):
                total = total + zeta(e, (-i * (j - 1)) % e) * cd[(orb.id, i)]
            values[(orb.id, j)] = canonical_scalar(total / QQ(e))
    return param_k(W, values)


def kappa_inverse(k: ParamK, W: ReflectionGroup) -> ParamC:
    """Inverse transform: c_{orbit,i} = sum_j zeta_e^{i(j-1)} k_{orbit,j}."""
    _check_group(k, W)
    kd = k.as_dict()
    values = {}
    for orb in W.orbits:
        e = orb.order
        for i in range(1, e):
            total = QQ(0)
            for j in range(e):
                total = total + zeta(e, (i * (j - 1)) % e) * kd[(orb.id, j)]
            values[(orb.id, i)] = canonical_scalar(total)
    return param_c(W, values)


def _check_group(p, W: ReflectionGroup) -> None:
    if p.group != W.name:
        raise ValueError(
            f"parameters built for {p.group!r} used with {W.name!r}")


# ---------------------------------------------------------------------------
# regular vectors and degrees


def regular_vector(W: ReflectionGroup, seed: int, dual: bool = False) -> tuple:
    """A deterministic rational vector avoiding every reflection's root
    hyperplane (dual=False) or coroot hyperplane (dual=True)."""
    rng = random.Random(f"regular:{W.name}:{seed}:{int(dual)}")
    while True:
        v = tuple(QQ(rng.randint(-19, 19)) for _ in range(W.dim))
        if all(not _nonzero(x) for x in v):
            continue
        good = True
        for r in W.reflections:
            cov = r.coroot if dual else r.root
            if not _nonzero(pair(cov, v)):
                good = False
                break
        if good:
            return v


def det_one_minus_tw(mat) -> list:
    """Coefficients of det(1 - t*w), lowest degree first, exactly."""
    n = len(mat)
    coeffs = [canonical_scalar(QQ(1))]
    for k in range(1, n + 1):
        total = QQ(0)
        for rows in itertools.combinations(range(n), k):
            sub = tuple(tuple(mat[i][j] for j in rows) for i in rows)
            total = total + mat_det(sub)
        coeffs.append(canonical_scalar(QQ(-1) ** k * total))
    return coeffs


def series_inverse(poly: list, n_terms: int) -> list:
    if not _nonzero(poly[0]):
        raise ValueError("series inverse needs a unit constant term")
    inv0 = _scalar_inv(poly[0])
    out = [canonical_scalar(inv0)]
    for k in range(1, n_terms):
        acc = QQ(0)
        for j in range(1, min(k, len(poly) - 1) + 1):
            acc = acc + poly[j] * out[k - j]
        out.append(canonical_scalar(-inv0 * acc))
    return out


def molien_series(W: ReflectionGroup, n_terms: int) -> list:
    """Truncated coefficients of (1/|W|) sum_w 1/det(1 - t w)."""
    acc = [QQ(0)] * n_terms
    for mat in W.elements:
        inv = series_inverse(det_one_minus_tw(mat), n_terms)
        for i in range(n_terms):
            acc[i] = acc[i] + inv[i]
    out = []
    for x in acc:
        val = canonical_scalar(x)
        if isinstance(val, Cyclotomic):
            raise AssertionError("Molien coefficients must be rational")
        out.append(val / QQ(W.order))
    return out


def degrees(W: ReflectionGroup) -> tuple[int, ...]:
    """Invariant degrees recovered from the Molien series by factor
    extraction, validated against |W| and the reflection count."""
    cached = W.cache.get("degrees")
    if cached is not None:
        return cached
    n_terms = 8
    while True:
        try:
            degs = _extract_degrees(W, n_terms)
            break
        except _NeedMoreTerms:
            n_terms *= 2
            if n_terms > 512:
                raise AssertionError("Molien extraction did not stabilize")
    prod = 1
    for d in degs:
        prod *= d
    if prod != W.order or sum(d - 1 for d in degs) != len(W.reflections):
        raise AssertionError(f"degree extraction inconsistent: {degs}")
    W.cache["degrees"] = degs
    return degs


class _NeedMoreTerms(Exception):
    pass


def _extract_degrees(W: ReflectionGroup, n_terms: int) -> tuple[int, ...]:
    series = molien_series(W, n_terms)
    degs = []
    work = list(series)
    for _ in range(W.dim):
        k = next((i for i in range(1, n_terms) if work[i] != 0), None)
        if k is None:
            raise _NeedMoreTerms
        degs.append(k)
        # multiply by (1 - t^k)
        for i in range(n_terms - 1, k - 1, -1):
            work[i] = work[i] - work[i - k]
    if work[0] != 1 or any(x != 0 for x in work[1:]):
        raise _NeedMoreTerms
    return tuple(sorted(degs))
