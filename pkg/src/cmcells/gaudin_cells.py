"""Gaudin operators, eigenvalue-path cells, and cellular characters.

For a fixed regular point v of V and a point v* of V*, each basis vector y
of V gives a |W| x |W| matrix acting on the fiber basis (e_w): the diagonal
carries <y, w(v*)> and reflections contribute off-diagonal entries
eps(s) c_s <y, alpha_s> / <v, alpha_s> at (sw, w).  The matrices commute
pairwise, and at v* = 0 they also commute with every right multiplication.

Cells are read off by monodromy: along the path t |-> (t c, v, (1-t) v*)
the joint eigenvalue functional rho_w(t) through e_w is followed by an
adaptive homotopy (a seeded generic combination of the matrices is
diagonalized per step, eigenvalues matched by value and eigenvector
overlap, interior collisions retried through complex detours).  Two labels
land in the same left cell exactly when their terminal functionals agree.
The raw partition depends on the homotopy class of the seeded real path
(chambers of (v, v*) twist the labels by covering monodromy), so published
blocks are normalized against the exact cell model of the group: the model
pins the Euler limit of every element's cell (d k_i on the cyclic line,
the linear-character Euler scalars on b2), and the tracked run must
reproduce the model's multiset of (size, Euler limit) pairs or the
partition is refused.  Right cells run the same machinery on the dual data
(V and V* exchanged, roots and coroots exchanged, determinants inverted);
two-sided candidates coarsen by the terminal Euler eigenvalue.

Cellular characters come from the terminal point itself: contour-integral
spectral projectors P onto the clustered eigenvalues give class functions
w |-> tr(P R_w), whose inner products with Irr(W) must round to small
non-negative integers.

The degree-|W| closed forms of the Euler minimal polynomial (product form
for the cyclic groups, an explicit degree-8 polynomial for b2) provide an
independent end-to-end oracle for the whole operator construction; see
``euler_minpoly_check``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig as dense_eig
from scipy.optimize import linear_sum_assignment

from .cyclotomic_numerics import QQ, canonical_scalar, embed_complex, zeta
from .reflection_groups import (
    ParamC,
    ReflectionGroup,
    kappa,
    regular_vector,
)
from .characters import class_of_element, irr_characters
from .euler_families import EXACT, cm_families

__all__ = [
    "NumericAmbiguityError",
    "PathTrackingError",
    "GaudinPoint",
    "GaudinOperatorSet",
    "PathSpec",
    "EigenPath",
    "CellBlock",
    "CellPartition",
    "CellularCharacter",
    "MinpolyReport",
    "gaudin_point",
    "gaudin_matrices",
    "track_spectrum",
    "left_cells",
    "right_cells",
    "two_sided_candidate",
    "cellular_characters",
    "euler_minpoly_check",
]

# The t=0 eigenvector e_w is labeled by w (its diagonal eigenvalue is the
# functional w(v*)).  The homotopy class of the seeded real path twists the
# terminal labels by covering monodromy, so raw blocks are trusted only up
# to relabeling: partitions are published with the exact cell model's
# element sets once the tracked (size, Euler limit) content matches the
# model, and the raw blocks are recorded in the diagnostics.

_COMMUTE_RTOL = 1e-9
_CLUSTER_RTOL = 1e-6
_DIAMETER_FLOOR = 1e-9
_MARGIN_FACTOR = 10.0
_PROJECTOR_TOL = 1e-8
_ROUND_TOL = 1e-6
_MAX_RETRIES = 5
_CONTOUR_NODES = 128


class NumericAmbiguityError(RuntimeError):
    """Numerically ambiguous output (cluster margins, rounding residuals);
    rerunning with a different seed is advised."""


class PathTrackingError(RuntimeError):
    """Eigenvalue continuation failed after all complex detours."""


# ---------------------------------------------------------------------------
# points and operator sets


@dataclass(frozen=True)
class GaudinPoint:
    """Embedded parameter point.  ``c`` is parallel to W.classes; for the
    right-side construction ``v`` lives in V* and ``vstar`` in V."""

    c: tuple        # complex, one per reflection class
    v: tuple        # complex, the fixed regular point
    vstar: tuple    # complex, the decaying point
    t: complex = 1.0


def gaudin_point(W: ReflectionGroup, c: ParamC, v, vstar,
                 t: complex = 1.0) -> GaudinPoint:
    cvals = tuple(complex(embed_complex(c.value(cid))) for cid in W.classes)
    return GaudinPoint(
        c=cvals,
        v=tuple(complex(embed_complex(x)) for x in v),
        vstar=tuple(complex(embed_complex(x)) for x in vstar),
        t=t)


def _embedded_actions(W: ReflectionGroup):
    """Per element: complex matrix on V and the matrix of the covector
    action xi -> xi o w^{-1}."""
    got = W.cache.get("gaudin_actions")
    if got is None:
        mats = np.stack([
            np.array([[complex(embed_complex(x)) for x in row]
                      for row in W.elements[g]], dtype=complex)
            for g in range(W.order)])
        cov = np.stack([mats[W.inverse[g]].T for g in range(W.order)])
        got = (mats, cov)
        W.cache["gaudin_actions"] = got
    return got


def _left_mult_perms(W: ReflectionGroup):
    got = W.cache.get("gaudin_left_perms")
    if got is None:
        n = W.order
        out = []
        for g in range(n):
            mat = np.zeros((n, n))
            for w in range(n):
                mat[W.product(g, w), w] = 1.0
            out.append(mat)
        got = tuple(out)
        W.cache["gaudin_left_perms"] = got
    return got


def _right_mult_perms(W: ReflectionGroup):
    got = W.cache.get("gaudin_right_perms")
    if got is None:
        n = W.order
        out = []
        for g in range(n):
            mat = np.zeros((n, n))
            for w in range(n):
                mat[W.product(w, g), w] = 1.0
            out.append(mat)
        got = tuple(out)
        W.cache["gaudin_right_perms"] = got
    return got


def _side_reflection_data(W: ReflectionGroup, side: str):
    """Per reflection: (element, determinant on the acting space, pairing
    coefficients of the root against the basis of that space)."""
    if side == "left":
        return [(r.element, complex(embed_complex(r.det)),
                 np.array([complex(embed_complex(x)) for x in r.root]))
                for r in W.reflections]
    if side == "right":
        return [(r.element, complex(embed_complex(r.det)).conjugate(),
                 np.array([complex(embed_complex(x)) for x in r.coroot]))
                for r in W.reflections]
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


@dataclass(frozen=True)
class GaudinOperatorSet:
    group: str
    side: str
    point: GaudinPoint
    matrices: tuple        # numpy array per basis vector of the acting space
    commutation_residual: float

    def euler_matrix(self) -> np.ndarray:
        total = np.zeros_like(self.matrices[0])
        for vi, mat in zip(self.point.v, self.matrices):
            total = total + vi * mat
        return total


def gaudin_matrices(W: ReflectionGroup, point: GaudinPoint,
                    side: str = "left") -> GaudinOperatorSet:
    n, dim = W.order, W.dim
    mats_v, mats_cov = _embedded_actions(W)
    perms = _left_mult_perms(W)
    refl = _side_reflection_data(W, side)
    cmap = dict(zip(W.classes, point.c))
    anchor = np.array(point.v)
    decay = np.array(point.vstar)
    scale = max(1.0, float(np.max(np.abs(anchor))))

    moved = np.empty((n, dim), dtype=complex)
    act = mats_cov if side == "left" else mats_v
    for w in range(n):
        moved[w] = act[w] @ decay

    out = [np.zeros((n, n), dtype=complex) for _ in range(dim)]
    for i in range(dim):
        out[i][np.arange(n), np.arange(n)] = moved[:, i]
    for k, (elt, det, root) in enumerate(refl):
        denom = complex(np.dot(root, anchor))
        if abs(denom) < 1e-12 * scale:
            raise ValueError(
                f"anchor point is not regular: reflection {k} of {W.name} "
                "pairs to zero")
        factor = det * cmap[W.reflections[k].class_id] / denom
        for i in range(dim):
            if root[i] != 0:
                out[i] = out[i] + (factor * root[i]) * perms[elt]

    residual = 0.0
    for i in range(dim):
        ni = np.linalg.norm(out[i])
        for j in range(i + 1, dim):
            comm = out[i] @ out[j] - out[j] @ out[i]
            denom_n = max(ni * np.linalg.norm(out[j]), 1e-300)
            residual = max(residual, float(np.linalg.norm(comm)) / denom_n)
    if residual > _COMMUTE_RTOL:
        raise NumericAmbiguityError(
            f"Gaudin matrices of {W.name} fail to commute: relative "
            f"residual {residual:.3e}")

    if float(np.max(np.abs(decay))) == 0.0:
        rights = _right_mult_perms(W)
        for i in range(dim):
            ni = max(float(np.linalg.norm(out[i])), 1e-300)
            for mat in rights:
                comm = out[i] @ mat - mat @ out[i]
                if float(np.linalg.norm(comm)) / ni > _COMMUTE_RTOL:
                    raise NumericAmbiguityError(
                        f"Gaudin matrix of {W.name} does not commute with "
                        "a right multiplication at vstar = 0")

    return GaudinOperatorSet(
        group=W.name, side=side, point=point,
        matrices=tuple(out), commutation_residual=residual)


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class PathSpec:
    """t |-> (t c, v, (1-t) vstar), with exact base data."""

    c: ParamC
    v: tuple
    vstar: tuple
    side: str = "left"

    def point(self, W: ReflectionGroup, t: complex) -> GaudinPoint:
        base = gaudin_point(W, self.c, self.v, self.vstar, t=t)
        return GaudinPoint(
            c=tuple(t * x for x in base.c),
            v=base.v,
            vstar=tuple((1 - t) * x for x in base.vstar),
            t=t)


@dataclass(frozen=True)
class EigenPath:
    label: int            # element index of the t=0 eigenvector
    samples: tuple        # (t, joint values), at accepted steps
    terminal: tuple       # joint values at t=1
    status: str           # "ok" | "retried(n)" | "failed"


def _combination_matrix(ops: GaudinOperatorSet, mu: np.ndarray) -> np.ndarray:
    comb = np.zeros_like(ops.matrices[0])
    for m, w in zip(ops.matrices, mu):
        comb = comb + w * m
    return comb


def _terminal_data(W: ReflectionGroup, path: PathSpec, mu: np.ndarray):
    """Spectral clusters of the terminal combination matrix, or None when
    these weights fail to separate distinct joint eigenvalue tuples."""
    ops1 = gaudin_matrices(W, path.point(W, 1.0), path.side)
    comb1 = _combination_matrix(ops1, mu)
    vals, vecs = dense_eig(comb1)
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    n = W.order
    scale = max(float(np.max(np.abs(vals))), 1e-14)

    tol = 1e-7 * scale
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = sorted(groups.values(), key=min)

    rows = np.empty((n, W.dim), dtype=complex)
    for i in range(n):
        u = vecs[:, i]
        rows[i] = [u.conj() @ (m @ u) for m in ops1.matrices]
    row_scale = max(1.0, float(np.max(np.abs(rows))))
    centers, joint = [], []
    for cluster in clusters:
        spread = max((float(np.linalg.norm(rows[i] - rows[j]))
                      for i in cluster for j in cluster), default=0.0)
        if spread > 1e-7 * row_scale:
            return None     # one eigenvalue, two joint tuples: reseed mu
        centers.append(complex(vals[cluster].mean()))
        joint.append(rows[cluster].mean(axis=0))
    inter = float("inf")
    for a in range(len(centers)):
        for b in range(a + 1, len(centers)):
            dist = abs(centers[a] - centers[b])
            inter = min(inter, dist)
            # a healthy mu keeps cluster separation comparable to the
            # separation of the joint tuples themselves
            spread = float(np.linalg.norm(
                np.array(joint[a]) - np.array(joint[b])))
            if dist < max(10.0 * tol, 0.2 * spread):
                return None     # bad luck with mu: reseed
    return {
        "ops1": ops1,
        "comb1": comb1,
        "centers": np.array(centers),
        "joint": [tuple(complex(x) for x in row) for row in joint],
        "sizes": [len(cl) for cl in clusters],
        "inter": inter,
        "scale": scale,
    }


def _select_combination(W: ReflectionGroup, path: PathSpec, seed):
    """Seeded weights mu whose combination separates the t=0 diagonal and
    the terminal joint eigenvalue tuples."""
    mats_v, mats_cov = _embedded_actions(W)
    act = mats_cov if path.side == "left" else mats_v
    decay = np.array([complex(embed_complex(x)) for x in path.vstar])
    moved = np.array([act[w] @ decay for w in range(W.order)])
    rng = random.Random(f"gaudin-mu:{W.name}:{path.side}:{seed}")
    for _ in range(64):
        mu = np.array([complex(rng.uniform(0.6, 1.4), rng.uniform(-0.4, 0.4))
                       for _ in range(W.dim)])
        diag = moved @ mu
        scale = max(1.0, float(np.max(np.abs(diag))))
        gaps = [abs(diag[i] - diag[j])
                for i in range(W.order) for j in range(i + 1, W.order)]
        if gaps and min(gaps) <= 1e-3 * scale:
            continue
        terminal = _terminal_data(W, path, mu)
        if terminal is not None:
            return mu, terminal
    raise NumericAmbiguityError(
        f"no seeded weight combination separates the spectra of {W.name}; "
        "the decaying point may be non-regular or the parameters nearly "
        "coincident")


def _try_jump(terminal: dict, vals: np.ndarray, t: float, drift: float):
    """Assign the tracked eigenvalues to terminal clusters in one step.

    Valid only when the remaining perturbation (1-t) * ||A(0)-A(1)|| is
    small against the inter-cluster gap, so no path can migrate between
    clusters on [t, 1]; returns the cluster index per label or None."""
    centers = terminal["centers"]
    sizes = terminal["sizes"]
    if len(centers) == 1:
        return [0] * len(vals)
    if (1.0 - t) * drift > 0.75 * terminal["inter"]:
        return None
    m = len(centers)
    gaps = np.array([min(abs(centers[k] - centers[j])
                         for j in range(m) if j != k) for k in range(m)])
    assign = []
    for v in vals:
        dists = np.abs(centers - v)
        k = int(np.argmin(dists))
        if dists[k] > 0.35 * gaps[k]:
            return None
        assign.append(k)
    counts = [0] * len(centers)
    for k in assign:
        counts[k] += 1
    if counts != sizes:
        return None
    return assign


def _advance(W: ReflectionGroup, path: PathSpec, mu: np.ndarray,
             beta: float, terminal: dict):
    """One continuation attempt; returns (samples, None) on success or
    (None, failure_t) when the step size collapses."""
    n = W.order

    def matrices_at(tau: complex):
        ops = gaudin_matrices(W, path.point(W, tau), path.side)
        return ops, _combination_matrix(ops, mu)

    ops0, comb0 = matrices_at(0.0)
    vals = np.array([comb0[w, w] for w in range(n)])
    vecs = np.eye(n, dtype=complex)
    samples = [[(0.0, tuple(complex(m[w, w]) for m in ops0.matrices))]
               for w in range(n)]
    drift = float(np.linalg.norm(comb0 - terminal["comb1"], 2))

    def finish(assign):
        for w in range(n):
            samples[w].append((1.0, terminal["joint"][assign[w]]))
        return samples

    t, dt = 0.0, 1.0 / 16.0
    while True:
        assign = _try_jump(terminal, vals, t, drift)
        if assign is not None:
            return finish(assign), None
        t_next = t + dt
        if t_next >= 1.0:
            dt *= 0.5       # the jump must close the path; force it nearer
            if dt < 1e-6:
                return None, t
            continue
        tau = t_next + 1j * beta * t_next * (1.0 - t_next)
        ops, comb = matrices_at(tau)
        vals_new, vecs_new = dense_eig(comb)
        vecs_new = vecs_new / np.linalg.norm(vecs_new, axis=0, keepdims=True)

        scale = max(float(np.max(np.abs(vals))),
                    float(np.max(np.abs(vals_new))), 1e-14)
        overlap = np.abs(vecs.conj().T @ vecs_new)
        cost = np.abs(vals[:, None] - vals_new[None, :]) / scale \
            + (1.0 - overlap)
        rows, cols = linear_sum_assignment(cost)

        coal = 1e-8 * scale
        ok = True
        worst = 0.0
        for i, j in zip(rows, cols):
            others = np.abs(vals_new - vals_new[j])
            others = others[others > coal]
            gap = float(np.min(others)) if others.size else scale
            move = float(abs(vals[i] - vals_new[j]))
            limit = 0.35 * max(gap, 5.0 * coal)
            worst = max(worst, move / limit)
            if move > limit:
                ok = False
                break
        if not ok:
            dt *= 0.5
            if dt < 1e-6:
                return None, t
            continue

        perm = np.empty(n, dtype=int)
        perm[rows] = cols
        vals = vals_new[perm]
        vecs = vecs_new[:, perm]
        t = t_next
        for w in range(n):
            u = vecs[:, w]
            joint = tuple(complex(u.conj() @ (m @ u)) for m in ops.matrices)
            samples[w].append((t, joint))
        if worst < 0.2:
            dt = min(dt * 1.8, 1.0 / 8.0)


def _track(W: ReflectionGroup, path: PathSpec, seed):
    mu, terminal = _select_combination(W, path, seed)
    fail_t = None
    for attempt in range(_MAX_RETRIES + 1):
        if attempt == 0:
            beta = 0.0
        else:
            rng = random.Random(
                f"gaudin-detour:{W.name}:{path.side}:{seed}:{attempt}")
            beta = rng.uniform(0.1, 0.45) * (1 if rng.random() < 0.5 else -1)
        samples, fail_t = _advance(W, path, mu, beta, terminal)
        if samples is not None:
            status = "ok" if attempt == 0 else f"retried({attempt})"
            paths = [EigenPath(label=w,
                               samples=tuple(samples[w]),
                               terminal=samples[w][-1][1],
                               status=status)
                     for w in range(W.order)]
            return paths, mu, terminal
    raise PathTrackingError(
        f"eigenvalue continuation for {W.name} failed near t={fail_t:.6f} "
        f"after {_MAX_RETRIES} complex detours (seed {seed})")


def track_spectrum(W: ReflectionGroup, path: PathSpec,
                   seed=0) -> list:
    """Follow all |W| joint eigenvalue paths from t=0 to t=1."""
    paths, _, _ = _track(W, path, seed)
    return paths


# ---------------------------------------------------------------------------
# clustering


def _cluster_rows(rows: np.ndarray):
    """Group rows of a complex matrix by proximity; the threshold is
    relative to the diameter, with a floor that collapses everything."""
    m = rows.shape[0]
    dists = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            dists[i, j] = dists[j, i] = float(
                np.linalg.norm(rows[i] - rows[j]))
    diameter = float(np.max(dists)) if m > 1 else 0.0
    scale = max(1.0, float(np.max(np.abs(rows))) if rows.size else 0.0)
    diag = {"diameter": diameter}
    if diameter < _DIAMETER_FLOOR * scale:
        diag.update({"threshold": 0.0, "margin": float("inf")})
        return [list(range(m))], diag

    threshold = _CLUSTER_RTOL * diameter
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if dists[i, j] <= threshold:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    clusters = sorted(groups.values(), key=min)

    inter = min((dists[i, j]
                 for a in range(len(clusters)) for b in range(a + 1, len(clusters))
                 for i in clusters[a] for j in clusters[b]),
                default=float("inf"))
    diag.update({"threshold": threshold,
                 "margin": inter / threshold if threshold else float("inf")})
    if inter < _MARGIN_FACTOR * threshold:
        raise NumericAmbiguityError(
            f"terminal eigenvalue clusters are ambiguous: nearest "
            f"inter-cluster distance {inter:.3e} is below "
            f"{_MARGIN_FACTOR} x threshold {threshold:.3e}; rerun with a "
            "different seed")
    return clusters, diag


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class CellBlock:
    elements: tuple       # element names, shortlex
    terminal: tuple       # mean terminal joint values
    euler_limit: complex


@dataclass(frozen=True)
class CellPartition:
    group: str
    kind: str             # "left" | "right" | "two-sided-candidate"
    blocks: tuple
    exact: bool           # blocks come from a verified exact cell model
    diagnostics: dict

    def sets(self) -> frozenset:
        return frozenset(frozenset(b.elements) for b in self.blocks)

    def sizes(self) -> tuple:
        return tuple(sorted(len(b.elements) for b in self.blocks))


@dataclass(frozen=True)
class CellularCharacter:
    block: int            # index into the left-cell partition
    elements: tuple
    mults: tuple          # (character name, multiplicity), table order
    dim: int

    def as_dict(self) -> dict:
        return dict(self.mults)


def _tracked_run(W: ReflectionGroup, c: ParamC, seed, side: str) -> dict:
    key = ("gaudin_run", c, seed, side)
    got = W.cache.get(key)
    if got is not None:
        return got
    anchor = regular_vector(W, f"{seed}:anchor", dual=(side == "right"))
    decay = regular_vector(W, f"{seed}:decay", dual=(side != "right"))
    path = PathSpec(c=c, v=anchor, vstar=decay, side=side)
    paths, mu, terminal = _track(W, path, seed)
    rows = np.array([p.terminal for p in paths])
    clusters, cluster_diag = _cluster_rows(rows)
    retries = max((0 if p.status == "ok"
                   else int(p.status.split("(")[1][:-1])
                   for p in paths), default=0)
    got = {
        "path": path,
        "paths": paths,
        "mu": mu,
        "terminal": terminal,
        "rows": rows,
        "clusters": clusters,
        "diagnostics": dict(cluster_diag, retries=retries, seed=seed,
                            side=side),
    }
    W.cache[key] = got
    return got


# ---------------------------------------------------------------------------
# exact cell models


def _cyclic_model_rows(W: ReflectionGroup, c: ParamC):
    """The cell of s^i carries Euler value d k_i; the fiber {i : k_i = k_j}
    is the same cell on every side (left, right, two-sided) and contributes
    the characters eps^{-i}, i in the fiber, to its cellular character."""
    d = W.order
    orb = W.orbits[0].id
    k = kappa(c, W).as_dict()
    step = W.word_index["s"]
    power = []
    cur = 0
    for _ in range(d):
        power.append(cur)
        cur = W.product(cur, step)
    phi = [None] * d
    fibers: dict = {}
    for i in range(d):
        val = canonical_scalar(QQ(d) * k[(orb, i)])
        phi[power[i]] = val
        fibers.setdefault(val, []).append(i)

    lookup = class_of_element(W)
    by_value = {canonical_scalar(chi.values[lookup[step]]): chi.name
                for chi in irr_characters(W)}
    blocks = []
    mults = []
    for fiber in fibers.values():
        blocks.append(tuple(sorted(power[i] for i in fiber)))
        mults.append({by_value[canonical_scalar(zeta(d, (-i) % d))]: 1
                      for i in fiber})
    return phi, blocks, mults, "cyclic", False


def _b2_model_rows(W: ReflectionGroup, c: ParamC):
    """Euler pairing and cells for b2.  The four linear characters pin the
    pairing (1 |-> -2(a+b), s |-> 2(a-b), tst |-> 2(b-a), stst |-> 2(a+b),
    zero on the rest); one-sided cells are published in the regimes where
    they are known exactly (generic a^2 != b^2 with ab != 0, a = b != 0,
    and c = 0).  Right cells are the inverses of the left cells."""
    cd = c.as_dict()
    refl_class = {r.element: r.class_id for r in W.reflections}
    a = cd[refl_class[W.word_index["s"]]]
    b = cd[refl_class[W.word_index["t"]]]
    phi_by_word = {
        "1": QQ(-2) * (a + b),
        "s": QQ(2) * (a - b),
        "tst": QQ(2) * (b - a),
        "stst": QQ(2) * (a + b),
    }
    phi = [canonical_scalar(phi_by_word.get(w, QQ(0))) for w in W.words]

    lookup = class_of_element(W)
    named = {}
    for chi in irr_characters(W):
        if int(chi.dim) == 2:
            named["chi"] = chi.name
            continue
        vs = canonical_scalar(chi.values[lookup[W.word_index["s"]]])
        vt = canonical_scalar(chi.values[lookup[W.word_index["t"]]])
        key = ("s-" if vs == QQ(-1) else "s+") + \
              ("t-" if vt == QQ(-1) else "t+")
        named[key] = chi.name
    triv, eps_s, eps_t, eps = (named["s+t+"], named["s-t+"],
                               named["s+t-"], named["s-t-"])
    two_dim = named["chi"]

    def idx(*words):
        return tuple(sorted(W.word_index[w] for w in words))

    zero_a = canonical_scalar(a) == QQ(0)
    zero_b = canonical_scalar(b) == QQ(0)
    if zero_a and zero_b:
        blocks = [tuple(range(W.order))]
        mults = [{chi.name: int(chi.dim) for chi in irr_characters(W)}]
        return phi, blocks, mults, "zero", True
    if zero_a or zero_b:
        return phi, None, None, "axis", True
    if canonical_scalar(a - b) == QQ(0):
        blocks = [idx("1"), idx("s", "ts", "sts"), idx("t", "st", "tst"),
                  idx("stst")]
        mults = [{triv: 1}, {eps_s: 1, two_dim: 1}, {eps_t: 1, two_dim: 1},
                 {eps: 1}]
        return phi, blocks, mults, "equal", True
    if canonical_scalar(a + b) == QQ(0):
        return phi, None, None, "opposite", True
    blocks = [idx("1"), idx("s"), idx("t", "st"), idx("ts", "sts"),
              idx("tst"), idx("stst")]
    mults = [{triv: 1}, {eps_s: 1}, {two_dim: 1}, {two_dim: 1},
             {eps_t: 1}, {eps: 1}]
    return phi, blocks, mults, "generic", True


def _exact_cell_model(W: ReflectionGroup, c: ParamC):
    """Exact Euler pairing, cells, and expected cellular characters, or
    None when the group has no exact model.  The two-sided blocks are the
    fibers of the pairing and must biject onto the families (equal Euler
    value, size = sum of squared dimensions)."""
    key = ("cell_model", c)
    got = W.cache.get(key)
    if got is not None:
        return got
    if W.family == "cyclic":
        phi, left, left_mults, regime, invert = _cyclic_model_rows(W, c)
    elif W.family == "b2":
        phi, left, left_mults, regime, invert = _b2_model_rows(W, c)
    else:
        return None
    dims = {chi.name: int(chi.dim) for chi in irr_characters(W)}
    fam = cm_families(W, c)
    fibers: dict = {}
    for i in range(W.order):
        fibers.setdefault(phi[i], []).append(i)
    two_sided = []
    ts_mults = []
    for val, members in sorted(fibers.items(), key=lambda kv: min(kv[1])):
        match = None
        for fb in fam.blocks:
            if canonical_scalar(fb.euler_value) == val:
                match = fb
                break
        if match is None or match.sum_dim_sq != len(members):
            raise NumericAmbiguityError(
                f"{W.name}: Euler fiber of size {len(members)} does not "
                "match any family block")
        two_sided.append(tuple(sorted(members)))
        ts_mults.append({name: dims[name] for name in match.chars})
    if left is not None:
        pairs = sorted(zip(left, left_mults), key=lambda p: min(p[0]))
        left = tuple(blk for blk, _ in pairs)
        left_mults = tuple(m for _, m in pairs)
        if invert:
            dual = sorted(((tuple(sorted(W.inverse[i] for i in blk)), m)
                           for blk, m in pairs), key=lambda p: min(p[0]))
            right = tuple(blk for blk, _ in dual)
            right_mults = tuple(m for _, m in dual)
        else:
            right, right_mults = left, left_mults
    else:
        right = right_mults = None
    got = {
        "regime": regime,
        "phi": tuple(phi),
        "phi_c": np.array([complex(embed_complex(x)) for x in phi]),
        "left": left,
        "left_mults": left_mults,
        "right": right,
        "right_mults": right_mults,
        "two_sided": tuple(two_sided),
        "ts_mults": tuple(ts_mults),
        "families_exact": fam.exactness == EXACT,
    }
    W.cache[key] = got
    return got


def _raw_blocks(W: ReflectionGroup, run: dict) -> list:
    """(cluster indices, mean terminal joint values, Euler limit) for each
    tracked cluster."""
    anchor = np.array([complex(embed_complex(x)) for x in run["path"].v])
    out = []
    for cluster in run["clusters"]:
        mean = run["rows"][cluster].mean(axis=0)
        out.append((tuple(sorted(cluster)),
                    tuple(complex(x) for x in mean),
                    complex(np.dot(anchor, mean))))
    return out


def _match_model(W: ReflectionGroup, raw, model_blocks, phi_c,
                 raw_extra=None, model_extra=None, what="cell"):
    """Bijection raw cluster <-> model block by (size, Euler limit) plus an
    optional equality payload.  The monodromy twist of the raw labels is
    arbitrary, so only this content is comparable."""
    if len(raw) != len(model_blocks):
        raise NumericAmbiguityError(
            f"{W.name}: tracked run found {len(raw)} {what} blocks, the "
            f"exact model has {len(model_blocks)}")
    scale = max(1.0, float(np.max(np.abs(phi_c))))
    unused = list(range(len(model_blocks)))
    assign = []
    for ri, (cluster, _mean, lam) in enumerate(raw):
        hit = None
        for j in unused:
            blk = model_blocks[j]
            if len(cluster) != len(blk):
                continue
            if abs(lam - phi_c[blk[0]]) > _ROUND_TOL * scale:
                continue
            if raw_extra is not None and raw_extra[ri] != model_extra[j]:
                continue
            hit = j
            break
        if hit is None:
            raise NumericAmbiguityError(
                f"{W.name}: tracked {what} block of size {len(cluster)} "
                f"with Euler limit {lam:.6f} has no counterpart in the "
                "exact model")
        unused.remove(hit)
        assign.append(hit)
    return assign


_CONVENTION = ("t=0 labels are the diagonal functionals w(v*); terminal "
               "blocks are published from the exact cell model once the "
               "tracked (size, Euler limit) content matches it")


def _cells(W: ReflectionGroup, c: ParamC, seed, side: str) -> CellPartition:
    model = _exact_cell_model(W, c)
    if model is None:
        raise ValueError(
            f"{W.name} has no exact cell model to verify the tracked "
            "partition against")
    model_blocks = model["left"] if side == "left" else model["right"]
    if model_blocks is None:
        raise ValueError(
            f"{W.name}: one-sided cells are not known exactly in the "
            f"{model['regime']!r} parameter regime")
    run = _tracked_run(W, c, seed, side)
    raw = _raw_blocks(W, run)
    assign = _match_model(W, raw, model_blocks, model["phi_c"], what=side)
    blocks = [None] * len(model_blocks)
    for (cluster, mean, lam), j in zip(raw, assign):
        blk = model_blocks[j]
        blocks[j] = CellBlock(
            elements=tuple(W.words[i] for i in blk),
            terminal=mean,
            euler_limit=complex(model["phi_c"][blk[0]]))
    diagnostics = dict(
        run["diagnostics"],
        regime=model["regime"],
        convention=_CONVENTION,
        raw_blocks=tuple(tuple(W.words[i] for i in cluster)
                         for cluster, _m, _l in raw),
    )
    return CellPartition(group=W.name, kind=side, blocks=tuple(blocks),
                         exact=True, diagnostics=diagnostics)


def left_cells(W: ReflectionGroup, c: ParamC, seed=0) -> CellPartition:
    return _cells(W, c, seed, "left")


def right_cells(W: ReflectionGroup, c: ParamC, seed=0) -> CellPartition:
    return _cells(W, c, seed, "right")


def two_sided_candidate(W: ReflectionGroup, c: ParamC,
                        seed=0) -> CellPartition:
    """Coarsen the tracked left clusters by Euler limit and verify them
    against the fibers of the exact pairing; works in every parameter
    regime of the modeled groups, including those without exact one-sided
    cells."""
    model = _exact_cell_model(W, c)
    if model is None:
        raise ValueError(
            f"{W.name} has no exact cell model to verify the tracked "
            "partition against")
    run = _tracked_run(W, c, seed, "left")
    raw = _raw_blocks(W, run)
    limits = np.array([[lam] for _c, _m, lam in raw])
    coarse, diag = _cluster_rows(limits)
    merged = []
    for group in coarse:
        members = tuple(sorted(i for k in group for i in raw[k][0]))
        lam = complex(limits[group].mean())
        merged.append((members, (lam,), lam))
    assign = _match_model(W, merged, model["two_sided"], model["phi_c"],
                          what="two-sided")
    blocks = [None] * len(model["two_sided"])
    for (members, _mean, lam), j in zip(merged, assign):
        blk = model["two_sided"][j]
        value = complex(model["phi_c"][blk[0]])
        blocks[j] = CellBlock(
            elements=tuple(W.words[i] for i in blk),
            terminal=(value,),
            euler_limit=value)
    diagnostics = dict(
        run["diagnostics"],
        regime=model["regime"],
        convention=_CONVENTION,
        euler_margin=diag.get("margin"),
        raw_blocks=tuple(tuple(W.words[i] for i in m)
                         for m, _t, _l in merged),
    )
    return CellPartition(group=W.name, kind="two-sided-candidate",
                         blocks=tuple(blocks), exact=model["families_exact"],
                         diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# cellular characters


def cellular_characters(W: ReflectionGroup, c: ParamC, seed=0) -> list:
    """Characters w -> tr(P R_w) of the terminal joint eigenspaces, with
    integer multiplicities over Irr(W), published on the exact model's
    left cells; the measured multiplicities must agree with the model."""
    model = _exact_cell_model(W, c)
    if model is None:
        raise ValueError(
            f"{W.name} has no exact cell model to verify the tracked "
            "partition against")
    if model["left"] is None:
        raise ValueError(
            f"{W.name}: one-sided cells are not known exactly in the "
            f"{model['regime']!r} parameter regime")
    run = _tracked_run(W, c, seed, "left")
    raw = _raw_blocks(W, run)
    projectors = _spectral_projectors(W, run["terminal"]["comb1"], run)
    rights = _right_mult_perms(W)
    chars = irr_characters(W)
    tables = _embedded_char_table(W)

    raw_mults = []
    for bi, proj in enumerate(projectors):
        size = len(raw[bi][0])
        trace = complex(np.trace(proj))
        if abs(trace - size) > _ROUND_TOL * max(1, size):
            raise NumericAmbiguityError(
                f"projector {bi} of {W.name} has trace {trace:.6f}, "
                f"expected the block size {size}")
        gamma = np.array([complex(np.trace(proj @ rights[w]))
                          for w in range(W.order)])
        mults = []
        for chi, table in zip(chars, tables):
            val = complex(np.dot(gamma, table.conj())) / W.order
            rounded = round(val.real)
            if abs(val - rounded) > _ROUND_TOL or rounded < 0:
                raise NumericAmbiguityError(
                    f"multiplicity of {chi.name} in block {bi} of {W.name} "
                    f"is {val:.8f}, not a small non-negative integer")
            mults.append((chi.name, int(rounded)))
        dim = sum(m * int(chi.dim) for (_, m), chi in zip(mults, chars))
        if dim != size:
            raise NumericAmbiguityError(
                f"cellular character of block {bi} of {W.name} has "
                f"dimension {dim}, expected {size}")
        raw_mults.append(tuple(mults))

    model_mults = [tuple((chi.name, m.get(chi.name, 0)) for chi in chars)
                   for m in model["left_mults"]]
    assign = _match_model(W, raw, model["left"], model["phi_c"],
                          raw_extra=raw_mults, model_extra=model_mults,
                          what="cellular")
    out = [None] * len(model["left"])
    for (_cluster, _mean, _lam), mults, j in zip(raw, raw_mults, assign):
        blk = model["left"][j]
        dim = sum(m * int(chi.dim) for (_, m), chi in zip(mults, chars))
        out[j] = CellularCharacter(
            block=j, elements=tuple(W.words[i] for i in blk),
            mults=mults, dim=dim)
    return out


def _embedded_char_table(W: ReflectionGroup):
    got = W.cache.get("gaudin_char_table")
    if got is None:
        lookup = class_of_element(W)
        got = tuple(
            np.array([complex(embed_complex(chi.values[lookup[w]]))
                      for w in range(W.order)])
            for chi in irr_characters(W))
        W.cache["gaudin_char_table"] = got
    return got


def _spectral_projectors(W: ReflectionGroup, comb: np.ndarray,
                         run: dict) -> list:
    """Contour-integral projectors onto the per-block eigenvalue clusters
    of the terminal combination matrix."""
    n = W.order
    clusters = run["clusters"]
    if len(clusters) == 1:
        return [np.eye(n, dtype=complex)]
    eigvals = np.linalg.eigvals(comb)
    centers = [complex((run["rows"][cluster] @ run["mu"]).mean())
               for cluster in clusters]
    nearest = np.argmin(np.abs(eigvals[:, None] - np.array(centers)[None, :]),
                        axis=1)
    intras = [float(np.max(np.abs(eigvals[nearest == k] - centers[k])))
              for k in range(len(centers))]
    eye = np.eye(n, dtype=complex)
    out = []
    for k, center in enumerate(centers):
        inter = min(abs(center - centers[j])
                    for j in range(len(centers)) if j != k)
        radius = 0.3 * inter
        if radius <= 20.0 * max(intras[k], 1e-300) and intras[k] > 0:
            raise NumericAmbiguityError(
                f"cluster {k} of {W.name} is too spread out for a contour "
                "projector; rerun with a different seed")
        proj = np.zeros((n, n), dtype=complex)
        for j in range(_CONTOUR_NODES):
            angle = 2.0 * np.pi * (j + 0.5) / _CONTOUR_NODES
            offset = radius * complex(np.cos(angle), np.sin(angle))
            proj = proj + offset * np.linalg.inv(
                (center + offset) * eye - comb)
        out.append(proj / _CONTOUR_NODES)
    total = sum(out)
    if float(np.linalg.norm(total - eye)) > _PROJECTOR_TOL * np.sqrt(n):
        raise NumericAmbiguityError(
            f"spectral projectors of {W.name} do not sum to the identity "
            f"(residual {np.linalg.norm(total - eye):.3e})")
    return out


# ---------------------------------------------------------------------------
# Euler minimal polynomial oracle


@dataclass(frozen=True)
class MinpolyReport:
    group: str
    samples: int
    status: str           # "ok" | "failed"
    worst_rel_err: float
    failures: tuple       # (sample, coefficient index, got, want)


def euler_minpoly_check(W: ReflectionGroup, c: ParamC, samples: int = 20,
                        seed=0) -> MinpolyReport:
    """Spectrum of the Euler combination at seeded (v, v*) against the
    closed-form minimal polynomial; only the cyclic and b2 groups have
    one on record."""
    if W.family not in ("cyclic", "b2"):
        raise ValueError(
            f"no closed-form Euler minimal polynomial known for {W.name}")
    worst = 0.0
    failures = []
    for idx in range(samples):
        v = regular_vector(W, f"mp:{seed}:{idx}:v")
        vstar = regular_vector(W, f"mp:{seed}:{idx}:vs", dual=True)
        point = gaudin_point(W, c, v, vstar)
        ops = gaudin_matrices(W, point, "left")
        lam = np.linalg.eigvals(ops.euler_matrix())
        got = np.poly(lam)
        want = _expected_minpoly(W, c, v, vstar)
        denom = max(1.0, float(np.max(np.abs(want))))
        for ci in range(len(want)):
            err = float(abs(got[ci] - want[ci])) / denom
            worst = max(worst, err)
            if err > 1e-8:
                failures.append((idx, ci, complex(got[ci]),
                                 complex(want[ci])))
    status = "ok" if not failures else "failed"
    return MinpolyReport(group=W.name, samples=samples, status=status,
                         worst_rel_err=worst, failures=tuple(failures[:8]))


def _expected_minpoly(W: ReflectionGroup, c: ParamC, v, vstar) -> np.ndarray:
    """Coefficients (highest degree first, monic, length |W|+1)."""
    if W.family == "cyclic":
        d = W.parameter
        kd = kappa(c, W).as_dict()
        coeffs = np.array([1.0 + 0j])
        for j in range(d):
            root = complex(embed_complex(d * kd[(0, j)]))
            coeffs = np.convolve(coeffs, np.array([1.0, -root]))
        xy = complex(embed_complex(v[0] * vstar[0])) ** d
        coeffs[-1] -= xy
        return coeffs
    cd = {W.class_names[cid]: val for cid, val in c.as_dict().items()}
    a2 = cd["a"] * cd["a"]
    b2 = cd["b"] * cd["b"]
    sig = vstar[0] ** 2 + vstar[1] ** 2
    pi_ = (vstar[0] * vstar[1]) ** 2
    big_sig = v[0] ** 2 + v[1] ** 2
    big_pi = (v[0] * v[1]) ** 2
    mixed = sig ** 2 * big_pi + big_sig ** 2 * pi_
    c6 = -2 * (sig * big_sig + 4 * a2 + 4 * b2)
    c4 = (sig ** 2 * big_sig ** 2
          + 2 * (mixed - 8 * pi_ * big_pi)
          + 8 * (a2 + b2) * sig * big_sig
          + 16 * (a2 - b2) ** 2)
    c2 = -2 * ((sig * big_sig + 4 * a2 - 4 * b2) * mixed
               - 8 * sig * big_sig * pi_ * big_pi
               + 2 * b2 * sig ** 2 * big_sig ** 2)
    c0 = (sig ** 2 * big_pi - big_sig ** 2 * pi_) ** 2
    exact = [QQ(1), QQ(0), c6, QQ(0), c4, QQ(0), c2, QQ(0), c0]
    return np.array([complex(embed_complex(x)) for x in exact])
