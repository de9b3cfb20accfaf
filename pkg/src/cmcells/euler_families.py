"""Partitions of Irr(W) by central characters at the degenerate parameter.

The scalar C_E by which the Euler element acts on the standard module of E
is constant on each block of the family partition, so its fibers are a
computable coarsening of the blocks for every group.  For the cyclic groups
the fibers of i -> k_i (block of det^-i) are the exact partition, and for
the B2 group the exact partition is cut out by a quadruple of central
scalars whose closed forms are hard-coded below; those two cases are
flagged ``exact``, everything else is flagged ``euler-coarse`` and never
silently presented as the true partition.

``essential_hyperplanes`` returns, for each pair of characters whose Euler
scalars differ as linear forms in c, that difference form; the family
partition can only change when c crosses one of these hyperplanes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic_numerics import QQ, canonical_scalar
from .reflection_groups import ParamC, ReflectionGroup, kappa
from .characters import b_invariant, class_of_element, irr_characters
from .dunkl_verma import c_from_trace

__all__ = [
    "EXACT",
    "EULER_COARSE",
    "FamilyBlock",
    "FamilyPartition",
    "EssentialHyperplane",
    "euler_partition",
    "cm_families",
    "essential_hyperplanes",
]

EXACT = "exact"
EULER_COARSE = "euler-coarse"


@dataclass(frozen=True)
class FamilyBlock:
    chars: tuple          # character names, in Irr(W) table order
    euler_value: object   # shared scalar C_E
    sum_dim_sq: int
    min_b_char: str


@dataclass(frozen=True)
class FamilyPartition:
    group: str
    blocks: tuple         # FamilyBlock, ordered by first member
    exactness: str        # "exact" or "euler-coarse"

    def sets(self) -> frozenset:
        return frozenset(frozenset(b.chars) for b in self.blocks)

    def block_of(self, char_name: str) -> FamilyBlock:
        for b in self.blocks:
            if char_name in b.chars:
                return b
        raise KeyError(f"{char_name} is not a character of {self.group}")

    def refines_or_equals(self, other: "FamilyPartition") -> bool:
        coarse = other.sets()
        return all(any(set(b.chars) <= s for s in coarse)
                   for b in self.blocks)


def _assemble(W: ReflectionGroup, groups: dict, scalars: dict,
              exactness: str) -> FamilyPartition:
    """groups: fiber key -> list of characters; scalars: name -> C_E."""
    order = {chi.name: i for i, chi in enumerate(irr_characters(W))}
    blocks = []
    for members in groups.values():
        names = tuple(sorted((chi.name for chi in members),
                             key=order.__getitem__))
        bvals = {chi.name: b_invariant(W, chi) for chi in members}
        least = min(bvals.values())
        minimal = [n for n, v in bvals.items() if v == least]
        if len(minimal) != 1:
            raise ValueError(
                f"block {names} of {W.name} has no unique character of "
                f"minimal b-invariant (tied: {sorted(minimal)})")
        blocks.append(FamilyBlock(
            chars=names,
            euler_value=scalars[names[0]],
            sum_dim_sq=sum(int(chi.dim) ** 2 for chi in members),
            min_b_char=minimal[0]))
    blocks.sort(key=lambda b: order[b.chars[0]])
    return FamilyPartition(W.name, tuple(blocks), exactness)


def euler_partition(W: ReflectionGroup, c: ParamC) -> FamilyPartition:
    """Fibers of E -> C_E(c), compared exactly; always flagged coarse."""
    scalars = {}
    groups: dict = {}
    for chi in irr_characters(W):
        value = canonical_scalar(c_from_trace(W, chi, c))
        scalars[chi.name] = value
        groups.setdefault(value, []).append(chi)
    return _assemble(W, groups, scalars, EULER_COARSE)


def cm_families(W: ReflectionGroup, c: ParamC) -> FamilyPartition:
    """The family partition: exact for cyclic and b2 and at c = 0 (one
    block), else the Euler coarsening with its flag."""
    if W.family == "cyclic":
        return _cyclic_families(W, c)
    if W.family == "b2":
        return _b2_families(W, c)
    part = euler_partition(W, c)
    if all(value == 0 for _cid, value in c.values):
        return FamilyPartition(part.group, part.blocks, EXACT)
    return part


def _cyclic_families(W: ReflectionGroup, c: ParamC) -> FamilyPartition:
    # det^-i and det^-j share a block iff k_i = k_j; the Euler scalar of
    # det^-i is d*k_i, so the fibers agree with the Euler fibers
    d = W.parameter
    kd = kappa(c, W).as_dict()
    chars = irr_characters(W)
    scalars = {}
    groups: dict = {}
    for r, chi in enumerate(chars):
        key = canonical_scalar(kd[(0, (-r) % d)])
        scalars[chi.name] = canonical_scalar(d * key)
        groups.setdefault(key, []).append(chi)
    part = _assemble(W, groups, scalars, EXACT)
    coarse = euler_partition(W, c)
    if part.sets() != coarse.sets():
        raise AssertionError(
            f"cyclic k-fibers disagree with the Euler fibers on {W.name}")
    return part


# Closed forms of the four central scalars cutting out the b2 blocks,
# per character, as functions of the class parameters (a, b); the first
# coordinate is the Euler scalar.
def _b2_quadruple(a, b) -> dict:
    return {
        "1":     (-2 * (b + a), QQ(0), QQ(0), 2 * b * (b + a)),
        "eps_s": (-2 * (b - a), QQ(0), QQ(0), 2 * b * (b - a)),
        "eps_t": (2 * (b - a), QQ(0), QQ(0), 2 * b * (b - a)),
        "eps":   (2 * (b + a), QQ(0), QQ(0), 2 * b * (b + a)),
        "chi":   (QQ(0), QQ(0), QQ(0), QQ(0)),
    }


def _b2_expected_sets(a, b) -> frozenset:
    if a == 0 and b == 0:
        sets = [{"1", "eps_s", "eps_t", "eps", "chi"}]
    elif a == 0:
        sets = [{"1", "eps_s"}, {"eps_t", "eps"}, {"chi"}]
    elif b == 0:
        sets = [{"1", "eps_t"}, {"eps_s", "eps"}, {"chi"}]
    elif a == b:
        sets = [{"1"}, {"eps"}, {"eps_s", "eps_t", "chi"}]
    elif a == -b:
        sets = [{"eps_s"}, {"eps_t"}, {"1", "eps", "chi"}]
    else:
        sets = [{"1"}, {"eps_s"}, {"eps_t"}, {"eps"}, {"chi"}]
    return frozenset(frozenset(s) for s in sets)


def _b2_families(W: ReflectionGroup, c: ParamC) -> FamilyPartition:
    cd = c.as_dict()
    named = {W.class_names[cid]: val for cid, val in cd.items()}
    quad = _b2_quadruple(named["a"], named["b"])
    chars = irr_characters(W)
    scalars = {}
    groups: dict = {}
    for chi in chars:
        key = tuple(canonical_scalar(v) for v in quad[chi.name])
        scalars[chi.name] = key[0]
        want = canonical_scalar(c_from_trace(W, chi, c))
        if key[0] != want:
            raise AssertionError(
                f"hard-coded Euler scalar for {chi.name} disagrees with "
                f"the trace form: {key[0]} vs {want}")
        groups.setdefault(key, []).append(chi)
    part = _assemble(W, groups, scalars, EXACT)
    if part.sets() != _b2_expected_sets(named["a"], named["b"]):
        raise AssertionError(
            "b2 central-character fibers disagree with the known family "
            f"table at a={named['a']}, b={named['b']}; refusing to guess")
    return part


@dataclass(frozen=True)
class EssentialHyperplane:
    """An unordered character pair and the linear form C_E - C_F on the
    class parameters; the pair can only merge where the form vanishes."""

    chars: tuple          # (name_E, name_F)
    coeffs: tuple         # ((class_id, scalar), ...) sorted by class

    def evaluate(self, c: ParamC):
        cd = c.as_dict()
        total = QQ(0)
        for cid, coeff in self.coeffs:
            total = total + coeff * cd[cid]
        return canonical_scalar(total)


def _euler_form(W: ReflectionGroup, chi) -> dict:
    lookup = class_of_element(W)
    form: dict = {cid: QQ(0) for cid in W.classes}
    for r in W.reflections:
        form[r.class_id] = canonical_scalar(
            form[r.class_id]
            + r.det * chi.values[lookup[r.element]] / QQ(int(chi.dim)))
    return form


def essential_hyperplanes(W: ReflectionGroup) -> list:
    """All unordered pairs of characters whose Euler scalars differ as
    linear forms in c, each with that difference form."""
    chars = irr_characters(W)
    forms = [_euler_form(W, chi) for chi in chars]
    out = []
    for i in range(len(chars)):
        for j in range(i + 1, len(chars)):
            diff = {cid: canonical_scalar(forms[i][cid] - forms[j][cid])
                    for cid in W.classes}
            if all(v == 0 for v in diff.values()):
                continue
            out.append(EssentialHyperplane(
                chars=(chars[i].name, chars[j].name),
                coeffs=tuple(sorted(diff.items()))))
    return out
