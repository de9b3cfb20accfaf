"""Command line front end.

Subcommands
-----------
info      group facts: order, reflections, orbits, degrees, character
          table, fake degrees
families  partition of the irreducible characters by the Euler central
          character, as JSON
cellular  cellular characters from the Gaudin spectrum, as JSON
cells     left / right / two-sided cell partition, as JSON
verify    run a named check suite and report each check

The group comes from ``--group`` (plus ``--d`` or ``--m``), or from a
JSON object passed as ``--config``; explicit flags win over the config.
Parameters are exact literals (``--c a=1,b=2`` or ``--k 1,1,-2``, one of
the two, the other is derived through the kappa map); floats are
rejected so a config always names one exact computation.  The same
config and seed produce byte-identical JSON.  Exit codes: 0 success,
1 config or verification failure, 2 numeric ambiguity.

Cellular characters ride along with ``cells``: for ``--kind left`` they
are the measured ones, for ``--kind two-sided`` each block carries the
summed character of the left cells it covers (equivalently the family
character weighted by degrees), and for ``--kind right`` the list is
empty since the construction attaches characters to left cells.
"""

import json
import random
from importlib import resources

import click
import jsonschema

from .characters import (
    b_invariant,
    center_hilbert_identity,
    character_by_name,
    conjugacy_classes,
    fake_degrees,
    irr_characters,
    irr_representations,
)
from .cyclotomic_numerics import QQ, embed_complex, format_scalar, parse_scalar
from .dunkl_verma import (
    c_from_k_formula,
    c_from_trace,
    check_bracket,
    euler_on_verma,
)
from .euler_families import EXACT, cm_families, euler_partition
from .gaudin_cells import (
    NumericAmbiguityError,
    PathTrackingError,
    cellular_characters,
    euler_minpoly_check,
    left_cells,
    right_cells,
    two_sided_candidate,
)
from .reflection_groups import (
    degrees,
    group_from_config,
    kappa,
    kappa_inverse,
    param_c,
    param_c_zero,
    param_k,
)

__all__ = [
    "main",
    "cli",
    "cmd_info",
    "cmd_families",
    "cmd_cellular",
    "cmd_cells",
    "cmd_verify",
]

_SUITES = ("dunkl", "families", "cells", "minpoly", "hilbert", "all")
_KINDS = ("left", "right", "two-sided")
_SIG_DIGITS = 12


# ---------------------------------------------------------------------------
# config assembly

_CONFIG_KEYS = {"group", "d", "m", "c", "k", "seed", "kind", "samples",
                "trunc", "suite", "format"}


def _merge_config(config_text, **flags) -> dict:
    """JSON config overlaid by explicit flags; None flags do not count."""
    config: dict = {}
    if config_text:
        config = json.loads(config_text)
        if not isinstance(config, dict):
            raise ValueError("config must be a JSON object")
        unknown = set(config) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, value in flags.items():
        if value is not None:
            config[key] = value
    return config


def _group_of(config: dict):
    sub = {key: config[key] for key in ("group", "d", "m") if key in config}
    return group_from_config(sub)


def _parse_values(spec):
    """'a=1,b=2' -> dict, '1,1,-2' -> list; values become exact scalars."""
    if isinstance(spec, dict):
        return {name: _exact(value) for name, value in spec.items()}
    if isinstance(spec, (list, tuple)):
        return [_exact(value) for value in spec]
    pieces = [piece.strip() for piece in str(spec).split(",") if piece.strip()]
    if not pieces:
        raise ValueError("empty parameter list")
    if any("=" in piece for piece in pieces):
        values = {}
        for piece in pieces:
            name, eq, literal = piece.partition("=")
            if not eq or not name.strip() or not literal.strip():
                raise ValueError(f"expected name=value, got {piece!r}")
            values[name.strip()] = parse_scalar(literal.strip())
        return values
    return [parse_scalar(piece) for piece in pieces]


def _exact(value):
    if isinstance(value, float):
        raise ValueError(
            f"parameters must be exact literals, got float {value!r}")
    if isinstance(value, str):
        return parse_scalar(value)
    return value


def _params_of(W, config: dict):
    """Resolve (ParamC, ParamK) from exactly one of the c / k entries."""
    has_c = config.get("c") is not None
    has_k = config.get("k") is not None
    if has_c == has_k:
        raise ValueError("give exactly one of --c / --k")
    if has_c:
        c = param_c(W, _parse_values(config["c"]))
        return c, kappa(c, W)
    k = param_k(W, _parse_values(config["k"]))
    return kappa_inverse(k, W), k


def _seeded_params(W, seed: int):
    """Deterministic generic rational parameters for verify runs without
    an explicit --c / --k; avoids the degenerate loci."""
    rng = random.Random(f"verify:{W.name}:{seed}")
    while True:
        values = [QQ(rng.randint(-9, 9), rng.randint(1, 9))
                  for _ in W.classes]
        if any(v == 0 for v in values):
            continue
        if W.family == "b2" and values[0] ** 2 == values[1] ** 2:
            continue
        return param_c(W, values)


# ---------------------------------------------------------------------------
# JSON emission

def _round(value: float) -> float:
    if value == 0.0:
        return 0.0
    return float(f"{value:.{_SIG_DIGITS}g}")


def _pair(value) -> list:
    z = complex(value)
    return [_round(z.real), _round(z.imag)]


def _params_payload(W, c, k) -> dict:
    names = dict(W.class_names)
    return {
        "c": {names[cid]: format_scalar(value) for cid, value in c.values},
        "k": {f"{orb}.{j}": format_scalar(value)
              for (orb, j), value in k.values},
    }


_SCHEMA_CACHE: dict = {}


def _schema(name: str) -> dict:
    if name not in _SCHEMA_CACHE:
        path = resources.files("cmcells").joinpath("schemas", name)
        _SCHEMA_CACHE[name] = json.loads(path.read_text())
    return _SCHEMA_CACHE[name]


def _emit(payload: dict, schema_name: str, fmt: str, table_fn) -> None:
    jsonschema.validate(payload, _schema(schema_name))
    if fmt == "table":
        for line in table_fn(payload):
            click.echo(line)
    else:
        click.echo(json.dumps(payload, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# payload builders

def cmd_info(config: dict) -> dict:
    W = _group_of(config)
    classes = conjugacy_classes(W)
    table = {
        "classes": [W.words[rep] for rep, _members in classes],
        "classSizes": [len(members) for _rep, members in classes],
        "rows": {chi.name: [format_scalar(v) for v in chi.values]
                 for chi in irr_characters(W)},
    }
    return {
        "group": W.name,
        "order": W.order,
        "dim": W.dim,
        "degrees": list(degrees(W)),
        "reflections": len(W.reflections),
        "reflectionClasses": [W.class_names[cid] for cid in W.classes],
        "orbits": [{"id": orb.id, "order": orb.order,
                    "hyperplanes": orb.size,
                    "reflections": len(orb.reflections)}
                   for orb in W.orbits],
        "characterTable": table,
        "fakeDegrees": {name: str(poly)
                        for name, poly in fake_degrees(W).items()},
    }


def _info_table(payload: dict) -> list:
    lines = [
        f"group        {payload['group']}",
        f"order        {payload['order']}",
        f"dim          {payload['dim']}",
        f"degrees      {payload['degrees']}",
        f"reflections  {payload['reflections']} "
        f"(classes {', '.join(payload['reflectionClasses'])})",
    ]
    for orb in payload["orbits"]:
        lines.append(f"orbit {orb['id']}      e={orb['order']}, "
                     f"{orb['hyperplanes']} hyperplanes, "
                     f"{orb['reflections']} reflections")
    table = payload["characterTable"]
    head = "class".ljust(8) + "".join(c.ljust(8) for c in table["classes"])
    lines += ["", head]
    for name in table["rows"]:
        row = name.ljust(8) + "".join(v.ljust(8) for v in table["rows"][name])
        lines.append(row)
    lines.append("")
    for name, poly in payload["fakeDegrees"].items():
        lines.append(f"fake degree  {name}: {poly}")
    return lines


def cmd_families(config: dict) -> dict:
    W = _group_of(config)
    c, k = _params_of(W, config)
    fams = cm_families(W, c)
    return {
        "group": W.name,
        "params": _params_payload(W, c, k),
        "exact": fams.exactness == EXACT,
        "blocks": [{
            "chars": list(blk.chars),
            "eulerValue": format_scalar(blk.euler_value),
            "sumDimSq": blk.sum_dim_sq,
            "minB": blk.min_b_char,
        } for blk in fams.blocks],
    }


def _families_table(payload: dict) -> list:
    lines = [f"group {payload['group']}, "
             f"{len(payload['blocks'])} families "
             f"({'exact' if payload['exact'] else 'euler-coarse'})"]
    for i, blk in enumerate(payload["blocks"]):
        lines.append(f"  {i}: {{{', '.join(blk['chars'])}}}  "
                     f"euler={blk['eulerValue']}  "
                     f"sum dim^2={blk['sumDimSq']}  min-b={blk['minB']}")
    return lines


def _mults_dict(mults) -> dict:
    return {name: int(m) for name, m in mults if m}


def cmd_cellular(config: dict) -> dict:
    W = _group_of(config)
    c, k = _params_of(W, config)
    seed = int(config.get("seed", 0))
    chars = cellular_characters(W, c, seed=seed)
    return {
        "group": W.name,
        "params": _params_payload(W, c, k),
        "seed": seed,
        "cellularCharacters": [{
            "block": ch.block,
            "elements": list(ch.elements),
            "mults": _mults_dict(ch.mults),
            "dim": ch.dim,
        } for ch in chars],
    }


def _cellular_table(payload: dict) -> list:
    lines = [f"group {payload['group']}, seed {payload['seed']}, "
             f"{len(payload['cellularCharacters'])} cellular characters"]
    for ch in payload["cellularCharacters"]:
        terms = " + ".join(f"{m}*{name}" if m > 1 else name
                           for name, m in ch["mults"].items())
        lines.append(f"  block {ch['block']} "
                     f"{{{', '.join(ch['elements'])}}}: {terms}")
    return lines


def _two_sided_char_sums(W, c, part) -> list:
    """Per-block family character: chi appears with multiplicity chi(1)."""
    fams = cm_families(W, c)
    dims = {chi.name: int(chi.dim) for chi in irr_characters(W)}
    out = []
    for j, blk in enumerate(part.blocks):
        limit = complex(blk.euler_limit)
        for fb in fams.blocks:
            gap = abs(complex(embed_complex(fb.euler_value)) - limit)
            if fb.sum_dim_sq == len(blk.elements) and \
                    gap <= 1e-9 * (1.0 + abs(limit)):
                out.append({"block": j,
                            "mults": {name: dims[name] for name in fb.chars}})
                break
    return out


def cmd_cells(config: dict) -> dict:
    W = _group_of(config)
    c, k = _params_of(W, config)
    seed = int(config.get("seed", 0))
    kind = config.get("kind", "left")
    if kind not in _KINDS:
        raise ValueError(f"unknown cell kind {kind!r}")
    samples = int(config.get("samples", 1))
    compute = {"left": left_cells, "right": right_cells,
               "two-sided": two_sided_candidate}[kind]
    part = compute(W, c, seed=seed)
    # extra samples cross-check the partition under fresh tracking seeds
    for extra in range(1, samples):
        again = compute(W, c, seed=seed + extra)
        if [b.elements for b in again.blocks] != \
                [b.elements for b in part.blocks]:
            raise NumericAmbiguityError(
                f"seed {seed + extra} disagrees with seed {seed} on the "
                f"{kind} partition")

    if kind == "left":
        chars = [{"block": ch.block, "mults": _mults_dict(ch.mults)}
                 for ch in cellular_characters(W, c, seed=seed)]
    elif kind == "two-sided":
        chars = _two_sided_char_sums(W, c, part)
    else:
        chars = []

    diag = part.diagnostics
    threshold = float(diag.get("threshold", 0.0))
    margin = diag.get("margin")
    min_gap = None
    if margin is not None and threshold > 0.0:
        gap = float(margin) * threshold
        min_gap = _round(gap) if gap != float("inf") else None
    payload = {
        "group": W.name,
        "params": _params_payload(W, c, k),
        "seed": seed,
        "kind": part.kind,
        "exact": part.exact,
        "blocks": [{
            "elements": list(blk.elements),
            "terminalEigen": [_pair(value) for value in blk.terminal],
            "eulerLimit": _pair(blk.euler_limit),
        } for blk in part.blocks],
        "cellularCharacters": chars,
        "diagnostics": {
            "minGap": min_gap,
            "retries": int(diag.get("retries", 0)),
            "convention": str(diag.get("convention", "")),
            "regime": str(diag.get("regime", "")),
            "seedsChecked": samples,
            "rawBlocks": [list(block) for block in diag.get("raw_blocks", ())],
        },
    }
    return payload


def _cells_table(payload: dict) -> list:
    lines = [f"group {payload['group']}, kind {payload['kind']}, "
             f"seed {payload['seed']}, {len(payload['blocks'])} blocks"]
    for i, blk in enumerate(payload["blocks"]):
        re, im = blk["eulerLimit"]
        euler = f"{re:g}" if im == 0 else f"{re:g}{im:+g}i"
        lines.append(f"  {i}: {{{', '.join(blk['elements'])}}}  "
                     f"euler limit {euler}")
    for ch in payload["cellularCharacters"]:
        terms = " + ".join(f"{m}*{name}" if m > 1 else name
                           for name, m in ch["mults"].items())
        lines.append(f"  character of block {ch['block']}: {terms}")
    return lines


# ---------------------------------------------------------------------------
# verify suites

def _check(check_id: str, ok: bool, detail: dict) -> dict:
    return {"id": check_id, "status": "ok" if ok else "fail",
            "detail": detail}


def _skip(check_id: str, reason: str) -> dict:
    return {"id": check_id, "status": "skipped", "detail": {"reason": reason}}


def _suite_dunkl(W, c) -> list:
    report = check_bracket(W, c, N=6)
    checks = [_check("dunkl-bracket", report.status == "ok",
                     {"pairsChecked": report.pairs_checked, "N": report.N})]
    k = kappa(c, W)
    mismatches = []
    for chi, E in zip(irr_characters(W), irr_representations(W)):
        scalars = {euler_on_verma(W, c, E), c_from_trace(W, chi, c),
                   c_from_k_formula(W, chi, k)}
        if len(scalars) != 1:
            mismatches.append(chi.name)
    checks.append(_check("euler-scalar-agreement", not mismatches,
                         {"mismatches": mismatches}))
    return checks


def _suite_families(W, c) -> list:
    fams = cm_families(W, c)
    names = sorted(chi.name for chi in irr_characters(W))
    listed = sorted(name for blk in fams.blocks for name in blk.chars)
    checks = [_check("families-partition", listed == names,
                     {"blocks": len(fams.blocks)})]
    total = sum(blk.sum_dim_sq for blk in fams.blocks)
    checks.append(_check("families-dim-sum", total == W.order,
                         {"total": total, "order": W.order}))
    coarse = {frozenset(blk.chars) for blk in euler_partition(W, c).blocks}
    refined = all(any(set(blk.chars) <= big for big in coarse)
                  for blk in fams.blocks)
    checks.append(_check("families-refine-euler", refined, {}))
    unique = True
    for blk in fams.blocks:
        bs = sorted(b_invariant(W, character_by_name(W, name))
                    for name in blk.chars)
        if len(bs) > 1 and bs[0] == bs[1]:
            unique = False
    checks.append(_check("families-min-b-unique", unique, {}))
    return checks


def _suite_cells(W, c, seed: int) -> list:
    left = left_cells(W, c, seed=seed)
    right = right_cells(W, c, seed=seed)
    two = two_sided_candidate(W, c, seed=seed)
    chars = cellular_characters(W, c, seed=seed)
    checks = []
    everyone = sorted(W.words)
    for part in (left, right, two):
        covered = sorted(w for blk in part.blocks for w in blk.elements)
        checks.append(_check(f"cells-partition-{part.kind}",
                             covered == everyone,
                             {"blocks": len(part.blocks)}))
    unions = [set(blk.elements) for blk in two.blocks]
    coarser = all(any(set(blk.elements) <= union for union in unions)
                  for blk in left.blocks)
    checks.append(_check("cells-two-sided-coarsens-left", coarser, {}))

    fams = cm_families(W, c)
    sizes_ok = sorted(len(blk.elements) for blk in two.blocks) == \
        sorted(blk.sum_dim_sq for blk in fams.blocks)
    checks.append(_check("cells-block-sizes-match-families", sizes_ok,
                         {"cells": len(two.blocks),
                          "families": len(fams.blocks)}))

    dims = {chi.name: int(chi.dim) for chi in irr_characters(W)}
    total = {name: 0 for name in dims}
    rules_ok = True
    for ch in chars:
        weight = sum(m * dims[name] for name, m in ch.mults)
        if weight != len(ch.elements) or ch.dim != len(ch.elements):
            rules_ok = False
        for name, m in ch.mults:
            total[name] += m
    if any(total[name] != dims[name] for name in dims):
        rules_ok = False
    checks.append(_check("cellular-sum-rules", rules_ok, {"total": total}))

    again = left_cells(W, c, seed=seed + 1)
    same = [blk.elements for blk in again.blocks] == \
        [blk.elements for blk in left.blocks]
    checks.append(_check("cells-seed-independence", same,
                         {"seeds": [seed, seed + 1]}))
    return checks


def _suite_minpoly(W, c, seed: int, samples: int) -> list:
    checks = []
    for label, params in (("euler-minpoly", c),
                          ("euler-minpoly-zero", param_c_zero(W))):
        report = euler_minpoly_check(W, params, samples=samples, seed=seed)
        ok = report.status == "ok" and report.worst_rel_err <= 1e-8
        checks.append(_check(label, ok,
                             {"worstRelErr": _round(report.worst_rel_err),
                              "samples": report.samples}))
    return checks


def _suite_hilbert(W, trunc: int) -> list:
    lhs, rhs = center_hilbert_identity(W, trunc)
    return [_check("center-hilbert-bigraded", lhs == rhs,
                   {"totalDegree": trunc})]


def cmd_verify(suite: str, config: dict) -> dict:
    if suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}; pick one of {_SUITES}")
    W = _group_of(config)
    seed = int(config.get("seed", 0))
    samples = int(config.get("samples", 20))
    trunc = int(config.get("trunc", 10))
    if config.get("c") is not None or config.get("k") is not None:
        c, k = _params_of(W, config)
    else:
        c = _seeded_params(W, seed)
        k = kappa(c, W)

    modeled = W.family in ("cyclic", "b2")
    checks: list = []
    if suite in ("dunkl", "all"):
        checks += _suite_dunkl(W, c)
    if suite in ("families", "all"):
        checks += _suite_families(W, c)
    if suite == "cells" or (suite == "all" and modeled):
        checks += _suite_cells(W, c, seed)
    elif suite == "all":
        checks.append(_skip("cells-suite",
                            f"{W.name} has no exact cell model"))
    if suite == "minpoly" or (suite == "all" and modeled):
        checks += _suite_minpoly(W, c, seed, samples)
    elif suite == "all":
        checks.append(_skip("minpoly-suite",
                            f"{W.name} has no Euler minimal polynomial "
                            "oracle"))
    if suite in ("hilbert", "all"):
        checks += _suite_hilbert(W, trunc)

    failed = [check["id"] for check in checks if check["status"] == "fail"]
    return {
        "suite": suite,
        "group": W.name,
        "seed": seed,
        "params": _params_payload(W, c, k),
        "checks": checks,
        "status": "fail" if failed else "ok",
    }


def _verify_table(payload: dict) -> list:
    lines = [f"suite {payload['suite']} on {payload['group']} "
             f"(seed {payload['seed']}): {payload['status']}"]
    for check in payload["checks"]:
        lines.append(f"  [{check['status']:>7}] {check['id']}")
    return lines


# ---------------------------------------------------------------------------
# click wiring

def _group_options(fn):
    for option in (
        click.option("--config", "config_text", default=None,
                     help="JSON object with group/parameter settings."),
        click.option("--m", type=int, default=None,
                     help="Dihedral order parameter."),
        click.option("--d", type=int, default=None,
                     help="Cyclic group order."),
        click.option("--group", default=None,
                     help="Group kind: cyclic, b2 or dihedral."),
    ):
        fn = option(fn)
    return fn


def _param_options(fn):
    for option in (
        click.option("--k", "k_text", default=None,
                     help="Exact k-values, e.g. 1,1,-2 (zero sum)."),
        click.option("--c", "c_text", default=None,
                     help="Exact c-values, e.g. a=1,b=2 or 1,2."),
    ):
        fn = option(fn)
    return fn


@click.group(name="cmcells")
def cli():
    """Families, cellular characters and cells of Cherednik algebras."""


@cli.command(name="info")
@_group_options
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="table")
def _info_cmd(config_text, m, d, group, fmt):
    """Print character-level facts about a built-in group."""
    config = _merge_config(config_text, group=group, d=d, m=m)
    _emit(cmd_info(config), "info.schema.json", fmt, _info_table)


@cli.command(name="families")
@_group_options
@_param_options
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="json")
def _families_cmd(config_text, m, d, group, c_text, k_text, fmt):
    """Partition the irreducible characters by Euler central character."""
    config = _merge_config(config_text, group=group, d=d, m=m,
                           c=c_text, k=k_text)
    _emit(cmd_families(config), "families.schema.json", fmt, _families_table)


@cli.command(name="cellular")
@_group_options
@_param_options
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="json")
def _cellular_cmd(config_text, m, d, group, c_text, k_text, seed, fmt):
    """Compute the cellular characters from the Gaudin spectrum."""
    config = _merge_config(config_text, group=group, d=d, m=m,
                           c=c_text, k=k_text, seed=seed)
    _emit(cmd_cellular(config), "cellular.schema.json", fmt, _cellular_table)


@cli.command(name="cells")
@_group_options
@_param_options
@click.option("--kind", type=click.Choice(_KINDS), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--samples", type=int, default=None,
              help="Cross-check the partition under this many seeds.")
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="json")
def _cells_cmd(config_text, m, d, group, c_text, k_text, kind, seed,
               samples, fmt):
    """Compute a cell partition of the group."""
    config = _merge_config(config_text, group=group, d=d, m=m, c=c_text,
                           k=k_text, kind=kind, seed=seed, samples=samples)
    _emit(cmd_cells(config), "cells.schema.json", fmt, _cells_table)


@cli.command(name="verify")
@_group_options
@_param_options
@click.option("--suite", type=click.Choice(_SUITES), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--trunc", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(("json", "table")),
              default="table")
def _verify_cmd(config_text, m, d, group, c_text, k_text, suite, seed,
                samples, trunc, fmt):
    """Run a named check suite; nonzero exit on any failure."""
    config = _merge_config(config_text, group=group, d=d, m=m, c=c_text,
                           k=k_text, seed=seed, samples=samples, trunc=trunc)
    payload = cmd_verify(suite, config)
    _emit(payload, "verify.schema.json", fmt, _verify_table)
    return 0 if payload["status"] == "ok" else 1


def main(argv=None) -> int:
    try:
        code = cli.main(args=argv, prog_name="cmcells",
                        standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.Abort:
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except (NumericAmbiguityError, PathTrackingError) as exc:
        click.echo(f"numeric ambiguity: {exc}", err=True)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return int(code or 0)


if __name__ == "__main__":
    raise SystemExit(main())
