"""Random catalogs and expressions on which a given rule matches.

Every catalog holds the same relations, filled with fresh random data:

    R(a, b, e), T(a, b, e)  integer relations with one shared schema
    S(c, d)                 integer and text
    U(e2, f)                integers
    Log                     a generated event log with case attributes kind
                            and region, event attributes tag and amount and
                            the Other attribute res
    K(kind2, label)         a lookup that matches every kind value of Log

The declaration that ``join(kind = kind2, Log, K)`` keeps every event of Log
is recorded, and holds by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from src.algebra.conditions import And, Attr, Comparison, attrs, cmp
from src.algebra.errors import Path
from src.algebra.expr import (
    AlgebraExpr,
    BaseRel,
    DirectlyFollows,
    Join,
    Minus,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
)
from src.algebra.schema_inference import infer_schema
from src.catalog.schemas import AttrClass, Catalog, RelationMeta, TotalityFact
from src.catalog.statistics import compute_stats
from src.relation.relation import Relation
from src.relation.schema import DOWN, Schema
from src.relation.values import Domain, Theta
from src.rules.engine import apply_rule, get_rule
from src.rules.schemas import Direction, RuleId
from src.testkit.generator import AttributeSpec, LogSpec, generate_log
from src.testkit.trees import random_comparison

LTR = Direction.LEFT_TO_RIGHT
RTL = Direction.RIGHT_TO_LEFT

LOG_ATTRIBUTES = (
    AttributeSpec("kind", AttrClass.CASE, ("x", "y")),
    AttributeSpec("region", AttrClass.CASE, ("x", "y", "z"), absent_rate=0.3),
    AttributeSpec("tag", AttrClass.EVENT, (1, 2, 3), absent_rate=0.3),
    AttributeSpec("amount", AttrClass.EVENT, (1, 2, 3), absent_rate=0.3),
    AttributeSpec("res", AttrClass.OTHER, ("r1", "r2")),
)
KIND_JOIN = cmp("kind", "=", Attr("kind2"))

_INTS = Schema.of(("a", Domain.INTEGER), ("b", Domain.INTEGER), ("e", Domain.INTEGER))
_S = Schema.of(("c", Domain.INTEGER), ("d", Domain.TEXT))
_U = Schema.of(("e2", Domain.INTEGER), ("f", Domain.INTEGER))
_K = Schema.of(("kind2", Domain.TEXT), ("label", Domain.TEXT))


@dataclass(frozen=True)
class RuleInstance:
    """An expression on which ``rule`` matches at ``path`` in ``direction``."""

    rule: RuleId
    expr: AlgebraExpr
    path: Path
    cat: Catalog
    direction: Direction = LTR

    def __str__(self) -> str:
        return f"{self.rule.value} {self.direction.arrow} at {list(self.path)}"


def _random_rows(rng: random.Random, schema: Schema, count: int) -> Relation:
    pools = {Domain.INTEGER: (0, 1, 2, 3), Domain.TEXT: ("x", "y", "z")}
    rows = {tuple(rng.choice(pools[a.domain]) for a in schema) for _ in range(count)}
    return Relation.from_rows(schema, rows)


def _with_stats(relation: Relation, meta: RelationMeta | None = None) -> RelationMeta:
    meta = meta or RelationMeta()
    meta.stats = compute_stats(relation, meta.case_attr)
    return meta


def random_catalog(rng: random.Random) -> Catalog:
    """A catalog of small random relations; see the module docstring."""
    relations: dict[str, Relation] = {
        "R": _random_rows(rng, _INTS, rng.randint(0, 6)),
        "T": _random_rows(rng, _INTS, rng.randint(0, 6)),
        "S": _random_rows(rng, _S, rng.randint(0, 5)),
        "U": _random_rows(rng, _U, rng.randint(0, 5)),
    }
    spec = LogSpec(
        cases=rng.randint(0, 4),
        events_per_case=(0, 4),
        duplicate_timestamp_rate=0.3,
        attributes=LOG_ATTRIBUTES,
        seed=rng.randrange(2**32),
    )
    log, log_meta = generate_log(spec)
    log_meta.totality_facts.add(TotalityFact.of(BaseRel("Log"), BaseRel("K"), KIND_JOIN))
    relations["Log"] = log
    labels = {(kind, f"kind {kind}") for kind in ("x", "y")}
    if rng.random() < 0.5:
        labels.add(("w", "unused"))
    relations["K"] = Relation.from_rows(_K, labels)

    meta = {name: _with_stats(rel) for name, rel in relations.items() if name != "Log"}
    meta["Log"] = log_meta
    return Catalog(relations, meta)


# Each builder returns an expression matching the left-hand side of its rule.

Builder = Callable[[random.Random, Catalog], AlgebraExpr]


def _pick(rng: random.Random, *names: str) -> BaseRel:
    return BaseRel(rng.choice(names))


def _subset(rng: random.Random, names: tuple[str, ...], keep: tuple[str, ...] = ()) -> tuple:
    chosen = [n for n in names if n in keep or rng.random() < 0.6]
    return tuple(chosen or names[:1])


def _split_selection(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    cond = And(random_comparison(rng, _INTS), random_comparison(rng, _INTS))
    return Select(cond, _pick(rng, "R", "T"))


def _stacked_selections(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    inner = Select(random_comparison(rng, _INTS), _pick(rng, "R", "T"))
    return Select(random_comparison(rng, _INTS), inner)


def _cross_condition(rng: random.Random, left: Schema, right: Schema) -> Comparison:
    a = rng.choice([n for n in left.names if left.domain_of(n) is Domain.INTEGER])
    b = rng.choice([n for n in right.names if right.domain_of(n) is Domain.INTEGER])
    return Comparison(Attr(a), rng.choice(list(Theta)), Attr(b))


def _join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    return Join(_cross_condition(rng, _INTS, _S), _pick(rng, "R", "T"), BaseRel("S"))


def _nested_join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    inner = Join(_cross_condition(rng, _INTS, _S), _pick(rng, "R", "T"), BaseRel("S"))
    return Join(_cross_condition(rng, _S, _U), inner, BaseRel("U"))


def _selection_over_join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    side = _INTS if rng.random() < 0.5 else _S
    return Select(random_comparison(rng, side), _join(rng, cat))


def _selection_over_minus(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    left, right = ("R", "T") if rng.random() < 0.5 else ("T", "R")
    return Select(random_comparison(rng, _INTS), Minus(BaseRel(left), BaseRel(right)))


def _selection_over_rename(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    base = _pick(rng, "R", "T")
    if rng.random() < 0.5:
        renamed = _INTS.prefixed(DOWN)
        return Select(random_comparison(rng, renamed), RenamePrefix(DOWN, base))
    old = rng.choice(_INTS.names)
    return Select(random_comparison(rng, _INTS.rename(old, "z")), RenameAttr(old, "z", base))


def _projection_over_rename(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    old = rng.choice(_INTS.names)
    renamed = _INTS.rename(old, "z")
    child = RenameAttr(old, "z", _pick(rng, "R", "T"))
    return Project(_subset(rng, renamed.names, keep=("z",)), child)


def _projection_over_selection(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    keep = _subset(rng, _INTS.names)
    cond = random_comparison(rng, _INTS, keep)
    return Project(keep, Select(cond, _pick(rng, "R", "T")))


def _projection_over_join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    join = _join(rng, cat)
    used = tuple(sorted(attrs(join.cond)))
    left = _subset(rng, _INTS.names, keep=used)
    right = _subset(rng, _S.names, keep=used)
    return Project(left + right, join)


def _nested_projections(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    outer = _subset(rng, _INTS.names)
    inner = _subset(rng, _INTS.names, keep=outer)
    return Project(outer, Project(inner, _pick(rng, "R", "T")))


def _permuted_projections(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    names = list(_subset(rng, _INTS.names))
    shuffled = names[:]
    rng.shuffle(shuffled)
    return Project(tuple(shuffled), Project(tuple(names), _pick(rng, "R", "T")))


def _rename_over_join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    join = _join(rng, cat)
    old = rng.choice(_INTS.names)
    return RenameAttr(old, "z", join)


def _identity_projection(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    names = list(_INTS.names)
    rng.shuffle(names)
    child = _pick(rng, "R", "T")
    if rng.random() < 0.5:
        child = Select(random_comparison(rng, _INTS), child)
    return Project(tuple(names), child)


def _total_join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    log, lookup = BaseRel("Log"), BaseRel("K")
    join = Join(KIND_JOIN, log, lookup) if rng.random() < 0.5 else Join(KIND_JOIN, lookup, log)
    return Project(cat.schema_of("Log").names, join)


def _join_over_minus(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    left, right = ("R", "T") if rng.random() < 0.5 else ("T", "R")
    minus = Minus(BaseRel(left), BaseRel(right))
    return Join(_cross_condition(rng, _INTS, _S), minus, BaseRel("S"))


def _df_over_constant_selection(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    spec = rng.choice([a for a in LOG_ATTRIBUTES if a.attr_class is not AttrClass.OTHER])
    cond = cmp(spec.name, rng.choice(list(Theta)), rng.choice(spec.pool))
    if rng.random() < 0.2:
        cond = cond.mirrored()
    return DirectlyFollows("case", "time", Select(cond, BaseRel("Log")))


def _df_over_attribute_selection(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    pairs = (("kind", "region"), ("region", "kind"), ("tag", "amount"), ("amount", "tag"))
    a, b = rng.choice(pairs)
    cond = Comparison(Attr(a), rng.choice(list(Theta)), Attr(b))
    return DirectlyFollows("case", "time", Select(cond, BaseRel("Log")))


def _df_over_projection(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    names = _subset(rng, cat.schema_of("Log").names, keep=("case", "time"))
    return DirectlyFollows("case", "time", Project(names, BaseRel("Log")))


def _df_over_join(rng: random.Random, cat: Catalog) -> AlgebraExpr:
    log, lookup = BaseRel("Log"), BaseRel("K")
    join = Join(KIND_JOIN, log, lookup) if rng.random() < 0.5 else Join(KIND_JOIN, lookup, log)
    return DirectlyFollows("case", "time", join)


BUILDERS: dict[RuleId, Builder] = {
    RuleId.E1: _split_selection,
    RuleId.E2: _stacked_selections,
    RuleId.E3: _join,
    RuleId.E4: _nested_join,
    RuleId.E5: _selection_over_join,
    RuleId.E6: _selection_over_minus,
    RuleId.E7: _selection_over_rename,
    RuleId.E8: _projection_over_rename,
    RuleId.E9: _projection_over_selection,
    RuleId.E10: _projection_over_join,
    RuleId.E11: _nested_projections,
    RuleId.E12: _permuted_projections,
    RuleId.E13: _rename_over_join,
    RuleId.E14: _identity_projection,
    RuleId.E15: _total_join,
    RuleId.E16: _join_over_minus,
    RuleId.P17: _df_over_constant_selection,
    RuleId.P18: _df_over_attribute_selection,
    RuleId.P19: _df_over_projection,
    RuleId.P20: _df_over_join,
}


def rule_instance(rule: RuleId, seed: int) -> RuleInstance:
    """Left-hand side instance of ``rule``, sometimes below a wrapping projection."""
    rng = random.Random(f"{rule.value}:{seed}")
    cat = random_catalog(rng)
    expr = BUILDERS[rule](rng, cat)
    if rng.random() < 0.5:
        names = infer_schema(expr, cat).names
        return RuleInstance(rule, Project(names, expr), (0,), cat)
    return RuleInstance(rule, expr, (), cat)


def rule_instances(rule: RuleId, seeds: range) -> Iterator[RuleInstance]:
    """Instances for every direction the rule allows.

    A right-to-left instance is the result of first rewriting a
    left-to-right instance, so both sides of the rule get exercised.
    """
    directions = get_rule(rule).directions
    for seed in seeds:
        instance = rule_instance(rule, seed)
        if LTR in directions:
            yield instance
        if RTL in directions:
            rewritten = apply_rule(rule, instance.expr, instance.path, instance.cat, LTR)
            yield RuleInstance(rule, rewritten, instance.path, instance.cat, RTL)


def p17_counterexample() -> tuple[AlgebraExpr, Catalog]:
    """A log where pushing a selection on an Other attribute below df changes the result.

    One case has three events whose resource is X, Y, X. Selecting X first
    makes the two X events directly follow each other; selecting afterwards
    finds no pair with X on both sides.
    """
    schema = Schema.of(
        ("case", Domain.INTEGER), ("time", Domain.INTEGER), ("res", Domain.TEXT)
    )
    log = Relation.from_rows(schema, {(1, 1, "X"), (1, 2, "Y"), (1, 3, "X")})
    meta = RelationMeta(
        attr_classes={"res": AttrClass.OTHER}, case_attr="case", time_attr="time"
    )
    cat = Catalog({"Log": log}, {"Log": _with_stats(log, meta)})
    expr = DirectlyFollows("case", "time", Select(cmp("res", "=", "X"), BaseRel("Log")))
    return expr, cat


def keyed_minus_instance(rng: random.Random) -> Catalog:
    """Relations R(k, v, w) with unique keys k and S, a subset of R.

    Projection onto any attribute set holding ``k`` commutes with R minus S.
    """
    schema = Schema.of(("k", Domain.INTEGER), ("v", Domain.INTEGER), ("w", Domain.TEXT))
    rows = {(k, rng.randint(0, 2), rng.choice("xyz")) for k in range(rng.randint(0, 8))}
    subset = {row for row in rows if rng.random() < 0.5}
    relations = {"R": Relation.from_rows(schema, rows), "S": Relation.from_rows(schema, subset)}
    return Catalog(relations, {name: _with_stats(r) for name, r in relations.items()})
