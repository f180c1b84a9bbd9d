"""Loading event logs from CSV files into a catalog."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

from src.catalog.schemas import Catalog, RelationMeta
from src.catalog.sidecar import read_sidecar, sidecar_path
from src.catalog.statistics import compute_stats
from src.relation.errors import CatalogLoadError, SchemaMismatchError
from src.relation.relation import Relation
from src.relation.schema import RESERVED_PREFIXES, Attribute, Schema
from src.relation.values import ABSENT, Domain, Value

logger = logging.getLogger(__name__)

# Tried in order; the first domain that parses every non-empty cell wins.
INFERENCE_ORDER = (Domain.INTEGER, Domain.DECIMAL, Domain.TIMESTAMP)


@dataclass
class LoadOptions:
    delimiter: str = ","
    types: dict[str, Domain] = field(default_factory=dict)
    case_attr: str | None = None
    time_attr: str | None = None


def infer_domain(cells: list[str]) -> Domain:
    """Narrowest domain accepting every non-empty cell; TEXT if none does."""
    values = [c for c in cells if c.strip() != ""]
    if not values:
        return Domain.TEXT
    for domain in INFERENCE_ORDER:
        try:
            for cell in values:
                domain.parse(cell)
        except ValueError:
            continue
        return domain
    return Domain.TEXT


def load_csv(path: Path | str, options: LoadOptions | None = None) -> tuple[Relation, RelationMeta]:
    """Read a CSV event log with a header row.

    Empty cells become ABSENT; duplicate rows collapse with a logged warning.

    Raises:
        CatalogLoadError: On an unreadable file, a missing header, a ragged row,
            a cell that does not parse under an explicit type override, or a
            declared case/time attribute missing from the header.
    """
    path = Path(path)
    options = options or LoadOptions()
    try:
        with path.open(encoding="utf-8-sig", newline="") as handle:
            records = list(csv.reader(handle, delimiter=options.delimiter))
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise CatalogLoadError(f"cannot read {path}: {e}") from e

    if not records:
        raise CatalogLoadError(f"{path}: missing header row")
    header = [h.strip() for h in records[0]]
    body = records[1:]
    for number, record in enumerate(body, start=2):
        if len(record) != len(header):
            raise CatalogLoadError(
                f"{path}:{number}: expected {len(header)} fields, found {len(record)}"
            )
    for name in header:
        if name.startswith(RESERVED_PREFIXES):
            raise CatalogLoadError(f"{path}: column '{name}' uses a reserved prefix")
    for declared in (options.case_attr, options.time_attr):
        if declared is not None and declared not in header:
            raise CatalogLoadError(f"{path}: declared attribute '{declared}' is not a column")

    domains = [
        options.types.get(name) or infer_domain([r[i] for r in body])
        for i, name in enumerate(header)
    ]
    try:
        schema = Schema(tuple(Attribute(n, d) for n, d in zip(header, domains)))
    except SchemaMismatchError as e:
        raise CatalogLoadError(f"{path}: {e}") from e

    rows = set()
    for number, record in enumerate(body, start=2):
        cells = zip(header, domains, record)
        rows.add(tuple(_cell(path, number, name, domain, cell) for name, domain, cell in cells))
    dropped = len(body) - len(rows)
    if dropped:
        logger.warning("%s: dropped %d duplicate row(s)", path, dropped)

    relation = Relation.from_rows(schema, rows)
    stats = compute_stats(relation, options.case_attr)
    stats.duplicates_dropped = dropped
    meta = RelationMeta(
        case_attr=options.case_attr,
        time_attr=options.time_attr,
        stats=stats,
        types=dict(options.types),
    )
    return relation, meta


def _cell(path: Path, number: int, name: str, domain: Domain, cell: str) -> Value:
    if cell.strip() == "":
        return ABSENT
    try:
        return domain.parse(cell)
    except ValueError as e:
        raise CatalogLoadError(f"{path}:{number}: column '{name}': {e}") from e


def load_relation(path: Path | str) -> tuple[Relation, RelationMeta]:
    """Load a CSV file together with its sidecar declarations, if any."""
    path = Path(path)
    side = sidecar_path(path)
    if side is None:
        return load_csv(path)
    declarations = read_sidecar(side)
    relation, meta = load_csv(
        path,
        LoadOptions(
            delimiter=declarations.delimiter,
            types=declarations.types,
            case_attr=declarations.case_attr,
            time_attr=declarations.time_attr,
        ),
    )
    unknown = (set(declarations.classes) | declarations.indexes) - set(relation.schema.names)
    if unknown:
        raise CatalogLoadError(f"{side}: unknown attribute(s) {', '.join(sorted(unknown))}")
    meta.attr_classes = dict(declarations.classes)
    meta.indexes = set(declarations.indexes)
    meta.totality_facts = set(declarations.totality)
    if meta.stats is not None:
        meta.stats.selectivity.update(declarations.selectivity)
    return relation, meta


def load_catalog(*directories: Path | str) -> Catalog:
    """Load every ``*.csv`` file of the given directories; relation name = file stem.

    Raises:
        CatalogLoadError: If a directory is missing or two files share a stem.
    """
    relations: dict[str, Relation] = {}
    metas: dict[str, RelationMeta] = {}
    for directory in directories:
        directory = Path(directory)
        if not directory.is_dir():
            raise CatalogLoadError(f"catalog directory {directory} does not exist")
        for csv_path in sorted(directory.glob("*.csv")):
            name = csv_path.stem
            if name in relations:
                raise CatalogLoadError(f"relation '{name}' is defined twice")
            relations[name], metas[name] = load_relation(csv_path)
            logger.debug("loaded %s with %d tuples", name, len(relations[name]))
    return Catalog(relations, metas)
