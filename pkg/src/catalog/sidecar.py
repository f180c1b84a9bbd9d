"""Per-relation declaration files next to a CSV file.

``<stem>.meta.yaml`` holds a YAML mapping::

    case_attr: case
    time_attr: end_time
    delimiter: ","
    types: {amount: decimal}
    classes: {amount: case, resource: other}
    indexes: [activity]
    totality:
      - {left: Log, right: Owners, condition: "resource = owner"}
    selectivity: {"activity = 'A'": 1/3}

``<stem>.meta`` holds the same facts as ``key = value`` lines; totality and
selectivity entries separate their parts with ``;`` and may repeat::

    case_attr = case
    classes.amount = case
    indexes = activity, resource
    totality = Log ; Owners ; resource = owner
    selectivity = activity = 'A' ; 1/3
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from src.algebra.conditions import render_condition
from src.catalog.schemas import AttrClass, TotalityFact
from src.dsl.errors import ParseError
from src.dsl.parser import parse_condition
from src.relation.errors import CatalogLoadError
from src.relation.values import Domain


@dataclass
class Sidecar:
    """Declarations read from a sidecar file."""

    case_attr: str | None = None
    time_attr: str | None = None
    delimiter: str = ","
    types: dict[str, Domain] = field(default_factory=dict)
    classes: dict[str, AttrClass] = field(default_factory=dict)
    indexes: set[str] = field(default_factory=set)
    totality: set[TotalityFact] = field(default_factory=set)
    selectivity: dict[str, Fraction] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict[str, Any], source: Path) -> Sidecar:
        try:
            return cls(
                case_attr=data.get("case_attr"),
                time_attr=data.get("time_attr"),
                delimiter=str(data.get("delimiter", ",")),
                types={a: Domain(d) for a, d in (data.get("types") or {}).items()},
                classes={a: AttrClass(c) for a, c in (data.get("classes") or {}).items()},
                indexes=set(data.get("indexes") or []),
                totality={TotalityFact.from_dict(f) for f in data.get("totality") or []},
                selectivity={
                    render_condition(parse_condition(k)): Fraction(str(q))
                    for k, q in (data.get("selectivity") or {}).items()
                },
            )
        except (KeyError, ValueError, ParseError) as e:
            raise CatalogLoadError(f"{source}: invalid declaration: {e}") from e


def sidecar_path(csv_path: Path) -> Path | None:
    """The sidecar belonging to a CSV file, if one exists."""
    for suffix in (".meta.yaml", ".meta.yml", ".meta"):
        candidate = csv_path.with_name(csv_path.stem + suffix)
        if candidate.exists():
            return candidate
    return None


def read_sidecar(path: Path) -> Sidecar:
    """Read a YAML or key=value sidecar.

    Raises:
        CatalogLoadError: If the file cannot be read or holds invalid declarations.
    """
    try:
        content = path.read_text(encoding="utf-8-sig")
    except OSError as e:
        raise CatalogLoadError(f"cannot read {path}: {e}") from e

    if path.suffix in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(content) or {}
        except yaml.YAMLError as e:
            raise CatalogLoadError(f"{path}: invalid YAML: {e}") from e
        if not isinstance(data, dict):
            raise CatalogLoadError(f"{path}: expected a mapping")
        return Sidecar.from_dict(data, path)
    return Sidecar.from_dict(_parse_key_values(content, path), path)


def _parse_key_values(content: str, path: Path) -> dict[str, Any]:
    data: dict[str, Any] = {"types": {}, "classes": {}, "totality": [], "selectivity": {}}
    for number, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CatalogLoadError(f"{path}:{number}: expected 'key = value'")
        key, value = key.strip(), value.strip()
        head, dot, attr = key.partition(".")
        if dot and head in ("types", "classes"):
            data[head][attr] = value
        elif key == "indexes":
            data["indexes"] = [a.strip() for a in value.split(",") if a.strip()]
        elif key == "totality":
            parts = [p.strip() for p in value.split(";")]
            if len(parts) != 3:
                raise CatalogLoadError(f"{path}:{number}: totality needs left ; right ; condition")
            data["totality"].append(dict(zip(("left", "right", "condition"), parts)))
        elif key == "selectivity":
            condition, sep, fraction = value.rpartition(";")
            if not sep:
                raise CatalogLoadError(f"{path}:{number}: selectivity needs condition ; fraction")
            data["selectivity"][condition.strip()] = fraction.strip()
        elif key in ("case_attr", "time_attr", "delimiter"):
            data[key] = value
        else:
            raise CatalogLoadError(f"{path}:{number}: unknown key '{key}'")
    return data
