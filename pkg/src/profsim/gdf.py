"""Reader and writer for the GDF graph format (netvizz / Gephi dialect).

Supported dialect::

    nodedef>name VARCHAR,label VARCHAR,gender VARCHAR,age INTEGER
    alice,'Alice, A.',female,31
    edgedef>node1 VARCHAR,node2 VARCHAR,directed BOOLEAN
    alice,bob,true

Values are comma separated; single quotes protect commas. Column types are
VARCHAR, INTEGER, DOUBLE and BOOLEAN (a ``VARCHAR(255)`` width is accepted
and dropped). The first node column is the node id. In node rows ``label``
becomes the display name and ``communities`` a ``;``-separated community
set; the other columns become profile attributes. Edges are directed unless
the row carries ``directed=false``.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Any, Optional

from .errors import ParseError, SchemaError
from .model import Attribute, AttributeKind, AttributeSchema, Profile, SocialGraph

GDF_TYPES = ("VARCHAR", "INTEGER", "DOUBLE", "BOOLEAN")
RESERVED_NODE_COLUMNS = ("label", "communities")
COMMUNITY_SEP = ";"

_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


@dataclass(frozen=True)
class GdfDocument:
    node_columns: tuple[tuple[str, str], ...]
    node_rows: tuple[tuple[Any, ...], ...]
    edge_columns: tuple[tuple[str, str], ...]
    edge_rows: tuple[tuple[Any, ...], ...]

    def node_column_names(self) -> list[str]:
        return [name for name, _ in self.node_columns]


def _parse_columns(decl: str, lineno: int, problems: list) -> tuple[tuple[str, str], ...]:
    columns = []
    for raw in next(csv.reader([decl], quotechar="'", skipinitialspace=True), []):
        parts = raw.split()
        if not parts:
            problems.append((lineno, "empty column declaration"))
            continue
        name = parts[0]
        gdf_type = re.sub(r"\(.*\)$", "", parts[1]).upper() if len(parts) > 1 else "VARCHAR"
        if gdf_type not in GDF_TYPES:
            problems.append((lineno, f"column {name!r} has unsupported type {parts[1]!r}"))
            gdf_type = "VARCHAR"
        columns.append((name, gdf_type))
    names = [n for n, _ in columns]
    for name in sorted({n for n in names if names.count(n) > 1}):
        problems.append((lineno, f"duplicate column {name!r}"))
    return tuple(columns)


def _convert(raw: str, gdf_type: str) -> Any:
    if gdf_type == "VARCHAR":
        return raw
    text = raw.strip()
    if text == "":
        return None
    if gdf_type == "INTEGER":
        return int(text)
    if gdf_type == "DOUBLE":
        return float(text)
    low = text.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _render(value: Any, gdf_type: str) -> str:
    if value is None:
        return ""
    if gdf_type == "BOOLEAN":
        return "true" if value else "false"
    if gdf_type == "DOUBLE":
        return repr(float(value))
    if gdf_type == "INTEGER":
        return str(int(value))
    if "\n" in value or "\r" in value:
        raise ValueError(f"GDF values cannot contain line breaks: {value!r}")
    return value


def parse_gdf_document(text: str) -> GdfDocument:
    """Parse GDF text, checking structure and edge references.

    Every problem found is collected; if there are any a ``ParseError``
    listing all of them (with 1-based line numbers) is raised.
    """
    problems: list[tuple[Optional[int], str]] = []
    node_columns: tuple = ()
    edge_columns: tuple = ()
    node_rows: list[tuple] = []
    edge_rows: list[tuple] = []
    node_lines: dict[str, int] = {}
    section = None
    lines = text.splitlines()

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        head = line.lstrip().lower()
        if head.startswith("nodedef>"):
            if section not in (None, "orphan"):
                problems.append((lineno, "nodedef> must appear once, before edgedef>"))
                continue
            section = "nodes"
            node_columns = _parse_columns(line.split(">", 1)[1], lineno, problems)
            if not node_columns:
                problems.append((lineno, "nodedef> declares no columns"))
            continue
        if head.startswith("edgedef>"):
            if section != "nodes":
                problems.append((lineno, "edgedef> found before nodedef> header" if section is None
                                 else "edgedef> must appear exactly once"))
                section = "edges" if section is None else section
                continue
            section = "edges"
            edge_columns = _parse_columns(line.split(">", 1)[1], lineno, problems)
            if len(edge_columns) < 2:
                problems.append((lineno, "edgedef> needs at least two columns (source, target)"))
            continue
        if section is None:
            problems.append((lineno, "missing nodedef> header before data"))
            section = "orphan"
            continue
        if section == "orphan":
            continue

        columns = node_columns if section == "nodes" else edge_columns
        if not columns:
            continue
        cells = next(csv.reader([line], quotechar="'"), [])
        if len(cells) != len(columns):
            problems.append((lineno, f"ragged row: expected {len(columns)} values, got {len(cells)}"))
            continue
        try:
            row = tuple(_convert(cell, t) for cell, (_, t) in zip(cells, columns))
        except ValueError as exc:
            problems.append((lineno, f"bad value: {exc}"))
            continue

        if section == "nodes":
            node_id = str(row[0]) if row[0] is not None else ""
            node_id = node_id.strip()
            if not node_id:
                problems.append((lineno, "node row has an empty id"))
            elif node_id in node_lines:
                problems.append((lineno, f"duplicate node id {node_id!r} (first declared on line {node_lines[node_id]})"))
            else:
                node_lines[node_id] = lineno
                node_rows.append(row)
        else:
            src, dst = (str(v).strip() if v is not None else "" for v in row[:2])
            bad = False
            for end in (src, dst):
                if end not in node_lines:
                    problems.append((lineno, f"edge references undeclared node {end!r}"))
                    bad = True
            if not bad and src == dst:
                problems.append((lineno, f"self-loop on node {src!r}"))
                bad = True
            if not bad:
                edge_rows.append(row)

    if section is None or section == "orphan":
        if not any(msg.startswith("missing nodedef>") for _, msg in problems):
            problems.append((1, "missing nodedef> header"))
    elif section == "nodes":
        problems.append((len(lines) + 1, "missing edgedef> header"))

    if problems:
        raise ParseError(sorted(problems, key=lambda p: (p[0] or 0)))
    return GdfDocument(node_columns, tuple(node_rows), edge_columns, tuple(edge_rows))


def serialize_gdf(doc: GdfDocument) -> str:
    out = io.StringIO()
    writer = csv.writer(out, quotechar="'", lineterminator="\n")

    def decl(columns):
        return ",".join(f"{name} {t}" for name, t in columns)

    out.write(f"nodedef>{decl(doc.node_columns)}\n")
    for row in doc.node_rows:
        writer.writerow([_render(v, t) for v, (_, t) in zip(row, doc.node_columns)])
    out.write(f"edgedef>{decl(doc.edge_columns)}\n")
    for row in doc.edge_rows:
        writer.writerow([_render(v, t) for v, (_, t) in zip(row, doc.edge_columns)])
    return out.getvalue()


def infer_schema(doc: GdfDocument) -> AttributeSchema:
    """Attribute schema implied by the node columns' declared types."""
    kinds = {"VARCHAR": AttributeKind.TEXT, "INTEGER": AttributeKind.NUMERIC,
             "DOUBLE": AttributeKind.NUMERIC, "BOOLEAN": AttributeKind.EXACT}
    return AttributeSchema(tuple(
        Attribute(name, kinds[t])
        for name, t in doc.node_columns[1:]
        if name.lower() not in RESERVED_NODE_COLUMNS
    ))


def _attribute_value(value: Any, kind: AttributeKind, column: str):
    if value is None or value == "":
        return None
    if kind is AttributeKind.NUMERIC:
        if isinstance(value, bool):
            raise SchemaError(f"column {column!r}: boolean value for numeric attribute")
        try:
            return float(value)
        except ValueError:
            raise SchemaError(f"column {column!r}: {value!r} is not numeric") from None
    if kind is AttributeKind.TAGS:
        return frozenset(t.strip() for t in str(value).split(COMMUNITY_SEP) if t.strip())
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def document_to_graph(doc: GdfDocument, schema: Optional[AttributeSchema] = None) -> SocialGraph:
    schema = schema if schema is not None else infer_schema(doc)
    names = doc.node_column_names()
    lowered = [n.lower() for n in names]
    profiles = []
    for row in doc.node_rows:
        pid = str(row[0]).strip()
        display = ""
        communities: frozenset = frozenset()
        attributes = {}
        for col, low, value in zip(names[1:], lowered[1:], row[1:]):
            if low == "label":
                display = "" if value is None else str(value)
            elif low == "communities":
                communities = frozenset(
                    c.strip() for c in str(value or "").split(COMMUNITY_SEP) if c.strip()
                )
            elif col in schema:
                attributes[col] = _attribute_value(value, schema.kind_of(col), col)
        profiles.append(Profile(pid, display, attributes, communities=communities))

    edges = []
    edge_names = [n.lower() for n, _ in doc.edge_columns]
    directed_at = edge_names.index("directed") if "directed" in edge_names else None
    for row in doc.edge_rows:
        src, dst = str(row[0]).strip(), str(row[1]).strip()
        edges.append((src, dst))
        if directed_at is not None and row[directed_at] is False:
            edges.append((dst, src))
    return SocialGraph.from_edges(profiles, edges)


def parse_gdf(text: str, schema: Optional[AttributeSchema] = None) -> SocialGraph:
    return document_to_graph(parse_gdf_document(text), schema)


def graph_to_document(graph: SocialGraph, schema: AttributeSchema) -> GdfDocument:
    """Inverse of ``document_to_graph`` for graphs whose attributes fit ``schema``."""
    gdf_type = {AttributeKind.NUMERIC: "DOUBLE"}
    node_columns = (("name", "VARCHAR"), ("label", "VARCHAR"),
                    *((a.name, gdf_type.get(a.kind, "VARCHAR")) for a in schema),
                    ("communities", "VARCHAR"))
    rows = []
    for p in sorted(graph, key=lambda p: p.id):
        values = []
        for attr in schema:
            v = p.get(attr.name)
            if attr.kind is AttributeKind.TAGS and v is not None:
                v = COMMUNITY_SEP.join(sorted(v))
            values.append(v if v is not None or attr.kind is AttributeKind.NUMERIC else "")
        rows.append((p.id, p.display_name, *values, COMMUNITY_SEP.join(sorted(p.communities))))
    edges = tuple(sorted(graph.edges))
    return GdfDocument(
        node_columns=node_columns,
        node_rows=tuple(rows),
        edge_columns=(("node1", "VARCHAR"), ("node2", "VARCHAR")),
        edge_rows=edges,
    )
