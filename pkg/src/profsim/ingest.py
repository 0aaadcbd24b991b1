"""Profile attribute files, report serialization and plot data.

Delimited profile files carry a header row. ``id`` must be the first
column; ``name`` (or ``label``) is the display name and ``communities`` a
tag list. Every other header cell is ``attribute[:kind]`` with kind one of
exact, text (default), numeric or tag-set::

    id,name,hometown:text,gender:exact,sports:tag-set,communities
    akhila,Akhila,Hyderabad,F,cricket;chess,alumni;photography

Structured files are JSON::

    {"schema": [{"name": "hometown", "kind": "text"}, ...],
     "profiles": [{"id": "akhila", "name": "Akhila",
                   "attributes": {"hometown": "Hyderabad"},
                   "communities": ["alumni"]}, ...]}
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from .errors import ParseError, ProfsimError, SchemaError
from .model import Attribute, AttributeKind, AttributeSchema, Profile, SocialGraph
from .scoring import Decision, SimilarityReport

DISPLAY_COLUMNS = ("name", "label", "display_name")
COMMUNITY_COLUMN = "communities"


def _cell_value(raw: str, kind: AttributeKind, tag_delimiter: str):
    text = raw.strip()
    if text == "":
        return None
    if kind is AttributeKind.NUMERIC:
        try:
            return float(text)
        except ValueError:
            raise SchemaError(f"{raw!r} is not numeric") from None
    if kind is AttributeKind.TAGS:
        return frozenset(t.strip() for t in text.split(tag_delimiter) if t.strip())
    return text


def _split_tags(raw: str, delimiter: str) -> frozenset:
    return frozenset(t.strip() for t in raw.split(delimiter) if t.strip())


def _load_delimited(text: str, tag_delimiter: str, delimiter: str):
    problems: list[tuple[Optional[int], str]] = []
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    header = None
    header_line = 0
    for row in reader:
        if any(c.strip() for c in row):
            header = [c.strip() for c in row]
            header_line = reader.line_num
            break
    if header is None:
        raise ParseError([(1, "missing header row")])
    if header[0].lower() != "id":
        problems.append((header_line, f"first header column must be 'id', got {header[0]!r}"))

    roles: list[tuple[str, Any]] = [("id", None)]
    entries = []
    for cell in header[1:]:
        low = cell.lower()
        if low in DISPLAY_COLUMNS:
            roles.append(("display", None))
        elif low == COMMUNITY_COLUMN:
            roles.append(("communities", None))
        else:
            name, _, kind = cell.partition(":")
            name = name.strip()
            try:
                attr = Attribute(name, AttributeKind.parse(kind) if kind else AttributeKind.TEXT)
            except SchemaError as exc:
                problems.append((header_line, f"column {name!r}: {exc}"))
                attr = Attribute(name, AttributeKind.TEXT)
            entries.append(attr)
            roles.append(("attr", attr))
    try:
        schema = AttributeSchema(tuple(entries))
    except SchemaError as exc:
        problems.append((header_line, str(exc)))
        schema = AttributeSchema(())

    profiles = []
    first_seen: dict[str, int] = {}
    for row in reader:
        lineno = reader.line_num
        if not any(c.strip() for c in row):
            continue
        if len(row) != len(header):
            problems.append((lineno, f"ragged row: expected {len(header)} values, got {len(row)}"))
            continue
        pid = row[0].strip()
        if not pid:
            problems.append((lineno, "empty profile id"))
            continue
        if pid in first_seen:
            problems.append((lineno, f"duplicate profile id {pid!r} (first seen on line {first_seen[pid]})"))
            continue
        first_seen[pid] = lineno
        display, communities, attributes = "", frozenset(), {}
        try:
            for (role, attr), cell in zip(roles[1:], row[1:]):
                if role == "display":
                    display = cell.strip()
                elif role == "communities":
                    communities = _split_tags(cell, tag_delimiter)
                else:
                    try:
                        attributes[attr.name] = _cell_value(cell, attr.kind, tag_delimiter)
                    except SchemaError as exc:
                        raise SchemaError(f"column {attr.name!r}: {exc}") from None
            profiles.append(Profile(pid, display, attributes, communities=communities))
        except ProfsimError as exc:
            problems.append((lineno, str(exc)))

    if problems:
        raise ParseError(problems)
    return profiles, schema


def _load_structured(text: str, tag_delimiter: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError([(exc.lineno, f"invalid JSON: {exc.msg}")]) from None
    if not isinstance(doc, dict) or "schema" not in doc or "profiles" not in doc:
        raise ParseError([(None, "structured profile file needs 'schema' and 'profiles' keys")])

    problems: list[tuple[Optional[int], str]] = []
    entries = []
    for i, item in enumerate(doc["schema"]):
        try:
            entries.append(Attribute(str(item["name"]), AttributeKind.parse(str(item.get("kind", "text")))))
        except (KeyError, TypeError, SchemaError) as exc:
            problems.append((None, f"schema entry {i}: {exc}"))
    try:
        schema = AttributeSchema(tuple(entries))
    except SchemaError as exc:
        problems.append((None, f"schema: {exc}"))
        schema = AttributeSchema(())

    profiles, seen = [], set()
    for i, rec in enumerate(doc["profiles"]):
        try:
            pid = str(rec["id"]).strip()
            if pid in seen:
                raise ProfsimError(f"duplicate profile id {pid!r}")
            seen.add(pid)
            attributes = {}
            for name, value in (rec.get("attributes") or {}).items():
                kind = schema.kind_of(name)
                if isinstance(value, list):
                    value = frozenset(str(v) for v in value)
                elif isinstance(value, str):
                    value = _cell_value(value, kind, tag_delimiter)
                elif isinstance(value, (int, float)) and not isinstance(value, bool):
                    value = float(value)
                schema.check_value(name, value)
                attributes[name] = value
            profiles.append(Profile(pid, str(rec.get("name", "")), attributes,
                                    communities=frozenset(rec.get("communities") or ())))
        except (KeyError, TypeError, AttributeError) as exc:
            problems.append((None, f"record {i}: malformed profile ({exc!r})"))
        except ProfsimError as exc:
            problems.append((None, f"record {i}: {exc}"))
    if problems:
        raise ParseError(problems)
    return profiles, schema


def load_profiles(
    text: str,
    format: str = "delimited",
    tag_delimiter: str = ";",
    delimiter: str = ",",
) -> tuple[list[Profile], AttributeSchema]:
    """Parse a profile attribute file into profiles plus their schema."""
    if format == "delimited":
        return _load_delimited(text, tag_delimiter, delimiter)
    if format == "structured":
        return _load_structured(text, tag_delimiter)
    raise ValueError(f"unknown profile file format {format!r}")


def merge_profiles(graph: SocialGraph, profiles: Sequence[Profile]) -> SocialGraph:
    """Overlay attribute-file profiles onto graph nodes.

    The file wins per field where it has a value; graph values fill the gaps.
    """
    merged = []
    for p in profiles:
        node = graph.profile(p.id)
        attributes = dict(node.attributes)
        attributes.update({k: v for k, v in p.attributes.items() if v is not None})
        merged.append(node.replace(
            display_name=p.display_name if p.display_name != p.id else node.display_name,
            attributes=attributes,
            communities=p.communities or node.communities,
        ))
    return graph.with_profiles(merged)


# -- reports -----------------------------------------------------------------

REPORT_COLUMNS = (
    "candidate_id", "raw_similarity", "total_weight", "new_score", "threshold",
    "decision", "rank", "raw_similarity_2dp", "new_score_2dp", "threshold_2dp",
)


def _row(r: SimilarityReport) -> list[str]:
    return [
        r.candidate_id, repr(r.raw_similarity), repr(r.total_weight), repr(r.new_score),
        repr(r.threshold), r.decision.value, str(r.rank),
        f"{r.raw_similarity:.2f}", f"{r.new_score:.2f}", f"{r.threshold:.2f}",
    ]


def report_to_csv(reports: Sequence[SimilarityReport]) -> str:
    if not reports:
        raise ProfsimError("no reports to export")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in reports:
        writer.writerow(_row(r))
    return out.getvalue()


def read_report(text: str) -> list[SimilarityReport]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
        raise ParseError([(1, f"unexpected report header {reader.fieldnames!r}")])
    reports = []
    for row in reader:
        try:
            reports.append(SimilarityReport(
                candidate_id=row["candidate_id"],
                raw_similarity=float(row["raw_similarity"]),
                total_weight=float(row["total_weight"]),
                new_score=float(row["new_score"]),
                threshold=float(row["threshold"]),
                decision=Decision(row["decision"]),
                rank=int(row["rank"]),
            ))
        except (ValueError, TypeError) as exc:
            raise ParseError([(reader.line_num, f"bad report row: {exc}")]) from None
    return reports


@dataclass
class ReportDocument:
    target_id: str
    schema: AttributeSchema
    reports: list[SimilarityReport]
    config: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        return report_to_csv(self.reports)

    def to_json(self) -> str:
        doc = {
            "target": self.target_id,
            "schema": [{"name": a.name, "kind": a.kind.value} for a in self.schema],
            "config": self.config,
            "reports": [
                {
                    "candidate_id": r.candidate_id,
                    "raw_similarity": r.raw_similarity,
                    "total_weight": r.total_weight,
                    "new_score": r.new_score,
                    "threshold": r.threshold,
                    "decision": r.decision.value,
                    "rank": r.rank,
                }
                for r in self.reports
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path: os.PathLike | str, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file so failures leave nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def export_report(reports: Sequence[SimilarityReport], destination=None) -> str:
    text = report_to_csv(reports)
    if destination is not None:
        write_atomic(destination, text)
    return text


# -- plots -------------------------------------------------------------------

@dataclass(frozen=True)
class PlotSeries:
    kind: str
    labels: tuple[str, ...]
    values: tuple[float, ...]
    threshold: Optional[float] = None

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["candidate_id", "score", "threshold"])
        for label, value in zip(self.labels, self.values):
            writer.writerow([label, repr(value), "" if self.threshold is None else repr(self.threshold)])
        return out.getvalue()

    def to_svg(self) -> str:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        plt.rcParams["svg.hashsalt"] = "profsim"
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(self.labels, self.values, color="#4c72b0")
        if self.threshold is not None:
            ax.axhline(self.threshold, color="#c44e52", linestyle="--", label=f"threshold {self.threshold:.2f}")
            ax.legend()
        ax.set_ylabel("cosine similarity" if self.kind == "raw" else "new similarity score")
        ax.set_title("Cosine similarity" if self.kind == "raw" else "New similarity score")
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
        return buf.getvalue()


def export_plot_data(reports: Sequence[SimilarityReport], kind: str = "rescaled") -> PlotSeries:
    """Bar series of per-candidate scores in rank order.

    ``raw`` plots the cosine similarities; ``rescaled`` plots the new scores
    together with the matching threshold.
    """
    if kind not in ("raw", "rescaled"):
        raise ValueError(f"unknown plot kind {kind!r}")
    if not reports:
        raise ProfsimError("no reports to plot")
    ordered = sorted(reports, key=lambda r: r.rank)
    labels = tuple(r.candidate_id for r in ordered)
    if kind == "raw":
        return PlotSeries(kind, labels, tuple(r.raw_similarity for r in ordered))
    return PlotSeries(kind, labels, tuple(r.new_score for r in ordered), ordered[0].threshold)


def write_plot(series: PlotSeries, destination) -> None:
    text = series.to_svg() if str(destination).lower().endswith(".svg") else series.to_csv()
    write_atomic(destination, text)
