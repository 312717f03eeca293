"""Dataset-quality metrics, behavioral curves, and the dataset export.

Everything here is read-only over engine state (or over already-exported
rows), so any metric can be recomputed from a replayed event log.

Krippendorff's alpha ships in two independently coded routes: the
coincidence-matrix formulation used by reports, and an O(n^2) brute-force
pairwise route kept as a cross-check oracle. Grades are treated as
equal-interval values, difference delta(c, k) = (c - k)^2.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

from quipline.errors import EmptyDataset, InsufficientData

if TYPE_CHECKING:
    from quipline.engine import GameEngine

SECONDS_PER_EDIT = 25.0
SECONDS_PER_RATING = 5.0

Unit = tuple[str, Sequence[int]]


def _pairable(units: Iterable[Unit]) -> list[Sequence[int]]:
    """Units with at least two grades; single-grade units carry no
    agreement information and are excluded."""
    return [grades for _, grades in units if len(grades) >= 2]


def krippendorff_alpha(units: Iterable[Unit]) -> float:
    """Interval-metric alpha via the coincidence matrix.

    alpha = 1 - D_o / D_e. Perfect agreement in every unit gives exactly
    1.0; all-identical data (zero expected disagreement) returns 1.0 by
    convention.
    """
    pairable = _pairable(units)
    if len(pairable) < 2:
        raise InsufficientData("alpha needs at least 2 units with >= 2 grades")
    values = sorted({v for grades in pairable for v in grades})
    o = {(c, k): 0.0 for c in values for k in values}
    for grades in pairable:
        m = len(grades)
        for i, c in enumerate(grades):
            for j, k in enumerate(grades):
                if i != j:
                    o[(c, k)] += 1.0 / (m - 1)
    n_c = {c: sum(o[(c, k)] for k in values) for c in values}
    n = sum(n_c.values())
    d_o = sum(o[(c, k)] * (c - k) ** 2 for c in values for k in values) / n
    d_e = sum(n_c[c] * n_c[k] * (c - k) ** 2
              for c in values for k in values) / (n * (n - 1))
    if d_e == 0.0:
        return 1.0
    return 1.0 - d_o / d_e


def krippendorff_alpha_pairwise(units: Iterable[Unit]) -> float:
    """Brute-force pairwise route: explicit double loops over ordered value
    pairs, no coincidence matrix. Kept independent as the oracle for the
    matrix implementation."""
    pairable = _pairable(units)
    if len(pairable) < 2:
        raise InsufficientData("alpha needs at least 2 units with >= 2 grades")
    pooled = [v for grades in pairable for v in grades]
    n = len(pooled)
    within = 0.0
    for grades in pairable:
        m = len(grades)
        for i in range(m):
            for j in range(m):
                if i != j:
                    within += (grades[i] - grades[j]) ** 2 / (m - 1)
    d_o = within / n
    across = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                across += (pooled[i] - pooled[j]) ** 2
    d_e = across / (n * (n - 1))
    if d_e == 0.0:
        return 1.0
    return 1.0 - d_o / d_e


# ----------------------------------------------------------------------
# dataset export

EXPORT_COLUMNS = ["id", "original", "edit", "grades", "meanGrade"]


@dataclass(frozen=True)
class DatasetRow:
    id: str
    original: str  # replaced token wrapped as <token/>
    edit: str
    grades: str    # five digits 0-3, sorted descending
    mean_grade_str: str  # one-decimal rendering

    @property
    def grade_values(self) -> list[int]:
        return [int(ch) for ch in self.grades]

    @property
    def mean_grade(self) -> float:
        return sum(self.grade_values) / len(self.grade_values)


def _mean_grade_str(grades: list[int]) -> str:
    total = sum(grades)
    # exact one-decimal rendering of total/5 via integer arithmetic
    return f"{total // 5}.{total % 5 * 2}"


def dataset_rows(engine: "GameEngine") -> list[DatasetRow]:
    """One row per fully rated headline, in completion order."""
    rows = []
    for edit in engine.completed_edits():
        grades = sorted((r.grade for r in edit.ratings), reverse=True)
        rows.append(DatasetRow(
            id=edit.id,
            original=engine.original_marked(edit.id),
            edit=edit.substitute,
            grades="".join(str(g) for g in grades),
            mean_grade_str=_mean_grade_str(grades),
        ))
    return rows


def write_rows(rows: Iterable[DatasetRow], stream: io.TextIOBase) -> int:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(EXPORT_COLUMNS)
    n = 0
    for row in rows:
        writer.writerow([row.id, row.original, row.edit, row.grades,
                         row.mean_grade_str])
        n += 1
    return n


def export_dataset(engine: "GameEngine", destination: str | Path) -> int:
    rows = dataset_rows(engine)
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        return write_rows(rows, fh)


def export_bytes(engine: "GameEngine") -> bytes:
    buf = io.StringIO()
    write_rows(dataset_rows(engine), buf)
    return buf.getvalue().encode("utf-8")


def read_dataset(path: str | Path) -> list[DatasetRow]:
    """Parse an exported dataset (or a compatible external file). The id
    column is optional in external files; rows are synthesized ids then."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for i, record in enumerate(reader):
            grades = record["grades"].strip()
            rows.append(DatasetRow(
                id=record.get("id") or f"row{i + 1}",
                original=record["original"],
                edit=record["edit"],
                grades=grades,
                mean_grade_str=record.get("meanGrade")
                or _mean_grade_str([int(ch) for ch in grades]),
            ))
    return rows


# ----------------------------------------------------------------------
# quality report

@dataclass(frozen=True)
class QualityReport:
    size: int
    mean_funniness: float
    cost_per_datum_cents: float
    alpha: float | None  # None when fewer than two pairable units exist
    unique_word_pct: float
    editor_count: int
    rater_count: int

    def rendered(self) -> dict:
        """One-decimal renderings matching the published comparison table."""
        return {
            "size": self.size,
            "mean_funniness": f"{self.mean_funniness:.2f}",
            "cost_per_datum_cents": f"{self.cost_per_datum_cents:.1f}",
            "alpha": f"{self.alpha:.2f}" if self.alpha is not None else None,
            "unique_word_pct": f"{self.unique_word_pct:.1f}",
            "editor_count": self.editor_count,
            "rater_count": self.rater_count,
        }


def _report_from(units: list[Unit], substitutes: list[str], budget_cents: float,
                 editor_count: int, rater_count: int) -> QualityReport:
    size = len(units)
    if size == 0:
        raise EmptyDataset("no fully rated headlines")
    per_unit_means = [sum(g) / len(g) for _, g in units]
    unique_pct = 100.0 * len({s.lower() for s in substitutes}) / len(substitutes)
    try:
        alpha = krippendorff_alpha(units)
    except InsufficientData:
        alpha = None
    return QualityReport(
        size=size,
        mean_funniness=sum(per_unit_means) / size,
        cost_per_datum_cents=budget_cents / size,
        alpha=alpha,
        unique_word_pct=unique_pct,
        editor_count=editor_count,
        rater_count=rater_count,
    )


def quality_report(engine: "GameEngine", budget_cents: float) -> QualityReport:
    completed = engine.completed_edits()
    units: list[Unit] = [
        (e.id, [r.grade for r in e.ratings]) for e in completed]
    substitutes = [e.substitute for e in completed]
    editors = {e.editor_id for e in completed}
    raters = {r.rater_id for e in completed for r in e.ratings}
    return _report_from(units, substitutes, budget_cents,
                        len(editors), len(raters))


def quality_report_from_rows(rows: list[DatasetRow],
                             budget_cents: float) -> QualityReport:
    """Report computed from exported rows. Editor/rater identities are not
    part of the export, so those counts are zero here."""
    units: list[Unit] = [(row.id, row.grade_values) for row in rows]
    substitutes = [row.edit for row in rows]
    return _report_from(units, substitutes, budget_cents, 0, 0)


def play_time_hours(edit_count: int, rating_count: int,
                    seconds_per_edit: float = SECONDS_PER_EDIT,
                    seconds_per_rating: float = SECONDS_PER_RATING) -> float:
    """Implied collective play time from action counts and per-action costs."""
    return (edit_count * seconds_per_edit
            + rating_count * seconds_per_rating) / 3600.0


# ----------------------------------------------------------------------
# behavioral curves

@dataclass(frozen=True)
class CurvePoint:
    bin_index: int
    value: float
    count: int


@dataclass(frozen=True)
class Curves:
    funniness_by_completion: list[CurvePoint]
    edit_quality_by_experience: list[CurvePoint]
    rating_deviation_by_experience: list[CurvePoint]


def _binned(pairs: list[tuple[int, float]], bin_size: int) -> list[CurvePoint]:
    """Aggregate (index, value) pairs into consecutive index bins."""
    if not pairs:
        return []
    buckets: dict[int, list[float]] = {}
    for index, value in pairs:
        buckets.setdefault(index // bin_size, []).append(value)
    return [CurvePoint(b, sum(vs) / len(vs), len(vs))
            for b, vs in sorted(buckets.items())]


def improvement_curves(engine: "GameEngine", bin_size: int) -> Curves:
    """The three improvement-over-time series.

    (a) mean grade of fully rated headlines by completion order;
    (b) eventual mean grade of each player's i-th edit, pooled across
        players by edit index;
    (c) per-rating |grade - mean(others)| on settled headlines, pooled by
        each player's rating index.
    """
    if bin_size < 1:
        raise ValueError("bin_size must be >= 1")
    completed = engine.completed_edits()
    funniness = [(i, e.mean_grade()) for i, e in enumerate(completed)]

    edit_quality: list[tuple[int, float]] = []
    for pid in engine.players:
        for i, eid in enumerate(engine.player_edit_ids(pid)):
            edit = engine.edits[eid]
            if edit.completed_seq is not None:
                edit_quality.append((i, edit.mean_grade()))

    deviation: list[tuple[int, float]] = []
    for pid in engine.players:
        for i, (eid, grade, _) in enumerate(engine.player_rating_history(pid)):
            edit = engine.edits[eid]
            if edit.completed_seq is None:
                continue
            others = [r.grade for r in edit.ratings if r.rater_id != pid]
            deviation.append((i, abs(grade - sum(others) / len(others))))

    return Curves(
        funniness_by_completion=_binned(funniness, bin_size),
        edit_quality_by_experience=_binned(edit_quality, bin_size),
        rating_deviation_by_experience=_binned(deviation, bin_size),
    )


def write_curve_csv(points: list[CurvePoint], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["bin", "value", "count"])
        for p in points:
            writer.writerow([p.bin_index, f"{p.value:.6f}", p.count])


# ----------------------------------------------------------------------
# categories

def category_report(engine: "GameEngine") -> dict[str, dict[str, float]]:
    """Per-category supply share, edit uptake, fully rated share, and mean
    grade over the fully rated set."""
    supplied: dict[str, int] = {}
    edited_sources: dict[str, set[str]] = {}
    for source in engine.sources.values():
        supplied[source.category.value] = supplied.get(source.category.value, 0) + 1
    for edit in engine.edits.values():
        source = engine.sources[edit.source_id]
        edited_sources.setdefault(source.category.value, set()).add(source.id)
    completed = engine.completed_edits()
    fully_by_cat: dict[str, list[float]] = {}
    for edit in completed:
        cat = engine.sources[edit.source_id].category.value
        fully_by_cat.setdefault(cat, []).append(edit.mean_grade())

    total_supplied = sum(supplied.values())
    total_fully = len(completed)
    report = {}
    for cat in sorted(supplied):
        n_supplied = supplied[cat]
        n_edited = len(edited_sources.get(cat, ()))
        grades = fully_by_cat.get(cat, [])
        report[cat] = {
            "pct_supplied": 100.0 * n_supplied / total_supplied,
            "pct_edited": 100.0 * n_edited / n_supplied,
            "pct_fully_rated": (100.0 * len(grades) / total_fully
                                if total_fully else 0.0),
            "mean_grade": sum(grades) / len(grades) if grades else None,
        }
    return report


# ----------------------------------------------------------------------
# small stats helpers

def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (average ranks for ties)."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("spearman needs two equal-length series, n >= 2")

    def ranks(values: Sequence[float]) -> list[float]:
        order = sorted(range(len(values)), key=lambda i: values[i])
        rank = [0.0] * len(values)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for k in range(i, j + 1):
                rank[order[k]] = avg
            i = j + 1
        return rank

    rx, ry = ranks(xs), ranks(ys)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx * vy) ** 0.5
