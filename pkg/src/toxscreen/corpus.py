"""Labeled tweet ingestion, label mapping and the shuffled train/test split.

Canonical on-disk formats:

* CSV  -- RFC-4180, UTF-8, header row ``id,text,label``
* JSONL -- one object per line with keys ``id`` (optional), ``text``, ``label``
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Iterable

from .rng import shuffled_indices


class Label(IntEnum):
    """Three-class scheme with its stable integer encoding."""

    HATEFUL = 0
    OFFENSIVE = 1
    CLEAN = 2

    @property
    def canonical_name(self) -> str:
        return self.name.lower()


#: Source label vocabularies mapped onto the three classes
#: (sexism/racism both count as hate speech).
_LABEL_MAP = {
    "hateful": Label.HATEFUL,
    "sexism": Label.HATEFUL,
    "racism": Label.HATEFUL,
    "offensive": Label.OFFENSIVE,
    "clean": Label.CLEAN,
    "neither": Label.CLEAN,
}


class CorpusError(ValueError):
    """Malformed dataset file; message names the 1-based line number."""


class UnknownLabelError(CorpusError):
    """Label string outside the known source vocabularies."""

    def __init__(self, raw_label: str):
        super().__init__(f'unknown label "{raw_label}"')
        self.raw_label = raw_label


@dataclass(frozen=True)
class RawRecord:
    id: str | None
    text: str
    raw_label: str


@dataclass(frozen=True)
class LabeledTweet:
    id: str | None
    text: str
    label: Label


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float
    seed: int

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(
                f"train_fraction must be in (0, 1), got {self.train_fraction}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


def map_label(raw_label: str) -> Label:
    """Map a source label string onto the three-class scheme.

    Case-insensitive over the six known source strings; anything else
    raises :class:`UnknownLabelError`.
    """
    label = _LABEL_MAP.get(raw_label.strip().lower())
    if label is None:
        raise UnknownLabelError(raw_label)
    return label


def _load_csv(path: Path) -> list[RawRecord]:
    records: list[RawRecord] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header_seen = False
        for row in reader:
            lineno = reader.line_num
            if not header_seen:
                header_seen = True
                continue
            if len(row) != 3:
                raise CorpusError(f"{path}: line {lineno}: expected 3 columns, got {len(row)}")
            rec_id, text, raw_label = row
            if text == "":
                raise CorpusError(f"{path}: line {lineno}: empty text field")
            records.append(RawRecord(id=rec_id or None, text=text, raw_label=raw_label))
    return records


def _load_jsonl(path: Path) -> list[RawRecord]:
    records: list[RawRecord] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip() == "":
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"{path}: line {lineno}: expected a JSON object")
            text = obj.get("text")
            raw_label = obj.get("label")
            if not isinstance(text, str) or text == "":
                raise CorpusError(f"{path}: line {lineno}: missing or empty 'text'")
            if not isinstance(raw_label, str):
                raise CorpusError(f"{path}: line {lineno}: missing 'label'")
            rec_id = obj.get("id")
            if rec_id is not None and not isinstance(rec_id, str):
                raise CorpusError(f"{path}: line {lineno}: 'id' must be a string")
            records.append(RawRecord(id=rec_id, text=text, raw_label=raw_label))
    return records


def load_records(path: str | Path, format: str) -> list[RawRecord]:
    """Load raw records from a CSV or JSONL dataset file, preserving order."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    if format == "csv":
        return _load_csv(path)
    if format == "jsonl":
        return _load_jsonl(path)
    raise ValueError(f"unknown format {format!r}, expected 'csv' or 'jsonl'")


def label_records(records: Iterable[RawRecord]) -> list[LabeledTweet]:
    """Map raw labels onto the three-class scheme, keeping source order."""
    return [
        LabeledTweet(id=r.id, text=r.text, label=map_label(r.raw_label))
        for r in records
    ]


def load_labeled(path: str | Path, format: str) -> list[LabeledTweet]:
    return label_records(load_records(path, format))


def shuffle_split(
    records: list[LabeledTweet], spec: SplitSpec
) -> tuple[list[LabeledTweet], list[LabeledTweet]]:
    """Seeded Fisher-Yates shuffle followed by the train/test cut.

    The permutation is determined solely by ``spec.seed``; the train part
    receives ``floor(n * train_fraction)`` records.
    """
    if not records:
        raise ValueError("cannot split an empty record list")
    perm = shuffled_indices(len(records), spec.seed)
    n_train = math.floor(len(records) * spec.train_fraction)
    shuffled = [records[i] for i in perm]
    return shuffled[:n_train], shuffled[n_train:]


def write_csv(path: str | Path, records: Iterable[LabeledTweet]) -> None:
    """Write records in the canonical CSV format (header ``id,text,label``)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "text", "label"])
        for rec in records:
            writer.writerow([rec.id or "", rec.text, rec.label.canonical_name])


def write_jsonl(path: str | Path, records: Iterable[LabeledTweet]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            obj: dict = {}
            if rec.id is not None:
                obj["id"] = rec.id
            obj["text"] = rec.text
            obj["label"] = rec.label.canonical_name
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
