"""Streaming moderation gateway: classify, annotate or filter JSONL
tweet records flowing between a producer and a consumer.

Sources yield one JSON object per line with required non-empty ``id``
and ``text``; every other key passes through untouched.  The gateway
annotates each record with ``label`` and per-class ``scores``, and in
filter mode drops records whose label is blocked.  An optional
fixed-capacity read limiter emulates a 15-minute API read quota; its
clock is injectable so behaviour is testable without waiting.
"""

from __future__ import annotations

import json
import socket
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Protocol

from .corpus import Label
from .pipeline import TrainedPipeline

DEFAULT_BLOCKED = frozenset({Label.HATEFUL, Label.OFFENSIVE})
DEFAULT_WINDOW_SECONDS = 900.0  # the 15-minute read quota window
DEFAULT_CAPACITY = 15


class InvalidRecordError(ValueError):
    """Record missing id/text or carrying wrong types."""


@dataclass(frozen=True)
class TweetRecord:
    id: str
    text: str
    passthrough: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id or not isinstance(self.id, str):
            raise InvalidRecordError("record needs a non-empty string 'id'")
        if not self.text or not isinstance(self.text, str):
            raise InvalidRecordError("record needs a non-empty string 'text'")


@dataclass(frozen=True)
class StreamPolicy:
    mode: str = "annotate"  # "annotate" | "filter"
    blocked: frozenset[Label] = DEFAULT_BLOCKED

    def __post_init__(self):
        if self.mode not in ("annotate", "filter"):
            raise ValueError(f"mode must be 'annotate' or 'filter', got {self.mode!r}")


@dataclass
class StreamStats:
    read: int = 0
    emitted: int = 0
    suppressed: int = 0
    skipped_invalid: int = 0
    label_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "read": self.read,
                "emitted": self.emitted,
                "suppressed": self.suppressed,
                "skipped_invalid": self.skipped_invalid,
                "label_counts": self.label_counts,
            }
        )


class SinkError(RuntimeError):
    """Sink write failure; carries the statistics gathered so far."""

    def __init__(self, cause: BaseException, stats: StreamStats):
        super().__init__(f"sink write failed: {cause}")
        self.stats = stats


# ---------------------------------------------------------------------------
# Rate limiting


class Clock(Protocol):
    def now(self) -> float: ...
    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)


@dataclass(frozen=True)
class GateDecision:
    proceed: bool
    wait_seconds: float = 0.0


class RateLimiter:
    """At most ``capacity`` proceeds inside any window-length interval.

    Keeps the timestamps of the most recent admitted reads; a request is
    admitted once the oldest retained timestamp has aged out of the
    window.  Timestamps must be non-decreasing.
    """

    def __init__(
        self,
        capacity: int = DEFAULT_CAPACITY,
        window: float = DEFAULT_WINDOW_SECONDS,
    ):
        if capacity < 0:
            raise ValueError(f"capacity must be >= 0, got {capacity}")
        if window <= 0:
            raise ValueError(f"window must be positive, got {window}")
        self.capacity = capacity
        self.window = window
        self._admitted: list[float] = []
        self._last_now: float | None = None

    @property
    def window_start(self) -> float | None:
        """Start of the window currently constraining admission."""
        return self._admitted[0] if self._admitted else None

    @property
    def count(self) -> int:
        return len(self._admitted)


def rate_gate(limiter: RateLimiter, now: float) -> GateDecision:
    """Admit or defer a read at time ``now``."""
    if limiter._last_now is not None and now < limiter._last_now:
        raise ValueError(
            f"clock went backwards: {now} < {limiter._last_now}"
        )
    limiter._last_now = now
    if limiter.capacity == 0:
        return GateDecision(proceed=False, wait_seconds=limiter.window)
    cutoff = now - limiter.window
    admitted = limiter._admitted
    while admitted and admitted[0] <= cutoff:
        admitted.pop(0)
    if len(admitted) < limiter.capacity:
        admitted.append(now)
        return GateDecision(proceed=True)
    return GateDecision(proceed=False, wait_seconds=(admitted[0] + limiter.window) - now)


# ---------------------------------------------------------------------------
# Record handling


def parse_record(line: str) -> TweetRecord:
    """Parse one JSONL line, preserving unknown keys and their order."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InvalidRecordError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InvalidRecordError("expected a JSON object")
    rec_id = obj.get("id")
    text = obj.get("text")
    if not isinstance(rec_id, str) or not rec_id:
        raise InvalidRecordError("record needs a non-empty string 'id'")
    if not isinstance(text, str) or not text:
        raise InvalidRecordError("record needs a non-empty string 'text'")
    passthrough = {k: v for k, v in obj.items() if k not in ("id", "text")}
    return TweetRecord(id=rec_id, text=text, passthrough=passthrough)


def classify_record(rec: TweetRecord, pipeline: TrainedPipeline) -> dict[str, Any]:
    """Annotated output record: input fields plus ``label`` and ``scores``."""
    label, score_values = pipeline.classify_text(rec.text)
    out: dict[str, Any] = {"id": rec.id, "text": rec.text}
    out.update(rec.passthrough)
    out["label"] = label.canonical_name
    out["scores"] = {
        cls.canonical_name: float(s)
        for cls, s in zip(pipeline.classifier.classes, score_values)
    }
    return out


def run_stream(
    source: Iterable[str],
    sink: Callable[[str], None],
    policy: StreamPolicy,
    pipeline: TrainedPipeline,
    limiter: RateLimiter | None = None,
    clock: Clock | None = None,
) -> StreamStats:
    """Classify a line stream; emit annotated JSONL in input order.

    Invalid lines are counted and skipped.  When a limiter is given,
    each source read is gated (sleeping out any imposed wait) before the
    line is consumed.  Sink failures abort with stats so far attached.
    """
    stats = StreamStats()
    clk = clock if clock is not None else SystemClock()
    for line in _gated(source, limiter, clk):
        if line.strip() == "":
            continue
        stats.read += 1
        try:
            rec = parse_record(line)
            out = classify_record(rec, pipeline)
        except InvalidRecordError:
            stats.skipped_invalid += 1
            continue
        label_name = out["label"]
        stats.label_counts[label_name] = stats.label_counts.get(label_name, 0) + 1
        if policy.mode == "filter" and Label[label_name.upper()] in policy.blocked:
            stats.suppressed += 1
            continue
        try:
            sink(json.dumps(out, ensure_ascii=False) + "\n")
        except OSError as exc:
            raise SinkError(exc, stats) from exc
        stats.emitted += 1
    return stats


def _gated(
    source: Iterable[str], limiter: RateLimiter | None, clock: Clock
) -> Iterator[str]:
    if limiter is None:
        yield from source
        return
    for line in source:
        while True:
            decision = rate_gate(limiter, clock.now())
            if decision.proceed:
                break
            clock.sleep(decision.wait_seconds)
        yield line


# ---------------------------------------------------------------------------
# Sources


def file_line_source(path: str | Path) -> Iterator[str]:
    with Path(path).open("r", encoding="utf-8") as fh:
        yield from fh


def tcp_line_source(host: str, port: int) -> Iterator[str]:
    """Listen, accept a single connection and yield its lines; the
    stream ends when the peer closes."""
    server = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        server.bind((host, port))
        server.listen(1)
        conn, _ = server.accept()
        with conn, conn.makefile("r", encoding="utf-8", newline="\n") as fh:
            yield from fh
    finally:
        server.close()
