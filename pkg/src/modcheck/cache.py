"""On-disk a_p cache.

Plain CSV with a format comment and a header::

    # modcheck ap-cache format 1
    curveId,p,ap,good
    "[0,-1,1,-10,-20]",2,-2,1

The cache only accelerates; a sample of hits is recomputed on every run and
any disagreement (or unparseable line) is reported as an audit failure.
"""

from __future__ import annotations

import csv
import io
import os
import random
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

FORMAT_LINE = "# modcheck ap-cache format 1"
HEADER = ["curveId", "p", "ap", "good"]
CACHE_DIR_ENV = "MODCHECK_CACHE_DIR"
CACHE_FILENAME = "ap_cache.csv"
DEFAULT_AUDIT_RATE = 0.05


@dataclass(frozen=True)
class ApCacheEntry:
    curve_id: str
    p: int
    ap: int
    good: bool


@dataclass
class AuditFailure:
    reason: str
    line: int | None = None
    curve_id: str | None = None
    p: int | None = None

    def as_dict(self) -> dict:
        return {"reason": self.reason, "line": self.line, "curveId": self.curve_id, "p": self.p}


def default_cache_path() -> Path | None:
    root = os.environ.get(CACHE_DIR_ENV)
    return Path(root) / CACHE_FILENAME if root else None


@dataclass
class ApCache:
    path: Path
    audit_rate: float = DEFAULT_AUDIT_RATE
    entries: dict[tuple[str, int], ApCacheEntry] = field(default_factory=dict)
    failures: list[AuditFailure] = field(default_factory=list)
    hits: int = 0
    audited: int = 0
    dirty: bool = False
    rng: random.Random = field(default_factory=random.Random)

    @classmethod
    def open(cls, path, audit_rate: float = DEFAULT_AUDIT_RATE, seed: int | None = None) -> ApCache:
        cache = cls(Path(path), audit_rate, rng=random.Random(seed))
        if cache.path.exists():
            cache._load()
        return cache

    def _load(self):
        text = self.path.read_text()
        lines = text.splitlines()
        for lineno, raw in enumerate(lines, start=1):
            if not raw.strip() or raw.startswith("#"):
                continue
            row = next(csv.reader([raw]))
            if row == HEADER:
                continue
            try:
                curve_id, p, ap, good = row
                entry = ApCacheEntry(curve_id, int(p), int(ap), {"1": True, "0": False}[good])
            except (ValueError, KeyError):
                self.failures.append(AuditFailure(f"corrupt cache line: {raw!r}", line=lineno))
                self.dirty = True
                continue
            key = (entry.curve_id, entry.p)
            if key in self.entries:
                self.failures.append(AuditFailure("duplicate cache key", lineno, entry.curve_id, entry.p))
                self.dirty = True
                continue
            self.entries[key] = entry

    def get(self, curve_id: str, p: int, compute) -> tuple[int, bool]:
        """Cached (a_p, good), or ``compute(p)`` on a miss.  Hits are audited."""
        entry = self.entries.get((curve_id, p))
        if entry is None:
            ap, good = compute(p)
            self.entries[(curve_id, p)] = ApCacheEntry(curve_id, p, ap, good)
            self.dirty = True
            return ap, good
        self.hits += 1
        if self.rng.random() < self.audit_rate:
            self.audited += 1
            ap, good = compute(p)
            if (ap, good) != (entry.ap, entry.good):
                self.failures.append(AuditFailure(
                    f"cached a_p={entry.ap} good={entry.good} but recomputed a_p={ap} good={good}",
                    curve_id=curve_id, p=p))
                self.entries[(curve_id, p)] = ApCacheEntry(curve_id, p, ap, good)
                self.dirty = True
                return ap, good
        return entry.ap, entry.good

    def put(self, entry: ApCacheEntry):
        self.entries[(entry.curve_id, entry.p)] = entry
        self.dirty = True

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write(FORMAT_LINE + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        for key in sorted(self.entries):
            e = self.entries[key]
            writer.writerow([e.curve_id, e.p, e.ap, 1 if e.good else 0])
        return buf.getvalue()

    def save(self):
        """Whole-file replace; never leaves a partially written cache."""
        if not self.dirty:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".ap_cache.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(self.dumps())
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.dirty = False
