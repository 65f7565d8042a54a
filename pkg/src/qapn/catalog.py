"""Directory-backed store of quadratic APN tables keyed by fingerprint.

One bucket per ortho-derivative fingerprint, one .lut file per function,
one JSON index.  Distinct tables landing in the same bucket cannot be
told apart by the invariant, so the bucket keeps every member and is
flagged undecided rather than silently merged.  Writes go through an
exclusive file lock; everything re-verifies on load.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import pathlib
import shutil
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Iterator, Sequence

from .boolfun import algebraic_degree, format_lut_text, is_apn, parse_lut_text
from .equiv import Fingerprint, fingerprint

INDEX_NAME = "index.json"
TABLE_DIR = "tables"


class CatalogError(Exception):
    pass


@dataclass
class Member:
    file: str
    origin: str
    class_index: int | None = None
    seed: int | None = None
    timestamp: str = ""


@dataclass
class Bucket:
    key: str
    odw: str
    odd: str
    undecided: bool = False
    members: list[Member] = field(default_factory=list)

    @property
    def fp(self) -> Fingerprint:
        return Fingerprint(self.odw, self.odd)


def _fp_key(fp: Fingerprint) -> str:
    return hashlib.sha256(str(fp).encode()).hexdigest()[:12]


def _table_tag(table: Sequence[int]) -> str:
    return hashlib.sha256(",".join(map(str, table)).encode()).hexdigest()[:10]


class Catalog:
    """The persistent fingerprint catalog rooted at a directory."""

    def __init__(self, root: str | pathlib.Path, create: bool = True):
        self.root = pathlib.Path(root)
        if create:
            (self.root / TABLE_DIR).mkdir(parents=True, exist_ok=True)
        elif not (self.root / INDEX_NAME).exists():
            raise CatalogError(f"no catalog at {self.root}")
        self.buckets: dict[str, Bucket] = {}
        if (self.root / INDEX_NAME).exists():
            self._load()

    # -- persistence --------------------------------------------------------

    def _load(self) -> None:
        try:
            raw = json.loads((self.root / INDEX_NAME).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CatalogError(f"unreadable index: {exc}") from exc
        for b in raw.get("buckets", []):
            bucket = Bucket(b["key"], b["odw"], b["odd"], b.get("undecided", False),
                            [Member(**m) for m in b.get("members", [])])
            self.buckets[bucket.key] = bucket
        self.verify()

    def _save(self) -> None:
        doc = {
            "version": 1,
            "buckets": [asdict(b) for b in
                        sorted(self.buckets.values(), key=lambda b: b.key)],
        }
        tmp = self.root / (INDEX_NAME + ".tmp")
        tmp.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        tmp.replace(self.root / INDEX_NAME)

    @contextmanager
    def _locked(self) -> Iterator[None]:
        # single-writer: everything that mutates the store runs under this
        path = self.root / ".lock"
        with open(path, "w") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    # -- queries ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.buckets)

    def tables(self, bucket: Bucket) -> list[tuple[int, ...]]:
        out = []
        for m in bucket.members:
            out.append(parse_lut_text((self.root / m.file).read_text()).lut)
        return out

    def lookup(self, fp: Fingerprint) -> Bucket | None:
        return self.buckets.get(_fp_key(fp))

    def verify(self) -> int:
        """Re-check every stored table; the member count on success."""
        checked = 0
        for bucket in self.buckets.values():
            seen = set()
            for m in bucket.members:
                path = self.root / m.file
                if not path.exists():
                    raise CatalogError(f"missing table file {m.file}")
                t = parse_lut_text(path.read_text()).lut
                if not is_apn(t):
                    raise CatalogError(f"{m.file}: stored table is not APN")
                if algebraic_degree(t) > 2:
                    raise CatalogError(f"{m.file}: stored table has degree > 2")
                if _fp_key(fingerprint(t)) != bucket.key:
                    raise CatalogError(f"{m.file}: fingerprint does not match its bucket")
                seen.add(t)
                checked += 1
            if bucket.undecided != (len(seen) > 1):
                raise CatalogError(f"bucket {bucket.key}: undecided flag is stale")
        return checked

    # -- mutation -----------------------------------------------------------

    def insert(self, table: Sequence[int], origin: str,
               class_index: int | None = None,
               seed: int | None = None) -> tuple[Bucket, bool]:
        """Store a table; (bucket, whether anything new was written)."""
        t = tuple(table)
        if not is_apn(t):
            raise CatalogError("refusing to store a non-APN table")
        if algebraic_degree(t) > 2:
            raise CatalogError("refusing to store a table of degree > 2")
        fp = fingerprint(t)
        key = _fp_key(fp)
        with self._locked():
            bucket = self.buckets.get(key)
            if bucket is None:
                bucket = Bucket(key, fp.odw, fp.odd)
                self.buckets[key] = bucket
            if t in set(self.tables(bucket)):
                return bucket, False
            name = f"{TABLE_DIR}/{key}_{_table_tag(t)}.lut"
            (self.root / name).write_text(
                format_lut_text(t, comment=f"catalog entry, bucket {key}"))
            bucket.members.append(Member(
                file=name, origin=origin, class_index=class_index, seed=seed,
                timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds")))
            bucket.undecided = len(bucket.members) > 1
            self._save()
            return bucket, True

    def export(self, dest: str | pathlib.Path) -> list[pathlib.Path]:
        """Copy every stored .lut byte-exactly into dest; the copied paths."""
        dest = pathlib.Path(dest)
        dest.mkdir(parents=True, exist_ok=True)
        out = []
        for bucket in sorted(self.buckets.values(), key=lambda b: b.key):
            for m in bucket.members:
                target = dest / pathlib.Path(m.file).name
                shutil.copyfile(self.root / m.file, target)
                out.append(target)
        return out
