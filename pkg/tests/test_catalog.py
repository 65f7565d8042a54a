"""Tests for the fingerprint catalog."""

import json

import pytest

from qapn.boolfun import parse_lut_text
from qapn.catalog import Catalog, CatalogError
from qapn.equiv import fingerprint, random_ea_transform
from qapn.field import Field
from qapn.search import search

import random

CUBE6 = [Field(6).pow(x, 3) for x in range(64)]


def test_insert_lookup_roundtrip(tmp_path):
    cat = Catalog(tmp_path)
    bucket, created = cat.insert(CUBE6, origin="test", seed=1)
    assert created
    assert len(cat) == 1
    assert cat.lookup(fingerprint(CUBE6)) is bucket
    assert cat.tables(bucket) == [tuple(CUBE6)]
    again, created = cat.insert(CUBE6, origin="test")
    assert again is bucket and not created
    assert len(bucket.members) == 1


def test_same_fingerprint_collision_goes_undecided(tmp_path):
    cat = Catalog(tmp_path)
    cat.insert(CUBE6, origin="test")
    # an EA transform keeps the fingerprint but changes the table
    other = random_ea_transform(CUBE6, random.Random(5))
    assert fingerprint(other) == fingerprint(CUBE6)
    bucket, created = cat.insert(other, origin="test")
    assert created
    assert bucket.undecided
    assert len(bucket.members) == 2
    assert sorted(cat.tables(bucket)) == sorted([tuple(CUBE6), tuple(other)])


def test_distinct_classes_get_distinct_buckets(tmp_path):
    cat = Catalog(tmp_path)
    tables = [search(6, seed=s) for s in range(6)]
    for t in tables:
        cat.insert(t, origin="search")
    assert len(cat) == len({fingerprint(t) for t in tables})


def test_reload_verifies_and_preserves(tmp_path):
    cat = Catalog(tmp_path)
    cat.insert(CUBE6, origin="test", class_index=7, seed=42)
    cat2 = Catalog(tmp_path)
    assert len(cat2) == 1
    (bucket,) = cat2.buckets.values()
    assert bucket.members[0].origin == "test"
    assert bucket.members[0].class_index == 7
    assert bucket.members[0].seed == 42
    assert cat2.verify() == 1


def test_rejects_non_apn_and_cubic(tmp_path):
    cat = Catalog(tmp_path)
    with pytest.raises(CatalogError, match="not .*APN|non-APN"):
        cat.insert(list(range(64)), origin="test")
    cubic = [0] * 64
    for x in range(64):
        cubic[x] = Field(6).pow(x, 7)  # x^7 has degree 3
    with pytest.raises(CatalogError):
        cat.insert(cubic, origin="test")


def test_corruption_is_caught_on_load(tmp_path):
    cat = Catalog(tmp_path)
    bucket, _ = cat.insert(CUBE6, origin="test")
    path = tmp_path / bucket.members[0].file
    text = path.read_text()
    broken = text.replace(" 08 ", " 09 ", 1)
    assert broken != text
    path.write_text(broken)
    with pytest.raises(CatalogError):
        Catalog(tmp_path)


def test_missing_file_is_caught(tmp_path):
    cat = Catalog(tmp_path)
    bucket, _ = cat.insert(CUBE6, origin="test")
    (tmp_path / bucket.members[0].file).unlink()
    with pytest.raises(CatalogError, match="missing"):
        Catalog(tmp_path)


def test_export_reproduces_tables_byte_exactly(tmp_path):
    cat = Catalog(tmp_path / "cat")
    inputs = [search(6, seed=s) for s in range(4)] + [CUBE6]
    for t in inputs:
        cat.insert(t, origin="test")
    copies = cat.export(tmp_path / "out")
    assert len(copies) == len({tuple(t) for t in inputs})
    exported = {parse_lut_text(p.read_text()).lut for p in copies}
    assert exported == {tuple(t) for t in inputs}
    # byte-exact against the stored files
    for p in copies:
        stored = tmp_path / "cat" / "tables" / p.name
        assert p.read_bytes() == stored.read_bytes()


def test_open_missing_catalog_without_create(tmp_path):
    with pytest.raises(CatalogError, match="no catalog"):
        Catalog(tmp_path / "absent", create=False)


def test_index_is_sorted_and_stable(tmp_path):
    cat = Catalog(tmp_path)
    for s in range(4):
        cat.insert(search(6, seed=s), origin="search", seed=s)
    doc = json.loads((tmp_path / "index.json").read_text())
    keys = [b["key"] for b in doc["buckets"]]
    assert keys == sorted(keys)
