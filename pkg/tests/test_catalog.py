from __future__ import annotations

import pytest

from amenable_kit.catalog import (
    DEFAULT_PARAMS,
    full_params,
    get_entry,
    kappa_agreement,
    list_entries,
    load_catalog,
    verify_entry,
    witness_fits,
)
from amenable_kit.refnum import mp


def test_catalog_shape():
    entries = load_catalog()
    assert len(entries) == 23
    assert sum(e.table == 1 for e in entries) == 19
    assert sum(e.table == 2 for e in entries) == 4
    assert len({e.id for e in entries}) == 23
    assert all(e.failure for e in entries if e.expected == "non-amenable")


def test_filters():
    assert len(list_entries("amenable")) == 19
    assert len(list_entries("non-amenable")) == 4
    assert get_entry("T1-19").source == "T1-19"
    with pytest.raises(KeyError):
        get_entry("nope")


def test_params_are_derived():
    p = full_params({"k1": -3, "k2": 2})
    assert p["u"] == 3 and p["k"] == DEFAULT_PARAMS["k"]


def test_other_instantiation_of_a_template():
    e = get_entry("T1-5")
    r = verify_entry(e, {"k1": 0, "k2": 2})
    assert r.match, r.problems


def test_kappa_agreement_counts_points():
    worst, count, _ = kappa_agreement(get_entry("T1-1").instantiate(), n=100)
    assert count >= 90 and worst < 1e-8


def test_witness_patterns():
    assert witness_fits(3 * mp.pi + mp.pi / 2, "k*pi+pi/2")
    assert witness_fits(-4 * mp.pi, "k*pi")
    assert not witness_fits(3.0, "k*pi")


def test_every_row_matches(catalog_reports):
    bad = [p for r in catalog_reports for p in r.problems]
    assert not bad, bad


def test_records_are_json_ready(catalog_reports):
    import json

    recs = [r.record() for r in catalog_reports]
    json.dumps(recs)
    assert all(rec["status"] == "match" for rec in recs)
