import pytest

from curveideals.corpus import ROW_IDS, run_corpus
from curveideals.errors import InputError


def test_full_corpus_passes():
    results = run_corpus()
    assert len(results) >= 15 and len(results) == len(ROW_IDS)
    assert [r.id for r in results if not r.passed] == []


def test_single_row():
    (res,) = run_corpus(["m2-not-reflexive-5-6-14"])
    assert res.passed


def test_unknown_row():
    with pytest.raises(InputError):
        run_corpus(["no-such-row"])


def test_ids_unique():
    assert len(set(ROW_IDS)) == len(ROW_IDS)
