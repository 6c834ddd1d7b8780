#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试引用指标：机构排名、期刊排名、年份矩阵与参考文献记忆
"""

import pytest

from conftest import matrix_row, paper, venue_corpus
from src.metrics import (CITED, CITING, institution_ranking, papers_per_year, reference_memory_matrix,
                         venue_citation_table, venue_year_matrix)


@pytest.fixture
def corpus():
    records = [
        paper("a1", 2018, "v", [("x", "i1"), ("y", "i2")], ["c1", "c2", "ghost"]),
        paper("a2", 2016, "v", [("z", "i1")], ["c1", "c3"]),
        paper("a3", None, "v", [], ["c1"]),
        paper("c1", 2017, "w"),
        paper("c2", 2017, "w"),
        paper("c3", 1904, None),
        paper("x1", 2019, "w", refs=["a1"]),
        paper("x2", 2019, "u", refs=["a2"]),
        paper("x3", None, "u", refs=["a1"]),
        paper("x4", 2020, None, refs=["a3"]),
    ]
    return venue_corpus(records, inst={"i1": "US"})


def test_institution_ranking_merges_unresolved_into_unknown(corpus):
    assert institution_ranking(corpus) == {"i1": 2, "unknown": 1}


def test_papers_per_year_skips_missing_years(corpus):
    assert papers_per_year(corpus) == {2018: 1, 2016: 1}
    assert papers_per_year(corpus, "citing") == {2019: 2, 2020: 1}


def test_cited_venues_count_reference_events(corpus):
    table = venue_citation_table(corpus, CITED)
    assert table.items() == (("w", 4), ("n/a", 1))
    assert venue_citation_table(corpus, CITED, top_k=1) == {"w": 4}


def test_citing_venues_count_papers(corpus):
    table = venue_citation_table(corpus, CITING)
    assert table.items() == (("u", 2), ("n/a", 1), ("w", 1))


def test_unknown_direction_is_rejected(corpus):
    with pytest.raises(ValueError):
        venue_citation_table(corpus, "sideways")


def test_cited_venue_matrix_uses_citing_paper_years(corpus):
    matrix = venue_year_matrix(corpus, CITED)
    assert matrix.row_keys == ("w", "n/a")
    assert matrix.col_years == (2016, 2017, 2018)
    assert matrix_row(matrix, "w") == {2016: 1, 2018: 2}
    assert matrix_row(matrix, "n/a") == {2016: 1}
    assert matrix.excluded == {"w": 1, "n/a": 0}
    assert matrix.row_totals() == venue_citation_table(corpus, CITED).as_dict()


def test_citing_venue_matrix(corpus):
    matrix = venue_year_matrix(corpus, CITING)
    assert matrix.row_keys == ("u", "n/a", "w")
    assert matrix.col_years == (2019, 2020)
    assert matrix.row_sums() == {"u": 1, "n/a": 1, "w": 1}
    assert matrix.excluded == {"u": 1, "n/a": 0, "w": 0}
    assert matrix.row_totals() == venue_citation_table(corpus, CITING).as_dict()
    assert matrix.to_dense_frame(with_excluded=True)["no_year"].tolist() == [1, 0, 0]


def test_reference_memory(corpus):
    memory = reference_memory_matrix(corpus)
    matrix = memory.matrix
    assert matrix.row_keys == (2016, 2018)
    assert matrix.col_years[0] == 1904
    assert matrix.col_years[-1] == 2017
    assert matrix_row(matrix, 2018) == {2017: 2}
    assert matrix_row(matrix, 2016) == {1904: 1, 2017: 1}
    assert memory.excluded == 2
    assert memory.total_references == sum(len(r.references) for r in corpus.accepted)


def test_reference_memory_row_sums_match_resolved_references():
    records = [
        paper("a1", 2018, "v", refs=["b1", "b2", "b3"]),
        paper("b1", 2017, "w"),
        paper("b2", 2017, "w"),
        paper("b3", 1904, "w"),
    ]
    memory = reference_memory_matrix(venue_corpus(records))
    assert matrix_row(memory.matrix, 2018) == {2017: 2, 1904: 1}
    assert memory.matrix.row_sums() == {2018: 3}
    assert memory.excluded == 0
