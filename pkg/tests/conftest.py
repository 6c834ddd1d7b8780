#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试共用的构造函数与夹具
"""

from typing import Dict, Iterable, Optional, Sequence, Tuple

import pytest

from src.corpus import Authorship, CorpusStore, Institution, PaperRecord, VenueCorpus, extract_venue_dataset
from src.metrics import YearMatrix
from src.ontology import TopicOntology, load_ontology
from src.synthetic import TOY_ONTOLOGY


def paper(paper_id: str, year: Optional[int] = 2018, venue: Optional[str] = "v",
          authors: Sequence[Tuple[str, Optional[str]]] = (), refs: Sequence[str] = (),
          title: str = "", abstract: Optional[str] = None, keywords: Sequence[str] = ()) -> PaperRecord:
    """authors 为 (author_id, institution_id) 序列，位置按顺序分配"""
    return PaperRecord(
        paper_id=paper_id,
        year=year,
        venue_id=venue,
        title=title,
        abstract=abstract,
        keywords=tuple(keywords),
        authorships=tuple(Authorship(a, inst, i) for i, (a, inst) in enumerate(authors)),
        references=tuple(refs),
    )


def institutions(countries: Dict[str, str]) -> Dict[str, Institution]:
    """institution_id -> country_code"""
    return {iid: Institution(iid, iid.upper(), country) for iid, country in countries.items()}


def venue_corpus(records: Iterable[PaperRecord], venue: str = "v",
                 inst: Optional[Dict[str, str]] = None) -> VenueCorpus:
    store = CorpusStore(records, institutions(inst or {}))
    return extract_venue_dataset(store, venue)


@pytest.fixture(scope="session")
def toy_ontology() -> TopicOntology:
    return load_ontology(TOY_ONTOLOGY)


@pytest.fixture
def chain_ontology() -> TopicOntology:
    return load_ontology([
        "artificial intelligence\tsuperTopicOf\tmachine learning\n",
        "machine learning\tsuperTopicOf\tneural networks\n",
    ])


def matrix_row(matrix: YearMatrix, row_key) -> Dict[int, int]:
    """年份矩阵一行的非零单元格"""
    i = matrix.row_keys.index(row_key)
    return {year: int(v) for year, v in zip(matrix.col_years, matrix.cells[i]) if v}
