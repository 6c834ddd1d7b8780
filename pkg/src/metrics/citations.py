#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
引用相关指标
机构排名、被引/施引期刊排名、按年份的引用矩阵与参考文献记忆
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

from ..corpus import NA_VENUE, UNKNOWN, Institution, PaperRecord, VenueCorpus, contributions
from .tables import CountTable, YearMatrix

logger = logging.getLogger(__name__)

CITED = "cited"
CITING = "citing"
DIRECTIONS = (CITED, CITING)


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"未知的方向: {direction}（可选: {', '.join(DIRECTIONS)}）")


def _institution_key(institution_id: Optional[str], institutions: Mapping[str, Institution]) -> str:
    return institution_id if institution_id and institution_id in institutions else UNKNOWN


def _venue_key(record: PaperRecord) -> str:
    return record.venue_id if record.venue_id is not None else NA_VENUE


def _resolved_references(corpus: VenueCorpus) -> Dict[str, PaperRecord]:
    return {record.paper_id: record for record in corpus.cited}


def institution_ranking(corpus: VenueCorpus, partition: str = "accepted") -> CountTable:
    """
    按贡献数统计机构，未知机构合并为 "unknown"

    Args:
        corpus: 期刊/会议语料
        partition: 统计的分区

    Returns:
        机构计数表
    """
    institutions = corpus.institutions
    counts: Counter = Counter()
    for paper in corpus.partition(partition):
        for contribution in contributions(paper, institutions):
            counts[_institution_key(contribution.institution_id, institutions)] += 1
    return CountTable(counts, key_name="institution_id")


def papers_per_year(corpus: VenueCorpus, partition: str = "accepted") -> CountTable:
    """每年的文献数，缺少年份的文献不计"""
    return CountTable.from_keys(
        (paper.year for paper in corpus.partition(partition) if paper.year is not None),
        key_name="year",
    )


def venue_citation_table(corpus: VenueCorpus, direction: str = CITED, top_k: Optional[int] = 30) -> CountTable:
    """
    被引/施引期刊排名

    cited: 统计 accepted 文献指向各期刊的参考文献条数
    citing: 统计各期刊中施引文献的篇数
    期刊缺失的文献合并为 "n/a"；先完整聚合再截断到 top_k
    """
    _check_direction(direction)
    counts: Counter = Counter()
    if direction == CITED:
        resolved = _resolved_references(corpus)
        for paper in corpus.accepted:
            for ref in paper.references:
                target = resolved.get(ref)
                if target is not None:
                    counts[_venue_key(target)] += 1
    else:
        for paper in corpus.citing:
            counts[_venue_key(paper)] += 1
    return CountTable(counts, key_name="venue_id").top(top_k)


def venue_year_matrix(corpus: VenueCorpus, direction: str = CITED, top_k: Optional[int] = 30) -> YearMatrix:
    """
    前 top_k 个期刊按年份展开的引用矩阵

    cited: 列为 accepted 文献（施引方）的年份，单元格为参考文献条数
    citing: 列为施引文献的年份，单元格为施引文献篇数
    年份缺失的事件记入 excluded，每行满足 行和 + excluded == venue_citation_table 计数
    """
    table = venue_citation_table(corpus, direction, top_k)
    rows = table.keys()
    wanted = set(rows)
    counts: Counter = Counter()
    excluded: Counter = Counter()

    def count(venue: str, year: Optional[int]) -> None:
        if venue not in wanted:
            return
        if year is None:
            excluded[venue] += 1
        else:
            counts[(venue, year)] += 1

    if direction == CITED:
        resolved = _resolved_references(corpus)
        for paper in corpus.accepted:
            for ref in paper.references:
                target = resolved.get(ref)
                if target is not None:
                    count(_venue_key(target), paper.year)
    else:
        for paper in corpus.citing:
            count(_venue_key(paper), paper.year)
    if excluded:
        logger.debug(f"{corpus.venue_id} {direction}: {sum(excluded.values())} 个事件缺少年份，未进入矩阵")
    return YearMatrix.from_counts(counts, row_keys=rows, row_name="venue_id", excluded=excluded)


@dataclass(frozen=True)
class ReferenceMemory:
    """
    参考文献记忆矩阵

    matrix: 行为 accepted 文献年份，列为被引文献年份
    excluded: 未进入矩阵的参考文献条数（无法解析或任一端缺少年份）
    """
    matrix: YearMatrix
    excluded: int

    @property
    def total_references(self) -> int:
        return self.matrix.total + self.excluded


def reference_memory_matrix(corpus: VenueCorpus) -> ReferenceMemory:
    resolved = _resolved_references(corpus)
    counts: Counter = Counter()
    excluded = 0
    for paper in corpus.accepted:
        for ref in paper.references:
            target = resolved.get(ref)
            if paper.year is None or target is None or target.year is None:
                excluded += 1
                continue
            counts[(paper.year, target.year)] += 1

    rows = sorted({paper.year for paper in corpus.accepted if paper.year is not None})
    matrix = YearMatrix.from_counts(counts, row_keys=rows, row_name="citing_year")
    if excluded:
        logger.debug(f"{corpus.venue_id}: {excluded} 条参考文献未进入记忆矩阵")
    return ReferenceMemory(matrix, excluded)
