#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
研究主题趋势
主题按年份计数、增长率分组排名、时段占比与时段对比、按主题的国家分布
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..classifier import TopicAnnotation
from ..corpus import PaperRecord, VenueCorpus
from ..ontology import TopicOntology
from .geopolitics import _country_table
from .tables import CountTable, YearMatrix

TopicCounts = Dict[str, Dict[int, int]]


def _topics_of(annotations: Mapping[str, TopicAnnotation], paper_id: str) -> Iterable[str]:
    annotation = annotations.get(paper_id)
    return annotation.all_topics if annotation is not None else ()


def topic_counts_by_year(annotations: Mapping[str, TopicAnnotation], records: Iterable[PaperRecord]) -> TopicCounts:
    """
    每个主题每年的文献数（直接主题与推断主题都计入）

    Returns:
        topic_id -> {年份: 文献数}，均已排序
    """
    counts: Dict[str, Counter] = {}
    for paper in records:
        if paper.year is None:
            continue
        for topic_id in _topics_of(annotations, paper.paper_id):
            counts.setdefault(topic_id, Counter())[paper.year] += 1
    return {tid: dict(sorted(by_year.items())) for tid, by_year in sorted(counts.items())}


def topic_year_matrix(annotations: Mapping[str, TopicAnnotation], records: Iterable[PaperRecord]) -> YearMatrix:
    counts = topic_counts_by_year(annotations, records)
    cells = {(tid, year): n for tid, by_year in counts.items() for year, n in by_year.items()}
    return YearMatrix.from_counts(cells, row_keys=list(counts), row_name="topic_id")


@dataclass(frozen=True)
class TrendEntry:
    topic_id: str
    label: str
    start_count: int
    end_count: int

    @property
    def ratio(self) -> float:
        """end/start；start 为0时为无穷大"""
        if self.start_count == 0:
            return math.inf
        return self.end_count / self.start_count

    @property
    def infinite_growth(self) -> bool:
        return self.start_count == 0


@dataclass(frozen=True)
class TrendGroup:
    """结束年份计数落在 [lower, upper) 内的主题；upper 为 None 表示无上界"""
    lower: int
    upper: Optional[int]
    entries: Tuple[TrendEntry, ...]

    def contains(self, count: int) -> bool:
        return count >= self.lower and (self.upper is None or count < self.upper)


def _check_thresholds(thresholds: Sequence[int]) -> None:
    if not thresholds:
        raise ValueError("分组阈值不能为空")
    if any(t <= 0 for t in thresholds):
        raise ValueError(f"分组阈值必须为正数: {list(thresholds)}")
    if any(a <= b for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError(f"分组阈值必须严格递减: {list(thresholds)}")


def _trend_sort_key(entry: TrendEntry) -> Tuple[int, float, int, str]:
    return (0 if entry.infinite_growth else 1, -entry.ratio if not entry.infinite_growth else 0.0,
            -entry.end_count, entry.label)


def topic_trend_analysis(counts_by_year: Mapping[str, Mapping[int, int]], start_year: int = 2009,
                         end_year: int = 2018, group_thresholds: Sequence[int] = (60, 20, 10, 5),
                         ontology: Optional[TopicOntology] = None) -> List[TrendGroup]:
    """
    按结束年份的文献数把主题分组，组内按增长率排序

    Args:
        counts_by_year: topic_id -> {年份: 文献数}
        start_year: 起始年份
        end_year: 结束年份
        group_thresholds: 严格递减的分组下界，如 [60, 20, 10, 5]
        ontology: 用于显示主标签，缺省时以 topic_id 作标签

    Returns:
        与阈值一一对应的分组；起始年份为0的主题排在组内最前，其次按增长率降序，
        相同时按结束年份计数降序、再按标签升序

    Raises:
        ValueError: 阈值不严格递减，或 start_year >= end_year
    """
    _check_thresholds(group_thresholds)
    if start_year >= end_year:
        raise ValueError(f"起始年份必须早于结束年份: {start_year} >= {end_year}")

    def label_of(topic_id: str) -> str:
        if ontology is not None and topic_id in ontology:
            return ontology.topic(topic_id).primary_label
        return topic_id

    groups: List[TrendGroup] = []
    upper: Optional[int] = None
    for lower in group_thresholds:
        entries = [
            TrendEntry(tid, label_of(tid), by_year.get(start_year, 0), by_year.get(end_year, 0))
            for tid, by_year in counts_by_year.items()
        ]
        members = sorted(
            (e for e in entries if e.end_count >= lower and (upper is None or e.end_count < upper)),
            key=_trend_sort_key,
        )
        groups.append(TrendGroup(lower, upper, tuple(members)))
        upper = lower
    return groups


@dataclass(frozen=True)
class TopicShare:
    topic_id: str
    papers: int
    total_papers: int

    @property
    def share_pct(self) -> float:
        return 100.0 * self.papers / self.total_papers if self.total_papers else 0.0


def topic_shares(annotations: Mapping[str, TopicAnnotation], records: Iterable[PaperRecord],
                 start_year: int, end_year: int) -> List[TopicShare]:
    """
    [start_year, end_year] 内带有各主题的文献占比

    分母为该时段全部文献（含未标注的），一篇文献可属于多个主题，占比之和不为100
    """
    in_period = [p for p in records if p.year is not None and start_year <= p.year <= end_year]
    table = CountTable.from_keys(
        (tid for paper in in_period for tid in _topics_of(annotations, paper.paper_id)),
        key_name="topic_id",
    )
    return [TopicShare(tid, count, len(in_period)) for tid, count in table.items()]


@dataclass(frozen=True)
class PeriodComparison:
    topic_id: str
    first_period: int
    second_period: int


def topic_period_comparison(counts_by_year: Mapping[str, Mapping[int, int]], topics: Iterable[str],
                            start_year: int, split_year: int, end_year: int) -> List[PeriodComparison]:
    """
    两个时段 [start_year, split_year] 与 (split_year, end_year] 的主题文献数对比
    """
    if not start_year <= split_year < end_year:
        raise ValueError(f"需要 start_year <= split_year < end_year: {start_year}, {split_year}, {end_year}")
    rows = []
    for topic_id in topics:
        by_year = counts_by_year.get(topic_id, {})
        first = sum(n for year, n in by_year.items() if start_year <= year <= split_year)
        second = sum(n for year, n in by_year.items() if split_year < year <= end_year)
        rows.append(PeriodComparison(topic_id, first, second))
    return rows


def topic_country_distribution(corpus: VenueCorpus, annotations: Mapping[str, TopicAnnotation],
                               topic_id: str, ontology: TopicOntology,
                               top_n: Optional[int] = None) -> CountTable:
    """
    只统计标注了 topic_id（直接或推断）的 accepted 文献的国家分布

    Raises:
        NotFoundError: 本体中没有该主题
    """
    ontology.topic(topic_id)
    papers = [p for p in corpus.accepted if topic_id in _topics_of(annotations, p.paper_id)]
    return _country_table(papers, corpus.institutions).top(top_n)
