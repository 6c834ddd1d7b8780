#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
地缘指标
国家分布、单一国家文献、知识负债、国家排名稳定性与第一作者机构趋势
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
from scipy.stats import rankdata

from ..corpus import UNKNOWN, Institution, PaperRecord, VenueCorpus, contributions
from .tables import CountTable

logger = logging.getLogger(__name__)

NEVER_CITED = "never_cited"


def _country_table(papers: Iterable[PaperRecord], institutions: Mapping[str, Institution]) -> CountTable:
    counts: Counter = Counter()
    for paper in papers:
        counts.update(c.country_code for c in contributions(paper, institutions))
    return CountTable(counts, key_name="country_code")


def country_distribution(corpus: VenueCorpus, partition: str = "accepted") -> CountTable:
    """
    各国家的贡献数，未知国家作为 "unknown" 单独一行

    Args:
        corpus: 期刊/会议语料
        partition: accepted、cited 或 citing

    Returns:
        国家计数表，总数等于该分区的贡献总数
    """
    return _country_table(corpus.partition(partition), corpus.institutions)


def solo_country_papers(corpus: VenueCorpus, min_papers: int = 5) -> CountTable:
    """
    只有单一国家作者参与的 accepted 文献数

    含未知国家贡献的文献不计入；少于 min_papers 篇的国家被剔除（含边界）
    """
    counts: Counter = Counter()
    for paper in corpus.accepted:
        countries = {c.country_code for c in contributions(paper, corpus.institutions)}
        if len(countries) == 1 and UNKNOWN not in countries:
            counts[countries.pop()] += 1
    return CountTable({k: v for k, v in counts.items() if v >= min_papers}, key_name="country_code")


@dataclass(frozen=True)
class DebitEntry:
    """
    一个国家对期刊/会议的知识负债

    debit 为 citing/cited；cited 为0时为 NEVER_CITED
    """
    country_code: str
    citing_contribs: int
    cited_contribs: int
    debit: Union[float, str]

    @property
    def never_cited(self) -> bool:
        return self.debit == NEVER_CITED


def knowledge_debit(corpus: VenueCorpus) -> List[DebitEntry]:
    """
    计算各国家的知识负债

    Returns:
        按负债降序排列（NEVER_CITED 在最前，同值按国家代码）；施引与被引均为0的国家不出现
    """
    citing = country_distribution(corpus, "citing")
    cited = country_distribution(corpus, "cited")

    entries = []
    for country in sorted(set(citing) | set(cited)):
        citing_count, cited_count = citing.get(country), cited.get(country)
        debit: Union[float, str] = citing_count / cited_count if cited_count else NEVER_CITED
        entries.append(DebitEntry(country, citing_count, cited_count, debit))

    entries.sort(key=lambda e: (0 if e.never_cited else 1, -(e.debit if not e.never_cited else 0.0), e.country_code))
    return entries


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    """
    Spearman 等级相关系数：平均秩处理并列后计算秩向量的 Pearson 相关

    Args:
        xs: 第一组取值
        ys: 第二组取值

    Returns:
        [-1, 1] 内的相关系数；任一侧秩方差为0时返回 None

    Raises:
        ValueError: 长度不一致或样本数少于2
    """
    if len(xs) != len(ys):
        raise ValueError(f"长度不一致: {len(xs)} != {len(ys)}")
    if len(xs) < 2:
        raise ValueError(f"至少需要2个样本，实际 {len(xs)}")

    rx = rankdata(np.asarray(xs, dtype=np.float64), method="average")
    ry = rankdata(np.asarray(ys, dtype=np.float64), method="average")
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denominator = np.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
    if denominator == 0:
        return None
    return float(np.clip(np.dot(dx, dy) / denominator, -1.0, 1.0))


@dataclass(frozen=True)
class StabilitySeries:
    """相邻年份国家排名的 Spearman 相关序列，无法计算的年份对为 None"""
    year_pairs: Tuple[Tuple[int, int], ...]
    rho: Tuple[Optional[float], ...]

    def items(self) -> List[Tuple[Tuple[int, int], Optional[float]]]:
        return list(zip(self.year_pairs, self.rho))

    def mean(self) -> Optional[float]:
        defined = [r for r in self.rho if r is not None]
        return float(np.mean(defined)) if defined else None


def ranking_stability(yearly_country_counts: Mapping[int, CountTable]) -> StabilitySeries:
    """
    相邻年份 (y, y+1) 的国家排名相似度

    国家全集取两年的并集，缺席的国家计0；任一年少于2个国家或秩方差为0时该年份对记为缺口
    """
    years = sorted(yearly_country_counts)
    if len(years) < 2:
        logger.warning(f"年份数不足2（{len(years)}），排名稳定性序列为空")
    pairs: List[Tuple[int, int]] = []
    values: List[Optional[float]] = []
    for year in years:
        following = year + 1
        if following not in yearly_country_counts:
            continue
        before, after = yearly_country_counts[year], yearly_country_counts[following]
        rho: Optional[float] = None
        if len(before) >= 2 and len(after) >= 2:
            countries = sorted(set(before) | set(after))
            try:
                rho = spearman_rho([before.get(c) for c in countries], [after.get(c) for c in countries])
            except ValueError as e:
                logger.debug(f"{year}-{following} 无法计算: {e}")
        pairs.append((year, following))
        values.append(rho)
    return StabilitySeries(tuple(pairs), tuple(values))


def yearly_country_tables(corpus: VenueCorpus, partition: str = "accepted") -> Dict[int, CountTable]:
    """按文献年份分组的国家分布"""
    by_year: Dict[int, List[PaperRecord]] = {}
    for paper in corpus.partition(partition):
        if paper.year is not None:
            by_year.setdefault(paper.year, []).append(paper)
    return {year: _country_table(papers, corpus.institutions) for year, papers in sorted(by_year.items())}


@dataclass(frozen=True)
class FirstAuthorRow:
    """
    一个统计周期内的第一作者机构情况

    period: 年份，全时段汇总时为 "all"
    """
    period: Union[int, str]
    first_author_institutions: int
    never_first_institutions: int
    total_institutions: int

    @property
    def never_first_pct(self) -> float:
        if not self.total_institutions:
            return 0.0
        return 100.0 * self.never_first_institutions / self.total_institutions


@dataclass(frozen=True)
class FirstAuthorTrends:
    per_year: Tuple[FirstAuthorRow, ...]
    overall: FirstAuthorRow

    def rows(self) -> List[FirstAuthorRow]:
        return list(self.per_year) + [self.overall]


def _first_author_row(period: Union[int, str], papers: Iterable[PaperRecord],
                      institutions: Mapping[str, Institution]) -> FirstAuthorRow:
    first: Set[str] = set()
    seen: Set[str] = set()
    for paper in papers:
        lead = paper.first_author
        for authorship in paper.authorships:
            institution_id = authorship.institution_id
            if not institution_id or institution_id not in institutions:
                continue
            seen.add(institution_id)
            if authorship is lead:
                first.add(institution_id)
    return FirstAuthorRow(period, len(first), len(seen - first), len(seen))


def first_author_institution_trends(corpus: VenueCorpus) -> FirstAuthorTrends:
    """
    每年及全时段的第一作者机构统计

    只统计能在机构表中解析的机构；某年只出现在非第一作者位置的机构计为"从未作为第一作者"
    """
    by_year: Dict[int, List[PaperRecord]] = {}
    for paper in corpus.accepted:
        if paper.year is not None:
            by_year.setdefault(paper.year, []).append(paper)
    institutions = corpus.institutions
    per_year = tuple(_first_author_row(year, papers, institutions) for year, papers in sorted(by_year.items()))
    overall = _first_author_row("all", corpus.accepted, institutions)
    return FirstAuthorTrends(per_year, overall)
