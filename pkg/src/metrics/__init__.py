"""
指标计算
"""

from .tables import CountTable, YearMatrix, merge_tables
from .citations import (CITED, CITING, ReferenceMemory, institution_ranking, papers_per_year,
                        reference_memory_matrix, venue_citation_table, venue_year_matrix)
from .geopolitics import (NEVER_CITED, DebitEntry, FirstAuthorRow, FirstAuthorTrends, StabilitySeries,
                          country_distribution, first_author_institution_trends, knowledge_debit,
                          ranking_stability, solo_country_papers, spearman_rho, yearly_country_tables)
from .topics import (PeriodComparison, TopicShare, TrendEntry, TrendGroup, topic_counts_by_year,
                     topic_country_distribution, topic_period_comparison, topic_shares,
                     topic_trend_analysis, topic_year_matrix)

__all__ = [
    "CountTable", "YearMatrix", "merge_tables",
    "CITED", "CITING", "ReferenceMemory", "institution_ranking", "papers_per_year",
    "reference_memory_matrix", "venue_citation_table", "venue_year_matrix",
    "NEVER_CITED", "DebitEntry", "FirstAuthorRow", "FirstAuthorTrends", "StabilitySeries",
    "country_distribution", "first_author_institution_trends", "knowledge_debit",
    "ranking_stability", "solo_country_papers", "spearman_rho", "yearly_country_tables",
    "PeriodComparison", "TopicShare", "TrendEntry", "TrendGroup", "topic_counts_by_year",
    "topic_country_distribution", "topic_period_comparison", "topic_shares",
    "topic_trend_analysis", "topic_year_matrix",
]
