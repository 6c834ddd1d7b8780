#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
报告生成器
把指标结果写成 CSV / SVG / JSON / Markdown 报告
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from . import metrics
from .classifier import TopicAnnotation
from .corpus import NA_VENUE, VenueCorpus
from .errors import ReportError
from .heatmap_svg import save_heatmap
from .metrics.tables import CountTable, YearMatrix
from .ontology import TopicOntology

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "{:.6f}"


class ReportGenerator:
    """报告生成器基类"""

    def create_markdown_report(self, title: str, sections: List[Dict]) -> str:
        """
        创建Markdown格式报告

        Args:
            title: 报告标题
            sections: 报告章节列表，每个章节包含title和content

        Returns:
            Markdown格式的报告内容
        """
        report_content = f"# {title}\n\n"

        for section in sections:
            section_title = section.get("title", "")
            section_content = section.get("content", "")

            if section_title:
                report_content += f"## {section_title}\n\n"

            if section_content:
                report_content += f"{section_content}\n\n"

        report_content += "---\n*此报告由科学计量分析工具自动生成*\n"

        return report_content

    def save_markdown_report(self, content: str, file_path: Path) -> None:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8', newline='') as f:
            f.write(content)

    def save_json_report(self, data: Dict, file_path: Path) -> None:
        """
        保存JSON报告，键排序以保证相同输入得到相同字节

        Args:
            data: 报告数据
            file_path: 文件路径
        """
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8', newline='') as f:
            json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")

    def save_csv_report(self, frame: pd.DataFrame, file_path: Path) -> None:
        """保存CSV报告：UTF-8、单行表头、\\n 换行"""
        file_path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(file_path, index=False, encoding="utf-8", lineterminator="\n")


def format_float(value: Optional[float]) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    return FLOAT_FORMAT.format(value)


@dataclass(frozen=True)
class ReportSettings:
    """报告参数"""
    top_k: int = 30
    min_solo_papers: int = 5
    start_year: int = 2009
    end_year: int = 2018
    split_year: int = 2013
    group_thresholds: Tuple[int, ...] = (60, 20, 10, 5)
    top_countries: int = 10
    topic_report_topics: Tuple[str, ...] = ()
    heatmaps: bool = True


@dataclass
class VenueReportResult:
    venue: str
    files: List[Path] = field(default_factory=list)
    completed: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


class VenueReportGenerator(ReportGenerator):
    """
    一个逻辑期刊/会议的全部报告

    Args:
        corpus: 期刊/会议语料
        annotations: 主题标注（paper_id -> TopicAnnotation）
        ontology: 主题本体
        settings: 报告参数
    """

    def __init__(self, corpus: VenueCorpus, annotations: Mapping[str, TopicAnnotation],
                 ontology: TopicOntology, settings: Optional[ReportSettings] = None):
        self.corpus = corpus
        self.annotations = annotations
        self.ontology = ontology
        self.settings = settings or ReportSettings()

    def _venue_name(self, venue_id: str) -> str:
        if venue_id == NA_VENUE or self.corpus.store is None:
            return venue_id
        return self.corpus.store.venue_label(venue_id)

    def _label(self, topic_id: str) -> str:
        return self.ontology.topic(topic_id).primary_label

    def generate(self, output_dir: Path) -> VenueReportResult:
        """
        写出全部报告

        Raises:
            ReportError: 任一报告失败时中止，并列出已完成的报告
        """
        output_dir = Path(output_dir)
        result = VenueReportResult(self.corpus.venue_id)
        steps: Sequence[Tuple[str, Callable[[Path, VenueReportResult], List[Path]]]] = [
            ("papers_per_year", self._papers_per_year),
            ("institution_ranking", self._institution_ranking),
            ("cited_venues", lambda d, r: self._venue_table(d, r, metrics.CITED)),
            ("citing_venues", lambda d, r: self._venue_table(d, r, metrics.CITING)),
            ("cited_venues_by_year", lambda d, r: self._venue_matrix(d, r, metrics.CITED)),
            ("citing_venues_by_year", lambda d, r: self._venue_matrix(d, r, metrics.CITING)),
            ("reference_memory", self._reference_memory),
            ("countries", self._countries),
            ("solo_country_papers", self._solo_country_papers),
            ("knowledge_debit", self._knowledge_debit),
            ("ranking_stability", self._ranking_stability),
            ("first_author_institutions", self._first_author_institutions),
            ("topic_trends", self._topic_trends),
            ("topic_year_matrix", self._topic_year_matrix),
            ("topic_shares", self._topic_shares),
            ("topic_period_comparison", self._topic_period_comparison),
            ("topic_countries", self._topic_countries),
            ("summary", self._summary),
        ]
        for name, step in steps:
            try:
                written = step(output_dir, result)
            except Exception as e:
                logger.error(f"{self.corpus.venue_id}: 报告 {name} 失败: {e}")
                raise ReportError(name, result.completed, e) from e
            result.files.extend(written)
            result.completed.append(name)
            for path in written:
                logger.info(f"写出报告 {path}")
        return result

    def _csv(self, output_dir: Path, name: str, frame: pd.DataFrame) -> Path:
        path = output_dir / f"{name}.csv"
        self.save_csv_report(frame, path)
        return path

    def _matrix(self, output_dir: Path, name: str, matrix: YearMatrix, long_frame: pd.DataFrame,
                with_excluded: bool = False) -> List[Path]:
        written = [self._csv(output_dir, name, long_frame),
                   self._csv(output_dir, f"{name}_grid", matrix.to_dense_frame(with_excluded))]
        if self.settings.heatmaps:
            written.append(save_heatmap(matrix, f"{self.corpus.venue_id}/{name}", output_dir / f"{name}.svg"))
        return written

    def _papers_per_year(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        table = metrics.papers_per_year(self.corpus)
        frame = pd.DataFrame(sorted(table.items()), columns=["year", "papers"])
        result.summary["papers_per_year"] = {str(y): n for y, n in sorted(table.items())}
        return [self._csv(output_dir, "papers_per_year", frame)]

    def _institution_ranking(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        table = metrics.institution_ranking(self.corpus)
        institutions = self.corpus.institutions
        rows = []
        for institution_id, count in table.items():
            inst = institutions.get(institution_id)
            rows.append((institution_id, inst.name if inst else "", inst.country_code if inst else "", count))
        frame = pd.DataFrame(rows, columns=["institution_id", "name", "country_code", "contributions"])
        result.summary["top_institutions"] = [r[0] for r in rows[:5]]
        return [self._csv(output_dir, "institution_ranking", frame)]

    def _venue_table(self, output_dir: Path, result: VenueReportResult, direction: str) -> List[Path]:
        table = metrics.venue_citation_table(self.corpus, direction, self.settings.top_k)
        frame = pd.DataFrame(
            [(venue_id, self._venue_name(venue_id), count) for venue_id, count in table.items()],
            columns=["venue_id", "venue_name", "count"],
        )
        result.summary[f"top_{direction}_venues"] = [self._venue_name(v) for v in table.keys()[:5]]
        return [self._csv(output_dir, f"{direction}_venues", frame)]

    def _venue_matrix(self, output_dir: Path, result: VenueReportResult, direction: str) -> List[Path]:
        matrix = metrics.venue_year_matrix(self.corpus, direction, self.settings.top_k)
        result.summary[f"{direction}_no_year"] = matrix.total_excluded
        return self._matrix(output_dir, f"{direction}_venues_by_year", matrix, matrix.to_long_frame(), with_excluded=True)

    def _reference_memory(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        memory = metrics.reference_memory_matrix(self.corpus)
        long_frame = memory.matrix.to_long_frame().rename(columns={"year": "cited_year"})
        result.summary["reference_memory"] = {
            "in_matrix": memory.matrix.total,
            "excluded": memory.excluded,
        }
        return self._matrix(output_dir, "reference_memory", memory.matrix, long_frame)

    def _countries(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        written = []
        for partition in ("accepted", "cited", "citing"):
            table = metrics.country_distribution(self.corpus, partition)
            written.append(self._csv(output_dir, f"countries_{partition}", table.to_frame("contributions")))
            result.summary[f"countries_{partition}"] = table.total
        return written

    def _solo_country_papers(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        table = metrics.solo_country_papers(self.corpus, self.settings.min_solo_papers)
        return [self._csv(output_dir, "solo_country_papers", table.to_frame("papers"))]

    def _knowledge_debit(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        entries = metrics.knowledge_debit(self.corpus)
        frame = pd.DataFrame(
            [(e.country_code, e.citing_contribs, e.cited_contribs,
              e.debit if e.never_cited else format_float(e.debit)) for e in entries],
            columns=["country_code", "citing_contribs", "cited_contribs", "debit"],
        )
        result.summary["never_cited_countries"] = [e.country_code for e in entries if e.never_cited]
        return [self._csv(output_dir, "knowledge_debit", frame)]

    def _ranking_stability(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        series = metrics.ranking_stability(metrics.yearly_country_tables(self.corpus))
        frame = pd.DataFrame(
            [(a, b, format_float(rho)) for (a, b), rho in series.items()],
            columns=["year", "next_year", "rho"],
        )
        result.summary["mean_rho"] = format_float(series.mean())
        return [self._csv(output_dir, "ranking_stability", frame)]

    def _first_author_institutions(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        trends = metrics.first_author_institution_trends(self.corpus)
        frame = pd.DataFrame(
            [(r.period, r.first_author_institutions, r.never_first_institutions, r.total_institutions,
              format_float(r.never_first_pct)) for r in trends.rows()],
            columns=["period", "first_author_institutions", "never_first_institutions",
                     "total_institutions", "never_first_pct"],
        )
        result.summary["never_first_pct_all"] = format_float(trends.overall.never_first_pct)
        return [self._csv(output_dir, "first_author_institutions", frame)]

    def _accepted_topic_counts(self) -> Dict[str, Dict[int, int]]:
        return metrics.topic_counts_by_year(self.annotations, self.corpus.accepted)

    def _topic_trends(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        s = self.settings
        groups = metrics.topic_trend_analysis(self._accepted_topic_counts(), s.start_year, s.end_year,
                                              s.group_thresholds, self.ontology)
        rows = []
        for group in groups:
            for rank, entry in enumerate(group.entries, 1):
                rows.append((group.lower, "" if group.upper is None else group.upper, rank, entry.topic_id,
                             entry.label, entry.start_count, entry.end_count, format_float(entry.ratio)))
        frame = pd.DataFrame(rows, columns=["group_lower", "group_upper", "rank", "topic_id", "label",
                                            f"count_{s.start_year}", f"count_{s.end_year}", "ratio"])
        result.summary["trend_groups"] = {str(g.lower): len(g.entries) for g in groups}
        return [self._csv(output_dir, "topic_trends", frame)]

    def _topic_year_matrix(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        matrix = metrics.topic_year_matrix(self.annotations, self.corpus.accepted)
        frame = matrix.to_dense_frame()
        frame.insert(1, "label", [self._label(tid) for tid in matrix.row_keys])
        return [self._csv(output_dir, "topic_year_matrix", frame)]

    def _topic_shares(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        s = self.settings
        shares = metrics.topic_shares(self.annotations, self.corpus.accepted, s.start_year, s.end_year)
        frame = pd.DataFrame(
            [(t.topic_id, self._label(t.topic_id), t.papers, t.total_papers, format_float(t.share_pct))
             for t in shares],
            columns=["topic_id", "label", "papers", "total_papers", "share_pct"],
        )
        return [self._csv(output_dir, "topic_shares", frame)]

    def _topic_period_comparison(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        s = self.settings
        counts = self._accepted_topic_counts()
        topics = sorted(counts, key=lambda tid: (-sum(counts[tid].values()), tid))
        rows = metrics.topic_period_comparison(counts, topics, s.start_year, s.split_year, s.end_year)
        frame = pd.DataFrame(
            [(r.topic_id, self._label(r.topic_id), r.first_period, r.second_period) for r in rows],
            columns=["topic_id", "label", f"{s.start_year}-{s.split_year}", f"{s.split_year + 1}-{s.end_year}"],
        )
        return [self._csv(output_dir, "topic_period_comparison", frame)]

    def report_topics(self) -> List[str]:
        """
        需要输出国家分布的主题：配置中列出的标签，缺省为该期刊/会议文献最多的十个主题
        """
        if self.settings.topic_report_topics:
            topics = []
            for label in self.settings.topic_report_topics:
                topic_id = self.ontology.lookup(label)
                if topic_id is None:
                    topic_id = label
                topics.append(self.ontology.representative(topic_id))
            return list(dict.fromkeys(topics))
        table = CountTable.from_keys(
            tid for paper in self.corpus.accepted
            for tid in (self.annotations[paper.paper_id].all_topics if paper.paper_id in self.annotations else ())
        )
        return [str(tid) for tid in table.keys()[:10]]

    def _topic_countries(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        rows = []
        for topic_id in self.report_topics():
            table = metrics.topic_country_distribution(self.corpus, self.annotations, topic_id, self.ontology,
                                                       self.settings.top_countries)
            rows.extend((topic_id, self._label(topic_id), country, count) for country, count in table.items())
        frame = pd.DataFrame(rows, columns=["topic_id", "label", "country_code", "contributions"])
        return [self._csv(output_dir, "topic_countries", frame)]

    def _summary(self, output_dir: Path, result: VenueReportResult) -> List[Path]:
        corpus_summary = self.corpus.summary()
        summary = result.summary
        sections = [
            {
                "title": "语料",
                "content": "\n".join(f"- **{key}**: {value}" for key, value in corpus_summary.items()),
            },
            {
                "title": "引用",
                "content": (f"- **被引最多的期刊/会议**: {', '.join(summary.get('top_cited_venues', [])) or '无'}\n"
                            f"- **施引最多的期刊/会议**: {', '.join(summary.get('top_citing_venues', [])) or '无'}\n"
                            f"- **进入记忆矩阵的参考文献**: {summary['reference_memory']['in_matrix']}\n"
                            f"- **未进入矩阵的参考文献**: {summary['reference_memory']['excluded']}\n"
                            f"- **缺少年份未进入期刊×年份矩阵的事件**: 被引 {summary.get('cited_no_year', 0)}，"
                            f"施引 {summary.get('citing_no_year', 0)}"),
            },
            {
                "title": "国家",
                "content": (f"- **从未被引用回来的国家**: {', '.join(summary.get('never_cited_countries', [])) or '无'}\n"
                            f"- **相邻年份排名相关系数均值**: {summary.get('mean_rho') or '无'}\n"
                            f"- **从未作为第一作者的机构比例（全时段）**: {summary.get('never_first_pct_all')}%"),
            },
            {
                "title": "主题分组",
                "content": "\n".join(f"- **≥{lower}**: {n} 个主题"
                                      for lower, n in summary.get("trend_groups", {}).items()),
            },
        ]
        path = output_dir / "summary.md"
        self.save_markdown_report(self.create_markdown_report(f"{self.corpus.venue_id} 分析摘要", sections), path)
        return [path]
