#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
批处理流水线
导入 -> 抽取 -> 分类 -> 报告，每个阶段读取上游产物并写出自己的产物
"""

import hashlib
import logging
from pathlib import Path
from typing import Any, Dict, List

from .base_workflow import ArtifactLayout, BaseWorkflow, WorkflowManager
from .classifier import (BUNDLED_STOPWORDS, annotation_statistics, classify_corpus, load_stopwords,
                         read_annotations, write_annotations)
from .config_manager import PipelineConfig
from .corpus import (ColumnSchema, CorpusStore, IngestStats, extract_venue_dataset, ingest_file,
                     load_institutions, load_schema, load_venue_corpus, load_venue_names, save_venue_corpus,
                     write_institutions, write_store)
from .ontology import load_ontology
from .report_generator import ReportSettings, VenueReportGenerator

logger = logging.getLogger(__name__)

STAGES = ("ingest", "extract", "classify", "report")
COMMANDS = STAGES + ("all",)


def file_digest(path: Path) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            sha.update(chunk)
    return sha.hexdigest()


def load_stored_corpus(layout: ArtifactLayout, config: PipelineConfig, workflow: BaseWorkflow) -> CorpusStore:
    """重新读取 ingest 阶段写出的文献库"""
    workflow.require(layout.papers, "请先运行 ingest")
    workflow.require(layout.institutions, "请先运行 ingest")
    venue_names = load_venue_names(config.venue_names) if config.venue_names else None
    result = ingest_file(layout.papers, ColumnSchema.default(), "lenient",
                         load_institutions(layout.institutions), venue_names)
    return result.store


class IngestWorkflow(BaseWorkflow):
    name = "ingest"
    title = "第一步：导入元数据"

    def execute(self, **kwargs) -> Dict[str, Any]:
        config = self.config
        schema = load_schema(config.schema) if config.schema else ColumnSchema.default()
        institutions = load_institutions(config.institutions)
        venue_names = load_venue_names(config.venue_names) if config.venue_names else None

        result = ingest_file(config.dump, schema, config.mode, institutions, venue_names, progress=True)
        write_store(result.store, self.layout.papers)
        write_institutions(institutions, self.layout.institutions)
        self.save_json_report(result.stats.as_dict(), self.layout.ingest_stats)

        print(f"导入 {result.stats.records} 条记录，跳过 {result.stats.skipped} 行，重复 {result.stats.duplicates} 行")
        return {"ingest": result.stats.as_dict(), "institutions": len(institutions)}


class ExtractWorkflow(BaseWorkflow):
    name = "extract"
    title = "第二步：抽取期刊/会议语料"

    def execute(self, **kwargs) -> Dict[str, Any]:
        store = load_stored_corpus(self.layout, self.config, self)
        stats = IngestStats(**self.load_json_report(self.layout.ingest_stats))

        venues: Dict[str, Dict[str, int]] = {}
        for name, venue_ids in sorted(self.config.venues.items()):
            corpus = extract_venue_dataset(store, venue_ids, name)
            save_venue_corpus(corpus, self.layout.corpus_dir(name), stats)
            venues[name] = corpus.summary()
            print(f"{name}: accepted={len(corpus.accepted)} citing={len(corpus.citing)} "
                  f"cited={len(corpus.cited)} 悬空引用={corpus.dangling_references}")
        logger.info(f"悬空引用合计 {sum(v['dangling_references'] for v in venues.values())}")
        return {"venues": venues}


class ClassifyWorkflow(BaseWorkflow):
    name = "classify"
    title = "第三步：主题分类"

    def execute(self, **kwargs) -> Dict[str, Any]:
        config = self.config
        store = load_stored_corpus(self.layout, config, self)
        for name in sorted(config.venues):
            self.require(self.layout.corpus_manifest(name), "请先运行 extract")

        ontology = load_ontology(config.ontology)
        stopwords = load_stopwords(config.stopwords or None)

        annotated: Dict[str, Dict[str, float]] = {}
        for name in sorted(config.venues):
            corpus = load_venue_corpus(store, self.layout.corpus_dir(name))
            annotations = classify_corpus(corpus.accepted, ontology, config.threshold, stopwords,
                                          config.max_workers, progress=True)
            write_annotations(self.layout.annotations(name), annotations, config.threshold, stopwords.version)
            annotated[name] = annotation_statistics(annotations, len(corpus.accepted))
            print(f"{name}: {annotated[name]['annotated_papers']}/{len(corpus.accepted)} 篇文献获得主题")
        return {"annotations": annotated, "stopwords_version": stopwords.version}


class ReportWorkflow(BaseWorkflow):
    name = "report"
    title = "第四步：生成报告"

    def settings(self) -> ReportSettings:
        c = self.config
        return ReportSettings(
            top_k=c.top_k,
            min_solo_papers=c.min_solo_papers,
            start_year=c.start_year,
            end_year=c.end_year,
            split_year=c.split_year,
            group_thresholds=tuple(c.group_thresholds),
            top_countries=c.top_countries,
            topic_report_topics=tuple(c.topic_report_topics),
            heatmaps=c.heatmaps,
        )

    def execute(self, **kwargs) -> Dict[str, Any]:
        config = self.config
        for name in sorted(config.venues):
            self.require(self.layout.corpus_manifest(name), "请先运行 extract")
            self.require(self.layout.annotations(name), "请先运行 classify")
        store = load_stored_corpus(self.layout, config, self)
        ontology = load_ontology(config.ontology)

        reports: Dict[str, List[str]] = {}
        for name in sorted(config.venues):
            corpus = load_venue_corpus(store, self.layout.corpus_dir(name))
            annotations, _ = read_annotations(self.layout.annotations(name))
            result = VenueReportGenerator(corpus, annotations, ontology, self.settings()).generate(
                self.layout.reports_dir(name))
            reports[name] = sorted(path.name for path in result.files)
            print(f"{name}: 写出 {len(result.files)} 个报告文件")
        return {"reports": reports}


WORKFLOWS = {
    "ingest": IngestWorkflow,
    "extract": ExtractWorkflow,
    "classify": ClassifyWorkflow,
    "report": ReportWorkflow,
}


def input_digests(config: PipelineConfig) -> Dict[str, str]:
    paths = {
        "dump": config.dump,
        "institutions": config.institutions,
        "ontology": config.ontology,
        "stopwords": config.stopwords or str(BUNDLED_STOPWORDS),
        "venue_names": config.venue_names,
        "schema": config.schema,
    }
    return {name: file_digest(Path(path)) for name, path in sorted(paths.items()) if path and Path(path).exists()}


def run(command: str, config: PipelineConfig) -> Dict[str, Any]:
    """
    执行一个命令并写出运行清单

    Args:
        command: ingest、extract、classify、report 或 all
        config: 流水线配置

    Returns:
        运行清单内容
    """
    if command not in COMMANDS:
        raise ValueError(f"未知命令: {command}（可选: {', '.join(COMMANDS)}）")
    config.validate()

    manager = WorkflowManager()
    for name, workflow_class in WORKFLOWS.items():
        manager.register_workflow(name, workflow_class(config))

    stages = list(STAGES) if command == "all" else [command]
    results: Dict[str, Any] = {}
    for stage in stages:
        results[stage] = manager.execute_workflow(stage)

    layout = ArtifactLayout(config.out_dir)
    manifest: Dict[str, Any] = {
        "command": command,
        "config": config.as_dict(),
        "config_digest": config.digest(),
        "inputs": input_digests(config),
        "stopwords_version": load_stopwords(config.stopwords or None).version,
        "stages": results,
    }
    if layout.ingest_stats.exists():
        manifest["ingest"] = manager.workflows["ingest"].load_json_report(layout.ingest_stats)
    manifest["venues"] = {}
    for name in sorted(config.venues):
        corpus_manifest = layout.corpus_manifest(name)
        if corpus_manifest.exists():
            entries = dict(line.split(": ", 1) for line in corpus_manifest.read_text(encoding="utf-8").splitlines()
                           if ": " in line)
            manifest["venues"][name] = {key: entries[key] for key in
                                        ("accepted", "citing", "cited", "dangling_references") if key in entries}

    manager.workflows["ingest"].save_json_report(manifest, layout.run_manifest)
    logger.info(f"运行清单已写出: {layout.run_manifest}")
    return manifest
