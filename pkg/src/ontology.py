#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
研究主题本体
读取三元组文件，提供标签查找、上位主题闭包与等价主题规范化
"""

import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, TextIO, Tuple, Union

import networkx as nx

from .errors import NotFoundError, OntologyLoadError, ParseError

logger = logging.getLogger(__name__)

SUPER_TOPIC_OF = "superTopicOf"
RELATED_EQUIVALENT = "relatedEquivalent"
PRIMARY_LABEL = "primaryLabel"
RELATIONS = (SUPER_TOPIC_OF, RELATED_EQUIVALENT, PRIMARY_LABEL)

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def normalize_label(label: str) -> str:
    """标签统一为小写，合并空白"""
    return " ".join(label.lower().split())


def topic_id_for(label: str) -> str:
    """由标签派生主题标识，如 human-computer interaction -> human_computer_interaction"""
    return _NON_ALNUM.sub("_", normalize_label(label)).strip("_")


@dataclass(frozen=True)
class Topic:
    topic_id: str
    primary_label: str
    alt_labels: FrozenSet[str] = frozenset()
    super_topics: FrozenSet[str] = frozenset()
    equivalents: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if not self.primary_label:
            raise ValueError(f"主题 {self.topic_id} 的主标签为空")
        object.__setattr__(self, "primary_label", normalize_label(self.primary_label))
        object.__setattr__(self, "alt_labels", frozenset(normalize_label(l) for l in self.alt_labels))

    @property
    def labels(self) -> FrozenSet[str]:
        return self.alt_labels | {self.primary_label}


class TopicOntology:
    """
    只读的主题本体

    Args:
        topics: topic_id -> Topic
        representatives: topic_id -> 等价类代表主题；缺省时按主标签字典序最小者
    """

    def __init__(self, topics: Mapping[str, Topic], representatives: Optional[Mapping[str, str]] = None):
        dangling = sorted({
            ref for topic in topics.values()
            for ref in topic.super_topics | topic.equivalents
            if ref not in topics
        })
        if dangling:
            raise OntologyLoadError(dangling)

        # 等价关系对称化
        equivalents: Dict[str, Set[str]] = {tid: set(t.equivalents) for tid, t in topics.items()}
        for tid, others in list(equivalents.items()):
            for other in others:
                equivalents[other].add(tid)
        self._topics: Mapping[str, Topic] = MappingProxyType({
            tid: Topic(t.topic_id, t.primary_label, t.alt_labels, t.super_topics,
                       frozenset(equivalents[tid] - {tid}))
            for tid, t in sorted(topics.items())
        })

        self._hierarchy = nx.DiGraph()
        self._hierarchy.add_nodes_from(self._topics)
        for tid, topic in self._topics.items():
            self._hierarchy.add_edges_from((tid, parent) for parent in topic.super_topics)

        self._representative = self._resolve_representatives(representatives or {})
        self._label_index = MappingProxyType(self._build_label_index())
        # nx.descendants 按访问集合遍历，环上同样终止
        self._ancestors: Mapping[str, FrozenSet[str]] = MappingProxyType({
            tid: frozenset(nx.descendants(self._hierarchy, tid)) for tid in self._topics
        })

    def _resolve_representatives(self, preferred: Mapping[str, str]) -> Dict[str, str]:
        graph = nx.Graph()
        graph.add_nodes_from(self._topics)
        for tid, topic in self._topics.items():
            graph.add_edges_from((tid, other) for other in topic.equivalents)

        resolved: Dict[str, str] = {}
        for component in nx.connected_components(graph):
            candidates = sorted(
                {preferred[tid] for tid in component if tid in preferred and preferred[tid] in component},
                key=self._label_key,
            )
            if len(candidates) > 1:
                logger.warning(f"等价类 {sorted(component)} 存在多个 primaryLabel: {candidates}，取 {candidates[0]}")
            representative = candidates[0] if candidates else min(component, key=self._label_key)
            for tid in component:
                resolved[tid] = representative
        return resolved

    def _label_key(self, topic_id: str) -> Tuple[str, str]:
        return self._topics[topic_id].primary_label, topic_id

    def _build_label_index(self) -> Dict[str, str]:
        index: Dict[str, str] = {}
        for tid in sorted(self._topics):
            for label in sorted(self._topics[tid].labels):
                owner = index.get(label)
                if owner is None:
                    index[label] = tid
                elif owner != tid:
                    logger.warning(f"标签冲突 {label!r}: {owner} 与 {tid}，保留 {min(owner, tid)}")
                    index[label] = min(owner, tid)
        return dict(sorted(index.items()))

    @property
    def topics(self) -> Mapping[str, Topic]:
        return self._topics

    @property
    def label_index(self) -> Mapping[str, str]:
        return self._label_index

    def __len__(self) -> int:
        return len(self._topics)

    def __contains__(self, topic_id: object) -> bool:
        return topic_id in self._topics

    def __iter__(self) -> Iterator[str]:
        return iter(self._topics)

    def topic(self, topic_id: str) -> Topic:
        try:
            return self._topics[topic_id]
        except KeyError:
            raise NotFoundError("主题", topic_id) from None

    def lookup(self, label: str) -> Optional[str]:
        return self._label_index.get(normalize_label(label))

    def representative(self, topic_id: str) -> str:
        self.topic(topic_id)
        return self._representative[topic_id]

    def labels(self) -> List[Tuple[str, str]]:
        """所有 (标签, topic_id)，按标签排序"""
        return list(self._label_index.items())

    def super_topic_closure(self, topic_ids: Iterable[str]) -> FrozenSet[str]:
        ids = set(topic_ids)
        reached: Set[str] = set()
        for tid in sorted(ids):
            self.topic(tid)
            reached |= self._ancestors[tid]
        return frozenset(reached - ids)

    def canonicalize(self, topic_ids: Iterable[str]) -> FrozenSet[str]:
        return frozenset(self.representative(tid) for tid in topic_ids)


def super_topic_closure(ontology: TopicOntology, topic_ids: Iterable[str]) -> FrozenSet[str]:
    """
    上位主题传递闭包，结果不含输入主题本身

    Args:
        ontology: 主题本体
        topic_ids: 主题标识集合

    Returns:
        推断出的上位主题集合
    """
    return ontology.super_topic_closure(topic_ids)


def canonicalize(ontology: TopicOntology, topic_ids: Iterable[str]) -> FrozenSet[str]:
    """把每个主题替换为其等价类的代表主题并去重"""
    return ontology.canonicalize(topic_ids)


@dataclass
class _TripleCollector:
    labels: Dict[str, List[str]] = field(default_factory=dict)
    super_edges: Set[Tuple[str, str]] = field(default_factory=set)
    equivalent_pairs: Set[Tuple[str, str]] = field(default_factory=set)
    primary: Dict[str, str] = field(default_factory=dict)
    primary_targets: Dict[str, str] = field(default_factory=dict)

    def declare(self, label: str) -> str:
        tid = topic_id_for(label)
        known = self.labels.setdefault(tid, [])
        if label not in known:
            known.append(label)
        return tid


def load_ontology(source: Union[str, Path, Iterable[str]], source_name: str = "<stream>") -> TopicOntology:
    """
    读取主题本体三元组（subject_label, relation, object_label）

    Args:
        source: 三元组文件路径或可迭代的文本行
        source_name: 错误信息中使用的来源名称

    Returns:
        主题本体
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as f:
            return load_ontology(f, source_name=str(source))

    collected = _TripleCollector()
    triples = 0
    for line_number, fields in enumerate(csv.reader(source, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
        if not fields or not "".join(fields).strip() or fields[0].lstrip().startswith("#"):
            continue
        if len(fields) != 3:
            raise ParseError(f"三元组应为3列，实际 {len(fields)} 列", line_number, source_name)

        subject, relation, obj = (normalize_label(fields[0]), fields[1].strip(), normalize_label(fields[2]))
        if relation not in RELATIONS:
            raise ParseError(f"未知关系 {relation!r}（可选: {', '.join(RELATIONS)}）", line_number, source_name)
        if not subject or not obj or not topic_id_for(subject) or not topic_id_for(obj):
            raise ParseError("三元组标签为空", line_number, source_name)
        triples += 1

        if relation == SUPER_TOPIC_OF:
            parent, child = collected.declare(subject), collected.declare(obj)
            if parent != child:
                collected.super_edges.add((child, parent))
        elif relation == RELATED_EQUIVALENT:
            a, b = collected.declare(subject), collected.declare(obj)
            if a != b:
                collected.equivalent_pairs.add((a, b))
        else:
            tid = collected.declare(subject)
            collected.primary[tid] = topic_id_for(obj)
            collected.primary_targets[tid] = obj

    dangling = [
        collected.primary_targets[tid] for tid, target in collected.primary.items()
        if target not in collected.labels
    ]
    if dangling:
        raise OntologyLoadError(dangling)

    for tid, target in collected.primary.items():
        if target != tid:
            collected.equivalent_pairs.add((tid, target))

    super_topics: Dict[str, Set[str]] = {tid: set() for tid in collected.labels}
    for child, parent in collected.super_edges:
        super_topics[child].add(parent)
    equivalents: Dict[str, Set[str]] = {tid: set() for tid in collected.labels}
    for a, b in collected.equivalent_pairs:
        equivalents[a].add(b)
        equivalents[b].add(a)

    topics = {
        tid: Topic(tid, labels[0], frozenset(labels[1:]), frozenset(super_topics[tid]), frozenset(equivalents[tid]))
        for tid, labels in collected.labels.items()
    }
    ontology = TopicOntology(topics, collected.primary)
    logger.info(f"读取本体 {source_name}: {triples} 条三元组，{len(ontology)} 个主题")
    return ontology
