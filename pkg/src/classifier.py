#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
主题分类器
停用词过滤 -> 1/2/3元组 -> 与本体标签的Levenshtein相似度匹配 -> 上位主题推断 -> 等价主题规范化
"""

import logging
import re
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from functools import lru_cache
from math import ceil, floor
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
from nltk.tokenize import RegexpTokenizer
from nltk.util import ngrams as nltk_ngrams
from rapidfuzz import process
from rapidfuzz.distance import Levenshtein
from tqdm import tqdm

from .corpus import PaperRecord
from .ontology import TopicOntology

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.94
MAX_NGRAM = 3
GRAM_CACHE_SIZE = 2 ** 18
BUNDLED_STOPWORDS = Path(__file__).parent / "resources" / "stopwords_en.txt"

# 单词内部的连字符和斜杠视为空格，不打断词组
_INNER_SEPARATOR = re.compile(r"(?<=[^\W_])[-/](?=[^\W_])")
_TOKENIZER = RegexpTokenizer(r"[^\W_]+(?:['’][^\W_]+)*|[^\w\s]+|_+")
_WORD = re.compile(r"[^\W_]")


@dataclass(frozen=True)
class StopwordList:
    version: str
    words: FrozenSet[str]

    def __contains__(self, word: object) -> bool:
        return word in self.words


def load_stopwords(path: Optional[Union[str, Path]] = None) -> StopwordList:
    """
    读取停用词表，首行 "# version: <标签>" 给出版本

    Args:
        path: 停用词文件路径，为空时使用内置英文停用词表
    """
    source = Path(path) if path else BUNDLED_STOPWORDS
    version = source.stem
    words: Set[str] = set()
    for line in source.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line.startswith("#"):
            key, _, value = line.lstrip("#").partition(":")
            if key.strip().lower() == "version" and value.strip():
                version = value.strip()
            continue
        if line:
            words.add(line.lower())
    logger.debug(f"停用词表 {source}（版本 {version}）共 {len(words)} 个词")
    return StopwordList(version, frozenset(words))


_default_stopwords: Optional[StopwordList] = None


def default_stopwords() -> StopwordList:
    global _default_stopwords
    if _default_stopwords is None:
        _default_stopwords = load_stopwords()
    return _default_stopwords


def tokenize(text: str, stopwords: Optional[StopwordList] = None) -> List[List[str]]:
    """
    小写化并切分为词组（run）：不被停用词或标点打断的最长连续词序列

    Args:
        text: 输入文本
        stopwords: 停用词表，默认内置表

    Returns:
        词组列表
    """
    stopwords = stopwords or default_stopwords()
    text = _INNER_SEPARATOR.sub(" ", text.lower())

    runs: List[List[str]] = []
    current: List[str] = []
    for token in _TOKENIZER.tokenize(text):
        if _WORD.match(token) and token not in stopwords:
            current.append(token)
            continue
        if current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)
    return runs


def ngrams(runs: Sequence[Sequence[str]], max_n: int = MAX_NGRAM) -> List[str]:
    """提取每个词组内部的1..max_n元组（不跨词组），按 n 再按位置排序，保留重复"""
    grams: List[str] = []
    for n in range(1, max_n + 1):
        for run in runs:
            grams.extend(" ".join(gram) for gram in nltk_ngrams(run, n))
    return grams


def levenshtein_similarity(a: str, b: str) -> float:
    """1 - 编辑距离 / 较长字符串长度；两者均为空时为 1"""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - Levenshtein.distance(a, b) / longest


def normalize_for_matching(label: str) -> str:
    return " ".join(_INNER_SEPARATOR.sub(" ", label.lower()).split())


def paper_text(paper: PaperRecord) -> str:
    """标题、摘要、关键词以句号分隔拼接，各字段不会组成同一词组"""
    parts = [paper.title or "", paper.abstract or ""] + list(paper.keywords)
    return ". ".join(part for part in parts if part and part.strip())


class LabelMatcher:
    """本体标签索引：精确匹配 + 按长度裁剪的编辑距离，单个n元组的结果带缓存"""

    def __init__(self, ontology: TopicOntology, cache_size: int = GRAM_CACHE_SIZE):
        pairs = sorted({(normalize_for_matching(label), tid) for label, tid in ontology.labels()},
                       key=lambda p: (len(p[0]), p[0], p[1]))
        self.labels: List[str] = [label for label, _ in pairs]
        self.topic_ids: List[str] = [tid for _, tid in pairs]
        self.lengths: List[int] = [len(label) for label in self.labels]
        self._length_array = np.asarray(self.lengths, dtype=np.int64)
        self.exact: Dict[str, Set[str]] = {}
        for label, tid in pairs:
            self.exact.setdefault(label, set()).add(tid)
        # lru_cache 自带锁，可在分类线程间共享
        self.match_gram = lru_cache(maxsize=cache_size)(self._match_gram)

    def _match_gram(self, gram: str, threshold: float) -> FrozenSet[str]:
        matched = set(self.exact.get(gram, ()))
        if threshold >= 1.0:
            return frozenset(matched)

        length = len(gram)
        # sim >= t 要求 t*len(gram) <= len(label) <= len(gram)/t
        lo = bisect_left(self.lengths, ceil(threshold * length - 1e-9))
        hi = bisect_right(self.lengths, floor(length / threshold + 1e-9))
        if lo < hi:
            distances = process.cdist([gram], self.labels[lo:hi], scorer=Levenshtein.distance, dtype=np.int32)[0]
            similarity = 1.0 - distances / np.maximum(length, self._length_array[lo:hi])
            matched.update(self.topic_ids[lo + int(j)] for j in np.flatnonzero(similarity >= threshold))
        return frozenset(matched)

    def match(self, grams: Iterable[str], threshold: float) -> Set[str]:
        matched: Set[str] = set()
        for gram in dict.fromkeys(grams):
            matched |= self.match_gram(gram, threshold)
        return matched


@dataclass(frozen=True)
class TopicAnnotation:
    """一篇文献的主题标注"""
    paper_id: str
    direct_topics: FrozenSet[str] = frozenset()
    enriched_topics: FrozenSet[str] = frozenset()

    @property
    def all_topics(self) -> FrozenSet[str]:
        return self.direct_topics | self.enriched_topics


def _check_threshold(threshold: float) -> None:
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"阈值必须在 (0, 1] 内: {threshold}")


def classify(paper: PaperRecord, ontology: TopicOntology, threshold: float = DEFAULT_THRESHOLD,
             stopwords: Optional[StopwordList] = None, matcher: Optional[LabelMatcher] = None) -> TopicAnnotation:
    """
    为一篇文献分配主题

    Args:
        paper: 文献记录（使用标题、摘要、关键词）
        ontology: 主题本体
        threshold: 相似度阈值
        stopwords: 停用词表
        matcher: 预先构建的标签索引，批量分类时复用

    Returns:
        主题标注；无匹配时为空
    """
    _check_threshold(threshold)
    matcher = matcher or LabelMatcher(ontology)
    grams = ngrams(tokenize(paper_text(paper), stopwords))
    direct = ontology.canonicalize(matcher.match(grams, threshold))
    enriched = ontology.canonicalize(ontology.super_topic_closure(direct)) - direct
    return TopicAnnotation(paper.paper_id, direct, enriched)


def classify_corpus(papers: Iterable[PaperRecord], ontology: TopicOntology,
                    threshold: float = DEFAULT_THRESHOLD, stopwords: Optional[StopwordList] = None,
                    max_workers: int = 4, progress: bool = False) -> Dict[str, TopicAnnotation]:
    """
    并行分类一组文献

    Returns:
        paper_id -> 主题标注，按 paper_id 排序
    """
    _check_threshold(threshold)
    papers = list(papers)
    stopwords = stopwords or default_stopwords()
    matcher = LabelMatcher(ontology)
    results: Dict[str, TopicAnnotation] = {}

    logger.info(f"开始分类 {len(papers)} 篇文献，阈值 {threshold}，并发 {max_workers}")
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        futures = [executor.submit(classify, paper, ontology, threshold, stopwords, matcher) for paper in papers]
        for future in tqdm(as_completed(futures), total=len(futures), desc="分类", unit="篇", disable=not progress):
            annotation = future.result()
            results[annotation.paper_id] = annotation

    annotated = sum(1 for a in results.values() if a.all_topics)
    logger.info(f"分类完成: {annotated}/{len(results)} 篇文献至少有一个主题")
    return dict(sorted(results.items()))


def annotation_statistics(annotations: Mapping[str, TopicAnnotation], total_papers: Optional[int] = None) -> Dict[str, float]:
    """
    每篇文献平均主题数，分别按"有标注的文献"和"全部文献"计算
    """
    total_papers = len(annotations) if total_papers is None else total_papers
    sizes = [len(a.all_topics) for a in annotations.values()]
    annotated = [size for size in sizes if size]
    topic_total = sum(sizes)
    return {
        "total_papers": total_papers,
        "annotated_papers": len(annotated),
        "mean_topics_annotated": topic_total / len(annotated) if annotated else 0.0,
        "mean_topics_all": topic_total / total_papers if total_papers else 0.0,
    }


def write_annotations(path: Union[str, Path], annotations: Mapping[str, TopicAnnotation],
                      threshold: float, stopwords_version: str) -> None:
    """写出标注TSV：paper_id、直接主题、推断主题（分号分隔）"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        f.write(f"# threshold: {threshold}\n")
        f.write(f"# stopwords: {stopwords_version}\n")
        f.write("paper_id\tdirect_topics\tenriched_topics\n")
        for paper_id in sorted(annotations):
            a = annotations[paper_id]
            f.write(f"{paper_id}\t{';'.join(sorted(a.direct_topics))}\t{';'.join(sorted(a.enriched_topics))}\n")


def read_annotations(path: Union[str, Path]) -> Tuple[Dict[str, TopicAnnotation], Dict[str, str]]:
    """读取标注TSV，返回 (标注, 文件头信息)"""
    annotations: Dict[str, TopicAnnotation] = {}
    header: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line.lstrip("#").partition(":")
                header[key.strip()] = value.strip()
                continue
            if not line or line.startswith("paper_id\t"):
                continue
            paper_id, direct, enriched = (line.split("\t") + ["", ""])[:3]
            annotations[paper_id] = TopicAnnotation(
                paper_id,
                frozenset(t for t in direct.split(";") if t),
                frozenset(t for t in enriched.split(";") if t),
            )
    return annotations, header
