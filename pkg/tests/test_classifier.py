#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试主题分类器：分词、n元组、编辑距离相似度与标注
"""

import itertools
import random

import pytest

from conftest import paper
from src.classifier import (LabelMatcher, TopicAnnotation, annotation_statistics, classify, classify_corpus,
                            levenshtein_similarity, load_stopwords, ngrams, read_annotations, tokenize,
                            write_annotations)
from src.synthetic import generate_records


def naive_distance(a: str, b: str) -> int:
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def naive_similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    return 1.0 if longest == 0 else 1.0 - naive_distance(a, b) / longest


def test_tokenize_splits_runs_on_stopwords_and_punctuation():
    runs = tokenize("The design of User-Interfaces, in 2018.")
    assert runs == [["design"], ["user", "interfaces"], ["2018"]]


def test_tokenize_keeps_apostrophes_inside_words():
    assert tokenize("users' needs and user's goals") == [["users"], ["needs"], ["user's", "goals"]]


def test_ngrams_stay_inside_runs():
    grams = ngrams([["a", "b", "c"], ["d"]])
    assert grams == ["a", "b", "c", "d", "a b", "b c", "a b c"]


def test_ngrams_respect_max_n():
    assert ngrams([["x", "y", "z"]], max_n=1) == ["x", "y", "z"]


def test_custom_stopwords_carry_version(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("# version: custom-2\nDeep\n\n", encoding="utf-8")
    stopwords = load_stopwords(path)
    assert stopwords.version == "custom-2"
    assert "deep" in stopwords
    assert tokenize("deep neural networks", stopwords) == [["neural", "networks"]]


def test_levenshtein_similarity_examples():
    assert levenshtein_similarity("machine learning", "machine learnin") == pytest.approx(0.9375)
    assert levenshtein_similarity("human computer interactions", "human computer interaction") == pytest.approx(1 - 1 / 27)
    assert levenshtein_similarity("", "") == 1.0
    assert levenshtein_similarity("abc", "") == 0.0


def short_strings(alphabet: str, max_len: int):
    return [""] + ["".join(p) for n in range(1, max_len + 1) for p in itertools.product(alphabet, repeat=n)]


def test_levenshtein_matches_dynamic_programming_on_short_strings():
    strings = short_strings("abc", 4)
    for a in strings:
        for b in strings:
            assert levenshtein_similarity(a, b) == naive_similarity(a, b)


def test_levenshtein_matches_dynamic_programming_on_sampled_pairs_up_to_six():
    strings = short_strings("abc", 6)
    rng = random.Random(6)
    for _ in range(50_000):
        a, b = rng.choice(strings), rng.choice(strings)
        expected = naive_similarity(a, b)
        assert levenshtein_similarity(a, b) == expected
        assert levenshtein_similarity(b, a) == expected


def test_levenshtein_matches_dynamic_programming_on_random_strings():
    rng = random.Random(20)
    for _ in range(500):
        a = "".join(rng.choice("abcde ") for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice("abcde ") for _ in range(rng.randint(0, 12)))
        assert levenshtein_similarity(a, b) == pytest.approx(naive_similarity(a, b))
        assert levenshtein_similarity(a, b) == levenshtein_similarity(b, a)


def test_classify_enriches_with_super_topics(chain_ontology):
    annotation = classify(paper("p1", title="Deep Neural Networks"), chain_ontology)
    assert annotation.direct_topics == {"neural_networks"}
    assert annotation.enriched_topics == {"machine_learning", "artificial_intelligence"}
    assert annotation.all_topics == {"neural_networks", "machine_learning", "artificial_intelligence"}


def test_classify_rejects_near_miss_below_threshold(chain_ontology):
    record = paper("p1", abstract="machine learnin")
    assert classify(record, chain_ontology).all_topics == frozenset()
    loose = classify(record, chain_ontology, threshold=0.93)
    assert loose.direct_topics == {"machine_learning"}
    assert loose.enriched_topics == {"artificial_intelligence"}


def test_threshold_one_requires_exact_labels(chain_ontology):
    assert classify(paper("p1", keywords=["machine learnin"]), chain_ontology, threshold=1.0).all_topics == frozenset()
    assert classify(paper("p1", keywords=["Machine Learning"]), chain_ontology, threshold=1.0).direct_topics == {
        "machine_learning"}


def test_classify_maps_equivalents_to_representative(toy_ontology):
    annotation = classify(paper("p1", title="Ontology mapping for linked data"), toy_ontology)
    assert "ontology_matching" in annotation.direct_topics
    assert "ontology_mapping" not in annotation.all_topics
    assert {"ontology", "linked_data"} <= annotation.direct_topics
    assert {"semantic_web", "computer_science"} <= annotation.enriched_topics


def test_classify_is_case_insensitive(toy_ontology):
    lower = classify(paper("p1", title="usability of virtual reality"), toy_ontology)
    upper = classify(paper("p1", title="USABILITY OF VIRTUAL REALITY"), toy_ontology)
    assert lower == upper
    assert {"usability", "virtual_reality"} <= lower.direct_topics


def test_classify_empty_text_gives_empty_annotation(toy_ontology):
    assert classify(paper("p1"), toy_ontology) == TopicAnnotation("p1")


@pytest.mark.parametrize("threshold", [0.0, -0.1, 1.5])
def test_threshold_out_of_range_is_rejected(chain_ontology, threshold):
    with pytest.raises(ValueError):
        classify(paper("p1", title="x"), chain_ontology, threshold=threshold)


def test_topics_grow_as_threshold_drops(toy_ontology):
    records = generate_records(40, seed=3)
    thresholds = [1.0, 0.94, 0.90, 0.80]
    results = [classify_corpus(records, toy_ontology, threshold=t, max_workers=2) for t in thresholds]
    for stricter, looser in zip(results, results[1:]):
        for paper_id, annotation in stricter.items():
            assert annotation.all_topics <= looser[paper_id].all_topics


def test_classify_corpus_is_deterministic(toy_ontology):
    records = generate_records(30, seed=5)
    serial = classify_corpus(records, toy_ontology, max_workers=1)
    parallel = classify_corpus(records, toy_ontology, max_workers=4)
    assert serial == parallel
    assert list(serial) == sorted(r.paper_id for r in records)


def test_label_matcher_reuses_gram_results(toy_ontology):
    matcher = LabelMatcher(toy_ontology)
    grams = ["neural network", "neural networks", "ontology mapping"]
    first = matcher.match(grams, 0.8)
    second = matcher.match(grams * 3, 0.8)
    assert first == second
    info = matcher.match_gram.cache_info()
    assert info.misses == 3
    assert info.hits == 3


def test_annotation_statistics():
    annotations = {
        "p1": TopicAnnotation("p1", frozenset({"a"}), frozenset({"b", "c"})),
        "p2": TopicAnnotation("p2", frozenset({"a"})),
        "p3": TopicAnnotation("p3"),
    }
    stats = annotation_statistics(annotations, total_papers=4)
    assert stats["annotated_papers"] == 2
    assert stats["mean_topics_annotated"] == pytest.approx(2.0)
    assert stats["mean_topics_all"] == pytest.approx(1.0)


def test_annotations_file_round_trips(tmp_path):
    annotations = {
        "p2": TopicAnnotation("p2"),
        "p1": TopicAnnotation("p1", frozenset({"usability", "hci"}), frozenset({"computer_science"})),
    }
    path = tmp_path / "annotations.tsv"
    write_annotations(path, annotations, threshold=0.94, stopwords_version="en-v1")

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[:3] == ["# threshold: 0.94", "# stopwords: en-v1", "paper_id\tdirect_topics\tenriched_topics"]
    assert lines[3] == "p1\thci;usability\tcomputer_science"

    loaded, header = read_annotations(path)
    assert loaded == annotations
    assert header == {"threshold": "0.94", "stopwords": "en-v1"}
