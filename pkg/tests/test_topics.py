#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试主题趋势指标
"""

import math

import pytest

from conftest import paper, venue_corpus
from src.classifier import TopicAnnotation
from src.errors import NotFoundError
from src.metrics import (topic_counts_by_year, topic_country_distribution, topic_period_comparison,
                         topic_shares, topic_trend_analysis, topic_year_matrix)

COUNTS = {
    "machine_learning": {2009: 142, 2018: 222},
    "crowdsourcing": {2018: 12},
    "usability": {2009: 10, 2018: 10},
    "eye_tracking": {2009: 5, 2018: 15},
    "gamification": {2009: 6, 2018: 12},
    "ontology": {2009: 3, 2018: 6},
    "speech_recognition": {2009: 9, 2018: 2},
}


def annotation(paper_id, direct=(), enriched=()):
    return TopicAnnotation(paper_id, frozenset(direct), frozenset(enriched))


def test_trend_entry_ratio():
    groups = topic_trend_analysis(COUNTS)
    entry = groups[0].entries[0]
    assert entry.topic_id == "machine_learning"
    assert entry.ratio == pytest.approx(222 / 142)


def test_trend_groups_follow_thresholds():
    groups = topic_trend_analysis(COUNTS, group_thresholds=(60, 20, 10, 5))
    assert [(g.lower, g.upper) for g in groups] == [(60, None), (20, 60), (10, 20), (5, 10)]
    assert [e.topic_id for e in groups[0].entries] == ["machine_learning"]
    assert groups[1].entries == ()
    assert [e.topic_id for e in groups[2].entries] == ["crowdsourcing", "eye_tracking", "gamification", "usability"]
    assert [e.topic_id for e in groups[3].entries] == ["ontology"]


def test_infinite_growth_sorts_first():
    groups = topic_trend_analysis(COUNTS)
    first = groups[2].entries[0]
    assert first.infinite_growth
    assert math.isinf(first.ratio)


def test_topics_below_smallest_threshold_are_dropped():
    groups = topic_trend_analysis(COUNTS)
    grouped = {e.topic_id for g in groups for e in g.entries}
    assert "speech_recognition" not in grouped
    assert all(g.contains(e.end_count) for g in groups for e in g.entries)


def test_labels_come_from_ontology(toy_ontology):
    groups = topic_trend_analysis(COUNTS, ontology=toy_ontology)
    assert groups[0].entries[0].label == "machine learning"


def test_equal_ratio_breaks_ties_by_end_count_then_label():
    counts = {"b": {2009: 5, 2018: 10}, "a": {2009: 6, 2018: 12}, "c": {2009: 5, 2018: 10}}
    groups = topic_trend_analysis(counts, group_thresholds=(1,))
    assert [e.topic_id for e in groups[0].entries] == ["a", "b", "c"]


@pytest.mark.parametrize("thresholds", [(), (10, 10), (5, 10), (10, 0), (10, -5)])
def test_bad_thresholds_are_rejected(thresholds):
    with pytest.raises(ValueError):
        topic_trend_analysis(COUNTS, group_thresholds=thresholds)


def test_start_year_must_precede_end_year():
    with pytest.raises(ValueError):
        topic_trend_analysis(COUNTS, start_year=2018, end_year=2018)


def test_counts_by_year_include_enriched_topics():
    records = [paper("p1", 2010), paper("p2", 2011), paper("p3", None), paper("p4", 2011)]
    annotations = {
        "p1": annotation("p1", ["neural_networks"], ["machine_learning"]),
        "p2": annotation("p2", ["machine_learning"]),
        "p3": annotation("p3", ["machine_learning"]),
    }
    counts = topic_counts_by_year(annotations, records)
    assert counts == {"machine_learning": {2010: 1, 2011: 1}, "neural_networks": {2010: 1}}

    matrix = topic_year_matrix(annotations, records)
    assert matrix.row_keys == ("machine_learning", "neural_networks")
    assert matrix.col_years == (2010, 2011)


def test_topic_shares_use_all_papers_in_period():
    records = [paper("p1", 2010), paper("p2", 2011), paper("p3", 2012), paper("p4", 2020)]
    annotations = {
        "p1": annotation("p1", ["usability"], ["hci"]),
        "p2": annotation("p2", ["usability"]),
        "p4": annotation("p4", ["usability"]),
    }
    shares = {s.topic_id: s for s in topic_shares(annotations, records, 2010, 2012)}
    assert shares["usability"].papers == 2
    assert shares["usability"].total_papers == 3
    assert shares["usability"].share_pct == pytest.approx(200 / 3)
    assert shares["hci"].share_pct == pytest.approx(100 / 3)


def test_topic_period_comparison():
    rows = topic_period_comparison(COUNTS, ["machine_learning", "missing"], 2009, 2013, 2018)
    assert [(r.topic_id, r.first_period, r.second_period) for r in rows] == [
        ("machine_learning", 142, 222), ("missing", 0, 0)]
    with pytest.raises(ValueError):
        topic_period_comparison(COUNTS, [], 2009, 2018, 2018)


def test_topic_country_distribution(toy_ontology):
    corpus = venue_corpus([
        paper("p1", authors=[("a", "i1"), ("b", "i2")]),
        paper("p2", authors=[("c", "i2")]),
        paper("p3", authors=[("d", "i1")]),
    ], inst={"i1": "US", "i2": "GB"})
    annotations = {
        "p1": annotation("p1", ["neural_networks"], ["machine_learning"]),
        "p2": annotation("p2", ["machine_learning"]),
    }
    table = topic_country_distribution(corpus, annotations, "machine_learning", toy_ontology)
    assert table == {"GB": 2, "US": 1}
    assert topic_country_distribution(corpus, annotations, "machine_learning", toy_ontology, top_n=1).keys() == ["GB"]

    with pytest.raises(NotFoundError):
        topic_country_distribution(corpus, annotations, "alchemy", toy_ontology)
