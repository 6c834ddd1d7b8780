#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试主题本体：加载、上位闭包与等价规范化
"""

from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import NotFoundError, OntologyLoadError, ParseError
from src.ontology import Topic, TopicOntology, canonicalize, load_ontology, super_topic_closure, topic_id_for
from src.synthetic import TOY_ONTOLOGY

MATCHING = [
    "ontology matching\trelatedEquivalent\tontology mapping\n",
    "ontology mapping\tprimaryLabel\tontology matching\n",
]


def test_single_edge_builds_two_topics():
    ontology = load_ontology(["machine learning\tsuperTopicOf\tneural networks\n"])
    assert len(ontology) == 2
    assert ontology.topic("neural_networks").super_topics == {"machine_learning"}
    assert ontology.topic("machine_learning").super_topics == frozenset()


def test_equivalents_are_symmetric_and_primary_label_is_representative():
    ontology = load_ontology(MATCHING)
    assert ontology.topic("ontology_mapping").equivalents == {"ontology_matching"}
    assert ontology.topic("ontology_matching").equivalents == {"ontology_mapping"}
    assert ontology.representative("ontology_mapping") == "ontology_matching"


def test_labels_are_lowercase_and_indexed():
    ontology = load_ontology(["Machine  Learning\tsuperTopicOf\tNeural Networks\n"])
    assert ontology.topic("machine_learning").primary_label == "machine learning"
    assert ontology.lookup("NEURAL NETWORKS") == "neural_networks"
    assert ontology.lookup("graph theory") is None


def test_label_variants_with_same_id_become_alternate_labels(toy_ontology):
    topic = toy_ontology.topic("human_computer_interaction")
    assert topic.primary_label == "human-computer interaction"
    assert "human computer interaction" in topic.alt_labels
    assert toy_ontology.lookup("human computer interaction") == "human_computer_interaction"


def test_unknown_relation_is_parse_error():
    with pytest.raises(ParseError) as excinfo:
        load_ontology(["a\tsuperTopicOf\tb\n", "a\tpartOf\tb\n"])
    assert excinfo.value.line_number == 2


def test_wrong_column_count_is_parse_error():
    with pytest.raises(ParseError):
        load_ontology(["a\tsuperTopicOf\n"])


def test_comments_and_blank_lines_are_ignored():
    ontology = load_ontology(["# header\n", "\n", "a\tsuperTopicOf\tb\n"])
    assert sorted(ontology) == ["a", "b"]


def test_dangling_primary_label_lists_offenders():
    with pytest.raises(OntologyLoadError) as excinfo:
        load_ontology(["a\tprimaryLabel\tzeta\n", "b\tprimaryLabel\talpha\n"])
    assert excinfo.value.offenders == ["alpha", "zeta"]


def test_dangling_topic_reference_in_constructor():
    with pytest.raises(OntologyLoadError):
        TopicOntology({"a": Topic("a", "a", super_topics=frozenset({"missing"}))})


def test_closure_follows_the_chain(chain_ontology):
    assert super_topic_closure(chain_ontology, {"neural_networks"}) == {"machine_learning", "artificial_intelligence"}


def test_closure_of_root_is_empty(chain_ontology):
    assert super_topic_closure(chain_ontology, {"artificial_intelligence"}) == frozenset()


def test_closure_terminates_on_cycles():
    ontology = load_ontology(["a\tsuperTopicOf\tb\n", "b\tsuperTopicOf\ta\n"])
    assert super_topic_closure(ontology, {"a"}) == {"b"}


def test_closure_of_unknown_topic_raises(chain_ontology):
    with pytest.raises(NotFoundError):
        super_topic_closure(chain_ontology, {"quantum_computing"})


def test_canonicalize_examples(toy_ontology):
    assert canonicalize(toy_ontology, {"ontology_mapping"}) == {"ontology_matching"}
    assert canonicalize(toy_ontology, {"usability"}) == {"usability"}
    assert canonicalize(toy_ontology, {"ontology_mapping", "ontology_matching"}) == {"ontology_matching"}
    assert canonicalize(toy_ontology, {"visualization"}) == {"information_visualization"}


def test_representative_falls_back_to_smallest_label():
    ontology = load_ontology(["zebra\trelatedEquivalent\tapple\n"])
    assert ontology.representative("zebra") == "apple"


def test_topic_id_for_collapses_punctuation():
    assert topic_id_for("Human-Computer  Interaction") == "human_computer_interaction"


def test_closure_is_consistent_across_threads():
    ontology = load_ontology(TOY_ONTOLOGY)
    topic_ids = sorted(ontology)

    def walk(start):
        reached, frontier = set(), [start]
        while frontier:
            for parent in ontology.topic(frontier.pop()).super_topics:
                if parent not in reached:
                    reached.add(parent)
                    frontier.append(parent)
        return frozenset(reached - {start})

    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(lambda tid: super_topic_closure(ontology, {tid}), topic_ids * 20))
    assert parallel == [walk(tid) for tid in topic_ids] * 20


def test_toy_ontology_size(toy_ontology):
    assert len(toy_ontology) == 50


topic_sets = st.sets(st.sampled_from(sorted(load_ontology(TOY_ONTOLOGY))), max_size=6)


@settings(derandomize=True, max_examples=200)
@given(topic_sets, topic_sets)
def test_closure_is_monotone(toy_ontology, first, second):
    smaller, larger = first, first | second
    assert super_topic_closure(toy_ontology, smaller) <= super_topic_closure(toy_ontology, larger) | larger


@settings(derandomize=True, max_examples=200)
@given(topic_sets)
def test_canonicalize_is_idempotent(toy_ontology, topics):
    once = canonicalize(toy_ontology, topics)
    assert canonicalize(toy_ontology, once) == once
