#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
合成数据生成器
生成可复现的元数据转储、机构表、期刊/会议名称表和配置文件，用于演示、测试与吞吐量检查
"""

import logging
import shutil
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from tqdm import tqdm

from .config_manager import ConfigManager, PipelineConfig
from .corpus import Authorship, Institution, PaperRecord, write_institutions, write_store
from .ontology import load_ontology

logger = logging.getLogger(__name__)

TOY_ONTOLOGY = Path(__file__).parent / "resources" / "toy_ontology.tsv"

FIRST_YEAR = 2005
LAST_YEAR = 2018

# venue_id -> (显示名称, 抽样权重)
VENUES: Dict[str, Tuple[str, float]] = {
    "chi": ("CHI Conference on Human Factors in Computing Systems", 0.30),
    "ijhcs": ("International Journal of Human-Computer Studies", 0.12),
    "ijmms": ("International Journal of Man-Machine Studies", 0.03),
    "cscw": ("Conference on Computer-Supported Cooperative Work", 0.12),
    "uist": ("Symposium on User Interface Software and Technology", 0.10),
    "tochi": ("ACM Transactions on Computer-Human Interaction", 0.10),
    "aij": ("Artificial Intelligence", 0.08),
    "iswc": ("International Semantic Web Conference", 0.07),
}
MISSING_VENUE_RATE = 0.08

COUNTRIES = ("US", "US", "US", "GB", "DE", "JP", "CN", "CA", "FR", "IT", "KR", "NL", "AU", "CH")
INSTITUTIONS_PER_COUNTRY = 3
MISSING_INSTITUTION_RATE = 0.05

TITLE_TEMPLATES = (
    "{a} in the wild",
    "towards {a} with {b}",
    "a study of {a} and {b}",
    "{a}: lessons from {b}",
    "understanding {a}",
    "designing {a} for {b}",
)
ABSTRACT_TEMPLATES = (
    "We present a novel approach to {a}. Our evaluation shows improvements over prior work.",
    "This paper investigates {a} and its relation to {b}. We report results from a field deployment.",
    "We conducted interviews on {a}. Findings inform the design of future systems.",
)


def synthetic_institutions() -> Dict[str, Institution]:
    """固定的机构表，最后一个机构缺少国家代码"""
    institutions: Dict[str, Institution] = {}
    for country in sorted(set(COUNTRIES)):
        for k in range(INSTITUTIONS_PER_COUNTRY):
            institution_id = f"inst-{country.lower()}-{k}"
            institutions[institution_id] = Institution(institution_id, f"University {k} of {country}", country)
    institutions["inst-xx-0"] = Institution("inst-xx-0", "Independent Laboratory")
    return institutions


def _topic_labels() -> List[str]:
    ontology = load_ontology(TOY_ONTOLOGY)
    return sorted(topic.primary_label for topic in ontology.topics.values())


def generate_records(n_papers: int = 200, seed: int = 7, progress: bool = False) -> List[PaperRecord]:
    """
    生成按年份排序的合成文献记录；参考文献只指向更早生成的记录，另有少量无法解析的外部引用

    Args:
        n_papers: 文献数
        seed: 随机种子
        progress: 是否显示进度条

    Returns:
        文献记录列表
    """
    rng = np.random.default_rng(seed)
    labels = _topic_labels()
    institutions = sorted(synthetic_institutions())
    venue_ids = list(VENUES)
    weights = np.array([VENUES[v][1] for v in venue_ids])
    weights = weights / weights.sum()

    years = np.sort(rng.integers(FIRST_YEAR, LAST_YEAR + 1, size=n_papers))
    records: List[PaperRecord] = []
    width = len(str(n_papers))
    for i in tqdm(range(n_papers), desc="生成", unit="篇", disable=not progress):
        a, b = (labels[j] for j in rng.choice(len(labels), size=2, replace=False))
        title = TITLE_TEMPLATES[int(rng.integers(len(TITLE_TEMPLATES)))].format(a=a, b=b)
        abstract = ABSTRACT_TEMPLATES[int(rng.integers(len(ABSTRACT_TEMPLATES)))].format(a=b, b=a)
        keywords = (labels[int(rng.integers(len(labels)))],)

        # 前几篇依次覆盖每个期刊/会议，保证每个 venue_id 都出现
        venue: Optional[str] = None
        if rng.random() >= MISSING_VENUE_RATE:
            venue = venue_ids[int(rng.choice(len(venue_ids), p=weights))]
        if i < len(venue_ids):
            venue = venue_ids[i]

        authorships = []
        for position in range(int(rng.integers(1, 5))):
            institution: Optional[str] = None
            if rng.random() >= MISSING_INSTITUTION_RATE:
                institution = institutions[int(rng.integers(len(institutions)))]
            authorships.append(Authorship(f"a{int(rng.integers(n_papers * 2))}", institution, position))

        references: List[str] = []
        if i:
            count = min(i, int(rng.integers(0, 9)))
            references = [f"p{int(j):0{width}d}" for j in sorted(rng.choice(i, size=count, replace=False))]
        if rng.random() < 0.1:
            references.append(f"ext-{i}")

        records.append(PaperRecord(
            paper_id=f"p{i:0{width}d}",
            year=int(years[i]),
            venue_id=venue,
            title=title,
            doi=f"10.9999/synthetic.{i}",
            abstract=abstract,
            keywords=keywords,
            authorships=tuple(authorships),
            references=tuple(references),
        ))
    return records


def write_synthetic_fixture(directory: Union[str, Path], n_papers: int = 200, seed: int = 7,
                            noise: bool = True, progress: bool = False) -> Path:
    """
    写出一套完整的输入与配置文件

    Args:
        directory: 目标目录
        n_papers: 文献数
        seed: 随机种子
        noise: 是否追加一行格式错误的记录和一行重复记录
        progress: 是否显示进度条

    Returns:
        生成的配置文件路径
    """
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)

    records = generate_records(n_papers, seed, progress)
    dump = target / "dump.tsv"
    write_store(records, dump)
    if noise and records:
        with open(dump, "a", encoding="utf-8", newline="") as f:
            f.write("broken-row\tnot-a-year\tchi\n")
            f.write(f"{records[0].paper_id}\t{records[0].year}\tchi\t\tduplicate row\t\t\t\t\n")

    write_institutions(synthetic_institutions(), target / "institutions.tsv")
    shutil.copyfile(TOY_ONTOLOGY, target / "ontology.tsv")
    with open(target / "venue_names.tsv", "w", encoding="utf-8", newline="") as f:
        for venue_id, (name, _) in VENUES.items():
            f.write(f"{venue_id}\t{name}\n")

    config = PipelineConfig(
        dump="dump.tsv",
        institutions="institutions.tsv",
        ontology="ontology.tsv",
        venue_names="venue_names.tsv",
        venues={"chi": ("chi",), "ijhcs": ("ijhcs", "ijmms")},
        group_thresholds=(10, 5, 2),
        top_k=10,
        min_solo_papers=2,
        out_dir="output",
        log_file="scientometrics.log",
    )
    config_path = target / "config.ini"
    ConfigManager.save_config_to_file(str(config_path), config.as_sections())
    logger.info(f"合成数据写出到 {target}: {len(records)} 篇文献")
    return config_path
