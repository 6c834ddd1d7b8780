#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
文献元数据语料
定义数据模型，导入TSV元数据转储，并抽取以期刊/会议为中心的引用语料
"""

import configparser
import csv
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import (Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional,
                    Sequence, TextIO, Tuple, Union)

import pycountry
from tqdm import tqdm

from .errors import ConfigError, NotFoundError, ParseError, SchemaError

logger = logging.getLogger(__name__)

UNKNOWN = "unknown"
NA_VENUE = "n/a"
YEAR_MIN = 1800
YEAR_MAX = 2100

REQUIRED_COLUMNS = ("paper_id", "year", "venue_id")
OPTIONAL_COLUMNS = ("doi", "title", "abstract", "keywords", "authorships", "references")
DEFAULT_COLUMN_ORDER = REQUIRED_COLUMNS + OPTIONAL_COLUMNS

PARTITIONS = ("accepted", "citing", "cited")

# 摘要等长字段可能远超 csv 默认的 131072 字符上限
csv.field_size_limit(min(sys.maxsize, 2 ** 31 - 1))


@dataclass(frozen=True)
class Authorship:
    """作者署名：作者标识、机构标识（可为空）、作者顺序（从0开始）"""
    author_id: str
    institution_id: Optional[str]
    position: int


@dataclass(frozen=True)
class PaperRecord:
    """一篇文献"""
    paper_id: str
    year: Optional[int]
    venue_id: Optional[str]
    title: str = ""
    doi: Optional[str] = None
    abstract: Optional[str] = None
    keywords: Tuple[str, ...] = ()
    authorships: Tuple[Authorship, ...] = ()
    references: Tuple[str, ...] = ()

    @property
    def first_author(self) -> Optional[Authorship]:
        return self.authorships[0] if self.authorships else None


@dataclass(frozen=True)
class Institution:
    institution_id: str
    name: str
    country_code: str = UNKNOWN


@dataclass(frozen=True)
class Contribution:
    """一条贡献：一个作者及其所属机构"""
    author_id: str
    institution_id: Optional[str]
    country_code: str
    position: int


@dataclass(frozen=True)
class ColumnSchema:
    """
    列映射

    Args:
        columns: 字段名 -> 列下标
        delimiter: 列分隔符
        list_separator: 列表项分隔符（作者署名、参考文献、关键词）
        pair_separator: 作者署名内部分隔符（author_id,institution_id）
        has_header: 首行是否为表头
    """
    columns: Mapping[str, int]
    delimiter: str = "\t"
    list_separator: str = ";"
    pair_separator: str = ","
    has_header: bool = False

    def __post_init__(self):
        missing = [name for name in REQUIRED_COLUMNS if name not in self.columns]
        if missing:
            raise ConfigError(f"列映射缺少必需列: {', '.join(missing)}", field="columns")
        unknown = [name for name in self.columns if name not in DEFAULT_COLUMN_ORDER]
        if unknown:
            raise SchemaError(f"未知的列名: {', '.join(sorted(unknown))}", field="columns")
        if any(index < 0 for index in self.columns.values()):
            raise SchemaError("列下标不能为负数", field="columns")
        if len(set(self.columns.values())) != len(self.columns):
            raise SchemaError("多个字段映射到同一列", field="columns")
        object.__setattr__(self, "columns", MappingProxyType(dict(self.columns)))

    @classmethod
    def default(cls) -> "ColumnSchema":
        """与 write_store 输出格式一致的默认列映射"""
        return cls({name: index for index, name in enumerate(DEFAULT_COLUMN_ORDER)})

    @property
    def width(self) -> int:
        return max(self.columns.values()) + 1

    def cell(self, fields: Sequence[str], name: str) -> str:
        index = self.columns.get(name)
        if index is None or index >= len(fields):
            return ""
        return fields[index]


def load_schema(path: Union[str, Path]) -> ColumnSchema:
    """
    读取列映射文件（INI格式，[columns] 段为 名称=列下标）

    Args:
        path: 列映射文件路径

    Returns:
        列映射
    """
    schema_path = Path(path)
    if not schema_path.exists():
        raise SchemaError(f"列映射文件不存在: {schema_path}", field="schema")

    parser = configparser.ConfigParser()
    parser.read(schema_path, encoding="utf-8")
    if "columns" not in parser.sections():
        raise SchemaError("列映射文件缺少 [columns] 段", field="schema")

    columns: Dict[str, int] = {}
    for name, value in parser["columns"].items():
        try:
            columns[name] = int(value)
        except ValueError:
            raise SchemaError(f"列下标不是整数: {name} = {value}", field=f"columns.{name}")

    fmt = parser["format"] if "format" in parser.sections() else {}
    delimiter = fmt.get("delimiter", "tab")
    return ColumnSchema(
        columns,
        delimiter="\t" if delimiter in ("tab", "\\t") else delimiter,
        list_separator=fmt.get("list_separator", ";"),
        pair_separator=fmt.get("pair_separator", ","),
        has_header=str(fmt.get("has_header", "false")).lower() == "true",
    )


@dataclass(frozen=True)
class IngestStats:
    """导入计数"""
    rows_read: int = 0
    records: int = 0
    skipped: int = 0
    duplicates: int = 0
    self_references_dropped: int = 0
    authorship_rows: int = 0

    def as_dict(self) -> Dict[str, int]:
        return {
            "rows_read": self.rows_read,
            "records": self.records,
            "skipped": self.skipped,
            "duplicates": self.duplicates,
            "self_references_dropped": self.self_references_dropped,
            "authorship_rows": self.authorship_rows,
        }


class CorpusStore:
    """只读的文献库：记录、机构表与期刊/会议表"""

    def __init__(self, records: Iterable[PaperRecord],
                 institutions: Optional[Mapping[str, Institution]] = None,
                 venue_names: Optional[Mapping[str, str]] = None):
        self._records: Tuple[PaperRecord, ...] = tuple(records)
        by_id: Dict[str, PaperRecord] = {}
        venues: Dict[str, int] = {}
        for record in self._records:
            if record.paper_id in by_id:
                raise ValueError(f"重复的文献标识: {record.paper_id}")
            by_id[record.paper_id] = record
            if record.venue_id is not None:
                venues[record.venue_id] = venues.get(record.venue_id, 0) + 1

        self._by_id = MappingProxyType(by_id)
        self._venues = MappingProxyType(dict(sorted(venues.items())))
        self._institutions = MappingProxyType(dict(institutions or {}))
        self._venue_names = MappingProxyType(dict(venue_names or {}))

    @property
    def records(self) -> Tuple[PaperRecord, ...]:
        return self._records

    @property
    def by_id(self) -> Mapping[str, PaperRecord]:
        return self._by_id

    @property
    def venues(self) -> Mapping[str, int]:
        """venue_id -> 记录数"""
        return self._venues

    @property
    def institutions(self) -> Mapping[str, Institution]:
        return self._institutions

    @property
    def venue_names(self) -> Mapping[str, str]:
        return self._venue_names

    def venue_label(self, venue_id: Optional[str]) -> str:
        if venue_id is None:
            return NA_VENUE
        return self._venue_names.get(venue_id, venue_id)

    def get(self, paper_id: str) -> Optional[PaperRecord]:
        return self._by_id.get(paper_id)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[PaperRecord]:
        return iter(self._records)

    def __contains__(self, paper_id: object) -> bool:
        return paper_id in self._by_id


@dataclass(frozen=True)
class IngestResult:
    store: CorpusStore
    stats: IngestStats


class _MalformedRow(Exception):
    pass


def _split_list(value: str, separator: str) -> List[str]:
    return [item.strip() for item in value.split(separator) if item.strip()]


def _parse_year(value: str) -> Optional[int]:
    value = value.strip()
    if not value:
        return None
    try:
        year = int(value)
    except ValueError:
        raise _MalformedRow(f"年份不是整数: {value!r}")
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise _MalformedRow(f"年份超出范围 [{YEAR_MIN}, {YEAR_MAX}]: {year}")
    return year


def _parse_authorships(value: str, schema: ColumnSchema) -> Tuple[Authorship, ...]:
    authorships = []
    for position, entry in enumerate(_split_list(value, schema.list_separator)):
        author_id, _, institution_id = entry.partition(schema.pair_separator)
        author_id = author_id.strip()
        institution_id = institution_id.strip()
        if not author_id:
            raise _MalformedRow(f"作者署名缺少作者标识: {entry!r}")
        authorships.append(Authorship(author_id, institution_id or None, position))
    return tuple(authorships)


_STORE_SCHEMA = ColumnSchema.default()


def _check_storable(record: PaperRecord) -> None:
    """规范化文献库按默认列映射写出，字段中出现默认分隔符的行无法原样写回"""
    text = _STORE_SCHEMA.delimiter
    item = text + _STORE_SCHEMA.list_separator
    pair = item + _STORE_SCHEMA.pair_separator
    values = [
        ("paper_id", record.paper_id, item),
        ("venue_id", record.venue_id or "", text),
        ("doi", record.doi or "", text),
        ("title", record.title, text),
        ("abstract", record.abstract or "", text),
    ]
    values += [("keywords", keyword, item) for keyword in record.keywords]
    values += [("references", ref, item) for ref in record.references]
    for a in record.authorships:
        values += [("authorships", a.author_id, pair), ("authorships", a.institution_id or "", pair)]
    for name, value, reserved in values:
        found = sorted({ch for ch in value if ch in reserved})
        if found:
            raise _MalformedRow(f"{name} 含有保留分隔符 {found!r}: {value[:40]!r}")


def _parse_row(fields: Sequence[str], schema: ColumnSchema) -> Tuple[PaperRecord, int]:
    """解析一行，返回 (记录, 丢弃的自引用数)"""
    if len(fields) < schema.width:
        raise _MalformedRow(f"列数不足: 期望至少 {schema.width} 列，实际 {len(fields)} 列")

    paper_id = schema.cell(fields, "paper_id").strip()
    if not paper_id:
        raise _MalformedRow("paper_id 为空")

    references: List[str] = []
    self_references = 0
    for ref in _split_list(schema.cell(fields, "references"), schema.list_separator):
        if ref == paper_id:
            self_references += 1
        elif ref not in references:
            references.append(ref)

    record = PaperRecord(
        paper_id=paper_id,
        year=_parse_year(schema.cell(fields, "year")),
        venue_id=schema.cell(fields, "venue_id").strip() or None,
        title=schema.cell(fields, "title"),
        doi=schema.cell(fields, "doi").strip() or None,
        abstract=schema.cell(fields, "abstract") or None,
        keywords=tuple(_split_list(schema.cell(fields, "keywords"), schema.list_separator)),
        authorships=_parse_authorships(schema.cell(fields, "authorships"), schema),
        references=tuple(references),
    )
    _check_storable(record)
    return record, self_references


def _split_line(line: Union[str, bytes], schema: ColumnSchema) -> Optional[List[str]]:
    """切分一行，空行返回 None；无法解码或切分时抛出 _MalformedRow"""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as e:
            raise _MalformedRow(f"不是有效的UTF-8: 第 {e.start} 字节 ({e.reason})")
    line = line.rstrip("\r\n")
    if not line.strip():
        return None
    try:
        fields = next(csv.reader([line], delimiter=schema.delimiter, quoting=csv.QUOTE_NONE), [])
    except csv.Error as e:
        raise _MalformedRow(f"无法切分: {e}")
    if all(not value.strip() for value in fields):
        return None
    return fields


def ingest(source: Iterable[Union[str, bytes]], schema: Optional[ColumnSchema] = None, mode: str = "lenient",
           institutions: Optional[Mapping[str, Institution]] = None,
           venue_names: Optional[Mapping[str, str]] = None,
           source_name: str = "<stream>", progress: bool = False) -> IngestResult:
    """
    导入分隔符文本流

    Args:
        source: 可迭代的行，文本或UTF-8字节（已打开的文件或列表），每行单独解码与切分
        schema: 列映射，默认使用 ColumnSchema.default()
        mode: strict 遇到首个错误行即中止；lenient 跳过错误行并计数
        institutions: 机构表
        venue_names: 期刊/会议显示名称表
        source_name: 错误信息中使用的来源名称
        progress: 是否显示进度条

    Returns:
        导入结果（只读文献库与计数）
    """
    if mode not in ("strict", "lenient"):
        raise ConfigError(f"未知的导入模式: {mode}", field="mode")
    schema = schema or ColumnSchema.default()
    strict = mode == "strict"

    records: List[PaperRecord] = []
    seen: Dict[str, int] = {}
    skipped = duplicates = self_refs = authorship_rows = 0

    rows = tqdm(source, desc="导入", unit="行", disable=not progress)
    for line_number, line in enumerate(rows, 1):
        if schema.has_header and line_number == 1:
            continue
        try:
            fields = _split_line(line, schema)
            if fields is None:
                continue
            record, dropped = _parse_row(fields, schema)
        except _MalformedRow as e:
            if strict:
                raise ParseError(str(e), line_number, source_name)
            skipped += 1
            logger.debug(f"跳过第 {line_number} 行: {e}")
            continue

        if record.paper_id in seen:
            if strict:
                raise ParseError(
                    f"重复的 paper_id {record.paper_id}（首次出现于第 {seen[record.paper_id]} 行）",
                    line_number, source_name)
            duplicates += 1
            logger.debug(f"第 {line_number} 行重复的 paper_id {record.paper_id}，保留首次出现")
            continue

        seen[record.paper_id] = line_number
        self_refs += dropped
        authorship_rows += len(record.authorships)
        records.append(record)

    rows_read = len(records) + skipped + duplicates
    stats = IngestStats(rows_read, len(records), skipped, duplicates, self_refs, authorship_rows)
    logger.info(f"导入完成 {source_name}: 读取 {rows_read} 行，保留 {len(records)} 条记录，"
                f"跳过 {skipped} 行，重复 {duplicates} 行")
    return IngestResult(CorpusStore(records, institutions, venue_names), stats)


def ingest_file(path: Union[str, Path], schema: Optional[ColumnSchema] = None, mode: str = "lenient",
                institutions: Optional[Mapping[str, Institution]] = None,
                venue_names: Optional[Mapping[str, str]] = None,
                progress: bool = False) -> IngestResult:
    """从文件导入（按字节逐行读取），无法读取时抛出 OSError"""
    with open(path, "rb") as f:
        return ingest(f, schema, mode, institutions, venue_names, source_name=str(path), progress=progress)


def _normalize_country(code: str) -> str:
    code = code.strip().upper()
    if len(code) == 2 and code.isalpha() and pycountry.countries.get(alpha_2=code) is not None:
        return code
    return UNKNOWN


def load_institutions(source: Union[str, Path, TextIO]) -> Dict[str, Institution]:
    """
    读取机构表（institution_id, name, country_code）

    无效或缺失的国家代码记为 "unknown"
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as f:
            return load_institutions(f)

    institutions: Dict[str, Institution] = {}
    unresolved = 0
    for line_number, fields in enumerate(csv.reader(source, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
        if not fields or not fields[0].strip():
            continue
        if line_number == 1 and [f.strip().lower() for f in fields[:3]] == ["institution_id", "name", "country_code"]:
            continue
        institution_id = fields[0].strip()
        name = fields[1].strip() if len(fields) > 1 else ""
        raw_code = fields[2] if len(fields) > 2 else ""
        country = _normalize_country(raw_code)
        if country == UNKNOWN and raw_code.strip().lower() != UNKNOWN:
            unresolved += 1
        if institution_id in institutions:
            logger.warning(f"机构表第 {line_number} 行重复的机构标识 {institution_id}，保留首次出现")
            continue
        institutions[institution_id] = Institution(institution_id, name, country)

    logger.info(f"读取机构 {len(institutions)} 个，其中 {unresolved} 个国家代码无法识别")
    return institutions


def load_venue_names(source: Union[str, Path]) -> Dict[str, str]:
    """读取期刊/会议显示名称表（venue_id, name）"""
    names: Dict[str, str] = {}
    with open(source, "r", encoding="utf-8", newline="") as f:
        for fields in csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE):
            if len(fields) >= 2 and fields[0].strip():
                names.setdefault(fields[0].strip(), fields[1].strip())
    return names


def _format_record(record: PaperRecord) -> List[str]:
    lists = _STORE_SCHEMA.list_separator
    authorships = lists.join(
        f"{a.author_id}{_STORE_SCHEMA.pair_separator}{a.institution_id}" if a.institution_id else a.author_id
        for a in record.authorships
    )
    values = {
        "paper_id": record.paper_id,
        "year": "" if record.year is None else str(record.year),
        "venue_id": record.venue_id or "",
        "doi": record.doi or "",
        "title": record.title,
        "abstract": record.abstract or "",
        "keywords": lists.join(record.keywords),
        "authorships": authorships,
        "references": lists.join(record.references),
    }
    return [values[name] for name in DEFAULT_COLUMN_ORDER]


def write_store(store: Union[CorpusStore, Iterable[PaperRecord]], target: Union[str, Path, TextIO]) -> int:
    """
    按默认列映射序列化文献库，可被 ingest 重新导入

    Returns:
        写出的记录数
    """
    if isinstance(target, (str, Path)):
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as f:
            return write_store(store, f)

    count = 0
    for record in store:
        target.write(_STORE_SCHEMA.delimiter.join(_format_record(record)) + "\n")
        count += 1
    return count


def write_institutions(institutions: Mapping[str, Institution], target: Union[str, Path]) -> None:
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("institution_id\tname\tcountry_code\n")
        for institution_id in sorted(institutions):
            inst = institutions[institution_id]
            f.write(f"{inst.institution_id}\t{inst.name}\t{inst.country_code}\n")


def contributions(paper: PaperRecord, institutions: Mapping[str, Institution]) -> List[Contribution]:
    """
    计算一篇文献的贡献列表，每个作者一条，按作者顺序排列

    Args:
        paper: 文献记录
        institutions: 机构表

    Returns:
        贡献列表；机构或国家缺失时国家记为 "unknown"
    """
    result = []
    for authorship in paper.authorships:
        institution = institutions.get(authorship.institution_id) if authorship.institution_id else None
        country = institution.country_code if institution is not None and institution.country_code else UNKNOWN
        result.append(Contribution(authorship.author_id, authorship.institution_id, country, authorship.position))
    return result


@dataclass(frozen=True)
class VenueCorpus:
    """
    以期刊/会议为中心的三分区语料

    accepted: 发表于该期刊/会议的文献
    citing: 引用了 accepted 中至少一篇的文献
    cited: 被 accepted 中至少一篇引用的文献
    """
    venue_id: str
    venue_ids: FrozenSet[str]
    accepted: Tuple[PaperRecord, ...]
    citing: Tuple[PaperRecord, ...]
    cited: Tuple[PaperRecord, ...]
    dangling_references: int = 0
    store: CorpusStore = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    @property
    def institutions(self) -> Mapping[str, Institution]:
        return self.store.institutions if self.store is not None else {}

    @property
    def accepted_ids(self) -> FrozenSet[str]:
        return frozenset(r.paper_id for r in self.accepted)

    def partition(self, name: str) -> Tuple[PaperRecord, ...]:
        if name not in PARTITIONS:
            raise ValueError(f"未知的分区: {name}（可选: {', '.join(PARTITIONS)}）")
        return getattr(self, name)

    def summary(self) -> Dict[str, int]:
        return {
            "accepted": len(self.accepted),
            "citing": len(self.citing),
            "cited": len(self.cited),
            "dangling_references": self.dangling_references,
        }

    def manifest_text(self, stats: Optional[IngestStats] = None) -> str:
        """语料清单：分区大小、跳过计数与悬空引用数"""
        lines = [
            f"venue: {self.venue_id}",
            f"venue_ids: {', '.join(sorted(self.venue_ids))}",
        ]
        lines += [f"{key}: {value}" for key, value in self.summary().items()]
        if stats is not None:
            lines += [f"ingest_{key}: {value}" for key, value in stats.as_dict().items()]
        return "\n".join(lines) + "\n"


def _as_id_set(venue_ids: Union[str, Iterable[str]]) -> FrozenSet[str]:
    if isinstance(venue_ids, str):
        return frozenset([venue_ids])
    return frozenset(venue_ids)


def extract_venue_dataset(store: CorpusStore, venue_ids: Union[str, Iterable[str]],
                          name: Optional[str] = None) -> VenueCorpus:
    """
    抽取一个逻辑期刊/会议的语料

    Args:
        store: 文献库
        venue_ids: 单个 venue_id 或组成同一逻辑期刊的 venue_id 集合
        name: 逻辑名称，默认取最小的 venue_id

    Returns:
        三分区语料；无法解析的参考文献只计数，不参与任何指标
    """
    ids = _as_id_set(venue_ids)
    if not ids:
        raise ValueError("venue_ids 不能为空")
    present = ids & store.venues.keys()
    if not present:
        raise NotFoundError("期刊/会议", ", ".join(sorted(ids)))
    for venue_id in sorted(ids - present):
        logger.warning(f"逻辑期刊/会议 {name or min(ids)} 的别名 {venue_id} 不在文献库中")

    accepted = [r for r in store.records if r.venue_id in ids]
    accepted_ids = {r.paper_id for r in accepted}

    cited_ids = set()
    dangling = 0
    for record in accepted:
        for ref in record.references:
            if ref in store.by_id:
                cited_ids.add(ref)
            else:
                dangling += 1

    citing = [r for r in store.records if not accepted_ids.isdisjoint(r.references)]
    cited = [store.by_id[paper_id] for paper_id in cited_ids]

    def by_id(records: Iterable[PaperRecord]) -> Tuple[PaperRecord, ...]:
        return tuple(sorted(records, key=lambda r: r.paper_id))

    corpus = VenueCorpus(
        venue_id=name or min(ids),
        venue_ids=ids,
        accepted=by_id(accepted),
        citing=by_id(citing),
        cited=by_id(cited),
        dangling_references=dangling,
        store=store,
    )
    logger.info(f"抽取 {corpus.venue_id}: accepted={len(accepted)} citing={len(citing)} "
                f"cited={len(cited)} 悬空引用={dangling}")
    return corpus


def save_venue_corpus(corpus: VenueCorpus, directory: Union[str, Path],
                      stats: Optional[IngestStats] = None) -> Path:
    """写出分区标识列表与语料清单，返回清单路径"""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    for partition in PARTITIONS:
        ids = [r.paper_id for r in corpus.partition(partition)]
        (target / f"{partition}.ids").write_text("".join(f"{i}\n" for i in ids), encoding="utf-8")
    manifest = target / "manifest.txt"
    manifest.write_text(corpus.manifest_text(stats), encoding="utf-8")
    return manifest


def load_venue_corpus(store: CorpusStore, directory: Union[str, Path]) -> VenueCorpus:
    """根据清单与分区标识列表重建语料"""
    source = Path(directory)
    manifest: Dict[str, str] = {}
    for line in (source / "manifest.txt").read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition(":")
        manifest[key.strip()] = value.strip()

    partitions: Dict[str, Tuple[PaperRecord, ...]] = {}
    for partition in PARTITIONS:
        ids = (source / f"{partition}.ids").read_text(encoding="utf-8").split()
        missing = [paper_id for paper_id in ids if paper_id not in store]
        if missing:
            raise NotFoundError("文献", missing[0])
        partitions[partition] = tuple(store.by_id[paper_id] for paper_id in ids)

    return VenueCorpus(
        venue_id=manifest["venue"],
        venue_ids=frozenset(v.strip() for v in manifest["venue_ids"].split(",") if v.strip()),
        accepted=partitions["accepted"],
        citing=partitions["citing"],
        cited=partitions["cited"],
        dangling_references=int(manifest.get("dangling_references", 0)),
        store=store,
    )
