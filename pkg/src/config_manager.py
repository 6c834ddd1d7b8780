#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理器
读取INI配置文件，合并命令行覆盖项，并校验为 PipelineConfig
"""

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from .errors import ConfigError

MODES = ("lenient", "strict")


def _split_list(value: str) -> Tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


@dataclass(frozen=True)
class PipelineConfig:
    """
    一次运行的全部参数

    路径在加载时已相对配置文件所在目录解析为绝对路径
    """
    dump: str = ""
    institutions: str = ""
    ontology: str = ""
    stopwords: str = ""
    venue_names: str = ""
    schema: str = ""
    venues: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    threshold: float = 0.94
    max_workers: int = 4
    start_year: int = 2009
    end_year: int = 2018
    group_thresholds: Tuple[int, ...] = (60, 20, 10, 5)
    split_year: int = 2013
    top_countries: int = 10
    top_k: int = 30
    min_solo_papers: int = 5
    topic_report_topics: Tuple[str, ...] = ()
    heatmaps: bool = True
    mode: str = "lenient"
    out_dir: str = "output"
    log_file: str = "scientometrics.log"
    log_level: str = "INFO"

    def validate(self) -> "PipelineConfig":
        """
        校验参数，失败时抛出带字段名的 ConfigError

        Returns:
            自身，便于链式调用
        """
        for name in ("dump", "institutions", "ontology", "out_dir"):
            if not getattr(self, name):
                raise ConfigError("路径不能为空", name)
        if not self.venues:
            raise ConfigError("至少需要一个期刊/会议", "venues")
        for name, ids in self.venues.items():
            if not ids:
                raise ConfigError("venue_id 列表为空", f"venues.{name}")
        if not 0.0 < self.threshold <= 1.0:
            raise ConfigError(f"必须在 (0, 1] 内，实际 {self.threshold}", "threshold")
        if self.max_workers < 1:
            raise ConfigError(f"必须 >= 1，实际 {self.max_workers}", "max_workers")
        if self.start_year >= self.end_year:
            raise ConfigError(f"必须早于 end_year ({self.end_year})，实际 {self.start_year}", "start_year")
        if not self.start_year <= self.split_year < self.end_year:
            raise ConfigError(f"必须在 [{self.start_year}, {self.end_year}) 内，实际 {self.split_year}", "split_year")
        thresholds = self.group_thresholds
        if not thresholds or any(t <= 0 for t in thresholds) or any(a <= b for a, b in zip(thresholds, thresholds[1:])):
            raise ConfigError(f"必须是严格递减的正整数，实际 {list(thresholds)}", "group_thresholds")
        for name in ("top_k", "top_countries", "min_solo_papers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"必须 >= 1，实际 {getattr(self, name)}", name)
        if self.mode not in MODES:
            raise ConfigError(f"必须是 {' 或 '.join(MODES)}，实际 {self.mode!r}", "mode")
        return self

    def with_overrides(self, **overrides: Any) -> "PipelineConfig":
        """命令行覆盖项，值为 None 的项忽略"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def select_venues(self, names: Optional[Tuple[str, ...]]) -> "PipelineConfig":
        """只保留指定的逻辑期刊/会议"""
        if not names:
            return self
        unknown = [name for name in names if name not in self.venues]
        if unknown:
            raise ConfigError(f"配置中没有 {', '.join(unknown)}（可选: {', '.join(sorted(self.venues))}）", "venue")
        return replace(self, venues={name: self.venues[name] for name in names})

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["venues"] = {name: list(ids) for name, ids in sorted(self.venues.items())}
        data["group_thresholds"] = list(self.group_thresholds)
        data["topic_report_topics"] = list(self.topic_report_topics)
        return data

    def digest(self) -> str:
        """规范化序列化后的 SHA-256"""
        canonical = json.dumps(self.as_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def as_sections(self) -> Dict[str, Dict[str, Any]]:
        """转换回INI的分段结构"""
        return {
            "inputs": {k: getattr(self, k) for k in ("dump", "institutions", "ontology", "stopwords",
                                                     "venue_names", "schema")},
            "venues": {name: ", ".join(ids) for name, ids in sorted(self.venues.items())},
            "classifier": {"threshold": self.threshold, "max_workers": self.max_workers},
            "trends": {
                "start_year": self.start_year,
                "end_year": self.end_year,
                "group_thresholds": ", ".join(str(t) for t in self.group_thresholds),
                "split_year": self.split_year,
                "top_countries": self.top_countries,
            },
            "reports": {
                "top_k": self.top_k,
                "min_solo_papers": self.min_solo_papers,
                "topic_report_topics": ", ".join(self.topic_report_topics),
                "heatmaps": str(self.heatmaps).lower(),
            },
            "ingest": {"mode": self.mode},
            "output": {"out_dir": self.out_dir},
            "logging": {"log_file": self.log_file, "level": self.log_level},
        }


class ConfigManager:
    def __init__(self, config_file: str = "config.ini"):
        """
        初始化配置管理器

        Args:
            config_file: 配置文件路径
        """
        self.config_file = Path(config_file)
        self.config = configparser.ConfigParser()
        # venue 名称保留大小写
        self.config.optionxform = str  # type: ignore[assignment]
        self.load_config()

    def load_config(self):
        """加载配置文件"""
        if not self.config_file.exists():
            raise ConfigError(f"配置文件不存在: {self.config_file}", "config")
        try:
            self.config.read(self.config_file, encoding='utf-8')
        except configparser.Error as e:
            raise ConfigError(f"配置文件格式错误: {e}", "config") from e

    def _path(self, section: str, key: str, default: str = "") -> str:
        """相对路径按配置文件所在目录解析"""
        value = self.config.get(section, key, fallback="").strip() or default
        if not value:
            return ""
        path = Path(value)
        if not path.is_absolute():
            path = self.config_file.resolve().parent / path
        return str(path)

    def _typed(self, section: str, key: str, convert, default):
        raw = self.config.get(section, key, fallback="").strip()
        if not raw:
            return default
        try:
            return convert(raw)
        except ValueError as e:
            raise ConfigError(f"无法解析 {raw!r}: {e}", key) from e

    def get_venues(self) -> Dict[str, Tuple[str, ...]]:
        """逻辑期刊/会议名称 -> venue_id 集合"""
        if "venues" not in self.config.sections():
            return {}
        return {name: _split_list(value) for name, value in sorted(self.config["venues"].items())}

    def get_pipeline_config(self) -> PipelineConfig:
        """读取全部配置，尚未应用命令行覆盖项，也未校验"""
        def to_bool(raw: str) -> bool:
            lowered = raw.lower()
            if lowered not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError("需要 true 或 false")
            return lowered in ("true", "yes", "1")

        def to_int_list(raw: str) -> Tuple[int, ...]:
            return tuple(int(item) for item in _split_list(raw))

        defaults = PipelineConfig()
        return PipelineConfig(
            dump=self._path("inputs", "dump"),
            institutions=self._path("inputs", "institutions"),
            ontology=self._path("inputs", "ontology"),
            stopwords=self._path("inputs", "stopwords"),
            venue_names=self._path("inputs", "venue_names"),
            schema=self._path("inputs", "schema"),
            venues=self.get_venues(),
            threshold=self._typed("classifier", "threshold", float, defaults.threshold),
            max_workers=self._typed("classifier", "max_workers", int, defaults.max_workers),
            start_year=self._typed("trends", "start_year", int, defaults.start_year),
            end_year=self._typed("trends", "end_year", int, defaults.end_year),
            group_thresholds=self._typed("trends", "group_thresholds", to_int_list, defaults.group_thresholds),
            split_year=self._typed("trends", "split_year", int, defaults.split_year),
            top_countries=self._typed("trends", "top_countries", int, defaults.top_countries),
            top_k=self._typed("reports", "top_k", int, defaults.top_k),
            min_solo_papers=self._typed("reports", "min_solo_papers", int, defaults.min_solo_papers),
            topic_report_topics=self._typed("reports", "topic_report_topics", _split_list, ()),
            heatmaps=self._typed("reports", "heatmaps", to_bool, defaults.heatmaps),
            mode=self.config.get("ingest", "mode", fallback=defaults.mode).strip() or defaults.mode,
            out_dir=self._path("output", "out_dir", defaults.out_dir),
            log_file=self._path("logging", "log_file", defaults.log_file),
            log_level=self.config.get("logging", "level", fallback=defaults.log_level).strip().upper()
            or defaults.log_level,
        )

    @staticmethod
    def save_config_to_file(output_file: str, config_data: Mapping[str, Mapping[str, Any]]):
        """
        保存配置到INI文件

        Args:
            output_file: 输出文件路径
            config_data: 配置数据
        """
        config = configparser.ConfigParser()
        config.optionxform = str  # type: ignore[assignment]
        for section_name, section_data in config_data.items():
            config[section_name] = {key: str(value) for key, value in section_data.items()}

        with open(output_file, 'w', encoding='utf-8') as f:
            config.write(f)


_config_managers: Dict[str, ConfigManager] = {}


def get_config_manager(config_file: str = "config.ini") -> ConfigManager:
    """获取配置管理器实例，每个配置文件只读取一次"""
    key = str(Path(config_file).resolve())
    if key not in _config_managers:
        _config_managers[key] = ConfigManager(config_file)
    return _config_managers[key]
