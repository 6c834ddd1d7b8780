#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
计数表与年份矩阵
所有指标的聚合结果都落在这两种只读结构中
"""

from collections import Counter
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd


class CountTable:
    """
    键 -> 非负计数的只读排序表

    排序规则：计数降序，计数相同时按键字典序升序

    Args:
        counts: 键到计数的映射或 (键, 计数) 序列
        key_name: 导出表格时键所在列的列名
    """

    def __init__(self, counts: Optional[Any] = None, key_name: str = "key"):
        merged: Counter = Counter()
        if isinstance(counts, (Mapping, CountTable)):
            items = counts.items()
        else:
            items = counts or ()
        for key, count in items:
            if count < 0:
                raise ValueError(f"计数不能为负: {key}={count}")
            merged[key] += int(count)
        self.key_name = key_name
        self._items: Tuple[Tuple[Hashable, int], ...] = tuple(
            sorted(((k, c) for k, c in merged.items() if c > 0), key=lambda kc: (-kc[1], kc[0]))
        )
        self._index: Dict[Hashable, int] = dict(self._items)

    @classmethod
    def from_keys(cls, keys: Iterable[Hashable], key_name: str = "key") -> "CountTable":
        """对一串键逐个计数"""
        return cls(Counter(keys), key_name)

    def items(self) -> Tuple[Tuple[Hashable, int], ...]:
        return self._items

    def keys(self) -> List[Hashable]:
        return [key for key, _ in self._items]

    def get(self, key: Hashable, default: int = 0) -> int:
        return self._index.get(key, default)

    @property
    def total(self) -> int:
        return sum(self._index.values())

    def top(self, k: Optional[int]) -> "CountTable":
        if k is None:
            return self
        if k < 0:
            raise ValueError(f"top_k 不能为负: {k}")
        return CountTable(self._items[:k], self.key_name)

    def merge(self, other: "CountTable") -> "CountTable":
        combined = Counter(self._index)
        combined.update(other._index)
        return CountTable(combined, self.key_name)

    def as_dict(self) -> Dict[Hashable, int]:
        return dict(self._items)

    def to_frame(self, count_name: str = "count") -> pd.DataFrame:
        return pd.DataFrame(list(self._items), columns=[self.key_name, count_name])

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.keys())

    def __contains__(self, key: object) -> bool:
        return key in self._index

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CountTable):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self._index == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __repr__(self) -> str:
        return f"CountTable({dict(self._items)!r})"


def merge_tables(tables: Iterable[CountTable], key_name: str = "key") -> CountTable:
    merged = CountTable(key_name=key_name)
    for table in tables:
        merged = merged.merge(table)
    return merged


class YearMatrix:
    """
    行键 × 年份的计数矩阵，缺失组合为显式的0

    Args:
        row_keys: 有序行键（期刊/会议、年份或主题）
        col_years: 有序年份列
        cells: 形状为 (行数, 列数) 的非负整数矩阵
        row_name: 导出时行键所在列的列名
        excluded: 行键 -> 因缺少年份未进入矩阵的事件数
    """

    def __init__(self, row_keys: Sequence[Hashable], col_years: Sequence[int],
                 cells: Optional[np.ndarray] = None, row_name: str = "row",
                 excluded: Optional[Mapping[Hashable, int]] = None):
        self.row_keys: Tuple[Hashable, ...] = tuple(row_keys)
        self.col_years: Tuple[int, ...] = tuple(col_years)
        shape = (len(self.row_keys), len(self.col_years))
        if cells is None:
            cells = np.zeros(shape, dtype=np.int64)
        cells = np.asarray(cells, dtype=np.int64).reshape(shape)
        if (cells < 0).any():
            raise ValueError("矩阵计数不能为负")
        cells.setflags(write=False)
        self.cells = cells
        self.row_name = row_name
        self.excluded: Dict[Hashable, int] = {key: int((excluded or {}).get(key, 0)) for key in self.row_keys}
        if any(v < 0 for v in self.excluded.values()):
            raise ValueError("排除计数不能为负")

    @classmethod
    def from_counts(cls, counts: Mapping[Tuple[Hashable, int], int],
                    row_keys: Optional[Sequence[Hashable]] = None,
                    row_name: str = "row",
                    excluded: Optional[Mapping[Hashable, int]] = None) -> "YearMatrix":
        """
        由 (行键, 年份) -> 计数 构造矩阵

        年份列取出现过的最小到最大年份的连续区间；row_keys 为空时行键按排序取出现过的全部键，
        给定 row_keys 时只保留这些行
        """
        if row_keys is None:
            row_keys = sorted({row for row, _ in counts})
        rows = {key: i for i, key in enumerate(row_keys)}
        years = [year for (row, year), count in counts.items() if row in rows and count]
        col_years = list(range(min(years), max(years) + 1)) if years else []
        cols = {year: j for j, year in enumerate(col_years)}

        cells = np.zeros((len(rows), len(col_years)), dtype=np.int64)
        for (row, year), count in counts.items():
            if row in rows and count:
                cells[rows[row], cols[year]] += count
        return cls(row_keys, col_years, cells, row_name, excluded)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    @property
    def total_excluded(self) -> int:
        return sum(self.excluded.values())

    def row_sums(self) -> Dict[Hashable, int]:
        return {key: int(value) for key, value in zip(self.row_keys, self.cells.sum(axis=1))}

    def row_totals(self) -> Dict[Hashable, int]:
        """每行矩阵内计数与排除计数之和"""
        return {key: total + self.excluded[key] for key, total in self.row_sums().items()}

    def to_long_frame(self) -> pd.DataFrame:
        """长表 (行键, 年份, 计数)，包含0"""
        records = [
            (key, year, int(self.cells[i, j]))
            for i, key in enumerate(self.row_keys)
            for j, year in enumerate(self.col_years)
        ]
        return pd.DataFrame(records, columns=[self.row_name, "year", "count"])

    def to_dense_frame(self, with_excluded: bool = False) -> pd.DataFrame:
        """宽表，行键 + 每年一列；with_excluded 时追加 no_year 列"""
        frame = pd.DataFrame(self.cells, columns=[str(y) for y in self.col_years])
        frame.insert(0, self.row_name, list(self.row_keys))
        if with_excluded:
            frame["no_year"] = [self.excluded[key] for key in self.row_keys]
        return frame

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, YearMatrix):
            return NotImplemented
        return (self.row_keys == other.row_keys and self.col_years == other.col_years
                and np.array_equal(self.cells, other.cells) and self.excluded == other.excluded)

    def __repr__(self) -> str:
        return f"YearMatrix(rows={len(self.row_keys)}, years={self.col_years[:1]}..{self.col_years[-1:]}, total={self.total})"
