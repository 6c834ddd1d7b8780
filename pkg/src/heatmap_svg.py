#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
年份矩阵的SVG热力图
单元格灰度为 log1p(计数)/log1p(最大值)，0为黑色
"""

from pathlib import Path
from typing import List, Union
from xml.sax.saxutils import escape

import numpy as np

from .metrics.tables import YearMatrix

CELL = 14
LABEL_WIDTH = 180
HEADER_HEIGHT = 48
FONT_SIZE = 10


def grey_levels(cells: np.ndarray) -> np.ndarray:
    """把计数映射为 0..255 的灰度"""
    cells = np.asarray(cells, dtype=np.float64)
    peak = cells.max() if cells.size else 0.0
    if peak <= 0:
        return np.zeros(cells.shape, dtype=np.int64)
    return np.rint(255.0 * np.log1p(cells) / np.log1p(peak)).astype(np.int64)


def render_heatmap(matrix: YearMatrix, name: str) -> str:
    """
    生成热力图SVG文本

    Args:
        matrix: 年份矩阵
        name: 写入注释头的矩阵名称

    Returns:
        SVG文本
    """
    rows, cols = matrix.shape
    width = LABEL_WIDTH + cols * CELL + CELL
    height = HEADER_HEIGHT + rows * CELL + CELL
    peak = int(matrix.cells.max()) if matrix.cells.size else 0
    levels = grey_levels(matrix.cells)

    lines: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- heatmap: {escape(name)}; scale=log1p; max={peak}; rows={rows}; cols={cols} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'  <rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff" />',
    ]
    for j, year in enumerate(matrix.col_years):
        x = LABEL_WIDTH + j * CELL + CELL // 2
        lines.append(f'  <text x="{x}" y="{HEADER_HEIGHT - 4}" font-size="{FONT_SIZE}" text-anchor="start" '
                     f'transform="rotate(-90 {x} {HEADER_HEIGHT - 4})">{year}</text>')
    for i, key in enumerate(matrix.row_keys):
        y = HEADER_HEIGHT + i * CELL
        lines.append(f'  <text x="{LABEL_WIDTH - 4}" y="{y + CELL - 3}" font-size="{FONT_SIZE}" '
                     f'text-anchor="end">{escape(str(key))}</text>')
        for j in range(cols):
            grey = int(levels[i, j])
            lines.append(f'  <rect x="{LABEL_WIDTH + j * CELL}" y="{y}" width="{CELL}" height="{CELL}" '
                         f'fill="#{grey:02x}{grey:02x}{grey:02x}"><title>{int(matrix.cells[i, j])}</title></rect>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def save_heatmap(matrix: YearMatrix, name: str, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render_heatmap(matrix, name), encoding="utf-8")
    return target
