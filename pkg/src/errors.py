#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义
所有模块共用的异常层次，同时继承对应的内置异常，便于按内置类型捕获
"""

from typing import Iterable, List, Optional


class ScientometricsError(Exception):
    """工具包异常基类"""


class ConfigError(ScientometricsError, ValueError):
    """配置错误，携带出错的字段名"""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class SchemaError(ConfigError):
    """列映射文件错误"""


class ParseError(ScientometricsError, ValueError):
    """
    数据行解析错误

    Args:
        reason: 错误原因
        line_number: 出错的行号（从1开始）
        source: 输入来源名称
    """

    def __init__(self, reason: str, line_number: Optional[int] = None, source: str = ""):
        location = source or "<stream>"
        if line_number is not None:
            location = f"{location}:{line_number}"
        super().__init__(f"{location}: {reason}")
        self.reason = reason
        self.line_number = line_number
        self.source = source


class OntologyLoadError(ScientometricsError, ValueError):
    """本体加载错误，列出所有悬空引用"""

    def __init__(self, offenders: Iterable[str]):
        self.offenders: List[str] = sorted(set(offenders))
        super().__init__(f"本体存在悬空引用: {', '.join(self.offenders)}")


class NotFoundError(ScientometricsError, KeyError):
    """未知的期刊/会议或主题标识"""

    def __init__(self, kind: str, key: str):
        super().__init__(f"未找到{kind}: {key}")
        self.kind = kind
        self.key = key

    def __str__(self) -> str:
        return str(self.args[0])


class DependencyError(ScientometricsError, FileNotFoundError):
    """下游步骤所需的上游产物不存在"""

    def __init__(self, missing_path: str, hint: str = ""):
        message = f"缺少上游产物: {missing_path}"
        if hint:
            message += f"（{hint}）"
        super().__init__(message)
        self.missing_path = missing_path

    def __str__(self) -> str:
        return str(self.args[0])


class ReportError(ScientometricsError, RuntimeError):
    """报告生成中途失败，记录已完成的报告"""

    def __init__(self, report: str, completed: Iterable[str], cause: BaseException):
        self.report = report
        self.completed: List[str] = list(completed)
        self.cause = cause
        super().__init__(f"报告 {report} 生成失败: {cause}；已完成: {', '.join(self.completed) or '无'}")
