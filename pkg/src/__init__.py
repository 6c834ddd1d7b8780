"""
科学计量分析工具包
"""
