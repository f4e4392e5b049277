"""
Summability Service - точные проверки отложенной статистической сходимости
по порядку в конечномерных пространствах Рисса.
"""

__version__ = "1.0.0"
