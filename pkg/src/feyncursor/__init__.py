"""
FeynCursor - Feynman 光标模型（时钟驱动的可逆量子计算）数值模拟工具
"""
__version__ = "1.0.0"
