"""
异常类型定义

参数错误统一使用内置 ValueError，这里只定义需要区分处理的两类。
"""


class ResourceLimitError(RuntimeError):
    """全空间计算超出桌面规模限制（d·s 过大）"""


class BranchAbsentError(ValueError):
    """Schmidt 分支或测量结果的概率低于截断阈值，无法归一化"""
