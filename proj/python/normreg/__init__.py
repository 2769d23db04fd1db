from ._core import (
    algorithm1,
    c_epsilon,
    operator_norm,
    sample,
    sample_bernoulli,
    trim_threshold,
    trim_topk,
    truncate,
)

__all__ = [
    "algorithm1",
    "c_epsilon",
    "operator_norm",
    "sample",
    "sample_bernoulli",
    "trim_threshold",
    "trim_topk",
    "truncate",
]
