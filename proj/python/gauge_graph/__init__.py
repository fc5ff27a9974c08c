"""Extremal dependence of block-graph models from their gauge functions."""

from ._core import (
    Gauge,
    GaugeGraphError,
    Model,
    asymmetric_ad,
    edge_alpha,
    edge_beta,
    gaussian,
    gaussian_laplace,
    inverted_logistic,
    logistic,
    run_cli,
    square,
)

__all__ = [
    "Gauge",
    "GaugeGraphError",
    "Model",
    "asymmetric_ad",
    "edge_alpha",
    "edge_beta",
    "gaussian",
    "gaussian_laplace",
    "inverted_logistic",
    "logistic",
    "run_cli",
    "square",
]
