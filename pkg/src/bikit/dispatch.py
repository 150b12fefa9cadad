"""Run a broadcast improvement algorithm by tag."""
from __future__ import annotations

from .graph import InformationGraph
from .kcenter import improve_bicriteria, improve_single_criteria
from .proximity import EstimatorConfig
from .results import BICRITERIA, BROADCAST_ALGOS, SINGLE, SUBMOD, WITNESS2, WITNESS3, AugmentationResult
from .submod import improve_submod
from .witness import improve_witness


def improve_broadcast(g: InformationGraph, algo: str, k: int, cfg: EstimatorConfig, epsilon: float = 0.5,
                      beta_star: float | None = None) -> AugmentationResult:
    if algo == BICRITERIA:
        res = improve_bicriteria(g, k, cfg, beta_star)
    elif algo == SINGLE:
        res = improve_single_criteria(g, k, cfg, beta_star)
    elif algo in (WITNESS3, WITNESS2):
        res = improve_witness(g, k, epsilon, algo, cfg, beta_star=beta_star)
    elif algo == SUBMOD:
        res = improve_submod(g, k, epsilon, cfg, beta_star)
    else:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {', '.join(BROADCAST_ALGOS)}")
    return res
