"""
Bayesian hyperparameter search
"""
from turnkan.hyperopt.gp import GaussianProcess, expected_improvement, matern52
from turnkan.hyperopt.objective import ValidationObjective
from turnkan.hyperopt.search import OptimizationResult, load_history, optimize, random_search, suggest
from turnkan.hyperopt.space import Categorical, Integer, Real, SearchSpace, conv_space, mlp_kan_space, space_for

__all__ = [
    "Categorical",
    "GaussianProcess",
    "Integer",
    "OptimizationResult",
    "Real",
    "SearchSpace",
    "ValidationObjective",
    "conv_space",
    "expected_improvement",
    "load_history",
    "matern52",
    "mlp_kan_space",
    "optimize",
    "random_search",
    "space_for",
    "suggest",
]
