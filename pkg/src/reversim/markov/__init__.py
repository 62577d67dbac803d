"""Markov module: stationary chains, Bayes reversal and detailed balance."""

from .chain import (
    DetailedBalanceCheck,
    MarkovChain,
    PotentialForm,
    balance_violations,
    communicating_classes,
    gibbs_chain,
    is_detailed_balance,
    path_probability,
    path_reversal_deviation,
    reverse_chain,
    reversed_path_probability,
    stationary_distribution,
)

__all__ = [
    "DetailedBalanceCheck",
    "MarkovChain",
    "PotentialForm",
    "balance_violations",
    "communicating_classes",
    "gibbs_chain",
    "is_detailed_balance",
    "path_probability",
    "path_reversal_deviation",
    "reverse_chain",
    "reversed_path_probability",
    "stationary_distribution",
]
