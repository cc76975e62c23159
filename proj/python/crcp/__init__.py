"""Approximate colored range closest-pair indexes."""

from ._crcp import (
    KINDS,
    Dataset,
    Index,
    Norm,
    Pair,
    Range,
    Space,
    UsageError,
    bichromatic_pairs,
    brute_force,
    build_coreset,
    count_candidate_pairs,
    gen_adversarial_quadrant,
    gen_adversarial_strip,
    gen_random,
    verify_coreset,
)

__all__ = [
    "KINDS",
    "Dataset",
    "Index",
    "Norm",
    "Pair",
    "Range",
    "Space",
    "UsageError",
    "bichromatic_pairs",
    "brute_force",
    "build_coreset",
    "count_candidate_pairs",
    "gen_adversarial_quadrant",
    "gen_adversarial_strip",
    "gen_random",
    "verify_coreset",
]
