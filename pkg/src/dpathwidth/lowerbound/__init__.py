"""Probability space, forced-clause analysis and counting certificates."""
from .certificate import BETA, Certificate, beta_decimal, certify_lower_bound
from .probability import (FixWitness, VEModel, classify_edges, fix_mask, fixes, is_guarded, is_valid,
                          pr_assignment, pr_extension, verify_fixedprob)
from .separation import (FixingTriple, cut_matching, fixing_triple, graph_between, max_bipartite_matching,
                         psi_between, psi_between_oracle, separating_prefix, verify_fix_by_paths,
                         witnessing_permutation)

__all__ = [
    "BETA", "Certificate", "beta_decimal", "certify_lower_bound",
    "FixWitness", "VEModel", "classify_edges", "fix_mask", "fixes", "is_guarded", "is_valid",
    "pr_assignment", "pr_extension", "verify_fixedprob",
    "FixingTriple", "cut_matching", "fixing_triple", "graph_between", "max_bipartite_matching",
    "psi_between", "psi_between_oracle", "separating_prefix", "verify_fix_by_paths",
    "witnessing_permutation",
]
