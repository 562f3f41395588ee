"""Proof kernel: objects, axioms, rewrite rules and the checker."""

from dataclasses import replace

from ..lang import IntLit, eval_term, subst
from .axioms import AXIOMS, AxiomError, instantiate
from .checker import (CheckFailure, CheckReport, Checker, StepLimitExceeded,
                      check, conclusion)
from .proofs import *  # noqa: F401,F403
from .proofs import ComputeLeaf, RangeEnum, walk, count_nodes, subproofs
from .rewrite import RULES, RewriteError, apply_rewrite
from .ring import NormalizeError, normalize_ring, ring_equal
from .sexpr import SexpError, dump_proof, load_proof, pretty

GENERATORS = {"compute"}


def expand_range_enum(node: RangeEnum) -> RangeEnum:
    """Replace a generator by the explicit per-value cases it stands for."""
    if not isinstance(node.cases, str):
        return node
    if node.cases not in GENERATORS:
        raise ValueError(f"unregistered generator {node.cases}")
    lo, hi = eval_term(node.lo), eval_term(node.hi)
    cases = tuple(ComputeLeaf(subst(node.body, node.var, IntLit(v)))
                  for v in range(lo, hi + 1))
    return replace(node, cases=cases)
