"""Classification of pairs of subspaces: finite systems and diagonal graph models."""

from .finsys import FiniteSystem, graph_system
from .seqclassify import Budgets, Relation, Verdict, classify_bounded_graph
from .seqmodel import DiagonalSpec, SymTerm, direct_sum

__all__ = ["Budgets", "DiagonalSpec", "FiniteSystem", "Relation", "SymTerm", "Verdict",
           "classify_bounded_graph", "direct_sum", "graph_system"]
