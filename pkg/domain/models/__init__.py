"""
領域模型
"""
from .polynomial import Monomial, MonomialOrder, Polynomial, PolynomialRing
from .quotient_ring import QuotientRing
from .module import FPModule, FreeModule, ModuleHomomorphism, ModuleMap, Resolution, Vector
from .ideal import Ideal, InvariantRecord
from .lin_module import LinMap, LinModule
from .verdict import CampaignSummary, Conclusion, Hypotheses, HypothesisSlot, IsoStatus, Verdict

__all__ = [
    'Monomial',
    'MonomialOrder',
    'Polynomial',
    'PolynomialRing',
    'QuotientRing',
    'FPModule',
    'FreeModule',
    'ModuleHomomorphism',
    'ModuleMap',
    'Resolution',
    'Vector',
    'Ideal',
    'InvariantRecord',
    'LinMap',
    'LinModule',
    'CampaignSummary',
    'Conclusion',
    'Hypotheses',
    'HypothesisSlot',
    'IsoStatus',
    'Verdict',
]
