"""
Freeness feature module
- Theorem predicates (TheoremService)
- Instance samplers for campaigns
- Registered statement metadata (statements.json)
"""
import os

from .samplers import Instance, InstanceSampler
from .statements import TheoremService

STATEMENTS_PATH = os.path.join(os.path.dirname(__file__), "statements.json")

__all__ = ["Instance", "InstanceSampler", "TheoremService", "STATEMENTS_PATH"]
