"""Chain and ring families of circle homeomorphisms, with replayable certificates."""

from .certs import (ChainCert, DisplaceCert, ExpansionCert, FPairCert, OverlapPatternError, PairFailure,
                    ReplayResult, RingCert, ShrinkCert, replay)
from .criterion import certify_F_pair, expand_ring, stabilize, verify_ring_group
from .family import (GeneratingFamily, NotFoundError, PreconditionError, StructureError, Word, is_chain,
                     is_prechain, is_ring)
from .lemmas import BudgetExceeded, disjoint_pushers, displace, p1, p1_consistency, pushed_image, shrink_into

__all__ = [
    "ChainCert", "DisplaceCert", "ExpansionCert", "FPairCert", "OverlapPatternError", "PairFailure",
    "ReplayResult", "RingCert", "ShrinkCert", "replay", "certify_F_pair", "expand_ring", "stabilize",
    "verify_ring_group", "GeneratingFamily", "NotFoundError", "PreconditionError", "StructureError", "Word",
    "is_chain", "is_prechain", "is_ring", "BudgetExceeded", "disjoint_pushers", "displace", "p1",
    "p1_consistency", "pushed_image", "shrink_into",
]
