"""F-pair certification, ring verification, stabilization and ring expansion."""

from __future__ import annotations

from ..plmap import PLMap
from .certs import (ChainCert, ExpansionCert, FPairCert, RingCert, chain_check, expansion_check,
                    fpair_check, ring_check)
from .family import GeneratingFamily, NotFoundError, PreconditionError, is_prechain


def certify_F_pair(f: PLMap, g: PLMap, conjugator: PLMap | None = None) -> FPairCert:
    """Test g(f(a')) >= b; ``cert.certified`` is False when the test is inconclusive.

    Raises OverlapPatternError when the supports are not in the a < a' < b < b' pattern.
    """
    return fpair_check(f, g, conjugator)


def verify_ring_group(fam: GeneratingFamily, conjugator: PLMap | None = None) -> RingCert:
    if fam.m < 3:
        raise PreconditionError("ring verification needs m >= 3")
    return ring_check(fam, conjugator)


def stabilize(fam: GeneratingFamily, Nmax: int) -> tuple[int, ChainCert]:
    """Smallest N <= Nmax for which the powered family is a certified chain."""
    if not is_prechain(fam):
        raise PreconditionError("family is not a prechain (chain of arcs covering (0,1))")
    for N in range(1, Nmax + 1):
        cert = chain_check(fam, N)
        if cert.valid:
            return N, cert
    raise NotFoundError(f"no certified power up to N={Nmax}", best=Nmax)


def expand_ring(fam: GeneratingFamily, Nmax: int,
                conjugator: PLMap | None = None) -> tuple[int, ExpansionCert]:
    """Smallest N <= Nmax for which the expanded (m+1)-family passes every check."""
    if fam.m < 4:
        raise PreconditionError("ring expansion needs an m-ring group with m >= 4")
    base = verify_ring_group(fam, conjugator)
    if not base.valid:
        raise PreconditionError(f"input family is not a certified ring (failing pair {base.failing_index})")
    for N in range(1, Nmax + 1):
        cert = expansion_check(fam, N)
        if cert.valid:
            return N, cert
    raise NotFoundError(f"no certified expansion up to N={Nmax}", best=Nmax)
