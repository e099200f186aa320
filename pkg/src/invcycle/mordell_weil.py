"""Shioda-Tate rank accounting and Mordell-Weil discriminant arithmetic.

The Picard number and the torsion order are inputs here, not theorems:
callers obtain them from declared assumptions and this module only does
the exact bookkeeping on top of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .kodaira import fiber_profile
from .surfaces import SurfaceConfig


class PicardTooSmallError(ValueError):
    """rho is smaller than the rank of the trivial lattice."""


@dataclass(frozen=True)
class ShiodaTateResult:
    rho: int
    trivial_rank: int  # 2 + sum over fibers of (components - 1)
    mw_rank: int
    trivial_disc: int  # product of |det| of the fiber root lattices
    mwl_disc: Fraction | None


def _trivial_summands(config: SurfaceConfig) -> tuple[int, int]:
    rank = 2
    disc = 1
    for _, f in config.fibers:
        profile = fiber_profile(f)
        rank += profile.components - 1
        disc *= profile.root_lattice.disc()
    return rank, disc


def mw_rank(config: SurfaceConfig, rho: int) -> int:
    if not isinstance(rho, int) or rho < 1:
        raise ValueError("rho must be a positive integer")
    trivial_rank, _ = _trivial_summands(config)
    r = rho - trivial_rank
    if r < 0:
        raise PicardTooSmallError(
            f"rho = {rho} is below the trivial-lattice rank {trivial_rank}"
        )
    return r


def shioda_tate(config: SurfaceConfig, rho: int) -> ShiodaTateResult:
    trivial_rank, trivial_disc = _trivial_summands(config)
    r = mw_rank(config, rho)
    return ShiodaTateResult(
        rho=rho,
        trivial_rank=trivial_rank,
        mw_rank=r,
        trivial_disc=trivial_disc,
        mwl_disc=None,
    )


def mwl_discriminant(
    config: SurfaceConfig, disc_ns: int, rho: int, torsion_order: int
) -> Fraction:
    """Mordell-Weil lattice discriminant from the Neron-Severi discriminant.

    disc(MWL) = disc_NS * torsion^2 / (product of fiber root lattice
    determinants), in lowest terms.  A rank-0 Mordell-Weil group must
    come out as exactly 1.
    """
    if not isinstance(disc_ns, int) or disc_ns < 1:
        raise ValueError("disc_ns must be a positive integer")
    if not isinstance(torsion_order, int) or torsion_order < 1:
        raise ValueError("torsion order must be a positive integer")
    mw_rank(config, rho)  # validates rho against the trivial lattice
    _, trivial_disc = _trivial_summands(config)
    return Fraction(disc_ns * torsion_order * torsion_order, trivial_disc)


def mwl_denominator_bound(config: SurfaceConfig, r: int) -> int:
    """Upper bound D^r for the denominator of disc(MWL) in lowest terms.

    D is the least common multiple of every value the local height
    contributions can have in their denominators, over all fibers.
    """
    if not isinstance(r, int) or r < 0:
        raise ValueError("Mordell-Weil rank must be a nonnegative integer")
    d = 1
    for _, f in config.fibers:
        for entry in fiber_profile(f).contribution_denominators:
            d = math.lcm(d, entry)
    return d**r


@dataclass(frozen=True)
class DiscConsistency:
    consistent: bool
    mw_rank: int
    mwl_disc: Fraction
    denominator_bound: int
    reason: str | None


def check_disc_consistency(
    config: SurfaceConfig, candidate_disc: int, rho: int, torsion_order: int
) -> DiscConsistency:
    """Test a candidate Neron-Severi discriminant against the height bound.

    The denominator of the implied disc(MWL) must divide D^r; a rank-0
    Mordell-Weil group forces disc(MWL) = 1 exactly.
    """
    r = mw_rank(config, rho)
    disc = mwl_discriminant(config, candidate_disc, rho, torsion_order)
    bound = mwl_denominator_bound(config, r)
    if r == 0:
        if disc != 1:
            return DiscConsistency(
                consistent=False,
                mw_rank=r,
                mwl_disc=disc,
                denominator_bound=bound,
                reason=f"rank-0 Mordell-Weil lattice must have discriminant 1, got {disc}",
            )
        return DiscConsistency(True, r, disc, bound, None)
    if bound % disc.denominator != 0:
        return DiscConsistency(
            consistent=False,
            mw_rank=r,
            mwl_disc=disc,
            denominator_bound=bound,
            reason=(
                f"disc(MWL) = {disc} has denominator {disc.denominator}, "
                f"which does not divide the bound {bound}"
            ),
        )
    return DiscConsistency(True, r, disc, bound, None)
