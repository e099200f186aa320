"""Relatively minimal elliptic surfaces described by their singular fibers.

A configuration is the base-curve genus plus a labelled list of singular
fibers.  Numerical invariants follow from the Euler number; a quadratic
base change transforms the configuration and is accounted for point by
point, including the Euler defect contributed by star fibers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kodaira import (
    KodairaFiber,
    base_change_source,
    delta as fiber_delta,
    euler_number,
    is_star,
    quadratic_base_change_fiber,
)


class SurfaceError(ValueError):
    """Base class for configuration errors."""


class EulerNotDivisibleBy12Error(SurfaceError):
    """Total Euler number of the fibers is not a multiple of 12."""


class BranchError(SurfaceError):
    """Base class for branch specification errors."""


class OddBranchCountError(BranchError):
    """A quadratic base change needs an even number of branch points."""


class UnknownLabelError(BranchError):
    """A branch label does not name a fiber and fresh points are disallowed."""


@dataclass(frozen=True)
class SurfaceConfig:
    """Genus of the base curve plus the labelled singular fibers."""

    name: str
    base_genus: int
    fibers: tuple[tuple[str, KodairaFiber], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.base_genus, int) or self.base_genus < 0:
            raise SurfaceError("base genus must be a nonnegative integer")
        labels = [label for label, _ in self.fibers]
        if len(set(labels)) != len(labels):
            raise SurfaceError("fiber labels must be distinct")

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.fibers)

    def fiber_at(self, label: str) -> KodairaFiber:
        for lab, f in self.fibers:
            if lab == label:
                return f
        raise KeyError(label)

    def euler_total(self) -> int:
        return sum(euler_number(f) for _, f in self.fibers)

    def fiber_tokens(self) -> tuple[str, ...]:
        """Sorted multiset of fiber tokens, for comparisons."""
        return tuple(sorted(f.token for _, f in self.fibers))


@dataclass(frozen=True)
class SurfaceInvariants:
    e: int
    d: int
    p_g: int
    q: int
    b1: int
    b2: int
    h11: int
    kind: str
    extrapolated: bool  # formulas stretched outside their usual range (d = 0)


def invariants(config: SurfaceConfig) -> SurfaceInvariants:
    """Numerical invariants from the Euler number and the base genus."""
    e = config.euler_total()
    if e % 12 != 0:
        raise EulerNotDivisibleBy12Error(f"total Euler number {e} is not divisible by 12")
    d = e // 12
    g = config.base_genus
    p_g = d + g - 1
    q = g
    b1 = 2 * q
    b2 = e - 2 + 2 * b1
    h11 = b2 - 2 * p_g
    if g == 0 and d == 1:
        kind = "rational-elliptic"
    elif g == 0 and d == 2:
        kind = "K3"
    elif g == 1 and d == 1:
        kind = "elliptic-elliptic"
    elif d == 0:
        kind = "trivial-family-abelian"
    else:
        kind = "other"
    return SurfaceInvariants(
        e=e, d=d, p_g=p_g, q=q, b1=b1, b2=b2, h11=h11, kind=kind, extrapolated=(d == 0)
    )


@dataclass(frozen=True)
class BranchSpec:
    """Even-cardinality set of branch point labels for a double cover."""

    labels: frozenset[str]

    def __post_init__(self) -> None:
        if len(self.labels) % 2 != 0:
            raise OddBranchCountError(
                f"branch locus has {len(self.labels)} points; an even count is required"
            )

    def sorted_labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.labels))


@dataclass(frozen=True)
class BranchPointRecord:
    """One row of the base-change log."""

    label: str
    source_token: str | None  # None for a fresh smooth branch point
    branched: bool
    star: bool | None
    images: tuple[tuple[str, str], ...]  # (new label, fiber token)
    delta: int
    table_source: str  # 'paper' | 'derived' | 'trivial'


@dataclass(frozen=True)
class BaseChangeResult:
    config: SurfaceConfig
    delta: int
    euler_before: int
    euler_after: int
    d_before: int | None
    d_after: int | None
    log: tuple[BranchPointRecord, ...]


def quadratic_base_change(
    config: SurfaceConfig,
    branch: BranchSpec,
    *,
    name: str | None = None,
    allow_fresh: bool = True,
) -> BaseChangeResult:
    """Double cover of the base, ramified exactly over the branch labels.

    Branched fibers are replaced by their base-change image (smooth
    images disappear from the list); unbranched fibers appear twice with
    suffixed labels.  Branch labels that name no fiber are fresh smooth
    points when allow_fresh is true, and errors otherwise.  The Euler
    defect is the number of branched star fibers.
    """
    known = set(config.labels())
    fresh = sorted(branch.labels - known)
    if fresh and not allow_fresh:
        raise UnknownLabelError(f"branch labels {fresh} name no fiber of {config.name!r}")
    g = config.base_genus
    g_new = 2 * g - 1 + len(branch.labels) // 2
    if g_new < 0:
        raise BranchError("a double cover of a genus-0 base needs at least two branch points")

    new_fibers: list[tuple[str, KodairaFiber]] = []
    log: list[BranchPointRecord] = []
    total_delta = 0
    for label, f in config.fibers:
        if label in branch.labels:
            image = quadratic_base_change_fiber(f)
            d = fiber_delta(f)
            total_delta += d
            images: tuple[tuple[str, str], ...]
            if image.kind == "I" and image.n == 0:
                images = ()
            else:
                new_fibers.append((label, image))
                images = ((label, image.token),)
            log.append(
                BranchPointRecord(
                    label=label,
                    source_token=f.token,
                    branched=True,
                    star=is_star(f),
                    images=images,
                    delta=d,
                    table_source=base_change_source(f),
                )
            )
        else:
            first, second = f"{label}.1", f"{label}.2"
            new_fibers.append((first, f))
            new_fibers.append((second, f))
            log.append(
                BranchPointRecord(
                    label=label,
                    source_token=f.token,
                    branched=False,
                    star=is_star(f),
                    images=((first, f.token), (second, f.token)),
                    delta=0,
                    table_source="trivial",
                )
            )
    for label in fresh:
        log.append(
            BranchPointRecord(
                label=label,
                source_token=None,
                branched=True,
                star=None,
                images=(),
                delta=0,
                table_source="trivial",
            )
        )

    new_config = SurfaceConfig(
        name=name if name is not None else f"{config.name}^(2)",
        base_genus=g_new,
        fibers=tuple(new_fibers),
    )
    e_before = config.euler_total()
    e_after = new_config.euler_total()
    if 2 * e_before - e_after != 12 * total_delta:
        raise AssertionError("Euler defect bookkeeping failed")
    d_before = e_before // 12 if e_before % 12 == 0 else None
    d_after = None
    if d_before is not None:
        d_after = 2 * d_before - total_delta
        if invariants(new_config).d != d_after:
            raise AssertionError("defect-adjusted degree disagrees with the invariants")
    return BaseChangeResult(
        config=new_config,
        delta=total_delta,
        euler_before=e_before,
        euler_after=e_after,
        d_before=d_before,
        d_after=d_after,
        log=tuple(log),
    )
