"""Kodaira fiber catalog.

Euler numbers, additive/star classification, images under a quadratic
ramified base change, component counts with their root lattices, and the
denominators that local height contributions can produce.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import GramLattice, root_gram

_FIXED_KINDS = ("II", "III", "IV", "II*", "III*", "IV*")
_PARAMETRIC_KINDS = ("I", "I*")


class FiberTokenError(ValueError):
    """Unrecognized Kodaira fiber token."""


class InternalInconsistencyError(RuntimeError):
    """A table self-check failed; indicates corrupted fiber data."""


@dataclass(frozen=True)
class KodairaFiber:
    """A Kodaira fiber type: kind in {I, I*, II, III, IV, II*, III*, IV*}.

    The multiplicity parameter n is present exactly for the I and I*
    series (n >= 0).
    """

    kind: str
    n: int | None = None

    def __post_init__(self) -> None:
        if self.kind in _PARAMETRIC_KINDS:
            if not isinstance(self.n, int) or self.n < 0:
                raise ValueError(f"{self.kind} fiber needs an integer n >= 0")
        elif self.kind in _FIXED_KINDS:
            if self.n is not None:
                raise ValueError(f"{self.kind} fiber takes no parameter")
        else:
            raise ValueError(f"unknown fiber kind {self.kind!r}")

    @property
    def token(self) -> str:
        if self.kind == "I":
            return f"I{self.n}"
        if self.kind == "I*":
            return f"I{self.n}*"
        return self.kind

    def __str__(self) -> str:
        return self.token

    def __repr__(self) -> str:
        return f"fiber({self.token!r})"


def fiber(token: str) -> KodairaFiber:
    """Parse a fiber token: 'I0', 'I12', 'I0*', 'II', 'III*', 'IV*', ..."""
    if not isinstance(token, str):
        raise FiberTokenError(f"fiber token must be a string, got {type(token).__name__}")
    if token in _FIXED_KINDS:
        return KodairaFiber(token)
    # Parametric series; note 'II*' is fixed while 'I1*' is parametric.
    if token.startswith("I") and len(token) > 1:
        body, star = (token[1:-1], True) if token.endswith("*") else (token[1:], False)
        if body.isdigit() and str(int(body)) == body:
            return KodairaFiber("I*" if star else "I", int(body))
    raise FiberTokenError(f"unrecognized fiber token {token!r}")


def is_star(f: KodairaFiber) -> bool:
    return f.kind.endswith("*")


def euler_number(f: KodairaFiber) -> int:
    if f.kind == "I":
        return f.n
    if f.kind == "I*":
        return 6 + f.n
    return {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}[f.kind]


# Image of each fiber under a quadratic base change ramified at its point.
# Star rows come from the published table; non-star rows follow from the
# doubled vanishing order and are tagged as derived.
_BASE_CHANGE_SOURCE = {
    "I": "derived",
    "II": "derived",
    "III": "derived",
    "IV": "derived",
    "I*": "paper",
    "II*": "paper",
    "III*": "paper",
    "IV*": "paper",
}


def quadratic_base_change_fiber(f: KodairaFiber) -> KodairaFiber:
    """Fiber type over a branch point of a quadratic base change."""
    if f.kind == "I":
        return KodairaFiber("I", 2 * f.n)
    if f.kind == "I*":
        return KodairaFiber("I", 2 * f.n)
    return {
        "II": KodairaFiber("IV"),
        "III": KodairaFiber("I*", 0),
        "IV": KodairaFiber("IV*"),
        "II*": KodairaFiber("IV*"),
        "III*": KodairaFiber("I*", 0),
        "IV*": KodairaFiber("IV"),
    }[f.kind]


def base_change_source(f: KodairaFiber) -> str:
    """Provenance tag ('paper' or 'derived') of the base-change table row."""
    return _BASE_CHANGE_SOURCE[f.kind]


def delta(f: KodairaFiber) -> int:
    """Euler defect of a ramified quadratic base change at this fiber.

    delta = (2 e(F) - e(F')) / 12; always 0 or 1, and 1 exactly for the
    star fibers.  The arithmetic is recomputed here as a self-check of
    the two tables.
    """
    doubled = 2 * euler_number(f) - euler_number(quadratic_base_change_fiber(f))
    if doubled % 12 != 0:
        raise InternalInconsistencyError(f"defect of {f} is not divisible by 12")
    value = doubled // 12
    if value not in (0, 1) or (value == 1) != is_star(f):
        raise InternalInconsistencyError(f"defect {value} of {f} contradicts the star rule")
    return value


_EMPTY = GramLattice([])


@dataclass(frozen=True)
class FiberProfile:
    """Component-level data of a fiber inside the Neron-Severi lattice."""

    euler: int
    components: int
    root_lattice: GramLattice  # negated Cartan matrix; rank components - 1
    odd_multiplicity_components: int | None  # star fibers only
    contribution_denominators: frozenset[int]


def fiber_profile(f: KodairaFiber) -> FiberProfile:
    e = euler_number(f)
    if f.kind == "I":
        components = max(f.n, 1)
        root = root_gram("A", f.n - 1) if f.n >= 2 else _EMPTY
        denoms = frozenset(k for k in range(1, f.n + 1) if f.n % k == 0) if f.n >= 2 else frozenset({1})
        odd = None
    elif f.kind == "I*":
        components = 5 + f.n
        root = root_gram("D", 4 + f.n)
        denoms = frozenset({1, 2}) if f.n == 0 else frozenset({1, 2, 4})
        odd = 4
    else:
        components = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}[f.kind]
        root = {
            "II": _EMPTY,
            "III": root_gram("A", 1),
            "IV": root_gram("A", 2),
            "IV*": root_gram("E", 6),
            "III*": root_gram("E", 7),
            "II*": root_gram("E", 8),
        }[f.kind]
        denoms = {
            "II": frozenset({1}),
            "III": frozenset({1, 2}),
            "IV": frozenset({1, 3}),
            "IV*": frozenset({1, 3}),
            "III*": frozenset({1, 2}),
            "II*": frozenset({1}),
        }[f.kind]
        odd = 4 if is_star(f) else None
    profile = FiberProfile(
        euler=e,
        components=components,
        root_lattice=root.negate() if root.rank else root,
        odd_multiplicity_components=odd,
        contribution_denominators=denoms,
    )
    if profile.root_lattice.rank != components - 1:
        raise InternalInconsistencyError(f"root lattice rank mismatch for {f}")
    return profile
