"""Registry of the 47 distance measures: identity, family, and domain metadata.

Each measure has a code (D1..D47), a canonical lowercase snake_case name used
at every string-facing boundary (CLI flags, model files), a family, and flags:

- symmetric: d(x,y) = d(y,x) holds on the declared domain.
- zero_on_identity: d(x,x) = 0 holds on the declared domain.
- input_domain: the component domain the formula is defined over. Lenient
  evaluation clamps components into this domain; strict evaluation rejects
  out-of-domain input instead.
- nonstandard_formula: the measure's common name does not pin one formula;
  the documented choice here is deterministic but should be excluded when
  comparing against other toolkits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..errors import ParameterError


class Family(enum.Enum):
    LP = "lp"
    L1 = "l1"
    INNER_PRODUCT = "inner_product"
    SQUARED_CHORD = "squared_chord"
    SQUARED_L2 = "squared_l2"
    SHANNON_ENTROPY = "shannon_entropy"
    VICISSITUDE = "vicissitude"
    OTHER = "other"


class Domain(enum.Enum):
    REAL = "real"
    NON_NEGATIVE = "non_negative"
    POSITIVE = "positive"


class Backend(enum.Enum):
    REFERENCE = "reference"
    OPTIMIZED = "optimized"


class DistanceId(enum.IntEnum):
    """D1..D47; the integer value is the catalog position."""

    D1 = 1
    D2 = 2
    D3 = 3
    D4 = 4
    D5 = 5
    D6 = 6
    D7 = 7
    D8 = 8
    D9 = 9
    D10 = 10
    D11 = 11
    D12 = 12
    D13 = 13
    D14 = 14
    D15 = 15
    D16 = 16
    D17 = 17
    D18 = 18
    D19 = 19
    D20 = 20
    D21 = 21
    D22 = 22
    D23 = 23
    D24 = 24
    D25 = 25
    D26 = 26
    D27 = 27
    D28 = 28
    D29 = 29
    D30 = 30
    D31 = 31
    D32 = 32
    D33 = 33
    D34 = 34
    D35 = 35
    D36 = 36
    D37 = 37
    D38 = 38
    D39 = 39
    D40 = 40
    D41 = 41
    D42 = 42
    D43 = 43
    D44 = 44
    D45 = 45
    D46 = 46
    D47 = 47

    @property
    def code(self) -> str:
        return self.name

    @property
    def canonical(self) -> str:
        return _NAMES[self]


@dataclass(frozen=True)
class DistanceSpec:
    id: DistanceId
    name: str
    family: Family
    symmetric: bool
    zero_on_identity: bool
    input_domain: Domain
    nonstandard_formula: bool


_NAMES: dict[DistanceId, str] = {
    DistanceId.D1: "chebyshev",
    DistanceId.D2: "chi_squared",
    DistanceId.D3: "euclidean",
    DistanceId.D4: "gaussian",
    DistanceId.D5: "log_euclidean",
    DistanceId.D6: "manhattan",
    DistanceId.D7: "bray_curtis",
    DistanceId.D8: "canberra",
    DistanceId.D9: "gower",
    DistanceId.D10: "kulczynski",
    DistanceId.D11: "lorentzian",
    DistanceId.D12: "non_intersection",
    DistanceId.D13: "soergel",
    DistanceId.D14: "chord",
    DistanceId.D15: "cosine",
    DistanceId.D16: "dice",
    DistanceId.D17: "jaccard",
    DistanceId.D18: "bhattacharyya",
    DistanceId.D19: "hellinger",
    DistanceId.D20: "matusita",
    DistanceId.D21: "squared_chord",
    DistanceId.D22: "additive_symmetric_chi_squared",
    DistanceId.D23: "average_euclidean",
    DistanceId.D24: "clark",
    DistanceId.D25: "divergence",
    DistanceId.D26: "log_squared_euclidean",
    DistanceId.D27: "mean_censored_euclidean",
    DistanceId.D28: "neyman_chi_squared",
    DistanceId.D29: "pearson_chi_squared",
    DistanceId.D30: "sangvi_chi_squared",
    DistanceId.D31: "squared_chi_squared",
    DistanceId.D32: "squared_euclidean",
    DistanceId.D33: "jeffreys",
    DistanceId.D34: "jensen",
    DistanceId.D35: "jensen_shannon",
    DistanceId.D36: "k_divergence",
    DistanceId.D37: "kullback_leibler",
    DistanceId.D38: "topsoe",
    DistanceId.D39: "max_symmetric_chi_squared",
    DistanceId.D40: "min_symmetric_chi_squared",
    DistanceId.D41: "vicis_symmetric_1",
    DistanceId.D42: "vicis_symmetric_2",
    DistanceId.D43: "vicis_symmetric_3",
    DistanceId.D44: "vicis_wave_hedges",
    DistanceId.D45: "hamming",
    DistanceId.D46: "hassanat",
    DistanceId.D47: "statistic",
}

_FAMILY_RANGES: list[tuple[Family, int, int]] = [
    (Family.LP, 1, 6),
    (Family.L1, 7, 13),
    (Family.INNER_PRODUCT, 14, 17),
    (Family.SQUARED_CHORD, 18, 21),
    (Family.SQUARED_L2, 22, 32),
    (Family.SHANNON_ENTROPY, 33, 38),
    (Family.VICISSITUDE, 39, 44),
    (Family.OTHER, 45, 47),
]

_ASYMMETRIC = {DistanceId.D28, DistanceId.D29, DistanceId.D36, DistanceId.D37}

_NONSTANDARD = {DistanceId.D4, DistanceId.D5, DistanceId.D26, DistanceId.D47}

_REAL = {
    DistanceId.D1, DistanceId.D3, DistanceId.D4, DistanceId.D5, DistanceId.D6,
    DistanceId.D8, DistanceId.D9, DistanceId.D11, DistanceId.D12, DistanceId.D14,
    DistanceId.D15, DistanceId.D16, DistanceId.D17, DistanceId.D23, DistanceId.D26,
    DistanceId.D32, DistanceId.D45, DistanceId.D46, DistanceId.D47,
}

_NON_NEGATIVE = {
    DistanceId.D2, DistanceId.D7, DistanceId.D10, DistanceId.D13, DistanceId.D18,
    DistanceId.D19, DistanceId.D20, DistanceId.D21, DistanceId.D24, DistanceId.D25,
    DistanceId.D27, DistanceId.D30, DistanceId.D31,
}


def _family_of(did: DistanceId) -> Family:
    for family, lo, hi in _FAMILY_RANGES:
        if lo <= did.value <= hi:
            return family
    raise AssertionError(did)


def _domain_of(did: DistanceId) -> Domain:
    if did in _REAL:
        return Domain.REAL
    if did in _NON_NEGATIVE:
        return Domain.NON_NEGATIVE
    return Domain.POSITIVE


REGISTRY: dict[DistanceId, DistanceSpec] = {
    did: DistanceSpec(
        id=did,
        name=_NAMES[did],
        family=_family_of(did),
        symmetric=did not in _ASYMMETRIC,
        zero_on_identity=did is not DistanceId.D18,
        input_domain=_domain_of(did),
        nonstandard_formula=did in _NONSTANDARD,
    )
    for did in DistanceId
}

_BY_NAME = {spec.name: spec.id for spec in REGISTRY.values()}


def registry_lookup(id: DistanceId) -> DistanceSpec:
    """Return the immutable spec for a distance id; total over all 47 ids."""
    return REGISTRY[DistanceId(id)]


def distance_by_name(name: str) -> DistanceId:
    """Resolve a canonical name or a D-code ("euclidean" or "D3") to its id."""
    key = name.strip().lower()
    if key in _BY_NAME:
        return _BY_NAME[key]
    code = key.upper()
    if code.startswith("D") and code[1:].isdigit():
        value = int(code[1:])
        if 1 <= value <= 47:
            return DistanceId(value)
    known = ", ".join(sorted(_BY_NAME))
    raise ParameterError(f"unknown distance {name!r}; valid names: {known}")


def all_distance_ids() -> list[DistanceId]:
    return list(DistanceId)
