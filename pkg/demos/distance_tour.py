#!/usr/bin/env python3
"""Tour of the distance registry: families, flags, and domain guards.

Shows how to look measures up by name or code, evaluate them on both
backends, and what the strict domain mode rejects that the lenient
default repairs.
"""
from __future__ import annotations

from collections import Counter

from opforest.distances import (
    Backend,
    DistanceId,
    all_distance_ids,
    distance_by_name,
    evaluate,
    registry_lookup,
)
from opforest.errors import DomainError


def main() -> None:
    ids = all_distance_ids()
    families = Counter(registry_lookup(d).family.name for d in ids)
    print(f"{len(ids)} registered measures")
    for family, count in sorted(families.items()):
        print(f"  {family:<16} {count}")

    print("\nlookup by name or code:")
    for key in ("euclidean", "canberra", "D6"):
        spec = registry_lookup(distance_by_name(key))
        print(f"  {key:<10} -> {spec.id.name} {spec.name} "
              f"(domain {spec.input_domain.name}, symmetric={spec.symmetric})")

    x, y = (0.0, 0.0), (3.0, 4.0)
    print("\nanchors on (0,0) vs (3,4):")
    for key in ("euclidean", "manhattan", "chebyshev"):
        did = distance_by_name(key)
        ref = evaluate(did, x, y, backend=Backend.REFERENCE)
        opt = evaluate(did, x, y, backend=Backend.OPTIMIZED)
        print(f"  {key:<10} reference={ref}  optimized={opt}")

    # asymmetric measures distinguish argument order
    a, b = (1.0, 4.0), (2.0, 1.0)
    forward = evaluate(DistanceId.D28, a, b)
    backward = evaluate(DistanceId.D28, b, a)
    print(f"\n{registry_lookup(DistanceId.D28).name} is directional: "
          f"d(a,b)={forward:.6f}, d(b,a)={backward:.6f}")

    # lenient mode clamps a zero up to the positive domain; strict refuses
    bad = (0.0, 1.0)
    ok = (1.0, 1.0)
    lenient = evaluate(distance_by_name("jeffreys"), bad, ok)
    print(f"\njeffreys on a zero component: lenient={lenient:.6f}", end=", ")
    try:
        evaluate(distance_by_name("jeffreys"), bad, ok, strict=True)
    except DomainError as err:
        print(f"strict raises DomainError: {err}")


if __name__ == "__main__":
    main()
