"""Subfields of Q(zeta_m) described by their fixing subgroups of (Z/m)^x."""
from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import CycNum, ModulusMismatch, euler_phi, galois_apply, units

__all__ = ["SubfieldDesc", "fixing_subgroup", "field_leq", "field_equal", "full_group"]


@dataclass(frozen=True)
class SubfieldDesc:
    """The fixed field of ``H``; ``degree`` is its degree over Q."""

    m: int
    H: tuple[int, ...]
    degree: int

    def __post_init__(self) -> None:
        if self.degree * len(self.H) != euler_phi(self.m):
            raise ValueError("degree * |H| must equal phi(m)")

    def to_json(self) -> dict:
        return {"m": self.m, "H": list(self.H), "degree": self.degree}

    @classmethod
    def from_json(cls, data: dict) -> SubfieldDesc:
        return cls(int(data["m"]), tuple(sorted(int(h) for h in data["H"])), int(data["degree"]))


def full_group(m: int) -> SubfieldDesc:
    """The subfield Q itself."""
    return SubfieldDesc(m, units(m), 1)


def fixing_subgroup(a: CycNum) -> SubfieldDesc:
    m = a.m
    if a.is_rational():
        return full_group(m)
    H = tuple(j for j in units(m) if galois_apply(j, a) == a)
    return SubfieldDesc(m, H, euler_phi(m) // len(H))


def _check(A: SubfieldDesc, B: SubfieldDesc) -> None:
    if A.m != B.m:
        raise ModulusMismatch(f"moduli differ: {A.m} vs {B.m}")


def field_leq(A: SubfieldDesc, B: SubfieldDesc) -> bool:
    """Whether the field of A is contained in the field of B (i.e. H_B is inside H_A)."""
    _check(A, B)
    return set(B.H) <= set(A.H)


def field_equal(A: SubfieldDesc, B: SubfieldDesc) -> bool:
    _check(A, B)
    return A.H == B.H
