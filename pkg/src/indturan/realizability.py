"""Certificates that a rational exponent 2 - a/b is realized by a rooted family.

For reduced a/b with b >= max(a, (a-1)^2) the residue of b mod a picks a base
family whose density is congruent to b/a, and K_{1,1} reductions (each raising
the density by exactly 1) walk it up to b/a:

  a = 1          -> leaf-rooted star with b leaves (powers are K_{b,l})
  b mod a = 1    -> rooted path of length a+1
  b mod a = a-1  -> tree_r11(a-1)               (a >= 3)
  else residue d -> height_two_tree(a-1, a-1-d) (a >= 4)

A certificate records the base, the reduction count, the gluing multiplicity l,
and the sufficient host-side value s0 = |V(H)| for H the l-th power of the
reduced graph.  verify_certificate replays the arithmetic and re-derives the
density and balancedness of the reconstructed rooted graph from scratch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .density import is_balanced, rho
from .errors import CertificateInvalid, NotQualified, TooLarge
from .families import (
    Parts,
    RootedGraph,
    attach_ktt_rooted,
    height_two_tree,
    leaf_rooted_star,
    reduced_parts,
    rooted_path,
    rooted_power,
    tree_r11,
)
from .graph import bipartition

S0_RULE = "s0 = |V(H)|"

ENUMERATION_BUDGET = 50


@dataclass(frozen=True)
class ReducedRational:
    """The pair (a, b) of 2 - a/b, stored reduced with 0 < a < b."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be positive")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError("a/b must be reduced")
        if self.a >= self.b:
            raise ValueError("need a < b for an exponent in (1, 2)")

    @property
    def density(self) -> Fraction:
        return Fraction(self.b, self.a)

    @property
    def exponent(self) -> Fraction:
        return 2 - Fraction(self.a, self.b)


@dataclass(frozen=True)
class BaseFamily:
    kind: str  # "ktl" | "theta" | "tr11" | "height_two"
    r: Optional[int] = None
    t: Optional[int] = None
    length: Optional[int] = None

    def rooted_graph(self) -> RootedGraph:
        if self.kind == "ktl":
            return leaf_rooted_star(self.t)
        if self.kind == "theta":
            return rooted_path(self.length)
        if self.kind == "tr11":
            return tree_r11(self.r)
        if self.kind == "height_two":
            return height_two_tree(self.r, self.t)
        raise ValueError(f"unknown base kind {self.kind!r}")

    def as_json_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "ktl":
            d["t"] = self.t
        elif self.kind == "theta":
            d["len"] = self.length
        elif self.kind == "tr11":
            d["r"] = self.r
        elif self.kind == "height_two":
            d["r"] = self.r
            d["t"] = self.t
        return d

    @staticmethod
    def from_json_dict(d: dict) -> "BaseFamily":
        kind = d["kind"]
        if kind == "ktl":
            return BaseFamily("ktl", t=d["t"])
        if kind == "theta":
            return BaseFamily("theta", length=d["len"])
        if kind == "tr11":
            return BaseFamily("tr11", r=d["r"])
        if kind == "height_two":
            return BaseFamily("height_two", r=d["r"], t=d["t"])
        raise ValueError(f"unknown base kind {kind!r}")


@dataclass(frozen=True)
class RealizabilityCertificate:
    target: ReducedRational
    base: BaseFamily
    reductions: int
    l: int
    s0: int
    exponent: Fraction
    s0_rule: str = S0_RULE

    def as_json_dict(self) -> dict:
        return {
            "a": self.target.a,
            "b": self.target.b,
            "base": self.base.as_json_dict(),
            "reductions": self.reductions,
            "l": self.l,
            "s0": self.s0,
            "s0_rule": self.s0_rule,
            "exponent": str(self.exponent),
        }

    @staticmethod
    def from_json_dict(d: dict) -> "RealizabilityCertificate":
        return RealizabilityCertificate(
            target=ReducedRational(d["a"], d["b"]),
            base=BaseFamily.from_json_dict(d["base"]),
            reductions=d["reductions"],
            l=d["l"],
            s0=d["s0"],
            exponent=Fraction(d["exponent"]),
            s0_rule=d.get("s0_rule", S0_RULE),
        )


def certificate_to_json(cert: RealizabilityCertificate, verified: Optional[bool] = None) -> str:
    d = cert.as_json_dict()
    if verified is not None:
        d["verified"] = verified
    return json.dumps(d, sort_keys=True, indent=2) + "\n"


def qualifies(a: int, b: int) -> bool:
    """True iff the reduced form (a0, b0) satisfies b0 > a0 and
    b0 >= max(a0, (a0 - 1)^2)."""
    if a < 1 or b < 1:
        return False
    g = math.gcd(a, b)
    a0, b0 = a // g, b // g
    return b0 > a0 and b0 >= max(a0, (a0 - 1) ** 2)


@dataclass(frozen=True)
class Witness:
    """Reconstruction of a certificate: the glued-and-reduced rooted graph
    (whose underlying graph is the witness H), with its tracked bipartition."""

    f_final: RootedGraph
    parts: Parts
    h: Graph
    s0: int


def build_witness(cert: RealizabilityCertificate, l: Optional[int] = None) -> Witness:
    """Glue l copies of the base along its roots, then apply cert.reductions
    single-edge attachments to the glued graph.

    Attaching first and gluing second would name the same graph H (the added
    vertices are roots, shared by every copy), but gluing an attached graph
    would put an edge inside the root set, which the power constructor
    rejects; this order keeps every operand legal and yields H directly.
    """
    l = cert.l if l is None else l
    if l < 1:
        raise ValueError("power needs l >= 1")
    f = rooted_power(cert.base.rooted_graph(), l)
    parts = bipartition(f.graph)
    assert parts is not None, "glued base families stay bipartite"
    a, b = parts
    if 0 in b:
        a, b = b, a
    parts = (a, b)
    for _ in range(cert.reductions):
        n_before = f.graph.n
        f = attach_ktt_rooted(f, parts, 1)
        parts = reduced_parts(parts, n_before, 1)
    return Witness(f, parts, f.graph, f.graph.n)


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    reason: Optional[str] = None  # RhoMismatch | Unbalanced | NotBipartite |
                                  # ExponentMismatch | BadParameters

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cert: RealizabilityCertificate) -> VerificationResult:
    """Replay a certificate from scratch; no trust in how it was produced."""
    t = cert.target
    if not qualifies(t.a, t.b):
        return VerificationResult(False, "BadParameters")
    if cert.reductions < 0 or cert.l < 1:
        return VerificationResult(False, "BadParameters")
    try:
        base_graph = cert.base.rooted_graph()
    except Exception:
        return VerificationResult(False, "BadParameters")
    target_rho = t.density
    if rho(base_graph) + cert.reductions != target_rho:
        return VerificationResult(False, "RhoMismatch")
    witness = build_witness(cert)
    if rho(witness.f_final) != target_rho:
        return VerificationResult(False, "RhoMismatch")
    if bipartition(witness.f_final.graph) is None:
        return VerificationResult(False, "NotBipartite")
    if not is_balanced(witness.f_final).balanced:
        return VerificationResult(False, "Unbalanced")
    if cert.exponent != t.exponent:
        return VerificationResult(False, "ExponentMismatch")
    if cert.s0 != witness.s0:
        return VerificationResult(False, "BadParameters")
    return VerificationResult(True)


def derive(a: int, b: int, l: int = 2) -> RealizabilityCertificate:
    """Certificate for 2 - a/b via the residue of b mod a (after reduction)."""
    if a < 1 or b < 1:
        raise NotQualified(f"({a}, {b}) must be positive")
    if not qualifies(a, b):
        raise NotQualified(f"({a}, {b}) fails b > a and b >= max(a, (a-1)^2) after reduction")
    g = math.gcd(a, b)
    a0, b0 = a // g, b // g
    if a0 == 1:
        base = BaseFamily("ktl", t=b0)
        red = 0
    else:
        res = b0 % a0
        if res == 1:
            base = BaseFamily("theta", length=a0 + 1)
            red = (b0 - 1) // a0 - 1
        elif res == a0 - 1:
            base = BaseFamily("tr11", r=a0 - 1)
            red = (b0 + 1) // a0 - 2
        else:
            base = BaseFamily("height_two", r=a0 - 1, t=a0 - 1 - res)
            red = (b0 - res) // a0 - (a0 - 1 - res)
    if red < 0:
        raise CertificateInvalid(f"negative reduction count for ({a0}, {b0})")
    target = ReducedRational(a0, b0)
    # s0 needs the reconstruction; build once and reuse for the self-check.
    draft = RealizabilityCertificate(target, base, red, l, s0=0, exponent=target.exponent)
    s0 = build_witness(draft).s0
    cert = RealizabilityCertificate(target, base, red, l, s0=s0, exponent=target.exponent)
    check = verify_certificate(cert)
    if not check:
        raise CertificateInvalid(f"derived certificate failed verification: {check.reason}")
    return cert


def enumerate_realizable(a_max: int, b_max: int, l: int = 2):
    """All reduced qualifying (a, b) with a <= a_max, a < b <= b_max, verified."""
    if a_max > ENUMERATION_BUDGET or b_max > ENUMERATION_BUDGET:
        raise TooLarge(f"enumeration bounds exceed {ENUMERATION_BUDGET}")
    out = []
    for a in range(1, a_max + 1):
        for b in range(a + 1, b_max + 1):
            if math.gcd(a, b) != 1 or not qualifies(a, b):
                continue
            out.append((a, b, derive(a, b, l)))
    return out
