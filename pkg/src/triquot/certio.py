"""Certificate serialization: canonical JSON with a version tag.

The text form is ``json.dumps(doc, sort_keys=True, indent=2) + "\\n"``, so
parse followed by print reproduces the input byte for byte.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .arith import ResidueConstraint
from .groups import spec_from_dict
from .l2set import L2Split
from .psl2 import EpimorphismWitness
from .signature import Triple
from .witness import (DihedralWitness, DivisorSplit, Identical, InvariantMismatch,
                      PslQuotientWitness, SmoothGenerationWitness, SuppressionWitness, Unresolved)

FORMAT = "triquot-certificate"
VERSION = 1


class CertificateFormatError(ValueError):
    pass


def _value_out(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def _value_in(name, v):
    if name == "euler_sum":
        return Fraction(v)
    return int(v)


def _cons_out(cs):
    return [c.to_dict() for c in cs]


def _cons_in(cs):
    return tuple(ResidueConstraint.from_dict(c) for c in cs)


def _l2_out(sp):
    if sp is None:
        return None
    return {"q1": sp.q1, "q2": sp.q2, "split_side": sp.split_side, "m1": sp.m1, "m2": sp.m2,
            "joined_member": sp.joined_member}


def _l2_in(d):
    if d is None:
        return None
    return L2Split(int(d["q1"]), int(d["q2"]), int(d["split_side"]), int(d["m1"]), int(d["m2"]),
                   int(d["joined_member"]))


def _split_out(sp):
    if sp is None:
        return None
    return {"q1": sp.q1, "q2": sp.q2, "m1": sp.m1, "m2": sp.m2, "first": list(sp.first),
            "second": list(sp.second), "component": sp.component.to_dict(),
            "component_basis": sp.component_basis,
            "component_constraints": _cons_out(sp.component_constraints)}


def _split_in(d):
    if d is None:
        return None
    return DivisorSplit(int(d["q1"]), int(d["q2"]), int(d["m1"]), int(d["m2"]),
                        tuple(int(x) for x in d["first"]), tuple(int(x) for x in d["second"]),
                        spec_from_dict(d["component"]), d["component_basis"],
                        _cons_in(d["component_constraints"]))


def certificate_data(cert) -> dict:
    k = cert.kind
    if k == "identical":
        return {}
    if k == "invariant-mismatch":
        return {"field": cert.field, "value1": _value_out(cert.value1),
                "value2": _value_out(cert.value2)}
    if k == "dihedral":
        return {"m": cert.m, "side": cert.side}
    if k == "psl-quotient":
        return {"p": cert.p, "quotient_side": cert.quotient_side,
                "epimorphism": None if cert.epimorphism is None else cert.epimorphism.to_dict(),
                "nonquotient": cert.nonquotient, "gap_entry": cert.gap_entry,
                "constraints": _cons_out(cert.constraints)}
    if k == "suppression":
        return {"q": cert.q, "quotient_side": cert.quotient_side,
                "reduced": list(cert.reduced.as_tuple()), "group": cert.group.to_dict(),
                "basis": cert.basis, "constraints": _cons_out(cert.constraints),
                "extended_scope": cert.extended_scope}
    if k == "smooth-generation":
        return {"group": cert.group.to_dict(), "smooth_side": cert.smooth_side,
                "blocked_order": cert.blocked_order, "blocked_entry": cert.blocked_entry,
                "primes": list(cert.primes), "origin": cert.origin,
                "split": _split_out(cert.split), "l2": _l2_out(cert.l2),
                "constraints": _cons_out(cert.constraints), "depends_on": cert.depends_on}
    if k == "unresolved":
        return {"attempts": [list(a) for a in cert.attempts]}
    raise CertificateFormatError(f"unknown certificate kind {k!r}")


def certificate_from_data(kind: str, d: dict):
    if kind == "identical":
        return Identical()
    if kind == "invariant-mismatch":
        name = d["field"]
        return InvariantMismatch(name, _value_in(name, d["value1"]), _value_in(name, d["value2"]))
    if kind == "dihedral":
        return DihedralWitness(int(d["m"]), int(d["side"]))
    if kind == "psl-quotient":
        epi = d["epimorphism"]
        return PslQuotientWitness(int(d["p"]), int(d["quotient_side"]),
                                  None if epi is None else EpimorphismWitness.from_dict(epi),
                                  d["nonquotient"],
                                  None if d["gap_entry"] is None else int(d["gap_entry"]),
                                  _cons_in(d["constraints"]))
    if kind == "suppression":
        return SuppressionWitness(int(d["q"]), int(d["quotient_side"]), Triple(*d["reduced"]),
                                  spec_from_dict(d["group"]), d["basis"],
                                  _cons_in(d["constraints"]), bool(d["extended_scope"]))
    if kind == "smooth-generation":
        be = d["blocked_entry"]
        return SmoothGenerationWitness(spec_from_dict(d["group"]), int(d["smooth_side"]),
                                       int(d["blocked_order"]), None if be is None else int(be),
                                       tuple(int(p) for p in d["primes"]), int(d["origin"]),
                                       _split_in(d["split"]), _l2_in(d["l2"]),
                                       _cons_in(d["constraints"]), d["depends_on"])
    if kind == "unresolved":
        return Unresolved(tuple(tuple(a) for a in d["attempts"]))
    raise CertificateFormatError(f"unknown certificate kind {kind!r}")


def to_document(cert, t1: Triple, t2: Triple) -> dict:
    return {"format": FORMAT, "version": VERSION,
            "triples": [list(t1.as_tuple()), list(t2.as_tuple())],
            "kind": cert.kind, "data": certificate_data(cert)}


def dumps(cert, t1: Triple, t2: Triple, compact: bool = False) -> str:
    doc = to_document(cert, t1, t2)
    if compact:
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def from_document(doc):
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise CertificateFormatError("not a certificate document")
    if doc.get("version") != VERSION:
        raise CertificateFormatError(f"unsupported certificate version {doc.get('version')!r}")
    try:
        t1, t2 = (Triple(*t) for t in doc["triples"])
        cert = certificate_from_data(doc["kind"], doc["data"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from exc
    return cert, t1, t2


def loads(text: str):
    """Parse a certificate document; returns (certificate, t1, t2)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"invalid JSON: {exc}") from exc
    return from_document(doc)
