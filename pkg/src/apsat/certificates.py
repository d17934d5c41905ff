"""Certificates: a point set, the property checked on it, and how it was made,
as canonical JSON that can be re-verified from its own contents.

Schema (version 1)::

    schema_version  int
    tool            {"name", "version"}
    group           group spec string (see apsat.groupspec)
    predicate       Kind name
    weights         null, or list of pairs [c1, c2]; a coefficient is
                    [numerator, denominator] or {"gf": code}
    set             sorted element indices
    result          bool
    witness         null or {"type": ..., fields}
    provenance      null or {"name", "params", "seed"}
    timing          {"elapsed_s": decimal string}
    extra           free-form object; numbers that are not integers are strings
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .groups import FieldScalar, Group, PointSet, WeightFamily, WeightPair, single
from .groupspec import format_group_spec, parse_group_spec
from .predicates import (
    AvoidanceWitness,
    Kind,
    Predicate,
    SaturationWitness,
    SidonWitness,
    ThreeAPWitness,
    VerificationReport,
    recheck_witness,
    verify,
)

SCHEMA_VERSION = 1


class CertificateError(ValueError):
    pass


def _coef_out(c) -> Any:
    if isinstance(c, FieldScalar):
        return {"gf": c.code}
    c = Fraction(c)
    return [c.numerator, c.denominator]


def _coef_in(obj) -> Any:
    if isinstance(obj, dict):
        return FieldScalar(int(obj["gf"]))
    num, den = obj
    return Fraction(int(num), int(den))


def weights_out(W: WeightFamily | None):
    if W is None:
        return None
    return [[_coef_out(a), _coef_out(b)] for a, b in W]


def weights_in(obj) -> WeightFamily | None:
    if obj is None:
        return None
    pairs = [(_coef_in(a), _coef_in(b)) for a, b in obj]
    if len(pairs) == 1:
        return single(*pairs[0])
    return WeightFamily(tuple(pairs))


_WITNESS_TYPES = {
    "avoidance": AvoidanceWitness,
    "three_ap": ThreeAPWitness,
    "uncovered": SaturationWitness,
    "sidon": SidonWitness,
}


def witness_out(w) -> dict | None:
    if w is None:
        return None
    name = next(k for k, cls in _WITNESS_TYPES.items() if isinstance(w, cls))
    out: dict[str, Any] = {"type": name}
    for f in w.__dataclass_fields__:
        v = getattr(w, f)
        out[f] = [_coef_out(v[0]), _coef_out(v[1])] if f == "weight" else int(v)
    return out


def witness_in(obj: dict | None):
    if obj is None:
        return None
    obj = dict(obj)
    try:
        cls = _WITNESS_TYPES[obj.pop("type")]
        kwargs = {}
        for f in cls.__dataclass_fields__:
            v = obj[f]
            kwargs[f] = WeightPair(_coef_in(v[0]), _coef_in(v[1])) if f == "weight" else int(v)
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"corrupt witness: {exc}") from exc
    return cls(**kwargs)


def predicate_of(kind: str, weights) -> Predicate:
    k = Kind(kind)
    return Predicate(k, weights_in(weights) if k.needs_weights else None)


@dataclass
class Certificate:
    group: Group
    predicate: Predicate
    points: PointSet
    result: bool
    witness: Any = None
    provenance: dict | None = None
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)
    tool_version: str = __version__

    @classmethod
    def from_report(cls, G: Group, S: PointSet, report: VerificationReport, provenance: dict | None = None, extra: dict | None = None) -> "Certificate":
        return cls(G, report.predicate, S, report.holds, report.witness, provenance, report.elapsed, extra or {})

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "apsat", "version": self.tool_version},
            "group": format_group_spec(self.group),
            "predicate": self.predicate.kind.value,
            "weights": weights_out(self.predicate.weights) if self.predicate.kind.needs_weights else None,
            "set": [int(x) for x in self.points.indices],
            "result": bool(self.result),
            "witness": witness_out(self.witness),
            "provenance": self.provenance,
            "timing": {"elapsed_s": f"{self.elapsed:.6f}"},
            "extra": self.extra,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_jsonable) + "\n"

    def reverify(self, threads: int | None = None) -> VerificationReport:
        return verify(self.group, self.points, self.predicate, threads)


def _jsonable(o):
    # numpy scalars and tuples from construction params
    if hasattr(o, "item"):
        return o.item()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    return str(o)


def loads(text: str | bytes, check: bool = True) -> Certificate:
    """Parse a certificate. With ``check`` a stored witness must exhibit a
    genuine failure on the stored set."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not JSON: {exc}") from exc
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise CertificateError(f"unsupported schema_version {obj.get('schema_version')!r}")
    try:
        G = parse_group_spec(obj["group"])
        pred = predicate_of(obj["predicate"], obj.get("weights"))
        S = PointSet(G, obj["set"])
        result = bool(obj["result"])
    except (KeyError, ValueError, TypeError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc
    if list(S.indices) != list(obj["set"]):
        raise CertificateError("set must be sorted and duplicate free")
    witness = witness_in(obj.get("witness"))
    cert = Certificate(
        G, pred, S, result, witness, obj.get("provenance"),
        float(obj.get("timing", {}).get("elapsed_s", "0")), obj.get("extra") or {},
        obj.get("tool", {}).get("version", ""),
    )
    if check:
        if witness is not None:
            if result:
                raise CertificateError("corrupt witness: a holding result carries no witness")
            probe = VerificationReport(pred, False, witness)
            if not recheck_witness(G, S, probe):
                raise CertificateError("corrupt witness: it does not exhibit a failure")
    return cert


def load_and_verify(text: str | bytes, threads: int | None = None) -> tuple[Certificate, VerificationReport, bool]:
    """(certificate, fresh report, whether the fresh result matches the stored one)."""
    cert = loads(text)
    report = cert.reverify(threads)
    return cert, report, report.holds == cert.result
