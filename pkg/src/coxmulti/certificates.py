"""JSON interchange for polynomials, derivations and basis certificates.

Rational coefficients serialize as [numerator, denominator] strings;
coefficients over Q(g) serialize as {"ext": [[num, den], ...]} listing the
representative's coefficients in ascending powers of the generator.
Serialization is deterministic (sorted keys, canonical monomial order) so
identical runs produce byte-identical files.
"""

import json
from fractions import Fraction
from typing import Dict, Optional

from .coxeter import ArrangementData, Multiplicity, cached_arrangement
from .derivations import Derivation
from .engine import BasisCertificate
from .poly import LinearForm, LogRational, Poly
from .scalars import AlgebraicNumber, NumberField

SCHEMA_VERSION = 1


def encode_scalar(c):
    if isinstance(c, AlgebraicNumber):
        return {"ext": [[str(f.numerator), str(f.denominator)] for f in c.coeffs]}
    f = Fraction(c)
    return [str(f.numerator), str(f.denominator)]


def decode_scalar(obj, field: Optional[NumberField]):
    if isinstance(obj, dict):
        if field is None:
            raise ValueError("extension coefficient without a number field")
        return field.element([Fraction(int(n), int(d)) for n, d in obj["ext"]])
    n, d = obj
    return Fraction(int(n), int(d))


def encode_poly(p: Poly) -> Dict:
    return {
        "nvars": p.nvars,
        "terms": [[list(e), encode_scalar(c)] for e, c in p.sorted_terms()],
    }


def decode_poly(obj: Dict, field: Optional[NumberField]) -> Poly:
    terms = {}
    for e, c in obj["terms"]:
        terms[tuple(int(k) for k in e)] = decode_scalar(c, field)
    return Poly(int(obj["nvars"]), terms)


def encode_logrational(x: LogRational) -> Dict:
    den = sorted(x.den.items(), key=lambda t: t[0])
    return {
        "num": encode_poly(x.num),
        "den": [[[encode_scalar(c) for c in form.coeffs], e] for form, e in den],
    }


def decode_logrational(obj: Dict, field: Optional[NumberField]) -> LogRational:
    num = decode_poly(obj["num"], field)
    den = {}
    for coeffs, e in obj["den"]:
        form = LinearForm([decode_scalar(c, field) for c in coeffs])
        den[form] = int(e)
    return LogRational(num, den)


def encode_derivation(theta: Derivation) -> Dict:
    return {
        "coeffs": [encode_logrational(c) for c in theta.coeffs],
        "degree": theta.degree(),
    }


def decode_derivation(obj: Dict, field: Optional[NumberField]) -> Derivation:
    return Derivation([decode_logrational(c, field) for c in obj["coeffs"]])


def encode_multiplicity(mult: Multiplicity) -> Dict:
    if mult.is_equivariant():
        m1, m2 = mult.orbit_pair()
        return {"m1": m1, "m2": m2}
    return {
        "values": [[[encode_scalar(c) for c in h.form.coeffs], v]
                   for h, v in sorted(mult.values.items(), key=lambda t: t[0].form)],
    }


def decode_multiplicity(obj: Dict, arr: ArrangementData) -> Multiplicity:
    if "m1" in obj:
        return Multiplicity.from_pair(arr, int(obj["m1"]), int(obj["m2"]))
    values = {}
    for coeffs, v in obj["values"]:
        form = LinearForm([decode_scalar(c, arr.field) for c in coeffs])
        values[arr.hyperplane_of(form)] = int(v)
    return Multiplicity(arr, values)


def encode_certificate(cert: BasisCertificate) -> Dict:
    out = {
        "schema": SCHEMA_VERSION,
        "family": cert.family,
        "params": cert.params,
        "multiplicity": encode_multiplicity(cert.multiplicity),
        "case": cert.case,
        "route": cert.route,
        "exponents": cert.exponents,
        "saito_c": encode_scalar(cert.saito_c),
        "invariance": cert.invariance,
        "basis": [encode_derivation(t) for t in cert.basis],
    }
    if cert.seeds:
        out["seeds"] = [list(s) for s in cert.seeds]
    return out


def certificate_to_json(cert: BasisCertificate) -> str:
    return json.dumps(encode_certificate(cert), sort_keys=True, indent=1)


def arrangement_from_header(obj: Dict) -> ArrangementData:
    family = obj["family"]
    params = obj.get("params") or {}
    return cached_arrangement(family, rank=params.get("rank"), n=params.get("n"))


def decode_certificate(obj: Dict) -> BasisCertificate:
    if obj.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {obj.get('schema')!r}")
    arr = arrangement_from_header(obj)
    mult = decode_multiplicity(obj["multiplicity"], arr)
    basis = [decode_derivation(d, arr.field) for d in obj["basis"]]
    saito_c = decode_scalar(obj["saito_c"], arr.field)
    return BasisCertificate(
        family=arr.family, params=dict(arr.params), multiplicity=mult,
        case=str(obj["case"]), basis=basis,
        exponents=[int(e) for e in obj["exponents"]], saito_c=saito_c,
        invariance=obj.get("invariance", []), route=obj.get("route", "file"),
        seeds=[tuple(s) for s in obj["seeds"]] if obj.get("seeds") else None,
    )


def certificate_from_json(text: str) -> BasisCertificate:
    return decode_certificate(json.loads(text))
