"""
Canonical JSON encoding of results.

Integers are written as decimal strings, rationals as [numerator, denominator]
string pairs and polynomials as sorted [exponents, numerator, denominator]
triples, so output is exact and byte-identical across runs.
"""
import hashlib
import json
from fractions import Fraction

from sympy.polys.domains import QQ

from .linalg import to_fraction
from .polycone import cone_from_rays


def _s(x):
    return str(int(x))


def encode_vec(v):
    return [_s(x) for x in v]


def encode_vecs(vs):
    return [encode_vec(v) for v in sorted(vs)]


def encode_rational(x):
    x = to_fraction(x) if not isinstance(x, Fraction) else x
    return [str(x.numerator), str(x.denominator)]


def encode_poly(f):
    terms = []
    for monom, coeff in f.items():
        c = to_fraction(coeff)
        terms.append((tuple(monom), c))
    terms.sort()
    return [[encode_vec(m), str(c.numerator), str(c.denominator)] for m, c in terms]


def decode_poly(ring, data):
    return ring.from_dict({tuple(int(e) for e in m): QQ(int(num), int(den)) for m, num, den in data})


def encode_cone(cone):
    return {
        "rank": _s(cone.rank),
        "dim": _s(cone.dim),
        "rays": encode_vecs(cone.pointed_rays),
        "lineality": encode_vecs(cone.lineality),
        "facets": encode_vecs(cone.proper_facets),
        "equations": encode_vecs(cone.equations),
    }


def decode_cone(data):
    rank = int(data["rank"])
    rays = [tuple(int(x) for x in r) for r in data["rays"]]
    lines = [tuple(int(x) for x in r) for r in data["lineality"]]
    return cone_from_rays(rank, rays + lines + [tuple(-x for x in r) for r in lines])


def encode_certificate(cert):
    return {
        "verdict": cert.verdict,
        "lambda": encode_vec(cert.lam) if cert.lam is not None else None,
        "pairing": _s(cert.pairing) if cert.pairing is not None else None,
        "witness": [[_s(a), encode_rational(c)] for a, c in cert.witness] if cert.witness is not None else None,
    }


def encode_component(comp):
    return {
        "support": encode_vec(comp.support),
        "vanishing": encode_vec(comp.vanishing),
        "lambda": encode_vec(comp.lam),
        "class_T": encode_poly(comp.class_T),
        "codim_E": _s(comp.codim_E),
        "dim_P_lambda": _s(comp.dim_P_lambda),
        "dim_stab": _s(comp.dim_stab),
        "codim_orbit": _s(comp.codim_orbit),
        "maximal_flag": comp.maximal_flag,
    }


def encode_chamber(chamber, index):
    return {
        "cone": index,
        "representative": encode_vec(chamber.representative),
        "semistable_supports": [encode_vec(s) for s in chamber.semistable_supports],
        "components": [encode_component(c) for c in chamber.components],
        "properly_stable": chamber.properly_stable,
    }


def encode_fan(gitfan):
    fan = gitfan.fan
    index = {c: i for i, c in enumerate(fan.cones)}
    return {
        "rank": _s(fan.rank),
        "cones": [encode_cone(c) for c in fan.cones],
        "faces": [[_s(a), _s(b)] for a, b in fan.face_pairs],
        "maximal": [_s(index[c]) for c in fan.maximal_cones()],
        "rays": [_s(index[c]) for c in fan.rays()],
        "chambers": [encode_chamber(ch, _s(i)) for i, ch in enumerate(gitfan.chambers)],
        "effective_cone": encode_cone(gitfan.effective_cone),
        "walls": [encode_cone(w) for w in gitfan.walls],
        "complete": gitfan.complete,
        "invariants_trivial": gitfan.invariants_trivial,
    }


def encode_presentation(pres, chern_forms=None):
    out = {
        "generator_symbols": list(pres.generator_symbols),
        "grading": encode_vec(pres.grading),
        "ideal_generators": [encode_poly(g) for g in pres.ideal_generators],
        "invariant_certified": pres.invariant_certified,
        "label": pres.label,
        "variant": pres.variant,
    }
    if chern_forms is not None:
        out["ideal_generators_chern"] = [encode_poly(g) for g in chern_forms]
    return out


def encode_picard(pic):
    return {
        "rank": _s(pic.rank),
        "relations": encode_vecs(pic.relations),
        "quotient_basis": [encode_vec(b) for b in pic.quotient_basis],
        "ample_cone": encode_cone(pic.ample_cone),
        "codim_ok": pic.codim_ok,
        "properly_stable": pic.properly_stable,
    }


def input_hash(data):
    return hashlib.sha256(data).hexdigest()


def result_doc(command, options, input_bytes, payload):
    from . import __version__
    return {
        "command": command,
        "options": options,
        "input_sha256": input_hash(input_bytes),
        "version": __version__,
        "payload": payload,
    }


def error_doc(kind, message):
    return {"error": {"kind": kind, "message": message}}


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
