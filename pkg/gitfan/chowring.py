"""
The divided antisymmetrizer p_G = J_G / Delta_G and the rational Chow ring of
a GIT quotient, presented as invariants modulo the ideal generated by the
pushed-forward classes of the unstable components.

All polynomials are sympy PolyElements of GroupData.ring (variables t1..t_l).
"""
import itertools
import logging
from dataclasses import dataclass, field

from sympy import expand
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.polyfuncs import symmetrize
from sympy.polys.rings import xring

from .groupdata import weight_class
from .linalg import nullspace, rank as mat_rank, row_space_basis, to_fraction
from .polycone import linear_image
from .stability import SEMISTABLE, unstable_components

logger = logging.getLogger(__name__)

CHOW_QUOTIENT = "chow_quotient"
EQUIVARIANT_SEMISTABLE = "equivariant_semistable"


class ConsistencyError(ValueError):
    kind = "consistency"


@dataclass(frozen=True)
class InvariantPresentation:
    generator_symbols: tuple
    grading: tuple
    ideal_generators: tuple
    invariant_certified: bool
    label: str
    variant: str
    group: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class PicardPresentation:
    rank: int
    relations: tuple
    quotient_basis: tuple   # functionals on X*(G) giving coordinates of the quotient
    ample_cone: object      # closure; the ample cone is its relative interior
    codim_ok: bool
    properly_stable: object


def reynolds_divided(gd, f):
    """
    p_G(f) = (sum_w det(w) w(f)) / Delta_G. The division is exact; a nonzero
    remainder raises ConsistencyError.
    """
    if gd.weyl_order == 1:
        return f
    # Alternating sum over W, then exact division by the Weyl denominator
    antisym = gd.ring.zero
    for w in gd.weyl_elements():
        term = gd.weyl_act_poly(w, f)
        antisym = antisym + term if w.sign > 0 else antisym - term
    if antisym.is_zero:
        return antisym
    quotient, remainder = antisym.div(gd.discriminant)
    if not remainder.is_zero:
        raise ConsistencyError(f"antisymmetrization of {f} is not divisible by the discriminant")
    return quotient


def is_weyl_invariant(gd, f):
    """Checks invariance under the simple transpositions of every block."""
    for s, n in gd.blocks:
        for p in range(n - 1):
            swapped = {}
            for m, c in f.items():
                m = list(m)
                m[s + p], m[s + p + 1] = m[s + p + 1], m[s + p]
                swapped[tuple(m)] = c
            if gd.ring.from_dict(swapped) != f:
                return False
    return True


def component_class(gd, ws, component):
    return weight_class(gd, ws, component.vanishing)


def module_basis(gd):
    """
    Monomials t^a with a_i below the (1-based) position of t_i in its block;
    a basis of the T-equivariant ring over the invariants, of size |W|.
    """
    ranges = []
    for _, n in gd.blocks:
        ranges.extend(range(p + 1) for p in range(n))
    ranges.extend([range(1)] * gd.spec.torus_rank)
    return [gd.ring.from_dict({exps: QQ(1)}) for exps in itertools.product(*ranges)]


def _degree(f):
    return max(sum(m) for m in f.monoms())


def _ideal_generators(gd, classes):
    gens = []
    seen = set()
    # The classes times the module basis generate over the invariants
    basis = module_basis(gd)
    for cls in classes:
        for b in basis:
            g = reynolds_divided(gd, cls * b)
            if g.is_zero:
                continue
            key = tuple(sorted(g.monic().items()))
            if key in seen:
                continue
            seen.add(key)
            gens.append(g)
    return gens


def chow_presentation(gd, ws, chamber, variant=SEMISTABLE):
    """
    Invariants modulo p_G of the unstable component classes times the module
    basis. variant "stable" uses the larger family of components cut out by
    <chi, lam> <= 0.
    """
    if variant == SEMISTABLE:
        components = chamber.components
    else:
        components = unstable_components(gd, ws, gd.character_embed(chamber.representative), variant="stable")
    gens = _ideal_generators(gd, [c.class_T for c in components])
    certified = all(is_weyl_invariant(gd, g) for g in gens)
    if not certified:
        raise ConsistencyError("ideal generator is not Weyl invariant")
    names, degrees = gd.chern_symbols()
    logger.debug("presentation: %d components, %d ideal generators", len(components), len(gens))
    return InvariantPresentation(
        generator_symbols=tuple(names),
        grading=tuple(degrees),
        ideal_generators=tuple(gens),
        invariant_certified=certified,
        label=CHOW_QUOTIENT if chamber.properly_stable else EQUIVARIANT_SEMISTABLE,
        variant=variant,
        group=gd,
    )


# --- Graded pieces of the invariant ring ---

def _weighted_exponents(degrees, d):
    """Exponent vectors e with sum e_i * degrees[i] == d."""
    if not degrees:
        if d == 0:
            yield ()
        return
    first, rest = degrees[0], degrees[1:]
    for e in range(d // first + 1):
        for tail in _weighted_exponents(rest, d - e * first):
            yield (e,) + tail


def invariant_monomials(gd, d):
    """Chern monomials of weighted degree d, as (exponents, polynomial) pairs."""
    if d < 0:
        return []
    _, degrees = gd.chern_symbols()
    polys = gd.chern_polys()
    out = []
    for exps in _weighted_exponents(tuple(degrees), d):
        f = gd.ring.one
        for p, e in zip(polys, exps):
            if e:
                f *= p ** e
        out.append((exps, f))
    return out


def _coefficient_rows(polys):
    monoms = sorted({m for f in polys for m in f.monoms()})
    index = {m: i for i, m in enumerate(monoms)}
    rows = []
    for f in polys:
        row = [QQ(0)] * len(monoms)
        for m, c in f.items():
            row[index[m]] = c
        rows.append(row)
    return rows, len(monoms)


def _span_rank(polys):
    polys = [f for f in polys if not f.is_zero]
    if not polys:
        return 0
    rows, ncols = _coefficient_rows(polys)
    return mat_rank(rows, ncols)


def ideal_slice(gd, generators, d):
    """Spanning set of the degree-d part of the ideal generated in the invariant ring."""
    out = []
    for g in generators:
        gd_deg = _degree(g)
        for _, m in invariant_monomials(gd, d - gd_deg):
            out.append(g * m)
    return out


def betti_numbers(pres, dim_quotient):
    """Graded dimensions of invariants / ideal in degrees 0..dim_quotient."""
    gd = pres.group
    out = []
    for d in range(dim_quotient + 1):
        # invariants of degree d minus the ideal in degree d
        slice_dim = len(invariant_monomials(gd, d))
        out.append(slice_dim - _span_rank(ideal_slice(gd, pres.ideal_generators, d)))
    return out


def ideal_contains(gd, generators, f):
    """Membership of a homogeneous invariant f in the ideal."""
    if f.is_zero:
        return True
    part = ideal_slice(gd, generators, _degree(f))
    return _span_rank(part) == _span_rank(part + [f])


def ideal_equal_up_to_degree(gd, gens_a, gens_b, max_degree):
    """Compares two invariant ideals slice by slice through max_degree."""
    for d in range(max_degree + 1):
        a = ideal_slice(gd, gens_a, d)
        b = ideal_slice(gd, gens_b, d)
        ra, rb = _span_rank(a), _span_rank(b)
        if ra != rb or _span_rank(a + b) != ra:
            return False
    return True


def chern_ring(gd):
    names, _ = gd.chern_symbols()
    return xring(names, QQ, lex)[0]


def chern_expansion(gd, f):
    """
    Rewrites a Weyl-invariant polynomial in the block elementary symmetric
    functions and torus variables.

    Raises:
        ValueError: if f is not invariant.
    """
    ring = chern_ring(gd)
    names, _ = gd.chern_symbols()
    chern_syms = dict(zip(names, ring.symbols))
    expr = f.as_expr()
    # One block at a time; the other variables ride along as coefficients
    for j, (_, n) in enumerate(gd.blocks):
        syms = gd.block_symbols(j)
        targets = iter([chern_syms[f"c{j + 1}_{r}"] for r in range(1, n + 1)])
        expr, remainder, _ = symmetrize(expr, *syms, formal=True, symbols=targets)
        if remainder != 0:
            raise ValueError(f"{f} is not Weyl invariant")
    torus = gd.ring.symbols[gd.torus_offset:]
    expr = expr.subs({t: chern_syms[f"u{m + 1}"] for m, t in enumerate(torus)}, simultaneous=True)
    return ring.from_expr(expand(expr)) if expr != 0 else ring.zero


# --- Picard group and ample cone ---

def _linear_coefficients(gd, f):
    vec = [0] * gd.rank
    for m, c in f.items():
        vec[m.index(1)] = to_fraction(c)
    return vec


def picard_and_ample(gd, chamber):
    """
    Rational Picard group of the quotient as X*(G) modulo the degree-1 classes
    of codimension-one unstable components, with the ample cone as the image of
    the chamber.
    """
    components = chamber.components
    codim_ok = all(c.codim_orbit >= 2 for c in components)
    # Only codimension-one components contribute linear relations
    divisorial = [c.class_T for c in components if c.codim_orbit == 1]
    gens = _ideal_generators(gd, divisorial)
    relations = []
    for f in ideal_slice(gd, gens, 1):
        if not f.is_zero:
            relations.append(gd.char_coords(_linear_coefficients(gd, f)))
    relations = row_space_basis(relations, gd.char_rank) if relations else []
    quotient_basis = nullspace(relations, gd.char_rank) if relations else [
        tuple(1 if i == j else 0 for i in range(gd.char_rank)) for j in range(gd.char_rank)]
    rank = gd.char_rank - len(relations)
    ample = linear_image(chamber.cone, quotient_basis, rank)
    logger.debug("picard rank %d from %d divisorial components", rank, len(divisorial))
    return PicardPresentation(
        rank=rank,
        relations=tuple(tuple(r) for r in relations),
        quotient_basis=tuple(tuple(b) for b in quotient_basis),
        ample_cone=ample,
        codim_ok=codim_ok,
        properly_stable=chamber.properly_stable,
    )
