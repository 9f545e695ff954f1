"""
Hilbert-Mumford stability engine.

Characters passed to the support and component functions live in X*(T)
coordinates (embed X*(G) characters with GroupData.character_embed first).
Cones of the GIT fan live in X*(G) coordinates.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

from .config import Config
from .groupdata import stabilizer_dims, weight_class
from .linalg import dot, is_zero, nullspace, rank as mat_rank, sign_normalized, solve_unique
from .polycone import (
    DimensionMismatchError, Fan, arrangement_chambers, cone_from_inequalities, cone_from_rays,
    cone_key, interior_point, intersect, membership, separating_facet,
)

logger = logging.getLogger(__name__)

SEMISTABLE = "semistable"
UNSTABLE = "unstable"
PROPERLY_STABLE = "properly_stable"


class UnsupportedError(ValueError):
    def __init__(self, message, kind="unsupported"):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class PointSupport:
    support: frozenset
    coordinates: tuple = None

    @staticmethod
    def from_coordinates(coordinates):
        coords = tuple(coordinates)
        return PointSupport(support=frozenset(i for i, x in enumerate(coords) if x != 0), coordinates=coords)


@dataclass(frozen=True)
class HMCertificate:
    verdict: str
    lam: tuple = None
    pairing: int = None
    witness: tuple = None   # ((column, coefficient), ...) with chi = sum of coefficient * weight


@dataclass(frozen=True)
class UnstableComponent:
    support: tuple
    vanishing: tuple
    lam: tuple
    class_T: object
    codim_E: int
    dim_P_lambda: int
    dim_stab: int
    codim_orbit: int
    maximal_flag: str


@dataclass(frozen=True)
class Chamber:
    cone: object
    representative: tuple
    semistable_supports: tuple
    components: tuple
    properly_stable: object   # True, False or None when undecidable


@dataclass(frozen=True)
class GITFan:
    fan: Fan
    chambers: tuple
    effective_cone: object
    walls: tuple
    complete: bool
    invariants_trivial: bool

    def maximal_chambers(self):
        maximal = set(self.fan.maximal_cones())
        return [ch for ch in self.chambers if ch.cone in maximal]

    def index_containing(self, chi):
        for i, c in enumerate(self.fan.cones):
            if membership(c, chi, "relative_interior"):
                return i
        return None


@dataclass(frozen=True)
class ChamberLookup:
    effective: bool
    chamber: Chamber = None
    properly_stable: object = None


def _parallel_map(fn, items):
    items = list(items)
    if Config.THREADS <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=Config.THREADS) as pool:
        return list(pool.map(fn, items))


def _check_chi(ws, chi):
    if len(chi) != ws.rank:
        raise DimensionMismatchError(f"character {tuple(chi)} has length {len(chi)}, expected {ws.rank}")


def _check_support(ws, support):
    bad = [a for a in support if not 0 <= a < len(ws.columns)]
    if bad:
        raise ValueError(f"support indices {bad} out of range 0..{len(ws.columns) - 1}")


def _support_cone(ws, support):
    return cone_from_rays(ws.rank, [ws.columns[a].weight for a in support])


@lru_cache(maxsize=64)
def weight_hyperplanes(ws):
    """Sign-normalized normals of the hyperplanes spanned by weights."""
    if ws.rank == 1:
        return ((1,),)
    distinct = sorted({c.weight for c in ws.columns if not is_zero(c.weight)})
    normals = set()
    for combo in itertools.combinations(distinct, ws.rank - 1):
        if mat_rank(list(combo), ws.rank) == ws.rank - 1:
            normals.add(sign_normalized(nullspace(list(combo), ws.rank)[0]))
    return tuple(sorted(normals))


def semistable_witness(ws, chi, support):
    """
    A nonnegative combination of support weights equal to chi, using linearly
    independent weights only, or None if chi is outside their cone.
    """
    support = sorted(set(support))
    # Caratheodory: some independent subset already suffices
    for size in range(0, min(len(support), ws.rank) + 1):
        for combo in itertools.combinations(support, size):
            weights = [ws.columns[a].weight for a in combo]
            if mat_rank(weights, ws.rank) < size:
                continue
            coeffs = solve_unique(weights, chi)
            if coeffs is not None and all(c >= 0 for c in coeffs):
                return tuple(zip(combo, coeffs))
    return None


def minimal_semistable_supports(ws, chi):
    """
    Inclusion-minimal supports S with chi in cone(S). These are exactly the
    independent column sets expressing chi with strictly positive coefficients.
    """
    _check_chi(ws, chi)
    out = []
    for size in range(0, ws.rank + 1):
        for combo in itertools.combinations(range(len(ws.columns)), size):
            weights = [ws.columns[a].weight for a in combo]
            if mat_rank(weights, ws.rank) < size:
                continue
            coeffs = solve_unique(weights, chi)
            if coeffs is not None and all(c > 0 for c in coeffs):
                out.append(combo)
    return tuple(out)


def support_semistable(ws, chi, support):
    """
    Decides whether points with the given support are chi-semistable.

    Returns:
        HMCertificate: semistable with a witness combination, or unstable with a
        cocharacter lam that is nonnegative on the support and negative on chi.
    """
    _check_chi(ws, chi)
    support = sorted(set(support))
    _check_support(ws, support)
    cone = _support_cone(ws, support)
    # A violated facet of cone(support) is a destabilizing cocharacter
    lam = separating_facet(cone, chi)
    if lam is None:
        return HMCertificate(SEMISTABLE, witness=semistable_witness(ws, chi, support))
    return HMCertificate(UNSTABLE, lam=lam, pairing=dot(chi, lam))


def point_test(gd, ws, chi, x):
    """
    Hilbert-Mumford test for a single point of a torus representation.

    Properly stable means chi lies in the relative interior of a full-dimensional
    cone(support); otherwise the certificate carries a nonzero lam with
    <chi, lam> <= 0 that is nonnegative on the support.
    """
    if not gd.is_abelian:
        raise UnsupportedError("point-level stability is only decided for torus actions")
    support = x.support
    if x.coordinates is not None:
        if len(x.coordinates) != len(ws.columns):
            raise DimensionMismatchError(
                f"point has {len(x.coordinates)} coordinates, expected {len(ws.columns)}")
        support = frozenset(i for i, c in enumerate(x.coordinates) if c != 0)
    cert = support_semistable(ws, chi, support)
    if cert.verdict == UNSTABLE:
        return cert
    cone = _support_cone(ws, sorted(support))
    if cone.dim == ws.rank and membership(cone, chi, "relative_interior"):
        return replace(cert, verdict=PROPERLY_STABLE)
    # chi sits on a facet (or an equation) of the support cone
    lam = next(n for n in cone.facets if dot(n, chi) == 0)
    return replace(cert, lam=lam, pairing=0)


def invariants_trivial(ws):
    """True iff some lam pairs strictly positively with every weight (K[V]^T = K)."""
    if any(is_zero(c.weight) for c in ws.columns):
        return False
    return _support_cone(ws, range(len(ws.columns))).lineality_dim == 0


def _maximal_unstable_supports(gd, ws, chi, strict=True):
    """
    Maximal supports S_lam = {a : <eta_a, lam> >= 0} over candidate cocharacters
    with <chi, lam> < 0 (or <= 0 when strict is False), one per Weyl orbit.

    Returns:
        list of (canonical support tuple, lam) sorted by support.
    """
    # Extreme rays of each arrangement cell are among the hyperplane normals
    found = {}
    for n in weight_hyperplanes(ws):
        for lam in (n, tuple(-x for x in n)):
            p = dot(chi, lam)
            if p < 0 or (not strict and p == 0):
                s = frozenset(a for a, c in enumerate(ws.columns) if dot(c.weight, lam) >= 0)
                found.setdefault(s, lam)
    maximal = sorted((tuple(sorted(s)), lam) for s, lam in found.items() if not any(s < t for t in found))

    if gd.weyl_order == 1:
        return maximal
    # Canonical representative: lexicographically least image under W
    canon = {}
    for support, lam in maximal:
        best = None
        for w in gd.weyl_elements():
            perm = gd.column_permutation(w, ws)
            image = tuple(sorted(perm[a] for a in support))
            if best is None or image < best[0]:
                best = (image, gd.weyl_act_vector(w, lam))
        canon.setdefault(best[0], best[1])
    logger.debug("%d T-maximal unstable supports, %d up to W", len(maximal), len(canon))
    return sorted(canon.items())


def unstable_components(gd, ws, chi, variant=SEMISTABLE):
    """
    Irreducible pieces G.E(lam) of the unstable locus (of the non-properly-stable
    locus for variant "stable"), one per Weyl orbit of maximal supports.
    """
    _check_chi(ws, chi)
    strict = variant == SEMISTABLE
    if strict and is_zero(chi):
        return []
    pieces = []
    for support, lam in _maximal_unstable_supports(gd, ws, chi, strict):
        vanishing = tuple(a for a in range(len(ws.columns)) if a not in set(support))
        dims = stabilizer_dims(gd, ws, lam, support)
        pieces.append((support, vanishing, lam, dims))

    orbit_dims = [ws.N - dims.codim_orbit for _, _, _, dims in pieces]
    components = []
    for (support, vanishing, lam, dims), odim in zip(pieces, orbit_dims):
        certified = gd.is_abelian or not any(other > odim for other in orbit_dims)
        components.append(UnstableComponent(
            support=support,
            vanishing=vanishing,
            lam=lam,
            class_T=weight_class(gd, ws, vanishing),
            codim_E=ws.weighted_size(vanishing),
            dim_P_lambda=dims.dim_P_lambda,
            dim_stab=dims.dim_stab_lie,
            codim_orbit=dims.codim_orbit,
            maximal_flag="certified" if certified else "heuristic",
        ))
    return components


def restrict_cone(gd, cone):
    """Intersection of a cone in X*(T) with the embedded X*(G), in X*(G) coordinates."""
    return cone_from_inequalities(gd.char_rank, [gd.restrict_normal(f) for f in cone.facets])


def semistable_locus_empty(components):
    """True when some G.E(lam) has codimension 0, so every point is unstable."""
    return any(c.codim_orbit <= 0 for c in components)


def _restricted_normals(gd, ws):
    zero = (0,) * gd.char_rank
    return sorted({sign_normalized(gd.restrict_normal(n)) for n in weight_hyperplanes(ws)} - {zero})


def _semistable_part(gd, ws, effective):
    """
    Union of the arrangement cells of `effective` whose G-semistable locus is
    nonempty. That union is the cone of characters admitting semi-invariants,
    so it is convex and its rays generate it.
    """
    cells = arrangement_chambers(gd.char_rank, _restricted_normals(gd, ws), effective)
    empty = _parallel_map(
        lambda c: semistable_locus_empty(unstable_components(gd, ws, gd.character_embed(interior_point(c)))),
        cells,
    )
    kept = [c for c, e in zip(cells, empty) if not e]
    if len(kept) < len(cells):
        logger.debug("%d of %d cells have an empty semistable locus", len(cells) - len(kept), len(cells))
    return cone_from_rays(gd.char_rank, [r for c in kept for r in c.rays])


def effective_cone_and_walls(gd, ws):
    """
    Returns:
        tuple: (effective cone, sorted wall cones, complete). complete is False
        when X*(G) lies inside the span of some T-wall, in which case walls and
        properly-stable flags are not determined.
    """
    k = gd.char_rank
    t_effective = _support_cone(ws, range(len(ws.columns)))
    effective = restrict_cone(gd, t_effective)
    if not gd.is_abelian:
        # Characters of T-semistable but G-unstable cells are not effective for G
        effective = _semistable_part(gd, ws, effective)
    complete = True
    walls = set()
    for n in weight_hyperplanes(ws):
        if is_zero(gd.restrict_normal(n)):
            complete = False
            continue
        inside = [a for a, c in enumerate(ws.columns) if dot(n, c.weight) == 0]
        wall = restrict_cone(gd, _support_cone(ws, inside))
        if not gd.is_abelian:
            wall = intersect(wall, effective)
        if wall.dim == k - 1:
            walls.add(wall)
    if not complete:
        logger.debug("X*(G) lies in a T-wall span; wall list is incomplete")
    return effective, sorted(walls, key=cone_key), complete


def _class_key(gd, ws, rep):
    chi = gd.character_embed(rep)
    return frozenset(s for s, _ in _maximal_unstable_supports(gd, ws, chi))


def _make_chamber(gd, ws, cone, complete):
    rep = interior_point(cone)
    chi = gd.character_embed(rep)
    return Chamber(
        cone=cone,
        representative=rep,
        semistable_supports=minimal_semistable_supports(ws, chi),
        components=tuple(unstable_components(gd, ws, chi)),
        properly_stable=(cone.dim == gd.char_rank) if complete else None,
    )


def git_fan(gd, ws):
    """
    The GIT fan on X*(G): the wall hyperplanes cut the effective cone into
    cells, cells with the same unstable-component family (up to W) are merged,
    and the result is closed under faces.
    """
    k = gd.char_rank
    effective, walls, complete = effective_cone_and_walls(gd, ws)
    cells = arrangement_chambers(k, _restricted_normals(gd, ws), effective)
    keys = _parallel_map(lambda c: _class_key(gd, ws, interior_point(c)), cells)

    # A GIT class can span several arrangement cells; glue them back together
    groups = {}
    for cell, key in zip(cells, keys):
        groups.setdefault(key, []).append(cell)
    maximal = []
    for members in groups.values():
        if len(members) == 1:
            maximal.append(members[0])
        else:
            maximal.append(cone_from_rays(k, [r for c in members for r in c.rays]))
    logger.debug("%d arrangement cells merged into %d chambers", len(cells), len(maximal))

    fan = Fan.from_cones(k, maximal)
    # Chambers are indexed like fan.cones, faces included
    chambers = _parallel_map(lambda c: _make_chamber(gd, ws, c, complete), fan.cones)
    return GITFan(
        fan=fan,
        chambers=tuple(chambers),
        effective_cone=effective,
        walls=tuple(walls),
        complete=complete,
        invariants_trivial=invariants_trivial(ws),
    )


def chamber_lookup(fan, chi):
    """
    Locates chi (in X*(G) coordinates); positive multiples give the same answer.
    Characters whose semistable locus is empty are reported as not effective.
    """
    if len(chi) != fan.fan.rank:
        raise DimensionMismatchError(f"character {tuple(chi)} has length {len(chi)}, expected {fan.fan.rank}")
    if not membership(fan.effective_cone, chi):
        return ChamberLookup(effective=False)
    index = fan.index_containing(chi)
    if index is None:
        return ChamberLookup(effective=False)
    chamber = fan.chambers[index]
    if semistable_locus_empty(chamber.components):
        return ChamberLookup(effective=False)
    return ChamberLookup(effective=True, chamber=chamber, properly_stable=chamber.properly_stable)


# --- Brute-force oracles ---

def _all_subsets(n):
    if n > Config.BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force over {n} columns exceeds the limit of {Config.BRUTE_FORCE_LIMIT}")
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def brute_force_unstable_supports(ws, chi, strict=True):
    """Maximal unstable supports of a torus representation by subset enumeration."""
    bad = []
    for subset in _all_subsets(len(ws.columns)):
        cone = _support_cone(ws, subset)
        if strict:
            unstable = not membership(cone, chi)
        else:
            unstable = not (cone.dim == ws.rank and membership(cone, chi, "relative_interior"))
        if unstable:
            bad.append(frozenset(subset))
    return sorted(tuple(sorted(s)) for s in bad if not any(s < t for t in bad))


def gkz_refinement(ws):
    """
    Maximal cones of the common refinement of all orbit cones cone(S), for a
    torus representation.
    """
    orbit_cones = [_support_cone(ws, s) for s in _all_subsets(len(ws.columns))]
    effective = orbit_cones[-1]
    normals = set()
    for c in orbit_cones:
        for f in c.facets:
            normals.add(sign_normalized(f))
    cells = arrangement_chambers(ws.rank, sorted(normals), effective)
    groups = {}
    for cell in cells:
        rep = interior_point(cell)
        key = frozenset(i for i, c in enumerate(orbit_cones) if membership(c, rep))
        groups.setdefault(key, []).append(cell)
    merged = [cone_from_rays(ws.rank, [r for c in members for r in c.rays]) for members in groups.values()]
    return sorted(merged, key=cone_key)
