"""
Exact rational convex polyhedral cones.

A cone carries both representations at once: generators (rays, with the
lineality space stored as +/- pairs) and inequality normals (facets, with the
orthogonal complement of the span stored as +/- pairs). The conversion between
them is cddlib's double description in exact fraction arithmetic; the results
are brought to a canonical form, so two cones are equal as sets iff they
compare equal.
"""
import logging
from dataclasses import dataclass

import cdd

from .linalg import dot, is_zero, primitive, rref, reduce_modulo, row_space_basis

logger = logging.getLogger(__name__)


class DimensionMismatchError(ValueError):
    kind = "dimension"


def _neg(v):
    return tuple(-x for x in v)


def _check_lengths(rank, vectors, what):
    for v in vectors:
        if len(v) != rank:
            raise DimensionMismatchError(f"{what} {tuple(v)} has length {len(v)}, expected {rank}")


def double_description(rank, inequalities):
    """
    Converts {x : <a, x> >= 0 for all a} into generators.

    The H-representation handed to cddlib always carries the trivial row
    1 >= 0, so an empty inequality list still fixes the ambient dimension.
    cddlib returns the origin as its single vertex, the lineality space as
    linearity rows and one ray per extreme ray; rays are then reduced modulo
    the lineality space and made primitive.

    Returns:
        tuple: (lineality basis, extreme rays), both canonical and sorted.
    """
    rows = [[1] + [0] * rank]
    rows.extend([0] + [int(x) for x in a] for a in inequalities if not is_zero(a))
    mat = cdd.Matrix(rows, number_type="fraction")
    mat.rep_type = cdd.RepType.INEQUALITY
    generators = cdd.Polyhedron(mat).get_generators()

    lines, rays = [], []
    for i in range(generators.row_size):
        row = generators[i]
        # Vertex rows (leading 1) only ever hold the origin
        if row[0] != 0:
            continue
        v = primitive(row[1:])
        if i in generators.lin_set:
            lines.append(v)
        elif not is_zero(v):
            rays.append(v)

    lin_basis = sorted(row_space_basis(lines, rank)) if lines else []
    if lin_basis:
        reduced, pivots = rref(lin_basis, rank)
        rays = [primitive(reduce_modulo(r, reduced, pivots)) for r in rays]
        rays = [r for r in rays if not is_zero(r)]
    logger.debug("double description: %d inequalities -> %d rays, lineality %d",
                 len(rows) - 1, len(rays), len(lin_basis))
    return lin_basis, sorted(set(rays))


def _pm(basis):
    return list(basis) + [_neg(v) for v in basis]


@dataclass(frozen=True)
class RatCone:
    rank: int
    rays: tuple
    facets: tuple
    lineality: tuple
    equations: tuple

    @property
    def lineality_dim(self):
        return len(self.lineality)

    @property
    def dim(self):
        return self.rank - len(self.equations)

    @property
    def pointed_rays(self):
        lines = set(_pm(self.lineality))
        return tuple(r for r in self.rays if r not in lines)

    @property
    def proper_facets(self):
        eqs = set(_pm(self.equations))
        return tuple(n for n in self.facets if n not in eqs)

    @property
    def is_zero(self):
        return not self.rays

    def __repr__(self):
        return f"RatCone(rank={self.rank}, dim={self.dim}, rays={list(self.rays)})"


def _build(rank, lin, ext, eqs, fext):
    return RatCone(
        rank=rank,
        rays=tuple(sorted(set(ext) | set(_pm(lin)))),
        facets=tuple(sorted(set(fext) | set(_pm(eqs)))),
        lineality=tuple(lin),
        equations=tuple(eqs),
    )


def cone_from_rays(rank, rays):
    """Cone generated by the given vectors; zero vectors are ignored."""
    rays = [tuple(int(x) for x in r) for r in rays]
    _check_lengths(rank, rays, "ray")
    eqs, fext = double_description(rank, rays)
    lin, ext = double_description(rank, fext + _pm(eqs))
    return _build(rank, lin, ext, eqs, fext)


def cone_from_inequalities(rank, normals):
    """The cone {x : <n, x> >= 0 for every n in normals}."""
    normals = [tuple(int(x) for x in n) for n in normals]
    _check_lengths(rank, normals, "normal")
    lin, ext = double_description(rank, normals)
    eqs, fext = double_description(rank, ext + _pm(lin))
    return _build(rank, lin, ext, eqs, fext)


def zero_cone(rank):
    return cone_from_rays(rank, [])


def full_space(rank):
    return cone_from_inequalities(rank, [])


def dual_cone(cone):
    return RatCone(
        rank=cone.rank,
        rays=cone.facets,
        facets=cone.rays,
        lineality=cone.equations,
        equations=cone.lineality,
    )


def intersect(c1, c2):
    if c1.rank != c2.rank:
        raise DimensionMismatchError(f"cannot intersect cones of rank {c1.rank} and {c2.rank}")
    return cone_from_inequalities(c1.rank, c1.facets + c2.facets)


def membership(cone, v, mode="boundary"):
    """
    Tests v against the cone.

    mode "boundary" accepts the closed cone, "relative_interior" additionally
    requires strict positivity on every proper facet.
    """
    if len(v) != cone.rank:
        raise DimensionMismatchError(f"vector of length {len(v)} tested against rank {cone.rank}")
    if any(dot(n, v) < 0 for n in cone.facets):
        return False
    if mode == "relative_interior":
        return all(dot(n, v) > 0 for n in cone.proper_facets)
    if mode != "boundary":
        raise ValueError(f"unknown membership mode '{mode}'")
    return True


def separating_facet(cone, v):
    """First facet normal (in sorted order) with negative pairing, or None."""
    for n in cone.facets:
        if dot(n, v) < 0:
            return n
    return None


def interior_point(cone):
    """Primitive integral point of the relative interior (origin for subspaces)."""
    total = [0] * cone.rank
    for r in cone.rays:
        total = [a + b for a, b in zip(total, r)]
    return primitive(total)


def linear_image(cone, matrix, target_rank):
    """Image of the cone under v -> matrix . v (matrix given as rows)."""
    images = [tuple(dot(row, r) for row in matrix) for r in cone.rays]
    return cone_from_rays(target_rank, images)


def is_subcone(c1, c2):
    return all(membership(c2, r) for r in c1.rays)


def cone_key(cone):
    return (cone.dim, cone.rays, cone.facets)


def arrangement_chambers(rank, hyperplane_normals, restrict_to):
    """
    Full-dimensional cells (relative to restrict_to) cut out by the linear
    hyperplanes {<n, x> = 0}.
    """
    cells = [restrict_to]
    for h in hyperplane_normals:
        h = tuple(h)
        if is_zero(h):
            continue
        split = []
        for cell in cells:
            values = [dot(h, r) for r in cell.rays]
            if all(x >= 0 for x in values) or all(x <= 0 for x in values):
                split.append(cell)
                continue
            for side in (h, _neg(h)):
                piece = cone_from_inequalities(rank, cell.facets + (side,))
                if piece.dim == cell.dim:
                    split.append(piece)
        cells = split
    return sorted(set(cells), key=cone_key)


def faces(cone):
    """All faces of the cone, the cone itself included."""
    found = {cone}
    stack = [cone]
    while stack:
        c = stack.pop()
        for n in c.proper_facets:
            face = cone_from_inequalities(c.rank, c.facets + (_neg(n),))
            if face not in found:
                found.add(face)
                stack.append(face)
    return sorted(found, key=cone_key)


@dataclass(frozen=True)
class Fan:
    rank: int
    cones: tuple
    face_pairs: tuple

    @staticmethod
    def from_cones(rank, maximal):
        """Closes a list of cones under taking faces and records the face relation."""
        face_sets = {}
        pending = list(maximal)
        while pending:
            c = pending.pop()
            if c in face_sets:
                continue
            face_sets[c] = faces(c)
            pending.extend(f for f in face_sets[c] if f not in face_sets)
        cones = sorted(face_sets, key=cone_key)
        index = {c: i for i, c in enumerate(cones)}
        pairs = sorted({(index[f], index[c]) for c in cones for f in face_sets[c] if f != c})
        return Fan(rank=rank, cones=tuple(cones), face_pairs=tuple(pairs))

    def maximal_cones(self):
        below = {i for i, _ in self.face_pairs}
        return [c for i, c in enumerate(self.cones) if i not in below]

    def rays(self):
        return [c for c in self.cones if c.dim - c.lineality_dim == 1]

    def cone_containing(self, v):
        """The cone holding v in its relative interior, or None."""
        for c in self.cones:
            if membership(c, v, "relative_interior"):
                return c
        return None

    def is_consistent(self):
        listed = set(self.cones)
        for i, a in enumerate(self.cones):
            if any(f not in listed for f in faces(a)):
                return False
            for b in self.cones[i + 1:]:
                meet = intersect(a, b)
                if meet not in set(faces(a)) or meet not in set(faces(b)):
                    return False
        return True
