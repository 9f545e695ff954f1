"""
Root and Weyl data for G = GL(n_1) x ... x GL(n_s) x (torus), and the
expansion of a structured module description into T-weights.

Coordinates of X*(T) are ordered block by block, torus factors last, so
t1..t_l are the diagonal characters of the blocks followed by the torus
characters.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import factorial

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import xring
from sympy.polys.specialpolys import symmetric_poly

from .config import Config
from .linalg import dot, rank as mat_rank

logger = logging.getLogger(__name__)

SUMMAND_KINDS = ("torus_char", "std", "dual_std", "hom")


class KernelNotFiniteError(ValueError):
    kind = "kernel"

    def __init__(self, rank_defect, rank):
        self.rank_defect = rank_defect
        super().__init__(
            f"weights span a sublattice of rank {rank - rank_defect} in X*(T) of rank {rank} "
            f"(rank defect {rank_defect}): the representation has infinite kernel"
        )


@dataclass(frozen=True)
class GroupSpec:
    gl_blocks: tuple = ()
    torus_rank: int = 0

    def __post_init__(self):
        if any((not isinstance(n, int)) or n < 1 for n in self.gl_blocks):
            raise ValueError(f"GL block sizes must be positive integers, got {list(self.gl_blocks)}")
        if self.torus_rank < 0:
            raise ValueError("torus rank must be nonnegative")
        if self.rank < 1:
            raise ValueError("the group must have rank at least 1")

    @property
    def rank(self):
        return sum(self.gl_blocks) + self.torus_rank

    @property
    def char_rank(self):
        return len(self.gl_blocks) + self.torus_rank


@dataclass(frozen=True)
class Summand:
    kind: str
    block: int = None
    src: int = None
    dst: int = None
    weight: tuple = None
    twist: tuple = None
    multiplicity: int = 1


@dataclass(frozen=True)
class ModuleSpec:
    summands: tuple = ()


@dataclass(frozen=True)
class Column:
    weight: tuple
    multiplicity: int
    origin: tuple   # (summand index, position within the summand)


@dataclass(frozen=True)
class WeightSystem:
    rank: int
    columns: tuple
    module: ModuleSpec = field(default=None, compare=False)

    @property
    def N(self):
        return sum(c.multiplicity for c in self.columns)

    @property
    def weights(self):
        return [c.weight for c in self.columns]

    def column_of(self, origin):
        return self._origin_index()[origin]

    def _origin_index(self):
        cached = self.__dict__.get("_origins")
        if cached is None:
            cached = {c.origin: i for i, c in enumerate(self.columns)}
            object.__setattr__(self, "_origins", cached)
        return cached

    def weighted_size(self, indices):
        return sum(self.columns[i].multiplicity for i in indices)


@dataclass(frozen=True)
class WeylElement:
    perm: tuple     # perm[i] is the image of coordinate i
    sign: int


@dataclass(frozen=True)
class Root:
    block: int
    i: int          # local indices within the block: root t_i - t_k
    k: int
    vector: tuple


@dataclass(frozen=True)
class StabilizerDims:
    dim_P_lambda: int
    dim_stab_lie: int
    codim_orbit: int


def _perm_sign(sigma):
    inversions = sum(1 for a, b in itertools.combinations(range(len(sigma)), 2) if sigma[a] > sigma[b])
    return -1 if inversions % 2 else 1


class GroupData:
    def __init__(self, spec):
        self.spec = spec
        self.rank = spec.rank
        self.char_rank = spec.char_rank

        self.blocks = []
        start = 0
        for n in spec.gl_blocks:
            self.blocks.append((start, n))
            start += n
        self.torus_offset = start

        self.ring, self.gens = xring([f"t{i + 1}" for i in range(self.rank)], QQ, lex)

        self.positive_roots = []
        self.roots = []
        for j, (s, n) in enumerate(self.blocks):
            for i, k in itertools.permutations(range(n), 2):
                vec = tuple(1 if x == s + i else -1 if x == s + k else 0 for x in range(self.rank))
                root = Root(block=j, i=i, k=k, vector=vec)
                self.roots.append(root)
                if i < k:
                    self.positive_roots.append(vec)
        self.positive_roots.sort(reverse=True)

        self.weyl_order = 1
        for n in spec.gl_blocks:
            self.weyl_order *= factorial(n)

        self.discriminant = self.ring.one
        for j, (s, n) in enumerate(self.blocks):
            for i, k in itertools.combinations(range(n), 2):
                self.discriminant *= self.gens[s + i] - self.gens[s + k]

        self.char_sublattice_basis = []
        for s, n in self.blocks:
            self.char_sublattice_basis.append(tuple(1 if s <= x < s + n else 0 for x in range(self.rank)))
        for m in range(spec.torus_rank):
            self.char_sublattice_basis.append(
                tuple(1 if x == self.torus_offset + m else 0 for x in range(self.rank)))

        self._weyl_cache = None
        if self.weyl_order <= Config.WEYL_MATERIALIZE_LIMIT:
            self._weyl_cache = list(self._generate_weyl())

    # --- Dimensions ---

    @property
    def dim(self):
        return self.rank + 2 * len(self.positive_roots)

    @property
    def is_abelian(self):
        return all(n == 1 for n in self.spec.gl_blocks)

    # --- Weyl group ---

    def _generate_weyl(self):
        per_block = [itertools.permutations(range(n)) for _, n in self.blocks]
        for sigmas in itertools.product(*per_block):
            perm = list(range(self.rank))
            sign = 1
            for (s, _), sigma in zip(self.blocks, sigmas):
                for p, q in enumerate(sigma):
                    perm[s + p] = s + q
                sign *= _perm_sign(sigma)
            yield WeylElement(perm=tuple(perm), sign=sign)

    def weyl_elements(self):
        """All Weyl elements; materialized for small groups, streamed otherwise."""
        if self._weyl_cache is not None:
            return iter(self._weyl_cache)
        return self._generate_weyl()

    def weyl_act_vector(self, w, v):
        out = [0] * self.rank
        for i, x in enumerate(v):
            out[w.perm[i]] = x
        return tuple(out)

    def _act_monom(self, w, monom):
        out = [0] * self.rank
        for i, e in enumerate(monom):
            out[w.perm[i]] = e
        return tuple(out)

    def weyl_act_poly(self, w, f):
        return self.ring.from_dict({self._act_monom(w, m): c for m, c in f.items()})

    def local_permutation(self, w, block):
        s, n = self.blocks[block]
        return tuple(w.perm[s + p] - s for p in range(n))

    def column_permutation(self, w, ws):
        """Index map of weight columns induced by w (through their origins)."""
        module = ws.module
        out = []
        for col in ws.columns:
            s_idx, pos = col.origin
            summand = module.summands[s_idx]
            if summand.kind in ("std", "dual_std"):
                sigma = self.local_permutation(w, summand.block)
                image = (sigma[pos[0]],)
            elif summand.kind == "hom":
                p, q = pos
                image = (self.local_permutation(w, summand.src)[p], self.local_permutation(w, summand.dst)[q])
            else:
                image = pos
            out.append(ws.column_of((s_idx, image)))
        return tuple(out)

    # --- Characters ---

    def character_embed(self, coords):
        if len(coords) != self.char_rank:
            raise ValueError(f"character needs {self.char_rank} coordinates, got {len(coords)}")
        out = [0] * self.rank
        for c, basis in zip(coords, self.char_sublattice_basis):
            out = [a + c * b for a, b in zip(out, basis)]
        return tuple(out)

    def is_block_constant(self, v):
        return all(len(set(v[s:s + n])) <= 1 for s, n in self.blocks)

    def char_coords(self, v):
        """Inverse of character_embed on block-constant vectors."""
        if not self.is_block_constant(v):
            raise ValueError(f"{tuple(v)} is not a character of G (not constant on GL blocks)")
        return tuple([v[s] for s, _ in self.blocks] + list(v[self.torus_offset:]))

    def restrict_normal(self, n):
        """The functional <n, .> on the embedded X*(G), in X*(G) coordinates."""
        return tuple([sum(n[s:s + k]) for s, k in self.blocks] + list(n[self.torus_offset:]))

    # --- Polynomials ---

    def linear_form(self, v):
        f = self.ring.zero
        for c, g in zip(v, self.gens):
            if c:
                f += int(c) * g
        return f

    def block_symbols(self, block):
        s, n = self.blocks[block]
        return self.ring.symbols[s:s + n]

    def elementary_symmetric(self):
        """Per block, the elementary symmetric functions e_1..e_n of its variables."""
        out = []
        for j, (_, n) in enumerate(self.blocks):
            syms = self.block_symbols(j)
            out.append([self.ring.from_expr(symmetric_poly(r, *syms)) for r in range(1, n + 1)])
        return out

    def chern_symbols(self):
        """Names and degrees of the invariant-ring generators."""
        names, degrees = [], []
        for j, (_, n) in enumerate(self.blocks):
            for r in range(1, n + 1):
                names.append(f"c{j + 1}_{r}")
                degrees.append(r)
        for m in range(self.spec.torus_rank):
            names.append(f"u{m + 1}")
            degrees.append(1)
        return names, degrees

    def chern_polys(self):
        """Generator symbols evaluated as polynomials in the t-variables."""
        polys = [e for block in self.elementary_symmetric() for e in block]
        polys.extend(self.gens[self.torus_offset:])
        return polys


def _summand_weights(gd, summand):
    """(position, weight) pairs for one summand."""
    rank = gd.rank
    twist = gd.character_embed(summand.twist) if summand.twist is not None else (0,) * rank
    if summand.kind == "torus_char":
        w = tuple(int(x) for x in summand.weight)
        if len(w) != rank:
            raise ValueError(f"torus_char weight {w} must have length {rank}")
        if not gd.is_block_constant(w):
            raise ValueError(f"torus_char weight {w} is not a character of G")
        return [((), w)]
    if summand.kind in ("std", "dual_std"):
        s, n = gd.blocks[summand.block]
        sgn = 1 if summand.kind == "std" else -1
        out = []
        for p in range(n):
            w = [sgn * (1 if x == s + p else 0) + t for x, t in zip(range(rank), twist)]
            out.append(((p,), tuple(w)))
        return out
    if summand.kind == "hom":
        sa, na = gd.blocks[summand.src]
        sb, nb = gd.blocks[summand.dst]
        out = []
        for p in range(na):
            for q in range(nb):
                w = [(1 if x == sb + q else 0) - (1 if x == sa + p else 0) for x in range(rank)]
                out.append(((p, q), tuple(w)))
        return out
    raise ValueError(f"unsupported summand kind '{summand.kind}'")


def _validate_summand(spec, idx, summand):
    nblocks = len(spec.gl_blocks)
    if summand.kind not in SUMMAND_KINDS:
        raise ValueError(f"summand {idx}: unknown kind '{summand.kind}'")
    if summand.multiplicity < 1:
        raise ValueError(f"summand {idx}: multiplicity must be >= 1")
    if summand.kind in ("std", "dual_std") and not (0 <= (summand.block if summand.block is not None else -1) < nblocks):
        raise ValueError(f"summand {idx}: block index {summand.block} out of range")
    if summand.kind == "hom":
        for b in (summand.src, summand.dst):
            if b is None or not (0 <= b < nblocks):
                raise ValueError(f"summand {idx}: block index {b} out of range")
    if summand.twist is not None and len(summand.twist) != spec.char_rank:
        raise ValueError(f"summand {idx}: twist needs {spec.char_rank} coordinates")


def build_group(spec, module):
    """
    Builds the group data and expands the module into its T-weight system.

    Raises:
        KernelNotFiniteError: if the weights do not span X*(T)_Q.
    """
    gd = GroupData(spec)
    columns = []
    for idx, summand in enumerate(module.summands):
        _validate_summand(spec, idx, summand)
        for pos, weight in _summand_weights(gd, summand):
            columns.append(Column(weight=weight, multiplicity=summand.multiplicity, origin=(idx, pos)))
    ws = WeightSystem(rank=gd.rank, columns=tuple(columns), module=module)

    r = mat_rank([c.weight for c in columns], gd.rank)
    if r < gd.rank:
        raise KernelNotFiniteError(gd.rank - r, gd.rank)
    logger.debug("built group of rank %d, |W| = %d, %d weight columns (N = %d)",
                 gd.rank, gd.weyl_order, len(columns), ws.N)
    return gd, ws


def _root_images(ws, root, column):
    """Columns hit by the root vector E_ik acting on the coordinate of `column`."""
    s_idx, pos = ws.columns[column].origin
    summand = ws.module.summands[s_idx]
    j, i, k = root.block, root.i, root.k
    images = []
    if summand.kind == "std" and summand.block == j and pos[0] == k:
        images.append((i,))
    elif summand.kind == "dual_std" and summand.block == j and pos[0] == i:
        images.append((k,))
    elif summand.kind == "hom":
        p, q = pos
        if summand.dst == j and q == k:
            images.append((p, i))
        if summand.src == j and p == i:
            images.append((k, q))
    return [ws.column_of((s_idx, image)) for image in images]


def stabilizer_dims(gd, ws, lam, support):
    """
    Dimensions attached to the coordinate subspace E spanned by `support`.

    dim_P_lambda counts the roots pairing nonnegatively with lam, dim_stab_lie
    the roots whose root vectors map E into itself; codim_orbit is the
    codimension of G.E, i.e. codim E - (dim G - dim Stab E).
    """
    support = set(support)
    dim_p = gd.rank + sum(1 for root in gd.roots if dot(root.vector, lam) >= 0)
    preserved = 0
    for root in gd.roots:
        if all(img in support for c in support for img in _root_images(ws, root, c)):
            preserved += 1
    dim_stab = gd.rank + preserved
    codim_e = ws.N - ws.weighted_size(support)
    return StabilizerDims(
        dim_P_lambda=dim_p,
        dim_stab_lie=dim_stab,
        codim_orbit=codim_e - (gd.dim - dim_stab),
    )


def weight_class(gd, ws, columns):
    """Product of the weights of the given columns, with multiplicity, as a polynomial."""
    f = gd.ring.one
    for a in columns:
        col = ws.columns[a]
        f *= gd.linear_form(col.weight) ** col.multiplicity
    return f
