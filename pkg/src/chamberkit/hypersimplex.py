"""Chamber decomposition of the second hypersimplex.

The region of interest is D(n) = {x in [0,1]^n : sum x = 2}, cut by the
arrangement of all restricted subset-sum walls sum_{i in S} x_i = 1 together
with the facet planes x_i = 0 and x_i = 1.  A chamber is a cell of this
decomposition: the set of points realizing one fixed sign vector.  Cells of
every dimension are enumerated, each with an exact rational witness in its
relative interior.

The enumeration is exact and LP-free: all 0-cells are computed by integer
echelon elimination over independent wall subsets, full-dimensional cells by
breadth-first search across shared facets, and lower cells by closing cell
closures against each wall, with cells identified by the bitmask of 0-cells
their closure contains.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .exactgeom import EQ, LE, LT, HPolytope, LinConstraint, lp_feasible

MAX_N = 8
MAX_CHAMBER_N = 7


def _check_n(n, cap=MAX_N):
    if not isinstance(n, int) or n < 4:
        raise ValueError("n must be an integer >= 4")
    if n > cap:
        raise ValueError("n = %d exceeds the supported desk scale (max %d)" % (n, cap))


def _subset_label(subset):
    return "{" + ",".join(str(i + 1) for i in sorted(subset)) + "}"


@dataclass(frozen=True)
class Hyperplane:
    """One wall, stored with an integer normal against the ambient coordinates."""

    normal: tuple
    const: int
    kind: str  # "sum", "x0" or "x1"
    subset: frozenset
    label: str

    def value_sign(self, point):
        v = sum(a * x for a, x in zip(self.normal, point)) - self.const
        return 0 if v == 0 else (1 if v > 0 else -1)

    def constraint(self):
        return LinConstraint(list(self.normal), EQ, self.const)


@dataclass(frozen=True)
class Arrangement:
    n: int
    hyperplanes: tuple

    @property
    def size(self):
        return len(self.hyperplanes)

    @property
    def carrier(self):
        return hypersimplex_polytope(self.n)

    def signs_at(self, point):
        return "".join("0+-"[h.value_sign(point)] for h in self.hyperplanes)


def canonical_subset(n, subset):
    """The chosen representative among a subset-sum wall and its complement.

    On the carrier sum x = 2 the walls for S and for its complement coincide;
    the smaller side is kept, with the lexicographically smaller sorted tuple
    breaking the tie at size n/2.
    """
    s = frozenset(subset)
    c = frozenset(range(n)) - s
    if len(s) < len(c):
        return s
    if len(c) < len(s):
        return c
    return s if tuple(sorted(s)) <= tuple(sorted(c)) else c


@lru_cache(maxsize=None)
def build_arrangement(n):
    """All deduplicated walls for D(n), in canonical order."""
    _check_n(n)
    sums = set()
    for size in range(2, n // 2 + 1):
        for combo in combinations(range(n), size):
            sums.add(canonical_subset(n, combo))
    planes = []
    for s in sorted(sums, key=lambda s: (len(s), tuple(sorted(s)))):
        normal = tuple(1 if i in s else 0 for i in range(n))
        planes.append(Hyperplane(normal, 1, "sum", s, "sum%s=1" % _subset_label(s)))
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        planes.append(Hyperplane(e, 0, "x0", frozenset([i]), "x%d=0" % (i + 1)))
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        planes.append(Hyperplane(e, 1, "x1", frozenset([i]), "x%d=1" % (i + 1)))
    return Arrangement(n, tuple(planes))


def hypersimplex_polytope(n):
    """D(n) as an H-polytope in the ambient coordinates."""
    _check_n(n)
    cons = [LinConstraint([1] * n, EQ, 2)]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cons.append(LinConstraint(list(e), LE, 1))
        cons.append(LinConstraint([-v for v in e], LE, 0))
    return HPolytope(n, tuple(cons))


@dataclass(frozen=True)
class Chamber:
    """One cell of the decomposition, identified by its sign vector."""

    n: int
    signs: str
    dim: int
    witness: tuple
    on_boundary: bool
    index: int

    @property
    def id(self):
        """Stable integer id: position in the canonical (dim, signs) order."""
        return self.index

    def zero_walls(self, arrangement):
        return [h for h, s in zip(arrangement.hyperplanes, self.signs) if s == "0"]

    def wall_incidence(self, arrangement):
        """Number of subset-sum walls this cell lies on."""
        return sum(1 for h, s in zip(arrangement.hyperplanes, self.signs)
                   if s == "0" and h.kind == "sum")


# ---------------------------------------------------------------------------
# 0-cells: exact enumeration over independent wall subsets.


def _reduced_rows(arrangement):
    """Walls written in the carrier chart x_n = 2 - x_1 - ... - x_{n-1}."""
    n = arrangement.n
    m = n - 1
    rows = []
    for h in arrangement.hyperplanes:
        an = h.normal[m]
        rows.append((tuple(h.normal[i] - an for i in range(m)), h.const - 2 * an))
    return rows


def _enumerate_vertices(arrangement):
    """All 0-cells of the decomposition, as exact coordinate tuples."""
    n = arrangement.n
    m = n - 1
    rows = _reduced_rows(arrangement)
    H = len(rows)
    found = {}

    def solve(ech, pivs):
        x = [None] * m
        for (co, rh), p in reversed(list(zip(ech, pivs))):
            s = Fraction(rh)
            for j, c in enumerate(co):
                if c and j != p:
                    s -= c * x[j]
            x[p] = s / co[p]
        return x

    def recurse(start, ech, pivs):
        depth = len(ech)
        if depth == m:
            x = solve(ech, pivs)
            ok = True
            total = Fraction(0)
            for v in x:
                if v < 0 or v > 1:
                    ok = False
                    break
                total += v
            if ok:
                last = 2 - total
                if 0 <= last <= 1:
                    found[tuple(x) + (last,)] = True
            return
        for i in range(start, H - (m - depth) + 1):
            co, rh = rows[i]
            co = list(co)
            for (eco, erh), p in zip(ech, pivs):
                f = co[p]
                if f:
                    ep = eco[p]
                    co = [a * ep - f * b for a, b in zip(co, eco)]
                    rh = rh * ep - f * erh
            piv = -1
            for j, c in enumerate(co):
                if c:
                    piv = j
                    break
            if piv < 0:
                continue  # dependent or inconsistent: no rank gain from this wall
            g = abs(rh)
            for c in co:
                g = gcd(g, abs(c))
            if g > 1:
                co = [c // g for c in co]
                rh //= g
            recurse(i + 1, ech + [(tuple(co), rh)], pivs + [piv])

    recurse(0, [], [])
    return sorted(found)


# ---------------------------------------------------------------------------
# The cell complex.


def _lcm(a, b):
    return a * b // gcd(a, b)


class ChamberComplex:
    """Full cell decomposition of D(n), cached per n.

    Cells are represented internally by the bitmask of 0-cells contained in
    their closure; this identifies a cell uniquely and makes face extraction
    a bitwise intersection.
    """

    def __init__(self, n, interior_only=False):
        _check_n(n, MAX_CHAMBER_N)
        self.n = n
        self.interior_only = interior_only
        self.arrangement = build_arrangement(n)
        self._build()

    # -- construction -------------------------------------------------

    def _build(self):
        arr = self.arrangement
        n = self.n
        self.vertices = _enumerate_vertices(arr)
        nv = len(self.vertices)
        den = 1
        for v in self.vertices:
            for x in v:
                den = _lcm(den, x.denominator)
        self._den = den
        self._vnums = [tuple(int(x * den) for x in v) for v in self.vertices]
        H = arr.size
        zeros = [0] * H
        pos = [0] * H
        neg = [0] * H
        for vi, nums in enumerate(self._vnums):
            bit = 1 << vi
            for hi, h in enumerate(arr.hyperplanes):
                val = sum(a * b for a, b in zip(h.normal, nums)) - h.const * den
                if val == 0:
                    zeros[hi] |= bit
                elif val > 0:
                    pos[hi] |= bit
                else:
                    neg[hi] |= bit
        self._zeros = zeros
        self._pos = pos
        self._neg = neg
        self._all_mask = (1 << nv) - 1
        self._sum_idx = [i for i, h in enumerate(arr.hyperplanes) if h.kind == "sum"]
        self._box_idx = [i for i, h in enumerate(arr.hyperplanes) if h.kind != "sum"]
        top = self._top_cells()
        cells, edges = self._close_faces(top)
        self._finalize(cells, edges)

    def _seed_point(self):
        n = self.n
        rng = random.Random(0x5EED + 101 * n)
        for _ in range(10000):
            raw = [Fraction(rng.randint(1, 9973), 1) for _ in range(n)]
            total = sum(raw)
            x = [2 * r / total for r in raw]
            if any(xi >= 1 for xi in x):
                continue
            if all(h.value_sign(x) != 0 for h in self.arrangement.hyperplanes):
                return x
        raise RuntimeError("could not sample a generic interior point")

    def _mask_for_signbits(self, sigbits):
        """Vertices compatible with a strict sign assignment (bit set = plus)."""
        m = self._all_mask
        zeros, pos, neg = self._zeros, self._pos, self._neg
        for hi in range(self.arrangement.size):
            if (sigbits >> hi) & 1:
                m &= zeros[hi] | pos[hi]
            else:
                m &= zeros[hi] | neg[hi]
            if not m:
                break
        return m

    def _top_cells(self):
        """All full-dimensional cells, by BFS across shared facets."""
        arr = self.arrangement
        n = self.n
        seed = self._seed_point()
        sigbits = 0
        for hi, h in enumerate(arr.hyperplanes):
            if h.value_sign(seed) > 0:
                sigbits |= 1 << hi
        start_mask = self._mask_for_signbits(sigbits)
        if not start_mask:
            raise RuntimeError("seed cell has no supporting 0-cells")
        tops = {sigbits: start_mask}
        queue = [sigbits]
        zeros = self._zeros
        need = n - 2  # facet rank in the carrier chart
        while queue:
            sig = queue.pop()
            mask = tops[sig]
            for hi in self._sum_idx:
                wall = mask & zeros[hi]
                if not wall:
                    continue
                other = sig ^ (1 << hi)
                if other in tops:
                    continue
                if self._mask_rank(wall, need) != need:
                    continue
                omask = self._mask_for_signbits(other)
                tops[other] = omask
                queue.append(other)
        return tops

    def _mask_rank(self, mask, cap):
        """Affine rank of the 0-cells indexed by mask, capped for early exit."""
        vnums = self._vnums
        base = None
        ech = []
        pivs = []
        while mask:
            lsb = mask & -mask
            mask ^= lsb
            v = vnums[lsb.bit_length() - 1]
            if base is None:
                base = v
                continue
            row = [a - b for a, b in zip(v, base)]
            for eco, p in zip(ech, pivs):
                f = row[p]
                if f:
                    ep = eco[p]
                    row = [a * ep - f * b for a, b in zip(row, eco)]
            piv = next((j for j, c in enumerate(row) if c), -1)
            if piv >= 0:
                ech.append(tuple(row))
                pivs.append(piv)
                if len(ech) >= cap:
                    return len(ech)
        return len(ech)

    def _close_faces(self, tops):
        """Walk every cell closure down to its faces via wall intersections."""
        zeros = self._zeros
        H = self.arrangement.size
        cells = {}
        edges = set()
        stack = []
        for sig, mask in tops.items():
            if mask not in cells:
                cells[mask] = None
                stack.append(mask)
        while stack:
            mask = stack.pop()
            if self.interior_only and self._mask_on_boundary(mask):
                continue
            for hi in range(H):
                child = mask & zeros[hi]
                if not child or child == mask:
                    continue
                edges.add((child, mask))
                if child not in cells:
                    cells[child] = None
                    stack.append(child)
        return list(cells), edges

    def _mask_on_boundary(self, mask):
        return any((mask & self._zeros[hi]) == mask for hi in self._box_idx)

    def _mask_signs(self, mask):
        out = []
        zeros, pos = self._zeros, self._pos
        for hi in range(self.arrangement.size):
            if (mask & zeros[hi]) == mask:
                out.append("0")
            elif mask & pos[hi]:
                out.append("+")
            else:
                out.append("-")
        return "".join(out)

    def _zero_rank(self, signs):
        """Rank in the carrier chart of the walls a cell lies on."""
        n = self.n
        m = n - 1
        rows = _reduced_rows(self.arrangement)
        ech = []
        pivs = []
        for hi, s in enumerate(signs):
            if s != "0":
                continue
            co = list(rows[hi][0])
            for eco, p in zip(ech, pivs):
                f = co[p]
                if f:
                    ep = eco[p]
                    co = [a * ep - f * b for a, b in zip(co, eco)]
            piv = next((j for j, c in enumerate(co) if c), -1)
            if piv >= 0:
                ech.append(tuple(co))
                pivs.append(piv)
                if len(ech) == m:
                    break
        return len(ech)

    def _finalize(self, masks, edges):
        n = self.n
        den = self._den
        records = []
        dims = {}
        for mask in masks:
            if self.interior_only and self._mask_on_boundary(mask):
                continue
            signs = self._mask_signs(mask)
            dim = (n - 1) - self._zero_rank(signs)
            count = bin(mask).count("1")
            sums = [0] * n
            mm = mask
            while mm:
                lsb = mm & -mm
                mm ^= lsb
                v = self._vnums[lsb.bit_length() - 1]
                for j in range(n):
                    sums[j] += v[j]
            witness = tuple(Fraction(s, den * count) for s in sums)
            boundary = any(s == "0" and self.arrangement.hyperplanes[i].kind != "sum"
                           for i, s in enumerate(signs))
            records.append((dim, signs, witness, boundary, mask))
            dims[mask] = dim
        records.sort(key=lambda r: (r[0], r[1]))
        self.chambers = []
        self._by_signs = {}
        self._mask_of = {}
        for idx, (dim, signs, witness, boundary, mask) in enumerate(records):
            ch = Chamber(n, signs, dim, witness, boundary, idx)
            self.chambers.append(ch)
            self._by_signs[signs] = ch
            self._mask_of[signs] = mask
        idx = {self._mask_of[ch.signs]: ch.index for ch in self.chambers}
        adj = set()
        for child, parent in edges:
            if child in idx and parent in idx and dims[parent] == dims[child] + 1:
                adj.add((idx[child], idx[parent]))
        self.adjacency = sorted(adj)

    # -- queries ------------------------------------------------------

    def chamber_by_signs(self, signs):
        return self._by_signs.get(signs)

    def locate(self, point):
        """The cell whose relative interior contains the given point of D(n)."""
        point = tuple(Fraction(x) for x in point)
        if len(point) != self.n:
            raise ValueError("point has wrong length")
        if sum(point) != 2 or any(x < 0 or x > 1 for x in point):
            raise ValueError("point does not lie in D(n)")
        signs = self.arrangement.signs_at(point)
        ch = self._by_signs.get(signs)
        if ch is None:
            raise LookupError("no enumerated cell matches the point's sign vector")
        return ch

    def chamber_vertices(self, chamber):
        """The exact 0-cells spanning the closure of a cell."""
        mask = self._mask_of[chamber.signs]
        out = []
        while mask:
            lsb = mask & -mask
            mask ^= lsb
            out.append(self.vertices[lsb.bit_length() - 1])
        return out

    def sample_relative_interior(self, chamber, count, seed=0):
        """Deterministic exact samples from a cell's relative interior."""
        verts = self.chamber_vertices(chamber)
        rng = random.Random(0xA11CE + seed + 7919 * chamber.index)
        points = []
        for _ in range(count):
            weights = [rng.randint(1, 97) for _ in verts]
            total = sum(weights)
            pt = tuple(sum(Fraction(w) * v[j] for w, v in zip(weights, verts)) / total
                       for j in range(self.n))
            points.append(pt)
        return points


@lru_cache(maxsize=None)
def chamber_complex(n, interior_only=False):
    return ChamberComplex(n, interior_only=interior_only)


def enumerate_chambers(n, interior_only=False):
    """Every cell of the decomposition of D(n), in a stable canonical order."""
    return list(chamber_complex(n, interior_only).chambers)


def chamber_adjacency(n, interior_only=False):
    """Pairs (facet id, cell id) with the facet one dimension down, in closure."""
    return list(chamber_complex(n, interior_only).adjacency)


# ---------------------------------------------------------------------------
# Admissible polytopes and membership of chambers in their interiors.


@dataclass(frozen=True)
class AdmissiblePolytope:
    """FULL, a SECTION slice, or a CUTS region of D(n)."""

    n: int
    kind: str
    subsets: tuple  # tuple of sorted index tuples; empty for FULL
    dim: int

    @property
    def id(self):
        if self.kind == "FULL":
            return "FULL"
        body = "|".join("{" + ",".join(str(i + 1) for i in s) + "}" for s in self.subsets)
        return "%s%s" % (self.kind, body)

    def interior_contains(self, point):
        """Exact membership of a point in the relative interior."""
        point = tuple(Fraction(x) for x in point)
        if sum(point) != 2:
            return False
        if any(x <= 0 or x >= 1 for x in point):
            return False
        if self.kind == "FULL":
            return True
        if self.kind == "SECTION":
            return sum(point[i] for i in self.subsets[0]) == 1
        return all(sum(point[i] for i in s) < 1 for s in self.subsets)

    def polytope(self):
        n = self.n
        cons = list(hypersimplex_polytope(n).constraints)
        for s in self.subsets:
            coeffs = [1 if i in s else 0 for i in range(n)]
            rel = EQ if self.kind == "SECTION" else LE
            cons.append(LinConstraint(coeffs, rel, 1))
        return HPolytope(n, tuple(cons))


def _disjoint_families(pool):
    """All nonempty families of pairwise disjoint subsets from an ordered pool."""
    out = []

    def extend(start, chosen, used):
        for i in range(start, len(pool)):
            s = pool[i]
            if used & s[1]:
                continue
            fam = chosen + [s[0]]
            out.append(tuple(fam))
            extend(i + 1, fam, used | s[1])

    extend(0, [], 0)
    return out


@lru_cache(maxsize=None)
def _admissible(n):
    _check_n(n)
    accepted = [AdmissiblePolytope(n, "FULL", (), n - 1)]
    seen_sections = set()
    for size in range(2, n // 2 + 1):
        for combo in combinations(range(n), size):
            s = canonical_subset(n, combo)
            if s in seen_sections:
                continue
            seen_sections.add(s)
            accepted.append(AdmissiblePolytope(n, "SECTION", (tuple(sorted(s)),), n - 2))
    pool = []
    for size in range(2, n - 1):
        for combo in combinations(range(n), size):
            bits = 0
            for i in combo:
                bits |= 1 << i
            pool.append((tuple(combo), bits))
    pool.sort(key=lambda p: (len(p[0]), p[0]))
    rejected = []
    for fam in _disjoint_families(pool):
        cand = AdmissiblePolytope(n, "CUTS", tuple(fam), n - 1)
        cons = [LinConstraint([1] * n, EQ, 2)]
        for i in range(n):
            e = [0] * n
            e[i] = 1
            cons.append(LinConstraint(list(e), LT, 1))
            cons.append(LinConstraint([-v for v in e], LT, 0))
        for s in fam:
            cons.append(LinConstraint([1 if i in s else 0 for i in range(n)], LT, 1))
        if lp_feasible(cons) is None:
            rejected.append(cand)
        else:
            accepted.append(cand)
    return tuple(accepted), tuple(rejected)


def enumerate_admissible(n):
    """All admissible polytopes of D(n) with nonempty relative interior."""
    return list(_admissible(n)[0])


def rejected_cut_families(n):
    """CUTS candidates whose interior is empty, kept for the record."""
    return list(_admissible(n)[1])


def omega_set(chamber, polys=None):
    """Ids of the admissible polytopes whose relative interior contains the cell.

    A cell with a fixed sign vector lies either inside or outside each
    admissible interior, so testing the exact witness decides membership.
    """
    if polys is None:
        polys = enumerate_admissible(chamber.n)
    w = chamber.witness
    return tuple(sorted(p.id for p in polys if p.interior_contains(w)))


# ---------------------------------------------------------------------------
# Independent validation oracle.


def independent_cell_census(n, max_rounds=None):
    """Cells of the decomposition found by midpoint saturation.

    A deliberately separate code path used to cross-check the main
    enumeration: 0-cells come from brute-force subset elimination over all
    wall combinations, and representatives of higher cells are generated by
    saturating midpoints of (cell representative, 0-cell) pairs, which
    provably reaches every cell in at most dim(D(n)) rounds.

    Returns a dict mapping sign vector -> representative point.
    """
    _check_n(n, 6)
    arr = build_arrangement(n)
    planes = [(h.normal, h.const) for h in arr.hyperplanes]
    m = n - 1

    rows = []
    for normal, const in planes:
        an = normal[m]
        rows.append(tuple(normal[i] - an for i in range(m)) + (const - 2 * an,))

    verts = set()
    for combo in combinations(range(len(rows)), m):
        mat = [list(rows[i]) for i in combo]
        # plain fraction elimination
        sol = _gauss_solve(mat, m)
        if sol is None:
            continue
        total = sum(sol)
        full = tuple(sol) + (2 - total,)
        if all(0 <= x <= 1 for x in full):
            verts.add(full)
    verts = sorted(verts)

    def signs_of(nums, den):
        out = []
        for normal, const in planes:
            v = sum(a * b for a, b in zip(normal, nums)) - const * den
            out.append("0" if v == 0 else ("+" if v > 0 else "-"))
        return "".join(out)

    def encode(point):
        den = 1
        for x in point:
            den = _lcm(den, x.denominator)
        return tuple(int(x * den) for x in point), den

    reps = {}
    venc = []
    for v in verts:
        nums, den = encode(v)
        venc.append((nums, den))
        reps.setdefault(signs_of(nums, den), v)

    fresh = list(reps.items())
    rounds = max_rounds if max_rounds is not None else m + 1
    for _ in range(rounds):
        new = []
        for _, rep in fresh:
            rnums, rden = encode(rep)
            for vnums, vden in venc:
                den = 2 * rden * vden
                nums = tuple(rn * vden + vn * rden for rn, vn in zip(rnums, vnums))
                sig = signs_of(nums, den)
                if sig not in reps:
                    pt = tuple(Fraction(a, den) for a in nums)
                    reps[sig] = pt
                    new.append((sig, pt))
        if not new:
            break
        fresh = new
    return reps


def _gauss_solve(mat, m):
    """Solve an m x m system given as rows [c_1..c_m, rhs]; None if singular."""
    rows = [[Fraction(v) for v in r] for r in mat]
    for col in range(m):
        piv = next((i for i in range(col, m) if rows[i][col] != 0), -1)
        if piv < 0:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        prow = rows[col]
        inv = prow[col]
        rows[col] = prow = [v / inv for v in prow]
        for i in range(m):
            if i != col and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
    return [rows[i][m] for i in range(m)]


# ---------------------------------------------------------------------------
# Coordinate permutations (used by the property suite).


def permute_point(perm, point):
    """Push a point forward along a coordinate permutation i -> perm[i]."""
    out = [None] * len(point)
    for i, x in enumerate(point):
        out[perm[i]] = x
    return tuple(out)


def permuted_chamber(complex_, perm, chamber):
    """The image cell of a chamber under a coordinate permutation."""
    return complex_.locate(permute_point(perm, chamber.witness))
