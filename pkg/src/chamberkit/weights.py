"""Weight domain, GIT stability and the chamber correspondence.

Weight vectors live in D(0,n) = {0 < a_i <= 1, sum a > 2}; linearisations are
weight vectors renormalized onto the carrier sum t = 2.  Stability of a
coincidence partition under a linearisation is the block-sum rule: a block of
total weight over 1 destabilizes, exactly 1 gives strict semistability.

The weight domain is cut by the walls sum_{i in S} a_i = 1 over all S with
2 <= |S| <= n-2 (both a subset and its complement count, since the carrier
identification is unavailable off the slice sum a = 2).  Cells are identified
by their wall sign vectors; xi maps a carrier chamber to every weight-domain
cell whose closure contains it.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .exactgeom import eq, gt, le, lp_feasible, lt
from .hypersimplex import canonical_subset

STABLE = "STABLE"
STRICTLY_SEMISTABLE = "STRICTLY_SEMISTABLE"
UNSTABLE = "UNSTABLE"
TYPICAL = "TYPICAL"
ATYPICAL = "ATYPICAL"

MAX_PROFILE_N = 9
MAX_FINE_N = 5
MAX_XI_PAIRS = 6


def _to_fractions(entries, what):
    try:
        vals = tuple(Fraction(x) for x in entries)
    except (TypeError, ValueError) as exc:
        raise ValueError("%s entries must be rational" % what) from exc
    if len(vals) < 4:
        raise ValueError("%s needs at least 4 entries" % what)
    return vals


@dataclass(frozen=True)
class WeightVector:
    """A weight datum in D(0,n): 0 < a_i <= 1 and sum > 2."""

    entries: tuple

    def __init__(self, entries):
        vals = _to_fractions(entries, "weight vector")
        if any(a <= 0 or a > 1 for a in vals):
            raise ValueError("weights must satisfy 0 < a_i <= 1")
        if sum(vals) <= 2:
            raise ValueError("weights must sum to more than 2")
        object.__setattr__(self, "entries", vals)

    @property
    def n(self):
        return len(self.entries)


@dataclass(frozen=True)
class Linearisation:
    """A positive rational vector renormalized to total exactly 2."""

    entries: tuple

    def __init__(self, entries):
        vals = _to_fractions(entries, "linearisation")
        if any(t <= 0 for t in vals):
            raise ValueError("linearisation entries must be positive")
        if sum(vals) != 2:
            raise ValueError("linearisation must sum to exactly 2; "
                             "renormalize explicitly first")
        object.__setattr__(self, "entries", vals)

    @property
    def n(self):
        return len(self.entries)

    def on_open_part(self):
        """True when additionally every t_i < 1."""
        return all(t < 1 for t in self.entries)


@dataclass(frozen=True)
class CoincidencePartition:
    """A set partition of {1..n}, canonically ordered."""

    blocks: tuple

    def __init__(self, blocks):
        norm = tuple(sorted((tuple(sorted(b)) for b in blocks),
                            key=lambda b: b[0]))
        seen = set()
        for b in norm:
            if not b:
                raise ValueError("empty block")
            for i in b:
                if not isinstance(i, int) or i in seen:
                    raise ValueError("blocks must disjointly cover 1..n")
                seen.add(i)
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must cover 1..n without gaps")
        object.__setattr__(self, "blocks", norm)

    @property
    def n(self):
        return sum(len(b) for b in self.blocks)

    def __str__(self):
        return "|".join("{" + ",".join(str(i) for i in b) + "}" for b in self.blocks)


def parse_partition(text):
    """Parse "{1,2}|{3}|{4,5}" into a CoincidencePartition."""
    blocks = []
    for part in text.split("|"):
        part = part.strip()
        if not (part.startswith("{") and part.endswith("}")):
            raise ValueError("malformed partition block: %r" % part)
        items = part[1:-1].split(",")
        blocks.append(tuple(int(i) for i in items))
    return CoincidencePartition(blocks)


def stability(L, p):
    """Block-sum stability of a coincidence partition under a linearisation."""
    return stability_report(L, p)[0]


def stability_report(L, p):
    """Status plus the certifying block and its weight sum."""
    if not isinstance(L, Linearisation):
        L = Linearisation(L)
    if not isinstance(p, CoincidencePartition):
        p = CoincidencePartition(p)
    if p.n != L.n:
        raise ValueError("partition and linearisation sizes differ")
    worst = None
    worst_sum = None
    for b in p.blocks:
        s = sum(L.entries[i - 1] for i in b)
        if worst_sum is None or s > worst_sum:
            worst, worst_sum = b, s
    if worst_sum > 1:
        return UNSTABLE, worst, worst_sum
    if worst_sum == 1:
        return STRICTLY_SEMISTABLE, worst, worst_sum
    return STABLE, worst, worst_sum


@dataclass(frozen=True)
class LinearisationClass:
    kind: str
    witness: tuple  # a subset summing to exactly 1, or () when TYPICAL

    def __bool__(self):
        return self.kind == TYPICAL


def classify_linearisation(L):
    """TYPICAL when no nonempty proper subset of weights sums to exactly 1.

    Every subset size 1..n-1 is checked: complements are equivalent on the
    carrier, but singleton sums t_i = 1 are atypical too and fall outside the
    window 2 <= |S| <= n-2, so that window alone would miss them.  The
    returned witness prefers a subset with 2 <= |S| <= n-2 when one exists.
    """
    if not isinstance(L, Linearisation):
        L = Linearisation(L)
    n = L.n
    t = L.entries
    witness = None
    for size in range(2, n // 2 + 1):
        for combo in combinations(range(n), size):
            if sum(t[i] for i in combo) == 1:
                return LinearisationClass(ATYPICAL, tuple(i + 1 for i in combo))
    for i in range(n):
        if t[i] == 1:
            witness = (i + 1,)
            break
    if witness is not None:
        return LinearisationClass(ATYPICAL, witness)
    return LinearisationClass(TYPICAL, ())


def has_unit_subset(entries):
    """True when some nonempty proper subset of the entries sums to 1."""
    t = tuple(Fraction(x) for x in entries)
    n = len(t)
    for size in range(1, n // 2 + 1):
        for combo in combinations(range(n), size):
            if sum(t[i] for i in combo) == 1:
                return True
    return False


def semistable_profile(L):
    """All coincidence partitions with every block sum <= 1, canonically sorted.

    Partitions are generated as restricted-growth strings; a branch dies as
    soon as some block exceeds total weight 1.
    """
    if not isinstance(L, Linearisation):
        L = Linearisation(L)
    n = L.n
    if n > MAX_PROFILE_N:
        raise ValueError("profile enumeration guarded to n <= %d" % MAX_PROFILE_N)
    t = L.entries
    out = []

    def rec(i, assign, sums):
        if i == n:
            blocks = {}
            for j, b in enumerate(assign):
                blocks.setdefault(b, []).append(j + 1)
            out.append(CoincidencePartition(tuple(tuple(v) for v in blocks.values())))
            return
        for b in range(len(sums)):
            if sums[b] + t[i] <= 1:
                sums[b] += t[i]
                rec(i + 1, assign + [b], sums)
                sums[b] -= t[i]
        if t[i] <= 1:
            sums.append(t[i])
            rec(i + 1, assign + [len(sums) - 1], sums)
            sums.pop()

    rec(0, [], [])
    return tuple(sorted(out, key=lambda p: p.blocks))


def delete_coordinate(L, q):
    """Forget the q-th point (1-based) and renormalize back to total 2."""
    if not isinstance(L, Linearisation):
        L = Linearisation(L)
    if not 1 <= q <= L.n:
        raise ValueError("coordinate out of range")
    rest = [t for i, t in enumerate(L.entries) if i != q - 1]
    total = sum(rest)
    return Linearisation([2 * t / total for t in rest])


def rescale_to_carrier(A):
    """b_i = 2 a_i / sum(a); accepts any positive vector with sum >= 2."""
    if isinstance(A, WeightVector):
        vals = A.entries
    elif isinstance(A, Linearisation):
        vals = A.entries
    else:
        vals = _to_fractions(A, "weight vector")
    total = sum(vals)
    if total < 2:
        raise ValueError("total weight below 2 cannot be rescaled to the carrier")
    return Linearisation([2 * a / total for a in vals])


# ---------------------------------------------------------------------------
# The weight-domain wall arrangement.


@lru_cache(maxsize=None)
def weight_walls(n):
    """All subsets S with 2 <= |S| <= n-2, in canonical order (0-based)."""
    if n < 4:
        raise ValueError("n must be at least 4")
    out = []
    for size in range(2, n - 1):
        out.extend(combinations(range(n), size))
    return tuple(out)


@lru_cache(maxsize=None)
def coarse_walls(n):
    """The strict window 2 < |S| < n-2; empty for n = 5 as literally stated."""
    if n < 4:
        raise ValueError("n must be at least 4")
    out = []
    for size in range(3, n - 2):
        out.extend(combinations(range(n), size))
    return tuple(out)


def weight_signs(n, point):
    """Sign string of an ambient point against the weight walls."""
    point = tuple(Fraction(x) for x in point)
    out = []
    for s in weight_walls(n):
        v = sum(point[i] for i in s) - 1
        out.append("0" if v == 0 else ("+" if v > 0 else "-"))
    return "".join(out)


@dataclass(frozen=True)
class FineChamber:
    """A full-dimensional cell of the weight-domain wall arrangement."""

    n: int
    signs: str
    witness: tuple
    index: int

    @property
    def id(self):
        return self.index


@dataclass(frozen=True)
class WeightLocation:
    """Where a weight vector sits: its cell id and wall membership."""

    n: int
    cell_id: str  # sign string over the weight walls
    wall: bool
    one_contacts: tuple  # 1-based indices with a_i = 1
    chamber: object  # FineChamber when full-dimensional and enumerable


def _domain_constraints(n, open_box=False):
    cons = [gt([1] * n, 2)]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cons.append(gt(list(e), 0))
        cons.append(lt(list(e), 1) if open_box else le(list(e), 1))
    return cons


def _wall_constraint(n, subset, sign):
    coeffs = [1 if i in subset else 0 for i in range(n)]
    if sign == "0":
        return eq(coeffs, 1)
    return gt(coeffs, 1) if sign == "+" else lt(coeffs, 1)


def _fine_planes(n):
    """Wall planes followed by the domain planes of D(0,n)."""
    planes = [(tuple(1 if i in s else 0 for i in range(n)), 1)
              for s in weight_walls(n)]
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        planes.append((e, 0))
        planes.append((e, 1))
    planes.append(((1,) * n, 2))
    return planes


def _fine_vertices(planes, n):
    """0-cells of the closed region box * {sum >= 2}: exact sign-rank search."""
    H = len(planes)
    found = {}

    def recurse(start, ech, pivs):
        depth = len(ech)
        if depth == n:
            x = [None] * n
            for (co, rh), p in reversed(list(zip(ech, pivs))):
                s = Fraction(rh)
                for j, c in enumerate(co):
                    if c and j != p:
                        s -= c * x[j]
                x[p] = s / co[p]
            if all(0 <= v <= 1 for v in x) and sum(x) >= 2:
                found[tuple(x)] = True
            return
        for i in range(start, H - (n - depth) + 1):
            co, rh = planes[i]
            co = list(co)
            for (eco, erh), p in zip(ech, pivs):
                f = co[p]
                if f:
                    ep = eco[p]
                    co = [a * ep - f * b for a, b in zip(co, eco)]
                    rh = rh * ep - f * erh
            piv = next((j for j, c in enumerate(co) if c), -1)
            if piv < 0:
                continue
            recurse(i + 1, ech + [(tuple(co), rh)], pivs + [piv])

    recurse(0, [], [])
    return sorted(found)


@lru_cache(maxsize=None)
def fine_chambers(n):
    """Every full-dimensional chamber of D(0,n).

    Same vertex-bitmask technique as the carrier decomposition: 0-cells of
    the closed region support every cell closure, full-dimensional cells are
    reached by flipping across shared wall facets (domain planes are never
    flipped; crossing them leaves D(0,n)), and a facet is recognized by the
    affine rank of the 0-cells shared with the wall.
    """
    if n > MAX_FINE_N:
        raise ValueError("fine chamber enumeration guarded to n <= %d" % MAX_FINE_N)
    walls = weight_walls(n)
    nw = len(walls)
    planes = _fine_planes(n)
    verts = _fine_vertices(planes, n)
    den = 1
    for v in verts:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    vnums = [tuple(int(x * den) for x in v) for v in verts]
    H = len(planes)
    zeros = [0] * H
    pos = [0] * H
    neg = [0] * H
    for vi, nums in enumerate(vnums):
        bit = 1 << vi
        for hi, (coeffs, const) in enumerate(planes):
            val = sum(a * b for a, b in zip(coeffs, nums)) - const * den
            if val == 0:
                zeros[hi] |= bit
            elif val > 0:
                pos[hi] |= bit
            else:
                neg[hi] |= bit
    all_mask = (1 << len(verts)) - 1

    def mask_for(sigbits):
        m = all_mask
        for hi in range(H):
            m &= (zeros[hi] | pos[hi]) if (sigbits >> hi) & 1 else (zeros[hi] | neg[hi])
            if not m:
                break
        return m

    def affine_rank(mask, cap):
        base = None
        ech, pivs = [], []
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

    rng = random.Random(48271 + n)
    seed = None
    while seed is None:
        raw = [Fraction(rng.randint(1, 499), 500) for _ in range(n)]
        if sum(raw) <= 2:
            continue
        vals = [sum(raw[i] for i in s) - 1 for s in weight_walls(n)]
        if all(v != 0 for v in vals) and all(x != 1 for x in raw):
            sig = 0
            for hi, (coeffs, const) in enumerate(planes):
                if sum(a * b for a, b in zip(coeffs, raw)) > const:
                    sig |= 1 << hi
            seed = sig
    cells = {}
    start_mask = mask_for(seed)
    cells[seed] = start_mask
    queue = [seed]
    while queue:
        sig = queue.pop()
        mask = cells[sig]
        for hi in range(nw):
            shared = mask & zeros[hi]
            if not shared:
                continue
            other = sig ^ (1 << hi)
            if other in cells:
                continue
            if affine_rank(shared, n - 1) != n - 1:
                continue
            cells[other] = mask_for(other)
            queue.append(other)
    out = []
    items = []
    for sig, mask in cells.items():
        wall_sig = "".join("+" if (sig >> i) & 1 else "-" for i in range(nw))
        count = bin(mask).count("1")
        sums = [0] * n
        mm = mask
        while mm:
            lsb = mm & -mm
            mm ^= lsb
            v = vnums[lsb.bit_length() - 1]
            for j in range(n):
                sums[j] += v[j]
        witness = tuple(Fraction(s, den * count) for s in sums)
        items.append((wall_sig, witness))
    for idx, (sig, witness) in enumerate(sorted(items)):
        out.append(FineChamber(n, sig, witness, idx))
    return tuple(out)


def locate_weight(A):
    """The weight-domain cell of A, flagged WALL when A lies on some wall."""
    if not isinstance(A, WeightVector):
        A = WeightVector(A)
    n = A.n
    sig = weight_signs(n, A.entries)
    ones = tuple(i + 1 for i, a in enumerate(A.entries) if a == 1)
    if "0" in sig:
        return WeightLocation(n, sig, True, ones, None)
    chamber = None
    if n <= MAX_FINE_N:
        for ch in fine_chambers(n):
            if ch.signs == sig:
                chamber = ch
                break
    return WeightLocation(n, sig, False, ones, chamber)


# ---------------------------------------------------------------------------
# The xi correspondence and facet covers.


def _chamber_wall_data(chamber):
    """Signs of a carrier chamber against the weight walls, and zero pairs.

    On the carrier the wall for S^c is the negated wall for S, so the carrier
    sign vector determines a unique strict weight-domain sign for every wall
    the chamber is not on; walls the chamber lies on come in complementary
    pairs to be resolved per candidate cell.
    """
    from .hypersimplex import build_arrangement

    n = chamber.n
    arr = build_arrangement(n)
    by_subset = {}
    for h, s in zip(arr.hyperplanes, chamber.signs):
        if h.kind == "sum":
            by_subset[frozenset(h.subset)] = s
    walls = weight_walls(n)
    fixed = {}
    pairs = []
    seen = set()
    for idx, s in enumerate(walls):
        canon = canonical_subset(n, s)
        sign = by_subset[frozenset(canon)]
        flip = frozenset(s) != frozenset(canon)
        if sign == "0":
            if frozenset(canon) not in seen:
                seen.add(frozenset(canon))
                canon_idx = walls.index(tuple(sorted(canon)))
                comp_idx = walls.index(tuple(sorted(set(range(n)) - set(canon))))
                pairs.append((canon_idx, comp_idx))
        else:
            if flip:
                sign = "+" if sign == "-" else "-"
            fixed[idx] = sign
    return walls, fixed, pairs


PAIR_OPTIONS = (("0", "+"), ("+", "0"), ("+", "+"), ("+", "-"), ("-", "+"))


def xi(chamber):
    """Ids (wall sign strings) of weight-domain cells whose closure holds c.

    For walls where c is strict the cell sign is forced; each complementary
    pair of walls through c admits five resolutions compatible with the open
    domain (both zero would force the carrier, and a minus beside a zero or
    another minus would force total weight below 2).  Candidates are pruned
    by LP feasibility as the assignment is extended pair by pair.
    """
    if chamber.on_boundary:
        raise ValueError("xi is defined for chambers inside the open hypersimplex")
    n = chamber.n
    walls, fixed, pairs = _chamber_wall_data(chamber)
    if len(pairs) > MAX_XI_PAIRS:
        raise ValueError("xi guarded to chambers on at most %d walls" % MAX_XI_PAIRS)
    base = _domain_constraints(n)
    base.extend(_wall_constraint(n, walls[i], s) for i, s in fixed.items())
    if not pairs:
        sig = "".join(fixed[i] for i in range(len(walls)))
        return (sig,)
    found = []

    def rec(level, assigned, cons):
        if lp_feasible(cons) is None:
            return
        if level == len(pairs):
            sig = []
            for i in range(len(walls)):
                sig.append(fixed[i] if i in fixed else assigned[i])
            found.append("".join(sig))
            return
        ci, mi = pairs[level]
        for a, b in PAIR_OPTIONS:
            assigned[ci], assigned[mi] = a, b
            ext = cons + [_wall_constraint(n, walls[ci], a),
                          _wall_constraint(n, walls[mi], b)]
            rec(level + 1, assigned, ext)
            del assigned[ci], assigned[mi]

    rec(0, {}, list(base))
    return tuple(sorted(found))


def facet_cover_count(chamber, k):
    """Number of weight-domain cells of dimension dim(c)+1 with c as a facet.

    Such a cell keeps exactly one wall of each complementary pair through c
    at zero (keeping both forces the carrier; keeping none leaves the
    dimension too high), and the partner wall is then forced positive.
    """
    if chamber.on_boundary:
        raise ValueError("facet covers are defined for interior chambers")
    n = chamber.n
    walls, fixed, pairs = _chamber_wall_data(chamber)
    if k != len(pairs):
        raise ValueError("chamber lies on %d walls, not %d" % (len(pairs), k))
    if k == 0:
        return 1
    if k > MAX_XI_PAIRS:
        raise ValueError("facet cover count guarded to k <= %d" % MAX_XI_PAIRS)
    base = _domain_constraints(n)
    base.extend(_wall_constraint(n, walls[i], s) for i, s in fixed.items())
    count = 0
    for choice in range(1 << k):
        cons = list(base)
        for level, (ci, mi) in enumerate(pairs):
            zi, pi = (ci, mi) if (choice >> level) & 1 else (mi, ci)
            cons.append(_wall_constraint(n, walls[zi], "0"))
            cons.append(_wall_constraint(n, walls[pi], "+"))
        if lp_feasible(cons) is not None:
            count += 1
    return count


def permute_weight_signs(n, perm, signs):
    """Push a weight-wall sign string forward along a coordinate permutation."""
    walls = weight_walls(n)
    index = {w: i for i, w in enumerate(walls)}
    out = [None] * len(walls)
    for i, s in enumerate(walls):
        img = tuple(sorted(perm[j] for j in s))
        out[index[img]] = signs[i]
    return "".join(out)
