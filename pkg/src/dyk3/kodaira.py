"""Combinatorial search for Kodaira fibres in a set of -2-curves.

Given the intersection matrix of a finite curve set, enumerate all divisors
D = sum m_i C_i whose support configuration matches an affine Dynkin
diagram (I_n cycles, D~_n, E~_6/7/8) with the standard multiplicities,
group them into genus-1 fibrations by their intersection key, detect
sections, and count orbits under a small symmetry group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class FibreConfig:
    kind: str                 # "I3", "D4", "D5", ..., "E6", "E7", "E8"
    components: tuple         # ((index, multiplicity), ...) sorted by index

    @property
    def support(self):
        return tuple(i for i, _ in self.components)

    def divisor(self, n):
        v = [0] * n
        for i, m in self.components:
            v[i] = m
        return v


class CurveSet:
    """A labelled symmetric intersection matrix of -2-curves."""

    def __init__(self, labels, gram):
        self.labels = list(labels)
        self.gram = [list(r) for r in gram]
        n = len(self.labels)
        for i in range(n):
            if self.gram[i][i] != -2:
                raise ValueError("curve set must consist of -2-curves")
            for j in range(n):
                if i != j and self.gram[i][j] < 0:
                    raise ValueError("off-diagonal intersections must be >= 0")
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("intersection matrix must be symmetric")

    @property
    def n(self):
        return len(self.labels)

    def check_config(self, comps) -> bool:
        """D.D = 0 and D.C_i = 0 for every component, recomputed from Gram."""
        g = self.gram
        idx = {i: m for i, m in comps}
        dd = 0
        for i, mi in comps:
            row = 0
            for j, mj in comps:
                row += g[i][j] * mj
            if row != 0:
                return False
            dd += mi * row
        return dd == 0


# ---------------------------------------------------------------------------
# enumeration


def _neighbors(S: CurveSet):
    adj1 = [[] for _ in range(S.n)]
    for i in range(S.n):
        for j in range(S.n):
            if i != j and S.gram[i][j] == 1:
                adj1[i].append(j)
    return adj1


def find_fibres(S: CurveSet, max_n: int = 16):
    """All Kodaira fibres supported on S with I_n cycles up to length max_n.

    I2 = pairs meeting with intersection number 2; I_n (n >= 3) = chordless
    unit-edge cycles; D~_n and E~_6/7/8 by explicit diagram matching.  Every
    emitted configuration is re-verified against the Gram matrix.
    """
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    out = []
    seen = set()

    def emit(kind, comps):
        comps = tuple(sorted(comps))
        key = (kind, comps)
        if key in seen:
            return
        cfg = FibreConfig(kind, comps)
        if not S.check_config(comps):
            raise AssertionError(f"enumerated config fails the invariants: {cfg}")
        seen.add(key)
        out.append(cfg)

    g = S.gram
    n = S.n
    # I2: intersection number exactly 2
    for i in range(n):
        for j in range(i + 1, n):
            if g[i][j] == 2:
                emit("I2", ((i, 1), (j, 1)))
    # I_m cycles, m >= 3: chordless cycles in the unit graph, where
    # "chordless" forbids any nonzero intersection between non-neighbours
    adj1 = _neighbors(S)
    for cyc in _chordless_cycles(S, adj1, max_n):
        emit(f"I{len(cyc)}", tuple((i, 1) for i in cyc))
    # D~_n and E~ types
    for kind, comps in _tree_fibres(S, adj1):
        emit(kind, comps)
    return out


def _chordless_cycles(S, adj1, max_n):
    """Each chordless unit-edge cycle of length 3..max_n, found exactly once.

    Canonical form: the cycle is rooted at its least vertex r with the
    second vertex smaller than the last; all other vertices exceed r.
    Interior vertices may touch nothing else on the path (zero intersection
    with all non-neighbours, including weight-2 contacts).
    """
    g = S.gram
    n = S.n
    for r in range(n):
        stack = [(r, (r,))]
        while stack:
            v, path = stack.pop()
            for w in adj1[v]:
                if w <= r or w in path:
                    continue
                if any(g[w][u] != 0 for u in path[1:-1]):
                    continue
                if len(path) == 1:
                    # first step away from the root: the r-w edge is part of
                    # the cycle, not a chord
                    stack.append((w, path + (w,)))
                    continue
                grw = g[w][r]
                if grw != 0:
                    # w touches the root: only valid as the closing vertex
                    if grw == 1 and path[1] < w and len(path) + 1 <= max_n:
                        yield path + (w,)
                    continue
                if len(path) < max_n:
                    stack.append((w, path + (w,)))


def _tree_fibres(S, adj1):
    """D~_n (n >= 4) and E~_6, E~_7, E~_8 configurations."""
    g = S.gram
    n = S.n
    disjoint = lambda i, j: g[i][j] == 0

    # D~_4: central c with four legs, pairwise disjoint
    for c in range(n):
        nb = adj1[c]
        if len(nb) < 4:
            continue
        from itertools import combinations
        for legs in combinations(nb, 4):
            if all(disjoint(a, b) for a in legs for b in legs if a < b):
                yield "D4", ((c, 2),) + tuple((l, 1) for l in legs)

    # D~_m, m >= 5: chain c_1 .. c_{m-3} (multiplicity 2) with fork pairs
    # at both ends
    for path in _chordless_paths(S, adj1):
        m = len(path) + 3
        c1, cl = path[0], path[-1]
        inner = set(path)
        from itertools import combinations
        left_opts = [v for v in adj1[c1] if v not in inner
                     and all(g[v][u] == 0 for u in path[1:])]
        right_opts = [v for v in adj1[cl] if v not in inner
                      and all(g[v][u] == 0 for u in path[:-1])]
        for l1, l2 in combinations(left_opts, 2):
            if g[l1][l2] != 0:
                continue
            for r1, r2 in combinations(right_opts, 2):
                if g[r1][r2] != 0:
                    continue
                four = {l1, l2, r1, r2}
                if len(four) != 4:
                    continue
                if any(g[a][b] != 0 for a in (l1, l2) for b in (r1, r2)):
                    continue
                yield (f"D{m}", tuple((c, 2) for c in path)
                       + ((l1, 1), (l2, 1), (r1, 1), (r2, 1)))

    # E~ types by arm search from a central vertex
    for kind, arms, mults in (
        ("E6", (2, 2, 2), 3),
        ("E7", (3, 3, 1), 4),
        ("E8", (4, 2, 1), 6),
    ):
        yield from _e_type(S, adj1, kind, arms, mults)


def _chordless_paths(S, adj1):
    """Induced paths (length >= 2 vertices) with no extra adjacencies,
    emitted once (first endpoint < last endpoint)."""
    g = S.gram
    n = S.n
    for start in range(n):
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            if len(path) >= 2 and path[0] < path[-1]:
                yield path
            if len(path) >= 14:
                continue
            for w in adj1[v]:
                if w in path:
                    continue
                if any(g[w][u] != 0 for u in path[:-1]):
                    continue
                stack.append((w, path + (w,)))


def _e_type(S, adj1, kind, arm_lengths, center_mult):
    """Affine E diagrams: three chordless arms from a center.

    Arm multiplicities decrease outward: E~6: center 3, arms (2,1) x3;
    E~7: center 4, arms (3,2,1), (3,2,1), (2... ) -- encoded explicitly."""
    g = S.gram
    n = S.n
    arm_mults = {
        "E6": [(2, 1), (2, 1), (2, 1)],
        "E7": [(3, 2, 1), (3, 2, 1), (2,)],
        "E8": [(5, 4, 3, 2, 1), (4, 2), (3,)],
    }[kind]
    wanted = [len(a) for a in arm_mults]
    mults_center = {"E6": 3, "E7": 4, "E8": 6}[kind]
    from itertools import permutations
    seen_local = set()
    for c in range(n):
        arms_by_len = {}
        for L in set(wanted):
            arms_by_len[L] = [p[1:] for p in _arms_from(S, adj1, c, L)]
        for a1 in arms_by_len[wanted[0]]:
            for a2 in arms_by_len[wanted[1]]:
                if set(a1) & set(a2) or _touches(g, a1, a2):
                    continue
                for a3 in arms_by_len[wanted[2]]:
                    if set(a3) & (set(a1) | set(a2)):
                        continue
                    if _touches(g, a1, a3) or _touches(g, a2, a3):
                        continue
                    comps = [(c, mults_center)]
                    for arm, mults in zip((a1, a2, a3), arm_mults):
                        comps.extend((v, m) for v, m in zip(arm, mults))
                    key = tuple(sorted(comps))
                    if key in seen_local:
                        continue
                    seen_local.add(key)
                    yield kind, key


def _arms_from(S, adj1, c, length):
    """Chordless paths of `length` vertices hanging off c (excluding c)."""
    g = S.gram
    stack = [(c, (c,))]
    while stack:
        v, path = stack.pop()
        if len(path) == length + 1:
            yield path
            continue
        for w in adj1[v]:
            if w in path:
                continue
            if any(g[w][u] != 0 for u in path[:-1]):
                continue
            stack.append((w, path + (w,)))


def _touches(g, arm_a, arm_b):
    return any(g[u][v] != 0 for u in arm_a for v in arm_b)


# ---------------------------------------------------------------------------
# grouping into fibrations


@dataclass
class Fibration:
    key: tuple              # intersection vector of D against the curve set
    fibres: list

    @property
    def section_indices(self):
        return tuple(i for i, v in enumerate(self.key) if v == 1)

    @property
    def has_section_in_set(self):
        return any(v == 1 for v in self.key)

    @property
    def has_section(self):
        nz = [v for v in self.key if v != 0]
        if not nz:
            return False
        g = 0
        for v in nz:
            g = gcd(g, v)
        return g == 1


def fibre_key(S: CurveSet, cfg: FibreConfig):
    g = S.gram
    vec = []
    for i in range(S.n):
        vec.append(sum(g[i][j] * m for j, m in cfg.components))
    return tuple(vec)


def group_fibrations(fibres, S: CurveSet):
    """Group fibres by their intersection key; check pairwise disjointness."""
    groups = {}
    for cfg in fibres:
        groups.setdefault(fibre_key(S, cfg), []).append(cfg)
    out = []
    for key, cfgs in groups.items():
        for a in range(len(cfgs)):
            da = cfgs[a].divisor(S.n)
            for b in range(a + 1, len(cfgs)):
                db = cfgs[b].divisor(S.n)
                inter = sum(da[i] * S.gram[i][j] * db[j]
                            for i in range(S.n) for j in range(S.n))
                if inter != 0:
                    raise ValueError(
                        "key collision with nonzero intersection: the curve "
                        "set does not span the ambient Picard lattice")
        out.append(Fibration(key, cfgs))
    out.sort(key=lambda f: f.key)
    return out


def find_sections(fib: Fibration, S: CurveSet):
    return [S.labels[i] for i in fib.section_indices]


def orbit_count(fibrations, generators, S: CurveSet,
                predicate=None) -> int:
    """Orbits of the induced action on fibration keys.

    generators: label permutations as index lists; must preserve the Gram.
    The orbit representative is the lexicographically least permuted key.
    """
    for perm in generators:
        for i in range(S.n):
            for j in range(S.n):
                if S.gram[perm[i]][perm[j]] != S.gram[i][j]:
                    raise ValueError("generator does not preserve the Gram")
    group = _generated_group(generators, S.n)
    reps = set()
    for fib in fibrations:
        if predicate is not None and not predicate(fib):
            continue
        key = fib.key
        canon = min(tuple(key[p[i]] for i in range(S.n)) for p in group)
        reps.add(canon)
    return len(reps)


def _generated_group(generators, n):
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in generators]
    while frontier:
        g = frontier.pop()
        for h in gens:
            comp = tuple(g[h[i]] for i in range(n))
            if comp not in group:
                group.add(comp)
                frontier.append(comp)
    return sorted(group)


# ---------------------------------------------------------------------------
# brute-force oracle (independent of the constructive search)


_AFFINE_PATTERNS = {}


def _diagram(kind):
    """Adjacency + multiplicities of the affine diagram as a small graph."""
    if kind.startswith("I"):
        raise ValueError("cycles handled separately")
    if kind in _AFFINE_PATTERNS:
        return _AFFINE_PATTERNS[kind]
    edges = []
    if kind.startswith("D"):
        m = int(kind[1:])
        # chain of m-3 double vertices, two forks each end
        chain = list(range(m - 3))
        mults = {v: 2 for v in chain}
        nxt = m - 3
        for v in range(m - 4):
            edges.append((v, v + 1))
        forks = []
        for end in (0, m - 4):
            for _ in range(2):
                mults[nxt] = 1
                edges.append((min(end, m - 4) if m > 4 else 0, nxt))
                forks.append(nxt)
                nxt += 1
        _AFFINE_PATTERNS[kind] = (edges, mults)
        return edges, mults
    arms = {"E6": [(2, 1), (2, 1), (2, 1)],
            "E7": [(3, 2, 1), (3, 2, 1), (2,)],
            "E8": [(5, 4, 3, 2, 1), (4, 2), (3,)]}[kind]
    center_m = {"E6": 3, "E7": 4, "E8": 6}[kind]
    mults = {0: center_m}
    nxt = 1
    for arm in arms:
        prev = 0
        for m in arm:
            mults[nxt] = m
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    _AFFINE_PATTERNS[kind] = (edges, mults)
    return edges, mults


def brute_force_fibres(S: CurveSet, max_mult: int = 6, max_n: int = 16):
    """Exhaustive oracle, independent of the constructive search.

    For every connected subset, the multiplicity vector of a fibre must span
    the kernel of the restricted Gram matrix (D.C_i = 0 for all components);
    corank-1 subsets with a positive primitive kernel vector bounded by
    max_mult are then classified against the affine diagrams directly.
    """
    from itertools import combinations
    n = S.n
    g = S.gram
    found = set()
    for size in range(2, n + 1):
        for sub in combinations(range(n), size):
            if not _connected(g, sub):
                continue
            sub_gram = [[g[i][j] for j in sub] for i in sub]
            kern = _int_kernel(sub_gram)
            if len(kern) != 1:
                continue
            m = kern[0]
            if any(x == 0 for x in m):
                continue
            if all(x < 0 for x in m):
                m = [-x for x in m]
            if any(x <= 0 for x in m) or max(m) > max_mult or min(m) != 1:
                continue
            comps = tuple(zip(sub, m))
            if not S.check_config(comps):
                continue
            kind = _classify_config(S, comps, max_n)
            if kind is None:
                continue
            found.add((kind, tuple(sorted(comps))))
    return {FibreConfig(k, c) for k, c in found}


def _int_kernel(mat):
    """Primitive integer basis of the kernel of a small integer matrix."""
    from fractions import Fraction
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for ri, c in enumerate(pivots):
            v[c] = -a[ri][fc]
        den = 1
        for x in v:
            den = den * x.denominator // __import__("math").gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        gg = 0
        for x in iv:
            gg = __import__("math").gcd(gg, x)
        out.append([x // gg for x in iv])
    return out


def _connected(g, sub):
    seen = {sub[0]}
    frontier = [sub[0]]
    while frontier:
        v = frontier.pop()
        for w in sub:
            if w not in seen and g[v][w] != 0:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(sub)


def _classify_config(S, comps, max_n):
    """Match the weighted support against a Kodaira diagram, or None."""
    g = S.gram
    idx = [i for i, _ in comps]
    mults = {i: m for i, m in comps}
    size = len(idx)
    edges = [(a, b) for k, a in enumerate(idx) for b in idx[k + 1:]
             if g[a][b] != 0]
    if all(m == 1 for m in mults.values()):
        if size == 2 and g[idx[0]][idx[1]] == 2:
            return "I2"
        # cycle: every vertex degree 2 with unit edges
        if size >= 3 and size <= max_n and len(edges) == size and \
                all(g[a][b] == 1 for a, b in edges):
            deg = {i: 0 for i in idx}
            for a, b in edges:
                deg[a] += 1
                deg[b] += 1
            if all(d == 2 for d in deg.values()):
                return f"I{size}"
        return None
    # weighted tree types
    for kind in [f"D{m}" for m in range(4, size)] + ["E6", "E7", "E8"]:
        if kind.startswith("D") and int(kind[1:]) + 1 != size:
            continue
        if kind == "E6" and size != 7:
            continue
        if kind == "E7" and size != 8:
            continue
        if kind == "E8" and size != 9:
            continue
        if _matches_diagram(S, comps, kind):
            return kind
    return None


def _matches_diagram(S, comps, kind):
    from itertools import permutations
    edges, mults = _diagram(kind)
    g = S.gram
    idx = [i for i, _ in comps]
    want = sorted(mults.values())
    have = sorted(m for _, m in comps)
    if want != have:
        return False
    k = len(idx)
    eset = {(min(a, b), max(a, b)) for a, b in edges}
    cm = {i: m for i, m in comps}
    for perm in permutations(range(k)):
        ok = True
        for pos in range(k):
            if cm[idx[perm[pos]]] != mults[pos]:
                ok = False
                break
        if not ok:
            continue
        for a in range(k):
            for b in range(a + 1, k):
                want_edge = (a, b) in eset
                val = g[idx[perm[a]]][idx[perm[b]]]
                if want_edge and val != 1:
                    ok = False
                    break
                if not want_edge and val != 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False
