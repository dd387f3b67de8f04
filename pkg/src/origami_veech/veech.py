"""Action of the modular group on origamis and Veech group arithmetic.

SL(2,Z) acts on origamis through the generators

    T = [[1,1],[0,1]] : (h, v) -> (h, v h^-1)
    S = [[0,-1],[1,0]]: (h, v) -> (v, h^-1)

up to relabelling of the squares.  Two origamis are equivalent when a
relabelling conjugates one pair to the other or to its inverse pair
(the inverse pair is the image under -I, so the action on classes
factors through PSL(2,Z)).  The stabilizer of a class is the Veech
group; its coset table under T and S carries everything we need: the
index mu, the elliptic counts e2 and e3, cusps and their widths, and a
word-by-word membership test giving the minimal lower-left entry c1.

All matrices are 2x2 integer tuples ((a, b), (c, d)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .origami import ConnectivityError, Origami, Permutation

MAT_ID = ((1, 0), (0, 1))
MAT_T = ((1, 1), (0, 1))
MAT_S = ((0, -1), (1, 0))


class OrbitCapError(RuntimeError):
    """Orbit enumeration exceeded the configured cap."""

    def __init__(self, cap: int, partial: int):
        super().__init__(
            f"orbit size exceeds cap {cap} (found {partial} classes so far)")
        self.cap = cap
        self.partial = partial


def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_det(m) -> int:
    (a, b), (c, d) = m
    return a * d - b * c


def mat_neg(m):
    (a, b), (c, d) = m
    return ((-a, -b), (-c, -d))


def mat_pow_T(k: int):
    return ((1, k), (0, 1))


def projectively_equal(m1, m2) -> bool:
    return m1 == m2 or m1 == mat_neg(m2)


def act_T(o: Origami) -> Origami:
    """(h, v) -> (h, v h^-1)."""
    return Origami(o.n_squares, o.h, o.v * o.h.inverse(), o.mark_all_vertices)


def act_T_inv(o: Origami) -> Origami:
    return Origami(o.n_squares, o.h, o.v * o.h, o.mark_all_vertices)


def act_S(o: Origami) -> Origami:
    """(h, v) -> (v, h^-1)."""
    return Origami(o.n_squares, o.v, o.h.inverse(), o.mark_all_vertices)


def act_generator(gen: str, o: Origami) -> Origami:
    if gen == "T":
        return act_T(o)
    if gen == "S":
        return act_S(o)
    raise ValueError(f"unknown generator {gen!r}")


def act_word(word, o: Origami) -> Origami:
    """Apply a word from word_decompose, first token first.

    S tokens use act_S even where the exact factor is S^-1, so the
    result can differ from the exact matrix action by an inverse pair
    (= the -I image).  Classes absorb that, and so do all cylinder
    quantities.
    """
    for token in word:
        if token[0] == "S":
            o = act_S(o)
        else:
            k = token[1]
            step = act_T if k > 0 else act_T_inv
            for _ in range(abs(k)):
                o = step(o)
    return o


def word_decompose(m) -> list:
    """Factor m in SL(2,Z) as a word in S and powers of T.

    Returns tokens [("T", k), ("S",), ...] in application order (first
    token applied first).  Evaluating the word reproduces m up to sign:
    S stands for either S or S^-1 = -S, which coincide in PSL(2,Z).
    Raises ValueError unless det m = 1.
    """
    if mat_det(m) != 1:
        raise ValueError(f"matrix {m} is not in SL(2,Z)")
    (a, b), (c, d) = m
    quotients = []
    while c != 0:
        q = a // c
        # T^-q then S on the left; new lower-left is a mod c
        a, b, c, d = -c, -d, a - q * c, b - q * d
        quotients.append(q)
    # now ((a, b), (0, d)) with a = d = +-1, so this is +-T^beta
    beta = b if a == 1 else -b
    word = []
    if beta:
        word.append(("T", beta))
    for q in reversed(quotients):
        word.append(("S",))
        if q:
            word.append(("T", q))
    return word


def evaluate_word(word):
    """Product of the word's matrices, first token innermost."""
    m = MAT_ID
    for token in word:
        factor = MAT_S if token[0] == "S" else mat_pow_T(token[1])
        m = mat_mul(factor, m)
    return m


@dataclass(frozen=True)
class OrigamiClass:
    """Canonical representative of an origami up to relabelling and
    inverse pair.

    The key is the lexicographically least (h images, v images) over
    all breadth-first relabellings of (h, v) and (h^-1, v^-1).
    """

    n: int
    h_images: tuple
    v_images: tuple

    @classmethod
    def of(cls, o: Origami) -> "OrigamiClass":
        n = o.n_squares
        best = None
        pairs = ((o.h, o.v),
                 (o.h.inverse(), o.v.inverse()))
        for h, v in pairs:
            h_img = h.images
            v_img = v.images
            for start in range(1, n + 1):
                key = _bfs_relabel_key(n, h_img, v_img, start)
                if best is None or key < best:
                    best = key
        return cls(n, best[0], best[1])

    def origami(self, mark_all_vertices: bool = False) -> Origami:
        return Origami(self.n, Permutation(self.h_images),
                       Permutation(self.v_images), mark_all_vertices)


def _bfs_relabel_key(n, h_img, v_img, start):
    """Relabel squares in BFS order from start (h-image first, then
    v-image) and return the relabelled (h images, v images)."""
    label = [0] * (n + 1)
    order = [start]
    label[start] = 1
    head = 0
    while head < len(order):
        s = order[head]
        head += 1
        for t in (h_img[s - 1], v_img[s - 1]):
            if not label[t]:
                label[t] = len(order) + 1
                order.append(t)
    new_h = [0] * n
    new_v = [0] * n
    for s in order:
        new_h[label[s] - 1] = label[h_img[s - 1]]
        new_v[label[s] - 1] = label[v_img[s - 1]]
    return (tuple(new_h), tuple(new_v))


@dataclass(frozen=True)
class CosetTable:
    """Orbit of a class under T and S with the induced permutations.

    orbit[0] is the class of the input origami (the basepoint).
    sigma_T and sigma_S permute {1..mu} with i <-> orbit[i-1].  They
    satisfy sigma_S^2 = id and (sigma_S sigma_T)^3 = id because the
    class action factors through PSL(2,Z).
    """

    orbit: tuple
    sigma_T: Permutation
    sigma_S: Permutation

    @property
    def mu(self) -> int:
        return len(self.orbit)

    def index_of(self, cls: OrigamiClass) -> int:
        """0-based orbit position of a class; KeyError if absent."""
        try:
            return self._index[cls]
        except AttributeError:
            index = {c: i for i, c in enumerate(self.orbit)}
            object.__setattr__(self, "_index", index)
            return index[cls]

    def cusp_width_at(self, idx: int) -> int:
        """Length of the sigma_T cycle through 0-based index idx."""
        sigma = self.sigma_T
        length = 1
        j = sigma(idx + 1)
        while j != idx + 1:
            length += 1
            j = sigma(j)
        return length


# Orbit adjacency cache: canonical class -> (T-image, S-image), shared by
# every class of the same orbit.  Tables for a new basepoint in a known
# orbit are rebuilt by index BFS without re-canonicalizing anything.
_ORBIT_ADJACENCY: dict = {}


def clear_orbit_cache() -> None:
    _ORBIT_ADJACENCY.clear()


def _explore_orbit(base: OrigamiClass, cap: int) -> None:
    """Fill the adjacency cache for the whole orbit of base."""
    if base in _ORBIT_ADJACENCY:
        return
    adjacency = {}
    queue = [base]
    seen = {base}
    head = 0
    while head < len(queue):
        if len(seen) > cap:
            raise OrbitCapError(cap, len(seen))
        cls = queue[head]
        head += 1
        o = cls.origami()
        t_img = OrigamiClass.of(act_T(o))
        s_img = OrigamiClass.of(act_S(o))
        adjacency[cls] = (t_img, s_img)
        for img in (t_img, s_img):
            if img not in seen:
                seen.add(img)
                queue.append(img)
    if len(seen) > cap:
        raise OrbitCapError(cap, len(seen))
    _ORBIT_ADJACENCY.update(adjacency)


def orbit_and_stabilizer(o: Origami, cap: int = 10 ** 6) -> CosetTable:
    """Coset table of the stabilizer of o's class in PSL(2,Z).

    Breadth-first from the class of o, FIFO, T-image enumerated before
    S-image, so the orbit order is deterministic.  Raises OrbitCapError
    when the orbit exceeds cap classes.
    """
    base = OrigamiClass.of(o)
    _explore_orbit(base, cap)
    order = [base]
    position = {base: 0}
    head = 0
    while head < len(order):
        cls = order[head]
        head += 1
        for img in _ORBIT_ADJACENCY[cls]:
            if img not in position:
                position[img] = len(order)
                order.append(img)
    if len(order) > cap:
        raise OrbitCapError(cap, len(order))
    sigma_t = [0] * len(order)
    sigma_s = [0] * len(order)
    for i, cls in enumerate(order):
        t_img, s_img = _ORBIT_ADJACENCY[cls]
        sigma_t[i] = position[t_img] + 1
        sigma_s[i] = position[s_img] + 1
    table = CosetTable(tuple(order), Permutation(sigma_t), Permutation(sigma_s))
    _check_table_relations(table)
    return table


def _check_table_relations(table: CosetTable) -> None:
    ss = table.sigma_S * table.sigma_S
    if not ss.is_identity():
        raise RuntimeError("sigma_S^2 is not the identity")
    st = table.sigma_S * table.sigma_T
    if not (st * st * st).is_identity():
        raise RuntimeError("(sigma_S sigma_T)^3 is not the identity")


@dataclass(frozen=True)
class GroupSignature:
    """Signature data of a finite-index subgroup of PSL(2,Z).

    p: genus of the quotient surface, e2/e3: elliptic counts of order
    2 and 3, k0: number of cusps, k = e2 + e3 + k0, mu: index.
    area_over_pi is exact (mu/3); cusp_widths is sorted descending;
    b0 is the width of the cusp containing the basepoint coset.
    c1 and c1_witness are attached after c1_search.
    """

    p: int
    e2: int
    e3: int
    k0: int
    mu: int
    cusp_widths: tuple
    b0: int
    c1: int | None = None
    c1_witness: tuple | None = None

    @property
    def k(self) -> int:
        return self.e2 + self.e3 + self.k0

    @property
    def nu_list(self) -> tuple:
        return (2,) * self.e2 + (3,) * self.e3 + (math.inf,) * self.k0

    @property
    def area_over_pi(self) -> Fraction:
        return Fraction(self.mu, 3)

    @property
    def area(self) -> float:
        return math.pi * self.mu / 3

    @property
    def orbifold_sum(self) -> Fraction:
        """2p - 2 + sum(1 - 1/nu), exactly."""
        return (2 * self.p - 2 + Fraction(self.e2, 2)
                + Fraction(2 * self.e3, 3) + self.k0)

    def with_c1(self, c1: int, witness) -> "GroupSignature":
        return replace(self, c1=c1, c1_witness=witness)


def signature(table: CosetTable) -> GroupSignature:
    """Signature of the stabilizer from its coset table.

    Genus from Riemann-Hurwitz for the cover of the modular orbifold:
    p = 1 + mu/12 - e2/4 - e3/3 - k0/2, which must be a nonnegative
    integer (RuntimeError otherwise: that signals a table bug, not bad
    input).  The exact area identity
    mu/3 = 2 (2p - 2 + e2/2 + 2 e3/3 + k0) is asserted as well.
    """
    mu = table.mu
    e2 = sum(1 for i in range(1, mu + 1) if table.sigma_S(i) == i)
    st = table.sigma_S * table.sigma_T
    e3 = sum(1 for i in range(1, mu + 1) if st(i) == i)
    t_cycles = table.sigma_T.cycles(include_fixed=True)
    k0 = len(t_cycles)
    widths = tuple(sorted((len(c) for c in t_cycles), reverse=True))
    b0 = table.cusp_width_at(0)
    p_frac = 1 + Fraction(mu, 12) - Fraction(e2, 4) - Fraction(e3, 3) \
        - Fraction(k0, 2)
    if p_frac.denominator != 1 or p_frac < 0:
        raise RuntimeError(f"genus formula gave {p_frac}, not a "
                           "nonnegative integer")
    p = int(p_frac)
    sig = GroupSignature(p, e2, e3, k0, mu, widths, b0)
    if 2 * sig.orbifold_sum != sig.area_over_pi:
        raise RuntimeError("area via index disagrees with area via signature")
    if sum(widths) != mu:
        raise RuntimeError("cusp widths do not sum to the index")
    return sig


def membership(m, table: CosetTable, start: int = 0) -> bool:
    """Does m stabilize the coset at 0-based index start?

    Decomposes m into S and T factors and traces them through sigma_S
    and sigma_T.  Projective: m and -m give the same answer, which is
    the right notion for subgroups of PSL(2,Z).
    """
    word = word_decompose(m)
    i = start + 1
    for token in word:
        if token[0] == "S":
            i = table.sigma_S(i)
        else:
            i = (table.sigma_T ** token[1])(i)
    return i == start + 1


def c1_search(table: CosetTable, sig: GroupSignature):
    """Smallest positive lower-left entry over the stabilizer.

    Scans c = 1, 2, ... and for each c all matrices with first column
    (a, c), gcd(a, c) = 1, 0 <= a < b0 c, right-multiplied by T^t for
    0 <= t < b0.  Any group element with lower-left c is reached this
    way: matrices sharing a first column differ by a right power of T,
    and T^(s b0) shifts a by s b0 c while staying in the group.

    Termination: some element satisfies b0 c < area - k0 + 1 (rescale
    the cusp at infinity to width 1 and apply the small-c theorem for
    finite-covolume Fuchsian groups), so the scan stops; running past
    that bound raises RuntimeError, signalling a bug.

    Returns (c1, witness_matrix).
    """
    b0 = sig.b0
    limit = float(sig.area) - sig.k0 + 1
    c = 1
    while b0 * c < limit + 1e-9 * max(1.0, abs(limit)):
        for a in range(b0 * c):
            if math.gcd(a, c) != 1:
                continue
            # first column (a, c): extend to det 1 via a x + c y = 1
            x, y = _ext_gcd_pair(a, c)
            m = ((a, -y), (c, x))
            for t in range(b0):
                candidate = mat_mul(m, mat_pow_T(t))
                if membership(candidate, table):
                    return c, candidate
        c += 1
    raise RuntimeError(
        f"c1 search passed the termination bound (area {float(sig.area)}, "
        f"k0 {sig.k0}, b0 {b0}): no witness found")


def _ext_gcd_pair(a: int, c: int):
    """(x, y) with a x + c y = 1; requires gcd(a, c) = 1."""
    old_r, r = a, c
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r == -1:
        old_x, old_y = -old_x, -old_y
        old_r = 1
    if old_r != 1:
        raise ValueError(f"gcd({a}, {c}) = {old_r}, not 1")
    return old_x, old_y


def transitive_pairs(n: int):
    """All transitive origamis on n squares, one per (h, v) pair.

    h runs over one representative per cycle type (conjugating both
    permutations by the same relabelling preserves the class), v over
    all of S_n.
    """
    for h in _cycle_type_representatives(n):
        for v_images in itertools.permutations(range(1, n + 1)):
            try:
                yield Origami(n, h, Permutation(v_images))
            except ConnectivityError:
                continue


def _cycle_type_representatives(n: int):
    """One permutation per partition of n: consecutive blocks as cycles."""
    for part in _partitions(n):
        cycles = []
        next_label = 1
        for size in part:
            cycles.append(tuple(range(next_label, next_label + size)))
            next_label += size
        yield Permutation.from_cycles(n, cycles)


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def origami_classes(n: int) -> list:
    """All classes of transitive origamis on exactly n squares, sorted."""
    found = set()
    for o in transitive_pairs(n):
        found.add(OrigamiClass.of(o))
    return sorted(found, key=lambda c: (c.h_images, c.v_images))
