"""Cylinder decompositions of origamis in rational directions.

In the horizontal direction the rows (h-cycles) stack into maximal
cylinders: the leaf between a row and the one above it is a cut exactly
when it carries a marked vertex.  A cylinder of circumference W (row
length) and height H (number of rows) has modulus W/H, an exact
rational.  s1 and s2 count marked corners on the bottom and top
boundary circles, with multiplicity.

Any rational direction reduces to the horizontal one: a slope p/q with
gcd(p, q) = 1 is the image of (1, 0) under U^-1 for some U in SL(2,Z),
and the decomposition in direction p/q of an origami equals the
horizontal decomposition of U acting on it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .origami import Origami, ParseError, vertices
from .veech import act_word, word_decompose


@dataclass(frozen=True)
class Direction:
    """Primitive rational direction, slope p/q along the vector (q, p).

    Normalized so gcd = 1, q >= 0, and p = 1 when q = 0; horizontal is
    (0, 1), vertical is (1, 0).
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("direction (0, 0)")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_slope(cls, text: str) -> "Direction":
        """Parse 'inf', an integer slope, or 'p/q'."""
        text = text.strip()
        if text in ("inf", "Inf", "INF", "oo", "1/0"):
            return cls(1, 0)
        m = re.fullmatch(r"(-?\d+)(?:/(-?\d+))?", text)
        if m is None:
            raise ParseError(f"bad slope {text!r}")
        p = int(m.group(1))
        q = int(m.group(2)) if m.group(2) else 1
        if p == 0 and q == 0:
            raise ParseError("slope 0/0")
        return cls(p, q)

    @property
    def vector(self) -> tuple:
        return (self.q, self.p)

    def slope_string(self) -> str:
        if self.q == 0:
            return "inf"
        if self.q == 1:
            return str(self.p)
        return f"{self.p}/{self.q}"


HORIZONTAL = Direction(0, 1)
VERTICAL = Direction(1, 0)


def directions_up_to(bound: int) -> list:
    """All primitive directions with |p|, |q| <= bound, sorted by (q, p).

    Vertical (q = 0) comes first, then each q = 1..bound with the
    admissible p ascending.  40 directions at bound 5.
    """
    out = [VERTICAL]
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if math.gcd(p, q) == 1:
                out.append(Direction(p, q))
    return out


def reduce_direction(d: Direction):
    """U in SL(2,Z) with U (q, p)^t = (1, 0)^t.

    Built from one extended-gcd pair a q + b p = 1 as
    U = ((a, b), (-p, q)); determinant a q + b p = 1.
    """
    a, b = _ext_gcd(d.q, d.p)
    return ((a, b), (-d.p, d.q))


def _ext_gcd(x: int, y: int):
    """(a, b) with a x + b y = gcd = 1; requires coprime inputs."""
    old_r, r = x, y
    old_a, a = 1, 0
    old_b, b = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_a, a = a, old_a - quot * a
        old_b, b = b, old_b - quot * b
    if old_r == -1:
        old_a, old_b, old_r = -old_a, -old_b, 1
    if old_r != 1:
        raise ValueError(f"({x}, {y}) not coprime")
    return old_a, old_b


@dataclass(frozen=True)
class Cylinder:
    """Maximal horizontal cylinder: rows bottom to top.

    W: circumference (common row length), H: height (number of rows),
    modulus W/H.  s1, s2: marked corners on the bottom and top boundary
    circle, counted with multiplicity (a vertex contributes once per
    corner it occupies on that circle).
    """

    rows: tuple
    s1: int
    s2: int

    @property
    def W(self) -> int:
        return len(self.rows[0])

    @property
    def H(self) -> int:
        return len(self.rows)

    @property
    def modulus(self) -> Fraction:
        return Fraction(self.W, self.H)


@dataclass(frozen=True)
class CylinderDecomposition:
    direction: Direction
    cylinders: tuple

    @property
    def m(self) -> int:
        return len(self.cylinders)

    @property
    def moduli(self) -> tuple:
        return tuple(c.modulus for c in self.cylinders)


def marked_square_set(o: Origami) -> frozenset:
    """Squares whose bottom-left vertex is marked (policy marking)."""
    marked = set()
    for u in vertices(o):
        if u.marked:
            marked.update(u.squares)
    return frozenset(marked)


def horizontal_decomposition(o: Origami,
                             marked: frozenset | None = None
                             ) -> CylinderDecomposition:
    """Cut the surface along every horizontal leaf through a marked
    vertex and collect the cylinders.

    Rows are the h-cycles.  The leaf above a row is singular when some
    square t of the row has v(t) sitting on a marked vertex; singular
    leaves are cuts, every other pair of adjacent rows glues.  A glued
    pair has equal width and v maps the lower row to the upper one in
    lock step, which is what makes W well defined.

    marked overrides the policy marking with an explicit square set
    (used for quotient surfaces whose marking is inherited from
    upstairs); it must contain every square on a cone-angle > 2 pi
    vertex, otherwise an unmarked singular leaf would break the
    lock-step gluing.  Requires at least one marked square, else no
    boundary exists and a ValueError is raised.
    """
    if marked is None:
        marked = marked_square_set(o)
    if not marked:
        raise ValueError("no marked vertex: cylinder boundaries undefined")
    rows = o.h.cycles(include_fixed=True)
    row_of = {}
    for i, row in enumerate(rows):
        for s in row:
            row_of[s] = i
    # marked corners on the circle above row j sit at squares v(t),
    # t in row j; on the circle below row i at row i's own squares
    cut_above = [any(o.v(t) in marked for t in row) for row in rows]
    cut_below = [any(s in marked for s in row) for row in rows]
    cylinders = []
    used = [False] * len(rows)
    for i, row in enumerate(rows):
        if not cut_below[i]:
            continue
        # row starts a cylinder; follow upward gluings
        stack = [i]
        used[i] = True
        j = i
        while not cut_above[j]:
            j = row_of[o.v(rows[j][0])]
            if used[j]:
                raise RuntimeError("cylinder scan revisited a row")
            used[j] = True
            stack.append(j)
        cyl_rows = tuple(rows[j] for j in stack)
        widths = {len(r) for r in cyl_rows}
        if len(widths) != 1:
            raise RuntimeError("glued rows with different widths")
        bottom, top = cyl_rows[0], cyl_rows[-1]
        s1 = sum(1 for x in bottom if x in marked)
        s2 = sum(1 for x in top if o.v(x) in marked)
        cylinders.append(Cylinder(cyl_rows, s1, s2))
    if not all(used):
        raise RuntimeError("cylinder scan missed a row")
    cylinders.sort(key=lambda c: c.rows[0][0])
    return CylinderDecomposition(HORIZONTAL, tuple(cylinders))


def decomposition_in_direction(o: Origami, d: Direction,
                               marked: frozenset | None = None
                               ) -> CylinderDecomposition:
    """Cylinder decomposition in direction d.

    Applies the reducing matrix U (as a word in S and T) and takes the
    horizontal decomposition of the transformed origami.  The square
    labels in the result refer to the transformed origami.  An explicit
    marked set cannot be transported through the relabelling, so it is
    only accepted for the horizontal direction.
    """
    if d == HORIZONTAL:
        return horizontal_decomposition(o, marked)
    if marked is not None:
        raise ValueError("explicit marking only supported horizontally")
    u = reduce_direction(d)
    o_d = act_word(word_decompose(u), o)
    dec = horizontal_decomposition(o_d)
    return CylinderDecomposition(d, dec.cylinders)


def transformed_origami(o: Origami, d: Direction) -> Origami:
    """The origami whose horizontal direction realizes direction d."""
    if d == HORIZONTAL:
        return o
    return act_word(word_decompose(reduce_direction(d)), o)


def moduli_ratio_check(dec: CylinderDecomposition) -> list:
    """All pairwise modulus ratios mod_i / mod_j as exact Fractions,
    row-major over ordered pairs (i, j), i != j."""
    mods = dec.moduli
    out = []
    for i, a in enumerate(mods):
        for j, b in enumerate(mods):
            if i != j:
                out.append(a / b)
    return out


def bottom_circle_gaps(o: Origami, dec: CylinderDecomposition,
                       marked: frozenset | None = None) -> list:
    """Gaps between consecutive marked corners along each bottom circle.

    Every saddle connection of the horizontal foliation lies on exactly
    one bottom circle, so the multiset of gaps lists the horizontal
    saddle-connection lengths (integers).  Circles without marked
    corners contribute nothing.
    """
    if marked is None:
        marked = marked_square_set(o)
    gaps = []
    for cyl in dec.cylinders:
        bottom = cyl.rows[0]
        positions = [i for i, x in enumerate(bottom) if x in marked]
        if not positions:
            continue
        w = len(bottom)
        for a, b in zip(positions, positions[1:] + [positions[0] + w]):
            gaps.append(b - a)
    return gaps
