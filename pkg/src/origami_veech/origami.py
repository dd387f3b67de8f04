"""Square-tiled surfaces (origamis) as pairs of permutations.

An origami is a finite set of unit squares {1..n} together with two
permutations: h sends each square to its right neighbour, v to its upper
neighbour.  The pair must act transitively, otherwise the surface is
disconnected.  All structure of the translation surface is recovered from
(h, v): cone points are the cycles of the commutator h v h^-1 v^-1, the
genus comes from the Euler characteristic, and the translation
automorphisms are the permutations commuting (or anti-commuting) with
both h and v.

Squares are labelled 1..n and composition is right to left throughout:
(p * q)(s) = p(q(s)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class OrigamiError(ValueError):
    """Base class for invalid origami input."""


class ParseError(OrigamiError):
    """Text does not match the origami or permutation grammar."""


class BijectionError(OrigamiError):
    """Alleged permutation is not a bijection of {1..n}."""


class ConnectivityError(OrigamiError):
    """The pair (h, v) does not act transitively."""


class UnstableTypeError(OrigamiError):
    """Surface has no marked vertex, so the type (g, n) is unstable."""


_CYCLE_RE = re.compile(r"\(([^()]*)\)")
_LIST_RE = re.compile(r"\[([^\[\]]*)\]")


class Permutation:
    """Bijection of {1..n}, immutable and hashable.

    The images tuple is 0-indexed internally: images[i] is the image of
    i+1.  Composition is (p * q)(s) = p(q(s)).
    """

    __slots__ = ("_images",)

    def __init__(self, images):
        imgs = tuple(images)
        n = len(imgs)
        seen = [False] * n
        for x in imgs:
            if not isinstance(x, int) or not 1 <= x <= n or seen[x - 1]:
                raise BijectionError(
                    f"images {imgs} do not define a bijection of 1..{n}")
            seen[x - 1] = True
        self._images = imgs

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        """Permutation of {1..n} from a list of cycles (fixed points omitted)."""
        images = list(range(1, n + 1))
        touched = set()
        for cyc in cycles:
            cyc = tuple(cyc)
            for x in cyc:
                if not isinstance(x, int) or not 1 <= x <= n:
                    raise BijectionError(f"cycle entry {x!r} outside 1..{n}")
                if x in touched:
                    raise BijectionError(f"square {x} appears in two cycles")
                touched.add(x)
            for i, x in enumerate(cyc):
                images[x - 1] = cyc[(i + 1) % len(cyc)]
        return cls(images)

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        """Parse cycle notation '(1 2)(3 5)' or an image list '[2,1,3]'.

        Cycle entries may be separated by spaces or commas; '()' is the
        identity.  The image list must have exactly n entries.
        """
        text = text.strip()
        if not text:
            raise ParseError("empty permutation")
        if text.startswith("["):
            m = _LIST_RE.fullmatch(text)
            if m is None:
                raise ParseError(f"malformed image list {text!r}")
            body = m.group(1).strip()
            parts = [p for p in re.split(r"[,\s]+", body) if p] if body else []
            if len(parts) != n:
                raise ParseError(
                    f"image list {text!r} has {len(parts)} entries, expected {n}")
            try:
                images = [int(p) for p in parts]
            except ValueError as exc:
                raise ParseError(f"non-integer entry in {text!r}") from exc
            return cls(images)
        stripped = re.sub(r"\s+", "", text)
        if _CYCLE_RE.sub("", stripped):
            raise ParseError(f"malformed cycle notation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            body = body.strip()
            if not body:
                continue
            parts = [p for p in re.split(r"[,\s]+", body) if p]
            try:
                cycles.append(tuple(int(p) for p in parts))
            except ValueError as exc:
                raise ParseError(f"non-integer entry in cycle ({body})") from exc
        return cls.from_cycles(n, cycles)

    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def images(self) -> tuple:
        return self._images

    def __call__(self, s: int) -> int:
        return self._images[s - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(self._images[x - 1] for x in other._images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._images)
        for i, x in enumerate(self._images):
            inv[x - 1] = i + 1
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = base * result
        return result

    def is_identity(self) -> bool:
        return all(x == i + 1 for i, x in enumerate(self._images))

    def cycles(self, include_fixed: bool = True) -> list:
        """Cycles as tuples, each starting at its smallest element,
        ordered by that element."""
        seen = [False] * self.degree
        out = []
        for s in range(1, self.degree + 1):
            if seen[s - 1]:
                continue
            cyc = [s]
            seen[s - 1] = True
            t = self(s)
            while t != s:
                cyc.append(t)
                seen[t - 1] = True
                t = self(t)
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        nontrivial = self.cycles(include_fixed=False)
        if not nontrivial:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in nontrivial)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"Permutation.parse({self.cycle_string()!r}, {self.degree})"


@dataclass(frozen=True)
class Origami:
    """Transitive pair of permutations of {1..n_squares}.

    mark_all_vertices switches the marking convention: by default only
    vertices with cone angle > 2 pi are marked; with the flag every
    vertex is.
    """

    n_squares: int
    h: Permutation
    v: Permutation
    mark_all_vertices: bool = False

    def __post_init__(self):
        n = self.n_squares
        if n < 1:
            raise OrigamiError("need at least one square")
        if self.h.degree != n or self.v.degree != n:
            raise OrigamiError(
                f"permutation degree does not match n={n}")
        if not _is_transitive(self.h, self.v, n):
            raise ConnectivityError(
                "pair (h, v) is not transitive: surface is disconnected")

    def commutator(self) -> Permutation:
        """k = h v h^-1 v^-1; its cycles are the vertices."""
        return self.h * self.v * self.h.inverse() * self.v.inverse()

    def inverse_pair(self) -> "Origami":
        """The origami (h^-1, v^-1); the image under -I."""
        return Origami(self.n_squares, self.h.inverse(), self.v.inverse(),
                       self.mark_all_vertices)

    def __repr__(self) -> str:
        return (f"Origami({self.n_squares}, h={self.h.cycle_string()}, "
                f"v={self.v.cycle_string()}, mark_all={self.mark_all_vertices})")


@dataclass(frozen=True)
class Vertex:
    """Cone point of the surface: one cycle of the commutator.

    cone_multiple q means cone angle 2 pi q.  The vertex sits at the
    bottom-left corner of every square in its cycle.
    """

    squares: tuple
    cone_multiple: int
    marked: bool


@dataclass(frozen=True)
class SurfaceType:
    """Type (g, n) of the marked surface; requires 3g - 3 + n > 0."""

    g: int
    n: int

    def __post_init__(self):
        if 3 * self.g - 3 + self.n <= 0:
            raise UnstableTypeError(
                f"type ({self.g}, {self.n}) is not hyperbolic: 3g-3+n <= 0")


@dataclass(frozen=True)
class KernelElement:
    """Automorphism acting on squares by tau, with derivative sign:
    +1 for translations, -1 for point symmetries."""

    tau: Permutation
    sign: int

    def compose(self, other: "KernelElement") -> "KernelElement":
        return KernelElement(self.tau * other.tau, self.sign * other.sign)


def _is_transitive(h: Permutation, v: Permutation, n: int) -> bool:
    seen = [False] * (n + 1)
    seen[1] = True
    stack = [1]
    count = 1
    while stack:
        s = stack.pop()
        for t in (h(s), v(s)):
            if not seen[t]:
                seen[t] = True
                count += 1
                stack.append(t)
    return count == n


def parse_origami(text: str) -> Origami:
    """Parse the origami file format.

    Lines (';' also separates fields): 'n=<N>', 'h=<perm>', 'v=<perm>',
    optional 'mark_all_vertices=true|false'.  Blank lines and '#'
    comments are skipped.  Permutations use cycle notation '(1 2)(3 5)'
    (fixed points omissible, '()' identity) or an image list
    '[img1,...,imgN]'.
    """
    fields = {}
    for raw_line in text.replace(";", "\n").splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in fields:
            raise ParseError(f"duplicate field {key!r}")
        fields[key] = value
    for key in ("n", "h", "v"):
        if key not in fields:
            raise ParseError(f"missing field {key!r}")
    try:
        n = int(fields["n"])
    except ValueError as exc:
        raise ParseError(f"n={fields['n']!r} is not an integer") from exc
    if n < 1:
        raise ParseError(f"n={n} must be positive")
    mark_all = False
    if "mark_all_vertices" in fields:
        value = fields["mark_all_vertices"].lower()
        if value not in ("true", "false"):
            raise ParseError(
                f"mark_all_vertices={fields['mark_all_vertices']!r} "
                "is not true/false")
        mark_all = value == "true"
    extra = set(fields) - {"n", "h", "v", "mark_all_vertices"}
    if extra:
        raise ParseError(f"unknown field(s) {sorted(extra)}")
    h = Permutation.parse(fields["h"], n)
    v = Permutation.parse(fields["v"], n)
    return Origami(n, h, v, mark_all)


def format_origami(o: Origami) -> str:
    """Inverse of parse_origami, line form."""
    lines = [f"n={o.n_squares}",
             f"h={o.h.cycle_string()}",
             f"v={o.v.cycle_string()}"]
    if o.mark_all_vertices:
        lines.append("mark_all_vertices=true")
    return "\n".join(lines) + "\n"


def vertices(o: Origami) -> list:
    """Vertices of the surface: cycles of the commutator.

    Cone angle of a cycle of length q is 2 pi q.  Marked means cone
    angle > 2 pi, or everything when mark_all_vertices is set.
    """
    k = o.commutator()
    out = []
    for cyc in k.cycles(include_fixed=True):
        q = len(cyc)
        out.append(Vertex(cyc, q, q > 1 or o.mark_all_vertices))
    return out


def genus(o: Origami) -> int:
    """Genus from the Euler characteristic: g = (2 - V + N) / 2."""
    V = len(vertices(o))
    total = 2 - V + o.n_squares
    if total % 2 != 0:
        # the commutator is even, so V and N always match in parity
        raise RuntimeError(f"parity failure: V={V}, N={o.n_squares}")
    return total // 2


def surface_type(o: Origami) -> SurfaceType:
    """Type (g, n) where n counts marked vertices.

    Raises UnstableTypeError when no vertex is marked (then g = 1 and
    the unmarked type is not hyperbolic); pass mark_all_vertices.
    """
    verts = vertices(o)
    n_marked = sum(1 for u in verts if u.marked)
    if n_marked == 0:
        raise UnstableTypeError(
            "no marked vertex (every cone angle is 2 pi); "
            "set mark_all_vertices to mark them all")
    return SurfaceType(genus(o), n_marked)


def _propagate(o: Origami, t: int, sign: int):
    """Automorphism with tau(1) = t and the given derivative sign,
    or None.

    sign +1: tau h = h tau and tau v = v tau.  sign -1: tau h = h^-1 tau
    and tau v = v^-1 tau.  Transitivity makes the extension unique, so a
    single sweep either fills tau consistently or proves there is none.
    """
    n = o.n_squares
    h, v = o.h, o.v
    if sign == 1:
        hh, vv = h, v
    else:
        hh, vv = h.inverse(), v.inverse()
    tau = [0] * (n + 1)
    tau[1] = t
    stack = [1]
    while stack:
        s = stack.pop()
        for step, step_img in ((h, hh), (v, vv)):
            s2 = step(s)
            want = step_img(tau[s])
            if tau[s2] == 0:
                tau[s2] = want
                stack.append(s2)
            elif tau[s2] != want:
                return None
    images = tau[1:]
    if len(set(images)) != n:
        return None
    return Permutation(images)


def kernel_of_D(o: Origami) -> list:
    """All translations (+1) and point symmetries (-1) of the surface.

    Elements are found by propagating tau(1) = t through the square
    adjacencies for each candidate t and each sign.  The result is a
    group under composition; its size divides 2 * n_squares because
    both sign classes act freely.
    """
    out = []
    for sign in (1, -1):
        for t in range(1, o.n_squares + 1):
            tau = _propagate(o, t, sign)
            if tau is not None:
                out.append(KernelElement(tau, sign))
    return out


def translations(o: Origami) -> list:
    """Just the sign +1 elements of kernel_of_D."""
    return [k.tau for k in kernel_of_D(o) if k.sign == 1]


def quotient_by_translations(o: Origami):
    """Quotient origami by the full translation subgroup.

    Returns (quotient, projection) where projection[s] is the 1-based
    quotient square of square s (projection[0] unused).  Quotient
    squares are the translation orbits, numbered by smallest member.
    The translation subgroup acts freely, so h and v descend.
    """
    taus = translations(o)
    n = o.n_squares
    orbit_of = [0] * (n + 1)
    orbits = []
    for s in range(1, n + 1):
        if orbit_of[s]:
            continue
        members = sorted({tau(s) for tau in taus})
        orbits.append(members)
        for x in members:
            orbit_of[x] = len(orbits)
    m = len(orbits)
    h_img = [0] * m
    v_img = [0] * m
    for i, members in enumerate(orbits):
        rep = members[0]
        h_img[i] = orbit_of[o.h(rep)]
        v_img[i] = orbit_of[o.v(rep)]
    quotient = Origami(m, Permutation(h_img), Permutation(v_img),
                       o.mark_all_vertices)
    return quotient, tuple(orbit_of)
