"""Bound formulas and the per-origami verification battery.

The formulas bound the number of holomorphic sections of the family
over the Veech-group quotient in terms of the surface type (g, n), the
group signature (p; nu_1..nu_k), cusp data b0 and c1, the kernel order,
and the cylinder moduli.  Everything rational is exact (Fraction);
transcendental comparisons run in floats with a relative guard band,
which is safe because no inequality here can be genuinely tight.

verify_all runs the whole battery on one origami and returns a report
whose checks[] list is stable and JSON friendly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cylinders import (HORIZONTAL, VERTICAL, CylinderDecomposition, Direction,
                        bottom_circle_gaps, horizontal_decomposition,
                        marked_square_set, transformed_origami)
from .origami import (Origami, kernel_of_D, quotient_by_translations,
                      surface_type, vertices)
from .veech import (OrigamiClass, c1_search, mat_det, membership,
                    orbit_and_stabilizer, signature)

GUARD = 1e-9


def float_close(a: float, b: float, guard: float) -> bool:
    return abs(a - b) <= guard * max(1.0, abs(a), abs(b))


def float_leq(a: float, b: float, guard: float = GUARD) -> bool:
    """a <= b up to a relative guard band.

    Strict and non-strict claims share this test: the verified
    inequalities are never genuinely tight, so the band only absorbs
    rounding.
    """
    return a <= b + guard * max(1.0, abs(a), abs(b))


def landau(m: int) -> int:
    """Landau's function G(m): largest lcm of a partition of m.

    Knapsack over prime powers: an optimal partition may be assumed to
    consist of prime powers plus padding 1s, and each prime contributes
    through a single power.  best[j] is the largest lcm with parts
    summing to at most j.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    best = [1] * (m + 1)
    for p in _primes_up_to(m):
        for j in range(m, p - 1, -1):
            pk = p
            while pk <= j:
                cand = best[j - pk] * pk
                if cand > best[j]:
                    best[j] = cand
                pk *= p
    return best[m]


def _primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def landau_exp_bound(m: int) -> float:
    """exp(m/e), an upper bound for G(m)."""
    return math.exp(m / math.e)


def massias_bound(m: int) -> float:
    """exp(1.05313 sqrt(m ln m)), Massias's upper bound; needs m >= 2."""
    if m < 2:
        raise ValueError("Massias bound needs m >= 2")
    return math.exp(1.05313 * math.sqrt(m * math.log(m)))


def massias_comparison(m: int):
    """Which of the two G(m) upper bounds is smaller at m.

    Returns (name, exp_value, massias_value) with name 'exp' or
    'massias'.  The exp form wins for m <= 27, Massias from m = 28 on.
    """
    ev = landau_exp_bound(m)
    mv = massias_bound(m)
    return ("exp" if ev <= mv else "massias", ev, mv)


def _validate_type(g: int, n: int) -> int:
    t = 3 * g - 3 + n
    if t <= 0:
        raise ValueError(f"type ({g}, {n}) not hyperbolic: 3g-3+n = {t} <= 0")
    return t


def thm31_bound(g: int, n: int, p: int, k: int) -> float:
    """32 pi (2p-2+k) t^2 (2t + 3 e^(5t/e)) with t = 3g-3+n."""
    t = _validate_type(g, n)
    if 2 * p - 2 + k <= 0:
        raise ValueError(f"2p-2+k = {2 * p - 2 + k} <= 0")
    return 32 * math.pi * (2 * p - 2 + k) * t * t \
        * (2 * t + 3 * math.exp(5 * t / math.e))


def thm32_rhs(g: int, n: int, p: int, nu_list) -> float:
    """4 pi e^(5t/e) (2p - 2 + sum(1 - 1/nu)); nu entries are integers
    >= 2 or math.inf."""
    t = _validate_type(g, n)
    s = Fraction(2 * p - 2)
    for nu in nu_list:
        if nu == math.inf:
            s += 1
        else:
            if nu < 2:
                raise ValueError(f"elliptic order {nu} < 2")
            s += 1 - Fraction(1, nu)
    if s <= 0:
        raise ValueError(f"signature not hyperbolic: 2p-2+sum = {s} <= 0")
    return 4 * math.pi * math.exp(5 * t / math.e) * float(s)


def simple_js_bound(g: int, n: int, p: int, k: int) -> float:
    """32 pi (2p-2+k) t^2 (3g-2+n) - 2g + 2."""
    t = _validate_type(g, n)
    if 2 * p - 2 + k <= 0:
        raise ValueError(f"2p-2+k = {2 * p - 2 + k} <= 0")
    return 32 * math.pi * (2 * p - 2 + k) * t * t * (3 * g - 2 + n) \
        - 2 * g + 2


def prop_bound(b0: int, c1: int, ker_order: int, moduli) -> Fraction:
    """2 b0 c1 K sum_i (K + 3 mod_i / b0), exact."""
    total = Fraction(0)
    for mod in moduli:
        total += ker_order + 3 * Fraction(mod) / b0
    return 2 * b0 * c1 * ker_order * total


def ij0_bound(b0: int, ker_order: int, modulus) -> int:
    """ceil(b0 K / mod_i): twist steps per cylinder, exact ceiling."""
    r = Fraction(b0 * ker_order) / Fraction(modulus)
    return -(-r.numerator // r.denominator)


def rational_lcm(fractions_) -> Fraction:
    """Least positive rational L with L/f integral for every f:
    lcm of numerators over gcd of denominators (lowest terms)."""
    fracs = [Fraction(f) for f in fractions_]
    if not fracs:
        raise ValueError("empty moduli list")
    return Fraction(math.lcm(*(f.numerator for f in fracs)),
                    math.gcd(*(f.denominator for f in fracs)))


def integer_moduli_lcm(fractions_) -> int:
    """Least positive integer L with L/f integral for every f:
    lcm of the numerators in lowest terms."""
    fracs = [Fraction(f) for f in fractions_]
    if not fracs:
        raise ValueError("empty moduli list")
    return math.lcm(*(f.numerator for f in fracs))


def reduced_certificate(o: Origami):
    """Try to certify that the marked relative period lattice is Z^2.

    Collects saddle-connection vectors in directions 0, inf and 1: in
    direction (p, q) the gaps between marked corners along bottom
    circles are integer multiples of (q, p), and their gcd g gives the
    vector g (q, p).  The certificate holds when the collected vectors
    generate Z^2, i.e. the gcd of their pairwise determinants is 1.

    Returns (certified, vectors).  One-sided: False only means the
    three probed directions cannot tell.
    """
    vecs = []
    for d in (HORIZONTAL, VERTICAL, Direction(1, 1)):
        o_d = transformed_origami(o, d)
        marked = marked_square_set(o_d)
        if not marked:
            continue
        dec = horizontal_decomposition(o_d, marked)
        gaps = bottom_circle_gaps(o_d, dec, marked)
        if gaps:
            g = math.gcd(*gaps)
            vecs.append((g * d.q, g * d.p))
    dets = [abs(v[0] * w[1] - v[1] * w[0])
            for i, v in enumerate(vecs) for w in vecs[i + 1:]]
    dets = [d for d in dets if d]
    certified = bool(dets) and math.gcd(*dets) == 1
    return certified, vecs


@dataclass(frozen=True)
class CheckResult:
    """One verified (in)equality: lhs relation rhs.

    exact means integer or rational arithmetic end to end; otherwise
    floats with the guard band.
    """

    name: str
    relation: str
    lhs: object
    rhs: object
    passed: bool
    exact: bool


@dataclass(frozen=True)
class DirectionReport:
    """Per-direction geometry: the decomposition, the cusp width b0 of
    that direction's class, and the effective twist data."""

    direction: Direction
    b0: int
    decomposition: CylinderDecomposition
    alpha_eff: Fraction
    n_i: tuple
    moduli_lcm_int: int
    ij0: tuple


@dataclass(frozen=True)
class BoundsReport:
    origami: Origami
    genus: int
    n_marked: int
    cone_multiples: tuple
    kernel_order: int
    kernel_translations: int
    kernel_has_minus: bool
    sig: object
    reduced_certified: bool
    warnings: tuple
    directions: tuple
    checks: tuple
    prop: Fraction
    thm31: float
    thm32: float
    simple_js: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_all(o: Origami, directions=None, orbit_cap: int = 10 ** 6
               ) -> BoundsReport:
    """Run every check the formulas support on one origami.

    directions defaults to slopes 0, inf, 1.  Raises UnstableTypeError
    for surfaces without marked vertices, OrbitCapError past the cap.
    The horizontal decomposition is always computed (the global checks
    need it) but only reported when requested.
    """
    if directions is None:
        directions = [HORIZONTAL, VERTICAL, Direction(1, 1)]
    dirs = []
    for d in directions:
        if d not in dirs:
            dirs.append(d)

    st = surface_type(o)
    g, n = st.g, st.n
    t = 3 * g - 3 + n
    verts = vertices(o)
    cone_multiples = tuple(sorted((u.cone_multiple for u in verts),
                                  reverse=True))

    kernel = kernel_of_D(o)
    ker_order = len(kernel)
    n_trans = sum(1 for e in kernel if e.sign == 1)
    has_minus = any(e.sign == -1 for e in kernel)
    translation_only = not has_minus

    table = orbit_and_stabilizer(o, cap=orbit_cap)
    sig = signature(table)
    c1, witness = c1_search(table, sig)
    sig = sig.with_c1(c1, witness)

    checks = []

    def check(name, relation, lhs, rhs, passed, exact):
        checks.append(CheckResult(name, relation, lhs, rhs, passed, exact))

    # global: exact area identity and the two float routes
    check("area_exact_identity", "==", sig.area_over_pi,
          2 * sig.orbifold_sum, sig.area_over_pi == 2 * sig.orbifold_sum,
          True)
    area_a = math.pi * sig.mu / 3
    area_b = 2 * math.pi * float(sig.orbifold_sum)
    check("area_two_routes", "==", area_a, area_b,
          float_close(area_a, area_b, 1e-12), False)

    check("kernel_bound", "<=", ker_order, 4 * t, ker_order <= 4 * t, True)
    check("kernel_order_divides_2n", "divides", ker_order, 2 * o.n_squares,
          (2 * o.n_squares) % ker_order == 0, True)

    b0c1 = sig.b0 * c1
    area = sig.area
    check("b0c1_positive", ">=", b0c1, 1, b0c1 >= 1, True)
    check("b0c1_le_area", "<=", float(b0c1), area,
          float_leq(float(b0c1), area), False)
    check("b0c1_lt_area_bound", "<", float(b0c1), area - sig.k0 + 1,
          float_leq(float(b0c1), area - sig.k0 + 1), False)

    wit_ok = (witness[1][0] == c1 and mat_det(witness) == 1
              and membership(witness, table))
    check("c1_witness_valid", "==", wit_ok, True, wit_ok, True)

    thm32 = thm32_rhs(g, n, sig.p, sig.nu_list)

    # per-direction battery; horizontal always computed for the globals
    reports = []
    horizontal_dec = None
    horizontal_b0 = None
    loop_dirs = dirs if HORIZONTAL in dirs else dirs + [HORIZONTAL]
    for d in loop_dirs:
        o_d = transformed_origami(o, d)
        if surface_type(o_d) != st:
            raise RuntimeError(f"type changed under direction {d}")
        dec = horizontal_decomposition(o_d)
        dec = CylinderDecomposition(d, dec.cylinders)
        idx = table.index_of(OrigamiClass.of(o_d))
        b0_d = table.cusp_width_at(idx)
        moduli = dec.moduli
        alpha = rational_lcm(moduli) / b0_d
        n_i = tuple(alpha * b0_d / mod for mod in moduli)
        lcm_int = integer_moduli_lcm(moduli)
        ij0 = tuple(ij0_bound(b0_d, ker_order, mod) for mod in moduli)
        if d == HORIZONTAL:
            horizontal_dec = dec
            horizontal_b0 = b0_d
        if d not in dirs:
            continue
        reports.append(DirectionReport(d, b0_d, dec, alpha, n_i,
                                       lcm_int, ij0))
        tag = d.slope_string()
        ssum = sum(c.s1 + c.s2 for c in dec.cylinders)
        check(f"moduli_positive[{tag}]", ">", min(moduli), 0,
              min(moduli) > 0, True)
        check(f"euler_identity[{tag}]", "==", ssum, 2 * (2 * g - 2 + n),
              ssum == 2 * (2 * g - 2 + n), True)
        check(f"sc_count_bound[{tag}]", "<=", ssum, 4 * t,
              ssum <= 4 * t, True)
        check(f"cylinder_count_bound[{tag}]", "<=", dec.m, t,
              dec.m <= t, True)
        check(f"b0_divides_moduli_lcm[{tag}]", "divides", b0_d, lcm_int,
              lcm_int % b0_d == 0, True)
        ni_ok = all(x.denominator == 1 and x >= 1 for x in n_i)
        check(f"alpha_ni_integer[{tag}]", "integer>=1", n_i, None,
              ni_ok, True)
        alpha_cap = 2 * math.exp(5 * t / math.e)
        check(f"alpha_bound[{tag}]", "<", float(alpha), alpha_cap,
              float_leq(float(alpha), alpha_cap), False)
        ratios = [Fraction(b0_d) / mod for mod in moduli]
        lo = 0.5 * math.exp(-5 * t / math.e)
        hi = 2 * math.exp(5 * t / math.e) * area * area
        check(f"ratio_lemma_lower[{tag}]", ">", float(min(ratios)), lo,
              float_leq(lo, float(min(ratios))), False)
        check(f"ratio_lemma_upper[{tag}]", "<", float(max(ratios)), hi,
              float_leq(float(max(ratios)), hi), False)
        worst = math.sqrt(float(max(moduli) / min(moduli)))
        check(f"thm32_moduli_ratio[{tag}]", "<", worst, thm32,
              float_leq(worst, thm32), False)
        if translation_only:
            ratios_q = _quotient_moduli_ratios(o_d, dec)
            check(f"quotient_moduli_lower[{tag}]", ">=",
                  min(r * ker_order for r in ratios_q), 1,
                  min(r * ker_order for r in ratios_q) >= 1, True)
            check(f"quotient_moduli_upper[{tag}]", "<=",
                  max(ratios_q), 2, max(ratios_q) <= 2, True)

    # headline formulas on the horizontal data
    prop = prop_bound(sig.b0, c1, ker_order, horizontal_dec.moduli)
    thm31 = thm31_bound(g, n, sig.p, sig.k)
    sjs = simple_js_bound(g, n, sig.p, sig.k)
    check("prop_le_thm31", "<=", float(prop), thm31,
          float_leq(float(prop), thm31), False)
    if horizontal_b0 != sig.b0:
        raise RuntimeError("basepoint cusp width mismatch")

    certified, _vecs = reduced_certificate(o)
    warnings = ()
    if not certified:
        warnings = ("surface not certified reduced: the computed group "
                    "is the stabilizer in PSL(2,Z), a finite-index "
                    "subgroup of the full affine group image",)

    return BoundsReport(
        origami=o, genus=g, n_marked=n, cone_multiples=cone_multiples,
        kernel_order=ker_order, kernel_translations=n_trans,
        kernel_has_minus=has_minus, sig=sig,
        reduced_certified=certified, warnings=warnings,
        directions=tuple(reports), checks=tuple(checks),
        prop=prop, thm31=thm31, thm32=thm32, simple_js=sjs)


def _quotient_moduli_ratios(o_d: Origami, dec: CylinderDecomposition):
    """mod'(image cylinder) / mod(cylinder) for each cylinder, exact.

    The quotient inherits the image marking: a quotient square is
    marked when any preimage square is.  That set contains every
    singular vertex downstairs, so the decomposition is well defined.
    """
    q_o, proj = quotient_by_translations(o_d)
    marked_up = marked_square_set(o_d)
    marked_down = frozenset(proj[s] for s in marked_up)
    dec_q = horizontal_decomposition(q_o, marked=marked_down)
    cyl_of = {}
    for idx, cyl in enumerate(dec_q.cylinders):
        for row in cyl.rows:
            for s in row:
                cyl_of[s] = idx
    ratios = []
    for cyl in dec.cylinders:
        rep = cyl.rows[0][0]
        mod_down = dec_q.cylinders[cyl_of[proj[rep]]].modulus
        ratios.append(mod_down / cyl.modulus)
    return ratios
