"""Numerical monodromy of a finite Blaschke product over its critical values.

The fibre over a base point is continued along a loop around each interior
critical value; reading off where each sheet ends gives a permutation of
the (lexicographically sorted) fibre.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .blaschke import critical_data, poly_roots
from .errors import DomainError, NumericalError
from .permutations import (Permutation, all_block_systems, divisors, group_order,
                           is_transitive, product)

MATCH_RADIUS = 1e-6
CIRCLE_SIDES = 64
RADIUS_FRACTION = 0.25
MAX_SHRINKS = 3


@dataclass(frozen=True)
class MonodromyRep:
    base_point: complex
    critical_values: tuple
    loops: tuple
    degree: int
    fiber: tuple = field(repr=False, default=())
    boundary_loop: Permutation = None
    loop_radius: float = 0.0

    def generators(self):
        return list(self.loops)

    def is_transitive(self):
        return is_transitive(self.loops, self.degree)

    def ordered_product(self):
        """Loops composed in critical-value order (first loop applied first)."""
        return product(self.loops, self.degree)

    def ramification_deficiency(self):
        """Sum over loops of n minus the number of cycles."""
        return sum(self.degree - len(p.cycle_type()) for p in self.loops)

    def group_order(self):
        return group_order(self.loops, self.degree)


def _fiber(f, w):
    roots = poly_roots(f.numerator() - w * f.denominator(), polish_steps=3)
    if roots.size != f.degree:
        raise NumericalError("fibre has the wrong size", w=w, found=roots.size)
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def _segment_distance(p, a, b):
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = ((p - a) * np.conj(ab)).real / abs(ab) ** 2
    s = min(1.0, max(0.0, s))
    return abs(p - (a + s * ab))


def _choose_base(values, rho, candidates=720):
    """Angle on |w| = rho maximising the clearance of the spoke paths."""
    if len(values) == 1:
        return rho * np.exp(0.1j), rho - abs(values[0])
    best = None
    for th in 2.0 * np.pi * (np.arange(candidates) + 0.5) / candidates:
        b = rho * np.exp(1j * th)
        clear = min(abs(b - v) for v in values)
        for i, v in enumerate(values):
            for j, w in enumerate(values):
                if i != j:
                    clear = min(clear, _segment_distance(w, b, v))
        if best is None or clear > best[1]:
            best = (b, clear)
    return best


def _densify(points, max_step):
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        m = max(1, int(math.ceil(abs(b - a) / max_step)))
        out.extend(a + (b - a) * np.arange(1, m + 1) / m)
    return np.array(out, dtype=complex)


def _loop_path(base, v, r):
    direction = (base - v) / abs(base - v)
    start = v + r * direction
    ang0 = np.angle(direction)
    circle = v + r * np.exp(1j * (ang0 + 2.0 * np.pi * np.arange(CIRCLE_SIDES + 1) / CIRCLE_SIDES))
    pts = np.concatenate([[base], [start], circle[1:], [base]])
    return _densify(pts, max(r, 1e-3))


def _track(f, path, fiber, min_sep):
    z_end, status, _ = kernels.track_path(f.rho, f.zeros_array, path, fiber,
                                          max_halvings=40, min_sep=min_sep)
    return np.asarray(z_end), int(status)


def _match(fiber, ends, radius=MATCH_RADIUS):
    images = []
    for z in ends:
        d = np.abs(fiber - z)
        j = int(np.argmin(d))
        if d[j] > radius:
            return None
        images.append(j)
    if len(set(images)) != len(images):
        return None
    return Permutation.from_zero_based(images)


def numerical_monodromy(f, loop_radius=None, min_sep=1e-6):
    """Monodromy representation of f around each interior critical value."""
    n = f.degree
    if n < 2:
        raise DomainError("monodromy needs degree >= 2")
    values = list(critical_data(f).critical_values)
    rho = 0.5 * (max(abs(v) for v in values) + 1.0)
    base, clearance = _choose_base(values, rho)
    if len(values) > 1:
        sep = min(abs(a - b) for i, a in enumerate(values) for b in values[i + 1:])
        r = RADIUS_FRACTION * sep
    else:
        r = RADIUS_FRACTION * (rho - abs(values[0]))
    r = min(r, 0.5 * clearance) if clearance > 0 else r
    if loop_radius is not None:
        r = float(loop_radius)
    # order loops by the direction in which they leave the base point
    values.sort(key=lambda v: np.angle((v - base) / -base))
    fiber = _fiber(f, base)
    loops = []
    for v in values:
        radius = r
        perm = None
        for _ in range(MAX_SHRINKS + 1):
            path = _loop_path(base, v, radius)
            ends, status = _track(f, path, fiber, min_sep)
            if status == kernels.TRACK_OK:
                perm = _match(fiber, ends)
                if perm is not None:
                    break
            radius *= 0.5
        if perm is None:
            raise NumericalError("continuation around a critical value failed",
                                 critical_value=v, radius=radius, status=status)
        loops.append(perm)
    circle = _densify(base * np.exp(2j * np.pi * np.arange(CIRCLE_SIDES * 2 + 1) / (CIRCLE_SIDES * 2)),
                      0.05)
    ends, status = _track(f, circle, fiber, min_sep)
    boundary = _match(fiber, ends) if status == kernels.TRACK_OK else None
    return MonodromyRep(complex(base), tuple(complex(v) for v in values), tuple(loops), n,
                        tuple(complex(z) for z in fiber), boundary, float(r))


def block_systems(rep):
    if not rep.is_transitive():
        raise DomainError("block systems need a transitive monodromy group")
    return all_block_systems(list(rep.loops), rep.degree)


def _lattice_closed(sizes):
    s = set(sizes)
    for a in s:
        for b in s:
            if math.gcd(a, b) not in s or a * b // math.gcd(a, b) not in s:
                return False
    return True


@dataclass(frozen=True)
class DegreeLattice:
    degrees: frozenset
    has_full_cycle: bool
    lattice_closed: bool

    def proper(self):
        return sorted(d for d in self.degrees if d not in (1, max(self.degrees)))


def factor_degree_lattice(f, rep=None):
    """Block sizes of the monodromy group together with 1 and deg f."""
    rep = numerical_monodromy(f) if rep is None else rep
    n = rep.degree
    sizes = {1, n} | {s.block_size for s in block_systems(rep)}
    gens = list(rep.loops) + ([rep.boundary_loop] if rep.boundary_loop else [])
    full = any(p.cycle_type() == (n,) for p in gens)
    closed = _lattice_closed(sizes)
    if full and not all(d in divisors(n) for d in sizes):
        raise NumericalError("block sizes do not divide the degree", sizes=sorted(sizes))
    return DegreeLattice(frozenset(sizes), full, closed)
