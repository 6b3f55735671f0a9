"""Small permutation-group toolkit: permutations, closure, transitivity, blocks.

Points are labelled 1..n in the public interface (cycle notation, images);
internally everything is 0-based.
"""

from collections import deque
from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, stored as the tuple of images (1-based)."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, arr):
        return cls(tuple(int(i) + 1 for i in arr))

    @classmethod
    def from_cycles(cls, n, cycles):
        img = list(range(1, n + 1))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def degree(self):
        return len(self.images)

    @property
    def zero_based(self):
        return tuple(i - 1 for i in self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        """(self * other)(i) = self(other(i)): apply ``other`` first."""
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def then(self, other):
        """Apply self, then other."""
        return other * self

    def inverse(self):
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images, start=1))

    def cycles(self, include_fixed=False):
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self):
        """Sorted cycle lengths, fixed points included."""
        return tuple(sorted(len(c) for c in self.cycles(include_fixed=True)))

    def order(self):
        out = 1
        for length in self.cycle_type():
            out = out * length // gcd(out, length)
        return out

    def conjugate(self, relabel):
        """relabel * self * relabel^-1."""
        return relabel * self * relabel.inverse()

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(i) for i in c) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self})"


def product(perms, n=None):
    """perms[0] applied first, then perms[1], and so on."""
    perms = list(perms)
    if not perms:
        if n is None:
            raise ValueError("empty product needs the degree")
        return Permutation.identity(n)
    out = perms[0]
    for p in perms[1:]:
        out = out.then(p)
    return out


def orbit(gens, point, n=None):
    """Orbit of a 1-based point under the group generated by ``gens``."""
    seen = {point}
    todo = [point]
    while todo:
        i = todo.pop()
        for g in gens:
            j = g(i)
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return seen


def is_transitive(gens, n):
    if n == 1:
        return True
    if not gens:
        return False
    return len(orbit(gens, 1)) == n


def group_elements(gens, n, limit=500_000):
    """All elements of <gens> by breadth-first closure (small groups only)."""
    ident = Permutation.identity(n)
    seen = {ident.images: ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h.images not in seen:
                seen[h.images] = h
                if len(seen) > limit:
                    raise OverflowError("group closure exceeded the element limit")
                queue.append(h)
    return list(seen.values())


def group_order(gens, n, limit=500_000):
    return len(group_elements(gens, n, limit))


# ---------------------------------------------------------------------------
# block systems
# ---------------------------------------------------------------------------

def minimal_block(gens, n, seed):
    """Smallest block containing the 0-based points in ``seed`` (Atkinson)."""
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[rb] = ra
        return True

    seed = list(seed)
    queue = deque()
    for s in seed[1:]:
        if union(seed[0], s):
            queue.append((seed[0], s))
    imgs = [g.zero_based for g in gens]
    while queue:
        a, b = queue.popleft()
        for img in imgs:
            ga, gb = img[a], img[b]
            if find(ga) != find(gb):
                union(ga, gb)
                queue.append((ga, gb))
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return sorted(tuple(sorted(c)) for c in classes.values())


@dataclass(frozen=True)
class BlockSystem:
    """Partition of {1..n} into blocks of equal size preserved by the group."""

    blocks: tuple

    @property
    def block_size(self):
        return len(self.blocks[0])

    @property
    def n(self):
        return sum(len(b) for b in self.blocks)

    @property
    def is_proper(self):
        return 1 < self.block_size < self.n

    def as_lists(self):
        return [list(b) for b in self.blocks]


def _system_from_classes(classes):
    return BlockSystem(tuple(tuple(i + 1 for i in c) for c in classes))


def all_block_systems(gens, n, proper_only=True):
    """Every block system of a transitive group, sorted by block size."""
    if not is_transitive(gens, n):
        raise ValueError("block systems are defined here for transitive groups only")
    found = {}
    frontier = []
    for i in range(1, n):
        sys_ = minimal_block(gens, n, [0, i])
        key = tuple(sys_)
        if key not in found:
            found[key] = sys_
            frontier.append(sys_)
    # close under joins: the block containing 0 determines the system
    while frontier:
        new = []
        current = list(found.values())
        for a in frontier:
            for b in current:
                block_a = next(c for c in a if 0 in c)
                block_b = next(c for c in b if 0 in c)
                joined = minimal_block(gens, n, sorted(set(block_a) | set(block_b)))
                key = tuple(joined)
                if key not in found:
                    found[key] = joined
                    new.append(joined)
        frontier = new
    systems = [_system_from_classes(c) for c in found.values()]
    if not proper_only:
        systems.append(_system_from_classes([(i,) for i in range(n)]))
    systems = [s for s in systems if s.is_proper or not proper_only]
    systems.sort(key=lambda s: (s.block_size, s.blocks))
    return systems


def is_primitive(gens, n):
    return is_transitive(gens, n) and not all_block_systems(gens, n)


def divisors(n):
    return sorted(d for d in range(1, n + 1) if n % d == 0)
