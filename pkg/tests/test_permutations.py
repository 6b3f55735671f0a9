import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics import PermutationGroup

from blaschke_dyn.permutations import (
    BlockSystem,
    Permutation,
    all_block_systems,
    divisors,
    group_order,
    is_primitive,
    is_transitive,
    minimal_block,
    orbit,
    product,
)


def _sym(perms):
    return PermutationGroup([SymPerm(list(p.zero_based)) for p in perms])


def _brute_blocks(gens, n):
    """Blocks through point 0, by checking every subset against every group element."""
    imgs = [el.array_form for el in _sym(gens).generate()]
    out = set()
    for d in divisors(n):
        if d in (1, n):
            continue
        for rest in itertools.combinations(range(1, n), d - 1):
            block = frozenset((0,) + rest)
            if all(frozenset(img[i] for i in block) in (block,) or
                   not (frozenset(img[i] for i in block) & block) for img in imgs):
                out.add(block)
    return out


perm_lists = st.integers(2, 7).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3))


def test_construction_and_cycles():
    p = Permutation.from_cycles(5, [(1, 2, 3)])
    assert p.images == (2, 3, 1, 4, 5)
    assert p.cycle_type() == (1, 1, 3)
    assert p.order() == 3
    assert (p * p.inverse()).is_identity()
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_composition_convention():
    a = Permutation.from_cycles(3, [(1, 2)])
    b = Permutation.from_cycles(3, [(2, 3)])
    # (a * b)(i) = a(b(i))
    assert (a * b)(2) == a(b(2))
    assert a.then(b) == b * a
    assert product([a, b], 3) == b * a


@settings(max_examples=60, deadline=None)
@given(perm_lists)
def test_group_order_and_transitivity_match_sympy(lists):
    gens = [Permutation.from_zero_based(p) for p in lists]
    n = gens[0].degree
    g = _sym(gens)
    assert group_order(gens, n) == g.order()
    assert is_transitive(gens, n) == g.is_transitive()
    assert sorted(orbit(gens, 1, n)) == sorted(i + 1 for i in g.orbit(0))


@settings(max_examples=60, deadline=None)
@given(perm_lists)
def test_block_systems_match_brute_force(lists):
    gens = [Permutation.from_zero_based(p) for p in lists]
    n = gens[0].degree
    if not is_transitive(gens, n):
        return
    got = set()
    for s in all_block_systems(gens, n):
        assert s.is_proper and n % s.block_size == 0
        assert all(len(b) == s.block_size for b in s.blocks)
        got.add(frozenset(i - 1 for i in next(b for b in s.blocks if 1 in b)))
    assert got == _brute_blocks(gens, n)
    assert is_primitive(gens, n) == _sym(gens).is_primitive()


def test_cyclic_blocks_are_divisors():
    for n in range(2, 13):
        c = Permutation.from_cycles(n, [tuple(range(1, n + 1))])
        sizes = sorted(s.block_size for s in all_block_systems([c], n))
        assert sizes == [d for d in divisors(n) if 1 < d < n]


def test_minimal_block_example():
    c = Permutation.from_cycles(6, [(1, 2, 3, 4, 5, 6)])
    assert minimal_block([c], 6, [0, 3]) == [(0, 3), (1, 4), (2, 5)]
    assert minimal_block([c], 6, [0, 1]) == [(0, 1, 2, 3, 4, 5)]


def test_block_system_properties():
    s = BlockSystem(((1, 4), (2, 5), (3, 6)))
    assert s.block_size == 2 and s.n == 6 and s.is_proper
    assert s.as_lists() == [[1, 4], [2, 5], [3, 6]]
