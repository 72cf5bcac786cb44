import itertools

import numpy as np
import pytest

from fmpo.graded import (
    GradedSpace,
    GradedTensor,
    HomogeneityError,
    contract,
    fuse_spaces,
    identity_matrix,
    parity_matrix,
    permute_legs,
    random_homogeneous,
    supertrace,
    tensor_from_record,
    tensor_product,
    tensor_to_record,
)

from _oracle import eval_closed_network


V11 = GradedSpace(1, 1)
V21 = GradedSpace(2, 1)


def test_space_invariants():
    with pytest.raises(ValueError):
        GradedSpace(0, 0)
    with pytest.raises(ValueError):
        GradedSpace(-1, 2)
    s = GradedSpace(2, 3)
    assert s.dim == 5
    assert [s.parity(i) for i in range(5)] == [0, 0, 1, 1, 1]


def test_homogeneity_enforced():
    arr = np.ones((2, 2), dtype=complex)
    with pytest.raises(HomogeneityError):
        GradedTensor((V11, V11), 0, arr)
    t = GradedTensor.project((V11, V11), 0, arr)
    assert t.coeffs[0, 1] == 0 and t.coeffs[1, 0] == 0
    assert t.coeffs[0, 0] == 1 and t.coeffs[1, 1] == 1
    assert t.homogeneity_defect() == 0.0


def test_tensor_is_immutable():
    t = identity_matrix(V11)
    with pytest.raises((ValueError, AttributeError)):
        t.coeffs[0, 0] = 5.0
    with pytest.raises(AttributeError):
        t.parity = 1


def test_permute_swap_signs():
    # swap of two odd basis indices flips the sign; even pairs do not
    rng = np.random.default_rng(0)
    t = random_homogeneous((V11, V11), 0, rng)
    s = permute_legs(t, (1, 0))
    assert s.coeffs[0, 0] == t.coeffs[0, 0]          # even-even
    assert s.coeffs[1, 1] == -t.coeffs[1, 1]         # odd-odd
    u = random_homogeneous((V11, V11), 1, rng)
    su = permute_legs(u, (1, 0))
    assert su.coeffs[0, 1] == u.coeffs[1, 0]         # one index even
    assert su.coeffs[1, 0] == u.coeffs[0, 1]


def test_permute_three_cycle_all_odd():
    # cycling three odd modes is a composition of two transpositions: sign +1
    odd = GradedSpace(0, 1)
    t = GradedTensor((odd,) * 3, 1, np.full((1, 1, 1), 2.5 + 1j))
    c = permute_legs(t, (1, 2, 0))
    assert c.coeffs[0, 0, 0] == t.coeffs[0, 0, 0]


def test_permute_roundtrip_exact():
    rng = np.random.default_rng(1)
    legs = (V11, V21, GradedSpace(1, 2), V11)
    t = random_homogeneous(legs, 1, rng)
    perm = (2, 0, 3, 1)
    inv = tuple(np.argsort(perm))
    back = permute_legs(permute_legs(t, perm), inv)
    assert np.array_equal(back.coeffs, t.coeffs)


def test_permute_sign_homomorphism():
    rng = np.random.default_rng(2)
    legs = (V11, V11, V21, GradedSpace(1, 2))
    t = random_homogeneous(legs, 0, rng)
    for _ in range(20):
        p = tuple(rng.permutation(4))
        q = tuple(rng.permutation(4))
        seq = permute_legs(permute_legs(t, q), p)
        composed = permute_legs(t, tuple(q[i] for i in p))
        assert np.array_equal(seq.coeffs, composed.coeffs)


def test_contract_purely_even_matches_tensordot():
    rng = np.random.default_rng(3)
    a_legs = (GradedSpace(2), GradedSpace(3), GradedSpace(2))
    b_legs = (GradedSpace(3), GradedSpace(2), GradedSpace(2))
    a = random_homogeneous(a_legs, 0, rng)
    b = random_homogeneous(b_legs, 0, rng)
    r = contract(a, b, [(1, 0), (2, 1)])
    expected = np.tensordot(a.coeffs, b.coeffs, axes=([1, 2], [0, 1]))
    assert np.allclose(r.coeffs, expected)


def test_contract_identity_pairwise_plain_trace():
    # both legs of the identity on (1,1) against itself, row against column:
    # the plain operator trace tr(1*1) = 2, with no reordering signs
    ident = identity_matrix(V11)
    r = contract(ident, ident, [(1, 0), (0, 1)])
    assert r.ndim == 0
    assert r.coeffs == pytest.approx(2.0)


def test_contract_validates_pairs():
    a = identity_matrix(V11)
    b = identity_matrix(V21)
    with pytest.raises(ValueError):
        contract(a, b, [(0, 0)])
    with pytest.raises(ValueError):
        contract(a, a, [(0, 0), (0, 1)])


def test_tensor_product_parity_and_values():
    rng = np.random.default_rng(4)
    a = random_homogeneous((V11,), 1, rng)
    b = random_homogeneous((V11,), 1, rng)
    ab = tensor_product(a, b)
    assert ab.parity == 0
    assert np.allclose(ab.coeffs, np.outer(a.coeffs, b.coeffs))
    c = random_homogeneous((V11,), 0, rng)
    assert tensor_product(a, c).parity == 1


def test_tensor_product_then_interleave_is_signed_kronecker():
    # building a ⊗ b and permuting to interleaved order reproduces the signed
    # Kronecker product computed index-by-index
    rng = np.random.default_rng(5)
    a = random_homogeneous((V11, V11), 0, rng)
    b = random_homogeneous((V11, V11), 0, rng)
    inter = permute_legs(tensor_product(a, b), (0, 2, 1, 3))
    pa = V11.parities()
    for i, j, k, l in itertools.product(range(2), repeat=4):
        sign = (-1.0) ** (pa[j] * pa[k])
        assert inter.coeffs[i, k, j, l] == pytest.approx(sign * a.coeffs[i, j] * b.coeffs[k, l])


def test_supertrace_examples():
    s = GradedSpace(2, 3)
    assert supertrace(identity_matrix(s)) == pytest.approx(2 - 3)
    assert supertrace(parity_matrix(s)) == pytest.approx(2 + 3)
    rng = np.random.default_rng(6)
    odd = random_homogeneous((s, s), 1, rng)
    assert supertrace(odd) == pytest.approx(0.0)


def test_supertrace_requires_matching_spaces():
    rng = np.random.default_rng(7)
    t = random_homogeneous((V11, V21), 0, rng)
    with pytest.raises(ValueError):
        supertrace(t)


def test_parity_matrix_examples():
    assert np.allclose(parity_matrix(GradedSpace(1, 0)).coeffs, [[1.0]])
    assert np.allclose(parity_matrix(V11).coeffs, np.diag([1.0, -1.0]))
    lam = parity_matrix(V21)
    sq = contract(lam, lam, [(1, 0)])
    assert np.allclose(sq.coeffs, np.eye(3))


def test_fuse_spaces_sorting():
    fused, order = fuse_spaces(V11, V11)
    assert fused == GradedSpace(2, 2)
    # row-major parities (0,1,1,0) -> evens first, stably
    assert list(order) == [0, 3, 1, 2]


def _random_network(rng, n_tensors=3):
    """A random closed network: tensors with spaces drawn from a small pool,
    every leg paired across distinct tensors."""
    pool = [GradedSpace(1, 1), GradedSpace(2, 1), GradedSpace(1, 0)]
    while True:
        # random multigraph on n_tensors with 3..5 edges, no self loops
        n_edges = rng.integers(3, 6)
        edges = []
        for _ in range(n_edges):
            i, j = rng.choice(n_tensors, size=2, replace=False)
            edges.append((int(i), int(j)))
        degrees = [0] * n_tensors
        for i, j in edges:
            degrees[i] += 1
            degrees[j] += 1
        if all(1 <= d <= 4 for d in degrees):
            break
    leg_counter = [0] * n_tensors
    bonds = []
    spaces = [[] for _ in range(n_tensors)]
    for i, j in edges:
        s = pool[rng.integers(len(pool))]
        spaces[i].append(s)
        spaces[j].append(s)
        bonds.append(((i, leg_counter[i]), (j, leg_counter[j])))
        leg_counter[i] += 1
        leg_counter[j] += 1
    tensors = [
        random_homogeneous(tuple(spaces[i]), int(rng.integers(2)), rng)
        for i in range(n_tensors)
    ]
    return tensors, bonds


def _twist_leg(t, leg):
    """Multiply coefficients by (-1)^{parity} along one leg (parity twist)."""
    shape = [1] * t.ndim
    shape[leg] = t.legs[leg].dim
    sign = (1.0 - 2.0 * t.legs[leg].parities().astype(float)).reshape(shape)
    return GradedTensor(t.legs, t.parity, t.coeffs * sign, check=False)


def _contract_in_order(tensors, bonds, order):
    """Contract a closed network by merging tensors pairwise in the given
    order of tensor indices, consuming all bonds between each merged pair.

    Bonds are oriented: the first slot must be passed on the ``a`` side of
    ``contract``.  If a merge puts it on the ``b`` side, the pair is flipped
    and the bond picks up a parity twist (flipping which slot stays costs
    (-1)^parity on the summed index).
    """
    current = {(ti, li): (ti, li) for ti, t in enumerate(tensors) for li in range(t.ndim)}
    tensor_map = dict(enumerate(tensors))
    groups = {i: {i} for i in range(len(tensors))}
    words = {i: [i] for i in range(len(tensors))}
    live_bonds = list(bonds)

    def merge(gi, gj):
        nonlocal live_bonds
        a, b = tensor_map[gi], tensor_map[gj]
        pairs = []
        rest = []
        for bond in live_bonds:
            (t1, l1), (t2, l2) = bond
            g1 = next(g for g, mem in groups.items() if t1 in mem)
            g2 = next(g for g, mem in groups.items() if t2 in mem)
            if {g1, g2} == {gi, gj}:
                if g1 == gi:
                    pairs.append((current[(t1, l1)][1], current[(t2, l2)][1], False))
                else:
                    pairs.append((current[(t2, l2)][1], current[(t1, l1)][1], True))
            else:
                rest.append(bond)
        assert pairs, "merge order must contract at least one bond per step"
        for pa, _, flipped in pairs:
            if flipped:
                a = _twist_leg(a, pa)
        res = contract(a, b, [(pa, pb) for pa, pb, _ in pairs])
        a_paired = {pa for pa, _, _ in pairs}
        b_paired = {pb for _, pb, _ in pairs}
        a_free = [k for k in range(a.ndim) if k not in a_paired]
        b_free = [k for k in range(b.ndim) if k not in b_paired]
        new_slots = {}
        for new_leg, old_leg in enumerate(a_free):
            new_slots[(gi, old_leg)] = new_leg
        for off, old_leg in enumerate(b_free):
            new_slots[(gj, old_leg)] = len(a_free) + off
        for slot, (t_cur, l_cur) in list(current.items()):
            if t_cur == gi and l_cur in a_free:
                current[slot] = (gi, new_slots[(gi, l_cur)])
            elif t_cur == gj and l_cur in b_free:
                current[slot] = (gi, new_slots[(gj, l_cur)])
        tensor_map[gi] = res
        groups[gi] |= groups.pop(gj)
        words[gi] = words[gi] + words.pop(gj)
        del tensor_map[gj]
        live_bonds = rest

    for gi, gj in order:
        merge(gi, gj)
    (last,) = tensor_map.values()
    assert last.ndim == 0
    # the merge history fixes a tensor word order; relate it to the canonical
    # sorted order: swapping two odd tensor blocks flips the scalar
    (word,) = words.values()
    sign = 1
    for x in range(len(word)):
        for y in range(x + 1, len(word)):
            if word[x] > word[y] and tensors[word[x]].parity and tensors[word[y]].parity:
                sign = -sign
    return sign * complex(last.coeffs)


def test_contraction_order_independence_against_oracle():
    rng = np.random.default_rng(8)
    for _ in range(40):
        tensors, bonds = _random_network(rng)
        expected = eval_closed_network(tensors, bonds)
        # two different merge orders (when connectivity allows)
        for order in ([(0, 1), (0, 2)], [(1, 2), (0, 1)], [(0, 2), (0, 1)]):
            try:
                got = _contract_in_order(tensors, bonds, order)
            except AssertionError:
                continue
            assert abs(got - expected) < 1e-12 * max(1.0, abs(expected))


def test_two_tensor_contraction_against_oracle():
    rng = np.random.default_rng(9)
    for _ in range(30):
        s1, s2 = GradedSpace(1, 1), GradedSpace(2, 1)
        a = random_homogeneous((s1, s2, s1), int(rng.integers(2)), rng)
        b = random_homogeneous((s2, s1, s1), int(rng.integers(2)), rng)
        got = contract(a, b, [(1, 0), (0, 1), (2, 2)])
        expected = eval_closed_network(
            [a, b], [((0, 1), (1, 0)), ((0, 0), (1, 1)), ((0, 2), (1, 2))])
        assert abs(complex(got.coeffs) - expected) < 1e-12


def test_operations_preserve_homogeneity():
    rng = np.random.default_rng(10)
    for _ in range(25):
        a = random_homogeneous((V11, V21, V11), int(rng.integers(2)), rng)
        b = random_homogeneous((V21, V11), int(rng.integers(2)), rng)
        assert permute_legs(a, tuple(rng.permutation(3))).homogeneity_defect() == 0.0
        assert tensor_product(a, b).homogeneity_defect() == 0.0
        assert contract(a, b, [(1, 0)]).homogeneity_defect() == 0.0


def test_record_roundtrip():
    rng = np.random.default_rng(11)
    t = random_homogeneous((V11, V21), 1, rng)
    back = tensor_from_record(tensor_to_record(t))
    assert back.legs == t.legs
    assert back.parity == t.parity
    assert np.allclose(back.coeffs, t.coeffs)
