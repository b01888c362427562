from itertools import combinations

import pytest

from reflact.arrangement import (
    Arrangement,
    Flat,
    FlatNotInLatticeError,
    build_lattice,
    canonicalize_hyperplane,
    essentialize,
    subarrangement,
)
from reflact.exactnum import Cyc, CycMatrix, rref


def braid3():
    # x1=x2, x1=x3, x2=x3 in C^3
    return Arrangement.from_covectors(3, [[1, -1, 0], [1, 0, -1], [0, 1, -1]])


def boolean2():
    return Arrangement.from_covectors(2, [[1, 0], [0, 1]])


def full_a2_1():
    # x1=0, x2=0, x1=x2
    return Arrangement.from_covectors(2, [[1, 0], [0, 1], [1, -1]])


def brute_force_flat_count(A):
    """Oracle: enumerate all hyperplane subsets, dedupe intersections by the
    closure key computed from scratch with rref."""
    seen = set()
    for k in range(len(A) + 1):
        for sub in combinations(range(len(A)), k):
            if sub:
                M = CycMatrix.from_rows([list(A.covector(i)) for i in sub])
                red, _, rank = rref(M)
                rows = red.row_list()[:rank]
            else:
                rows, rank = [], 0
            key = []
            for i in range(len(A)):
                vec = list(A.covector(i))
                for row in rows:
                    p = next(j for j, c in enumerate(row) if not c.is_zero())
                    f = vec[p]
                    if not f.is_zero():
                        vec = [a - f * b for a, b in zip(vec, row)]
                if all(c.is_zero() for c in vec):
                    key.append(i)
            seen.add((tuple(key), rank))
    return seen


def test_canonicalize_examples():
    h = canonicalize_hyperplane([0, 2, -2])
    assert h.covector == (Cyc.zero(), Cyc.one(), Cyc.rational(-1))
    z3 = Cyc.root_of_unity(3)
    h = canonicalize_hyperplane([z3, Cyc.rational(-1)])
    assert h.covector[0] == Cyc.one()
    assert h.covector[1] == -(z3 * z3)
    h = canonicalize_hyperplane([1, 0, 0])
    assert h.covector == (Cyc.one(), Cyc.zero(), Cyc.zero())
    with pytest.raises(ValueError):
        canonicalize_hyperplane([0, 0])


def test_lattice_boolean():
    lat = build_lattice(boolean2())
    assert [len(lv) for lv in lat.levels] == [1, 2, 1]
    assert len(lat) == 4


def test_lattice_braid():
    A = braid3()
    lat = build_lattice(A)
    assert [len(lv) for lv in lat.levels] == [1, 3, 1]
    # codim-2 flat is the triple intersection
    assert lat.levels[2][0].key == (0, 1, 2)
    # oracle: brute force over all subsets
    assert {(f.key, f.codim) for f in lat.all_flats()} == brute_force_flat_count(A)


def test_lattice_full_a2():
    A = full_a2_1()
    lat = build_lattice(A)
    assert len(lat) == 5
    assert {(f.key, f.codim) for f in lat.all_flats()} == brute_force_flat_count(A)


def test_lattice_counts_general():
    assert len(build_lattice(braid3()).levels[1]) == 3
    assert len(build_lattice(braid3()).levels[0]) == 1


def test_flat_basis_consistency():
    A = braid3()
    for f in build_lattice(A).all_flats():
        # every hyperplane in the key vanishes on the flat's row space
        for i in f.key:
            cov = A.covector(i)
            for r in range(f.basis.rows):
                s = Cyc.zero()
                for j in range(A.n):
                    s = s + cov[j] * f.basis[r, j]
                assert s.is_zero()
        assert f.codim == A.n - f.basis.rows


def test_subarrangement():
    A = braid3()
    lat = build_lattice(A)
    line = lat.levels[2][0]
    sub = subarrangement(A, line)
    assert len(sub) == 3 and sub.n == 3
    assert subarrangement(A, lat.levels[0][0]).hyperplanes == ()
    B = boolean2()
    origin = build_lattice(B).levels[2][0]
    assert len(subarrangement(B, origin)) == 2
    with pytest.raises(FlatNotInLatticeError):
        subarrangement(A, Flat((0, 1), CycMatrix.identity(3), 2))


def test_subarrangement_flats_are_key_subsets():
    A = full_a2_1()
    lat = build_lattice(A)
    for f in lat.all_flats():
        sub = subarrangement(A, f)
        sub_keys = set()
        for g in build_lattice(sub).all_flats():
            # translate sub indices back to parent indices
            sub_keys.add(tuple(f.key[i] for i in g.key))
        parent_keys = {g.key for g in lat.all_flats() if set(g.key) <= set(f.key)}
        assert sub_keys == parent_keys


def test_essentialize_braid():
    A = braid3()
    ess, proj = essentialize(A)
    assert ess.n == 2 and len(ess) == 3
    before = [len(lv) for lv in build_lattice(A).levels]
    after = [len(lv) for lv in build_lattice(ess).levels]
    assert before == after
    assert proj.rows == 2 and proj.cols == 3


def test_essentialize_essential_and_empty():
    B = boolean2()
    ess, _ = essentialize(B)
    assert ess.n == 2 and len(ess) == 2
    E, proj = essentialize(Arrangement(4, []))
    assert E.n == 0 and len(E) == 0


def test_json_roundtrip():
    A = Arrangement.from_covectors(2, [[1, -Cyc.root_of_unity(3)], [1, 0]])
    B = Arrangement.from_json(A.to_json())
    assert B.n == A.n
    assert [h.covector for h in B.hyperplanes] == [h.covector for h in A.hyperplanes]


def test_subarrangement_order_stable_under_conductor_drop():
    z4 = Cyc.root_of_unity(4)
    A = Arrangement.from_covectors(2, [[1, -1], [1, -z4], [1, 1], [1, z4], [1, 0], [0, 1]])
    lat = build_lattice(A)
    for f in lat.all_flats():
        sub = subarrangement(A, f)
        assert [sub.index_of(A.hyperplanes[i]) for i in f.key] == list(range(len(sub)))
