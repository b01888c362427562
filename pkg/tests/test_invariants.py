from fractions import Fraction

import pytest

from reflact.arrangement import Arrangement
from reflact.catalog import make_arrangement, make_grpn
from reflact.exactnum import Cyc, CycMatrix
from reflact.groups import (
    conjugacy_classes,
    det_character,
    generate,
    hyperplane_action,
    linear_characters,
    reflection_arrangement,
)
from reflact.invariants import (
    BasisVerificationError,
    CharacterSelectionError,
    ClassMismatchError,
    NotNormalError,
    PoincarePoly,
    UnlabeledPairError,
    euler_identity_check,
    high_degree_invariants,
    isotypic_dim_global,
    isotypic_dim_projection,
    isotypic_dims_orbitwise,
    lehrer_solomon_check,
    multiplicity_classfn,
    order_two_character,
    poincare_invariants,
    project_invariant,
    relative_character,
    theorem4_basis,
    trivial_character,
    vanishing_check_detlike,
)
from reflact.osalg import apply_perm, straighten


def braid3():
    return make_arrangement("braid", 1, 3)


def w3():
    return make_grpn(1, 1, 3)


SMALL_CORPUS = [
    (braid3(), w3()),
    (make_arrangement("full", 2, 2), make_grpn(2, 1, 2)),
    (make_arrangement("full", 3, 2), make_grpn(3, 1, 2)),
    (make_arrangement("zero", 2, 2), make_grpn(2, 2, 2)),
]


def test_poincare_poly_basics():
    p = PoincarePoly([1, 2, 1])
    assert p == (1, 2, 1) and p == [1, 2, 1]
    assert p(1) == 4 and p(-1) == 0 and p(2) == 9
    assert str(p) == "1+2t+t^2"
    assert str(PoincarePoly([1, 1, 0, 1])) == "1+t+t^3"
    assert p.to_json() == [1, 2, 1]


def test_symmetric_group_braid_invariants():
    A, G = braid3(), w3()
    chi = trivial_character(G)
    assert isotypic_dim_global(A, G, chi, 0) == 1
    assert isotypic_dim_global(A, G, chi, 1) == 1
    assert isotypic_dim_global(A, G, chi, 2) == 0
    assert poincare_invariants(A, G, chi) == (1, 1, 0)
    assert not high_degree_invariants(A, G)


def test_full_monomial_rank2_invariants():
    A, G = make_arrangement("full", 2, 2), make_grpn(2, 1, 2)
    chi = trivial_character(G)
    assert isotypic_dim_global(A, G, chi, 0) == 1
    assert isotypic_dim_global(A, G, chi, 2) == 1
    assert poincare_invariants(A, G, chi) == (1, 2, 1)
    assert high_degree_invariants(A, G)


def test_methods_agree_on_small_corpus():
    for A, G in SMALL_CORPUS:
        for chi in (trivial_character(G), det_character(G)):
            report = isotypic_dims_orbitwise(A, G, chi)
            for k in range(A.rank() + 1):
                g = isotypic_dim_global(A, G, chi, k)
                assert g == report.graded[k]
                assert g == isotypic_dim_projection(A, G, chi, k)


def test_orbitwise_report_zero_kind():
    A, G = make_arrangement("zero", 2, 4), make_grpn(2, 2, 4)
    report = isotypic_dims_orbitwise(A, G, trivial_character(G))
    assert report.graded == (1, 1, 0, 1, 1)
    nonzero = [(o.codim, d) for o, d in report.orbit_dims if d > 0]
    assert nonzero == [(0, 1), (1, 1), (3, 1), (4, 1)]
    j = report.to_json()
    assert j["poincare"] == [1, 1, 0, 1, 1]
    assert j["method"] == "orbitwise"


def test_full_kind_odd_n():
    A, G = make_arrangement("full", 2, 3), make_grpn(2, 1, 3)
    assert poincare_invariants(A, G, trivial_character(G)) == (1, 2, 2, 1)


def test_lehrer_solomon_check():
    for A, G in SMALL_CORPUS:
        res = lehrer_solomon_check(A, G, trivial_character(G))
        assert res["passed"]
        assert res["orbit_failures"] == [] and res["degree_failures"] == []


def test_euler_identity_all_linear_characters():
    for A, G in SMALL_CORPUS:
        for chi in linear_characters(G):
            assert euler_identity_check(A, G, chi)


def test_euler_identity_empty_arrangement():
    A = Arrangement.from_covectors(2, [])
    with pytest.raises(ValueError):
        euler_identity_check(A, w3(), trivial_character(w3()))
    with pytest.raises(ValueError):
        high_degree_invariants(A, w3())


def test_project_invariant_idempotent():
    A, G = make_arrangement("full", 2, 2), make_grpn(2, 1, 2)
    x = straighten(A, (0, 2))
    p = project_invariant(A, G, x)
    assert project_invariant(A, G, p) == p
    perms = hyperplane_action(G, A).perms
    for g in G.generators:
        assert apply_perm(A, perms[g], p) == p


def test_theorem4_braid():
    A, G = braid3(), w3()
    basis = theorem4_basis(A, G)
    assert basis.cardinality == 2
    assert basis.poincare == (1, 1, 0)
    assert [e["monomials"] for e in basis.entries] == [[()], [(0,)]]


def test_theorem4_rank2_pairing():
    A, G = make_arrangement("full", 3, 2), make_grpn(3, 1, 2)
    basis = theorem4_basis(A, G)
    assert basis.poincare == (1, 2, 1)
    top = [e for e in basis.entries if e["codim"] == 2]
    assert len(top) == 1 and len(top[0]["monomials"]) == 1
    h1, h2 = top[0]["monomials"][0]
    assert h1 != h2


def test_theorem4_family_and_list_form():
    A, G = make_arrangement("zero", 2, 4), make_grpn(2, 2, 4)
    basis = theorem4_basis(A, G, family=("zero", 2, 2, 4))
    assert basis.cardinality == 4
    assert basis.poincare == (1, 1, 0, 1, 1)
    # the same monomials passed as plain groups give the same basis
    groups = [e["monomials"] for e in basis.entries if e["codim"] >= 2]
    again = theorem4_basis(A, G, cox_monomials=groups)
    assert [e["monomials"] for e in again.entries] == \
        [e["monomials"] for e in basis.entries]


def test_theorem4_unlabeled_orbit():
    A, G = make_arrangement("full", 2, 3), make_grpn(2, 1, 3)
    with pytest.raises(UnlabeledPairError):
        theorem4_basis(A, G)


def test_theorem4_wrong_monomial_count():
    A, G = braid3(), w3()
    with pytest.raises(BasisVerificationError):
        theorem4_basis(A, G, cox_monomials=[[(0,), (1,)]])


def test_relative_character_self():
    A, G = make_arrangement("full", 2, 2), make_grpn(2, 1, 2)
    rep = relative_character(A, G, G)
    for e in rep.entries:
        assert e["multiplicities"][0] == e["dim"]
        assert sum(e["multiplicities"]) == e["dim"]


def test_relative_character_index_two():
    Gt = make_grpn(2, 1, 2)
    G = make_grpn(2, 2, 2)
    A = make_arrangement("full", 2, 2)
    rep = relative_character(A, G, Gt)
    kern = [Gt.contains_matrix(G.elements[gi]) for gi in G.generators]
    sigma = order_two_character(Gt, kern)
    si = rep.characters.index(sigma)
    by_key = {e["rep_key"]: e for e in rep.entries}
    assert by_key[()]["multiplicities"] == [1, 0, 0, 0]
    assert by_key[(0,)]["multiplicities"] == [1, 0, 0, 0]
    # the swap-type hyperplane orbit and the center each pick up sigma
    assert by_key[(1,)]["dim"] == 2
    assert by_key[(1,)]["multiplicities"][0] == 1
    assert by_key[(1,)]["multiplicities"][si] == 1
    center = [e for e in rep.entries if e["codim"] == 2][0]
    assert center["multiplicities"][0] == 1 and center["multiplicities"][si] == 1


def test_relative_character_not_normal():
    Gt = make_grpn(2, 1, 2)
    G = generate([CycMatrix.from_rows([[-1, 0], [0, 1]])])
    A = make_arrangement("full", 2, 2)
    with pytest.raises(NotNormalError):
        relative_character(A, G, Gt)


def test_relative_character_not_contained():
    Gt = make_grpn(2, 2, 2)
    G = make_grpn(2, 1, 2)
    A = make_arrangement("zero", 2, 2)
    with pytest.raises(NotNormalError):
        relative_character(A, G, Gt)


def test_order_two_character_selection():
    Gt = make_grpn(2, 1, 2)
    with pytest.raises(CharacterSelectionError):
        order_two_character(Gt, [])  # three candidates
    chi = order_two_character(Gt, [Gt.generators[0]])
    assert chi(Gt.generators[0]) == Cyc.one()
    assert not chi.is_trivial()


def test_multiplicity_classfn_matches_isotypic():
    for A, G in SMALL_CORPUS:
        classes = conjugacy_classes(G)
        for chi in (trivial_character(G), det_character(G)):
            phi = [chi(cls[0]) for cls in classes]
            for k in range(A.rank() + 1):
                m = multiplicity_classfn(A, G, phi, k)
                assert m.is_rational()
                assert m.rational_value() == isotypic_dim_global(A, G, chi, k)


def test_multiplicity_classfn_sign_vanishes():
    A, G = braid3(), w3()
    sgn = det_character(G)
    phi = [sgn(cls[0]) for cls in conjugacy_classes(G)]
    for k in range(A.rank() + 1):
        assert multiplicity_classfn(A, G, phi, k).is_zero()


def test_multiplicity_classfn_length_mismatch():
    A, G = braid3(), w3()
    with pytest.raises(ClassMismatchError):
        multiplicity_classfn(A, G, [Cyc.one()], 1)


def test_vanishing_detlike():
    for r, p, n in [(1, 1, 3), (2, 1, 2), (3, 1, 2), (2, 2, 2)]:
        G = make_grpn(r, p, n)
        res = vanishing_check_detlike(reflection_arrangement(G), G)
        assert res["passed"] and res["violations"] == []
