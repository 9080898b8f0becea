"""Truncated map algebras, invariants, evaluation isomorphisms, lifts,
ideal identities."""

import random

import pytest

from emapalg.coordalg import (
    EtaFunction,
    GammaGroup,
    GroupGenerator,
    LaurentFunction,
    Point,
    PointAction,
)
from emapalg.ema import (
    InvariantAlgebra,
    MapElement,
    OrbitTruncation,
    TruncatedAlgebra,
    annihilator_eta,
    constructive_lift,
    ev_gamma_iso,
    gamma_truncation_matrix,
    ideal_equality_check,
    power_ideal_check,
    verify_annihilation,
    verify_lift,
)
from emapalg.fields import field
from emapalg.liealg import GAutomorphism, build_sl
from emapalg.linalg import Matrix
from emapalg.rootdata import DiagramSymmetry, Weight


def z2_setup(order=4):
    """sl2 with Z/2 acting by t -> -t and e -> -e, f -> -f."""
    fld = field(order)
    g = build_sl(2, fld)
    minus = -fld.one
    aut = GAutomorphism(g, DiagramSymmetry.identity(1), (1,), minus)
    gen = GroupGenerator(2, PointAction((minus,)), aut, minus)
    return g, GammaGroup(g, [gen])


def flip_setup():
    """sl3 with Z/2 acting by t -> -t and the diagram flip."""
    fld = field(4)
    g = build_sl(3, fld)
    aut = GAutomorphism(g, DiagramSymmetry.flip(2), (0, 0), fld.one)
    gen = GroupGenerator(2, PointAction((-fld.one,)), aut, -fld.one)
    return g, GammaGroup(g, [gen])


def pt(fld, c):
    return Point((fld.scalar(c),))


def test_truncated_dims():
    g, _ = z2_setup()
    fld = g.field
    assert TruncatedAlgebra(g, EtaFunction.of({pt(fld, 1): 1})).dim == 3
    assert TruncatedAlgebra(g, EtaFunction.of({pt(fld, 1): 2})).dim == 6
    assert (
        TruncatedAlgebra(g, EtaFunction.of({pt(fld, 1): 2, pt(fld, 2): 1})).dim == 9
    )


def test_truncated_jacobi():
    g, _ = z2_setup()
    alg = TruncatedAlgebra(g, EtaFunction.of({pt(g.field, 1): 2}))
    alg.check_jacobi(samples=40)


def test_bracket_constant_part_matches_g():
    g, _ = z2_setup()
    fld = g.field
    alg = TruncatedAlgebra(g, EtaFunction.of({pt(fld, 1): 2}))
    # (u tensor 1) bracket (v tensor 1) = [u, v] tensor 1
    for i in range(g.dim):
        for j in range(g.dim):
            u = alg.basis_vector(alg.index[(0, i, (0,))])
            v = alg.basis_vector(alg.index[(0, j, (0,))])
            br = alg.bracket(u, v)
            expect = alg.zero()
            for k, c in enumerate(g.bracket(g.basis_vector(i), g.basis_vector(j))):
                if not c.is_zero():
                    expect = [
                        x + (c if idx == alg.index[(0, k, (0,))] else fld.zero)
                        for idx, x in enumerate(expect)
                    ]
            assert list(br) == list(expect)


def test_project_takes_jets():
    g, _ = z2_setup()
    fld = g.field
    alg = TruncatedAlgebra(g, EtaFunction.of({pt(fld, 2): 2}))
    t = LaurentFunction.variable(1, 0, fld=fld)
    v = alg.project(g.basis_vector(g.e(0)), t)
    # jet of t at 2 below order 2: 2 + u
    e_idx0 = alg.index[(0, g.e(0), (0,))]
    e_idx1 = alg.index[(0, g.e(0), (1,))]
    assert v[e_idx0] == fld.scalar(2) and v[e_idx1] == fld.one


def test_orbit_truncation_and_gamma_order():
    g, group = z2_setup()
    fld = g.field
    eta = EtaFunction.of({pt(fld, 1): 2})
    orb = OrbitTruncation(g, group, eta)
    assert orb.dim == 12
    m = orb.gamma_matrix((1,))
    assert m.matmul(m) == Matrix.identity(fld, orb.dim)
    avg = orb.averaging_matrix()
    assert avg.matmul(avg) == avg


def test_invariant_dims_and_labels():
    g, group = z2_setup()
    fld = g.field
    inv1 = InvariantAlgebra(g, group, EtaFunction.of({pt(fld, 1): 1}))
    assert inv1.dim == 3
    assert sorted(inv1.xi_labels) == [(0,), (1,), (1,)]
    inv2 = InvariantAlgebra(g, group, EtaFunction.of({pt(fld, 1): 2}))
    assert inv2.dim == 6


def test_invariant_closed_under_bracket():
    g, group = z2_setup()
    inv = InvariantAlgebra(g, group, EtaFunction.of({pt(g.field, 1): 2}))
    for i in range(inv.dim):
        for j in range(inv.dim):
            inv.bracket(inv.basis_vector(i), inv.basis_vector(j))  # coords must exist


@pytest.mark.parametrize("exps", [(1,), (2,), (1, 2), (2, 2)])
def test_ev_iso_sl2(exps):
    g, group = z2_setup()
    fld = g.field
    eta = EtaFunction.of({pt(fld, k + 1): e for k, e in enumerate(exps)})
    inv, target, mat, matinv = ev_gamma_iso(g, group, eta)
    assert inv.dim == target.dim
    assert mat.matmul(matinv) == Matrix.identity(fld, inv.dim)
    assert inv.check_iso_is_homomorphism(eta)


@pytest.mark.parametrize("exps", [(1,), (2,)])
def test_ev_iso_sl3_flip(exps):
    g, group = flip_setup()
    fld = g.field
    eta = EtaFunction.of({pt(fld, k + 1): e for k, e in enumerate(exps)})
    inv, target, mat, matinv = ev_gamma_iso(g, group, eta)
    assert inv.dim == target.dim
    assert inv.check_iso_is_homomorphism(eta)


def test_gamma_truncation_matrix_is_homomorphism():
    g, group = z2_setup()
    fld = g.field
    src = TruncatedAlgebra(g, EtaFunction.of({pt(fld, 1): 2}))
    tgt = TruncatedAlgebra(g, EtaFunction.of({pt(fld, -1): 2}))
    m = gamma_truncation_matrix(group, (1,), src, tgt)
    for i in range(src.dim):
        for j in range(src.dim):
            u, v = src.basis_vector(i), src.basis_vector(j)
            lhs = m.apply(src.bracket(u, v))
            rhs = tgt.bracket(m.apply(u), m.apply(v))
            assert tuple(lhs) == tuple(rhs)


def test_constructive_lift_deterministic():
    g, group = z2_setup()
    fld = g.field
    x = pt(fld, 1)
    eta = EtaFunction.of({x: 2})
    f = LaurentFunction.variable(1, 0, fld=fld)
    a = g.basis_vector(g.e(0))
    alpha, f1, f2 = constructive_lift(g, group, a, f, x, eta)
    ok, msg = verify_lift(g, group, alpha, a, f, x, eta)
    assert ok, msg


def test_constructive_lift_randomized():
    g, group = z2_setup()
    fld = g.field
    rng = random.Random(7)
    t = LaurentFunction.variable(1, 0, fld=fld)
    for _ in range(10):
        exps = {pt(fld, 1): rng.randint(1, 2)}
        if rng.random() < 0.5:
            exps[pt(fld, 2)] = rng.randint(1, 2)
        eta = EtaFunction.of(exps)
        x = rng.choice(list(eta.support()))
        a = tuple(fld.scalar(rng.randint(-2, 2)) for _ in range(g.dim))
        if all(c.is_zero() for c in a):
            a = g.basis_vector(0)
        f = t ** rng.randint(0, 2) + LaurentFunction.constant(1, fld.scalar(rng.randint(0, 3)))
        alpha, _, _ = constructive_lift(g, group, a, f, x, eta)
        ok, msg = verify_lift(g, group, alpha, a, f, x, eta)
        assert ok, msg


def test_lift_needs_root_of_minus_one():
    g, group = z2_setup(order=2)  # QQ(-1): no 4th root of unity
    fld = g.field
    x = pt(fld, 1)
    eta = EtaFunction.of({x: 2})
    f = LaurentFunction.constant(1, fld.one)
    with pytest.raises(ValueError):
        constructive_lift(g, group, g.basis_vector(0), f, x, eta)


def test_ideal_equality():
    g, group = z2_setup()
    fld = g.field
    ambient = EtaFunction.of({pt(fld, 1): 3})
    inv = InvariantAlgebra(g, group, ambient)
    assert ideal_equality_check(inv, EtaFunction.of({pt(fld, 1): 1}))


def test_power_ideal_small():
    g, group = z2_setup()
    fld = g.field
    for m in (1, 2):
        ambient = EtaFunction.of({pt(fld, 1): 2 * m + 1})
        inv = InvariantAlgebra(g, group, ambient)
        assert power_ideal_check(inv, EtaFunction.of({pt(fld, 1): 1}), m)


def test_annihilator_of_evaluation_module():
    from emapalg.repmod import PsiFunction, evaluation_module, psi_gamma

    g, group = z2_setup()
    fld = g.field
    x = pt(fld, 1)
    psi = psi_gamma(group, PsiFunction.of({x: Weight((2,))}))
    inv = InvariantAlgebra(g, group, EtaFunction.of({x: 2}))
    mod = evaluation_module(psi, inv)
    eta = annihilator_eta(mod)
    assert eta[x] == 1
    assert verify_annihilation(mod, eta)


def test_map_element_roundtrip():
    g, group = z2_setup()
    fld = g.field
    t = LaurentFunction.variable(1, 0, fld=fld)
    el = MapElement.pure(g, g.basis_vector(g.e(0)), t)
    tw = el.gamma_apply(group, (1,))
    assert tw.gamma_apply(group, (1,)) == el
