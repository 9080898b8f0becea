"""Exact linear algebra."""

from hypothesis import given, settings
from hypothesis import strategies as st

from emapalg.fields import QQ, field
from emapalg.linalg import (
    Matrix,
    Subspace,
    intersect,
    joint_eigenspaces,
    restrict_operator,
    rref,
    saturate,
)

_ints = st.integers(min_value=-5, max_value=5)


def _mat(rows):
    return Matrix([[QQ.scalar(x) for x in r] for r in rows], ncols=len(rows[0]), fld=QQ)


def _vec(xs):
    return tuple(QQ.scalar(x) for x in xs)


def test_rref_known():
    rows, pivots = rref(_mat([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).entries, 3)
    assert pivots == [0, 2]
    assert len(rows) == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(_ints, min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_annihilates(rows):
    m = _mat(rows)
    ns = m.nullspace()
    assert ns.dim == 3 - m.rank()
    for b in ns.basis:
        assert all(x.is_zero() for x in m.apply(b))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(_ints, min_size=3, max_size=3), min_size=3, max_size=3),
    st.lists(_ints, min_size=3, max_size=3),
)
def test_solve_consistent(rows, x):
    m = _mat(rows)
    rhs = m.apply(_vec(x))
    sol = m.solve(rhs)
    assert sol is not None
    assert m.apply(sol) == rhs


def test_inverse():
    m = _mat([[1, 2], [3, 5]])
    inv = m.inverse()
    assert m.matmul(inv) == Matrix.identity(QQ, 2)
    assert _mat([[1, 2], [2, 4]]).inverse() is None


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(_ints, min_size=4, max_size=4), min_size=1, max_size=3),
    st.lists(_ints, min_size=4, max_size=4),
)
def test_subspace_reduce_membership(vectors, probe):
    s = Subspace(4, [_vec(v) for v in vectors], fld=QQ)
    for b in s.basis:
        assert s.contains(b)
    res = s.reduce(_vec(probe))
    # residue reduces to itself
    assert s.reduce(res) == res
    grew = s.add_vector(_vec(probe))
    assert grew == (not all(x.is_zero() for x in res))
    assert s.contains(_vec(probe))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(_ints, min_size=4, max_size=4), min_size=1, max_size=3),
    st.lists(st.lists(_ints, min_size=4, max_size=4), min_size=1, max_size=3),
)
def test_intersect_is_contained_in_both(v1, v2):
    s1 = Subspace(4, [_vec(v) for v in v1], fld=QQ)
    s2 = Subspace(4, [_vec(v) for v in v2], fld=QQ)
    cap = intersect(s1, s2)
    for b in cap.basis:
        assert s1.contains(b) and s2.contains(b)
    # dimension formula against the sum
    union = s1.copy()
    for b in s2.basis:
        union.add_vector(b)
    assert cap.dim == s1.dim + s2.dim - union.dim


def test_saturate_cyclic():
    # nilpotent shift on QQ^3: closure of e_0 under the shift is everything
    shift = _mat([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    seed = Subspace(3, [_vec([1, 0, 0])], fld=QQ)
    assert saturate(seed, [shift]).dim == 3


def test_restrict_operator_and_eigenspaces():
    d = _mat([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    sub = Subspace(3, [_vec([1, 0, 0]), _vec([0, 0, 1])], fld=QQ)
    r = restrict_operator(d, sub)
    assert r.entries[0][0] == QQ.one and r.entries[1][1] == QQ.scalar(2)
    eig = joint_eigenspaces([d], sub, [QQ.one, QQ.scalar(2)])
    assert {k[0].as_rational() for k in eig} == {1, 2}
    total = sum(v.dim for v in eig.values())
    assert total == 2


def test_eigenspaces_cyclotomic():
    F = field(4)
    rot = Matrix(
        [[F.zero, -F.one], [F.one, F.zero]], ncols=2, fld=F
    )  # eigenvalues +-i
    amb = Subspace(2, [(F.one, F.zero), (F.zero, F.one)], fld=F)
    eig = joint_eigenspaces([rot], amb, [F.zeta, -F.zeta])
    assert sorted(str(k[0]) for k in eig) == sorted([str(F.zeta), str(-F.zeta)])
