"""The concrete semisimple Lie algebra sl_{n+1} with Chevalley basis and
matrix realization, finite-order automorphisms of torus-scaling x diagram
form, and explicit irreducible highest weight modules."""

from __future__ import annotations

import itertools

from .fields import QQ
from .linalg import Matrix, Subspace, joint_eigenspaces, saturate
from .rootdata import DiagramSymmetry, RootDatum, Weight


class ChevalleyAlgebra:
    """sl_{n+1} with basis {e_beta} + {h_i} + {f_beta} and exact brackets."""

    def __init__(self, n_plus_1, fld=QQ):
        if not 2 <= n_plus_1 <= 4:
            raise ValueError("rank out of supported range (sl_2 .. sl_4)")
        self.n = n_plus_1
        self.field = fld
        self.rd = RootDatum(n_plus_1 - 1)
        rank = self.rd.rank
        self.dim = n_plus_1 * n_plus_1 - 1

        # basis labels: ('e', k) / ('f', k) index into rd.positive_roots, ('h', i)
        self.labels = (
            [("e", k) for k in range(len(self.rd.positive_roots))]
            + [("h", i) for i in range(rank)]
            + [("f", k) for k in range(len(self.rd.positive_roots))]
        )
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.basis_matrices = [self._realize(lab) for lab in self.labels]
        # ad-weight of each basis element (in fundamental coordinates)
        self.basis_weights = []
        for lab in self.labels:
            if lab[0] == "h":
                self.basis_weights.append(Weight((0,) * rank))
            else:
                beta = Weight(
                    self.rd._root_to_fundamental(self.rd.positive_roots[lab[1]])
                )
                self.basis_weights.append(beta if lab[0] == "e" else -beta)

        self._table = {}
        for i in range(self.dim):
            for j in range(self.dim):
                m = _commutator(self.basis_matrices[i], self.basis_matrices[j], fld)
                self._table[(i, j)] = self._decompose(m)
        self._check_axioms()

    def _realize(self, lab):
        n, fld = self.n, self.field
        m = [[fld.zero] * n for _ in range(n)]
        if lab[0] == "h":
            i = lab[1]
            m[i][i] = fld.one
            m[i + 1][i + 1] = -fld.one
        else:
            rc = self.rd.positive_roots[lab[1]]
            lo = rc.index(1)
            hi = len(rc) - 1 - rc[::-1].index(1)
            if lab[0] == "e":
                m[lo][hi + 1] = fld.one
            else:
                m[hi + 1][lo] = fld.one
        return m

    def _decompose(self, m):
        """Coefficients of a traceless matrix in the Chevalley basis (sparse)."""
        out = []
        n = self.n
        for k, rc in enumerate(self.rd.positive_roots):
            lo = rc.index(1)
            hi = len(rc) - 1 - rc[::-1].index(1)
            if not m[lo][hi + 1].is_zero():
                out.append((self.index[("e", k)], m[lo][hi + 1]))
            if not m[hi + 1][lo].is_zero():
                out.append((self.index[("f", k)], m[hi + 1][lo]))
        acc = self.field.zero
        for i in range(n - 1):
            acc = acc + m[i][i]
            if not acc.is_zero():
                out.append((self.index[("h", i)], acc))
        return tuple(out)

    def bracket(self, u, v):
        """Bracket of two coefficient vectors over the basis."""
        out = [self.field.zero] * self.dim
        for i, a in enumerate(u):
            if a.is_zero():
                continue
            for j, b in enumerate(v):
                if b.is_zero():
                    continue
                c = a * b
                for k, s in self._table[(i, j)]:
                    out[k] = out[k] + c * s
        return tuple(out)

    def basis_vector(self, i):
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return tuple(v)

    def e(self, i):
        """Chevalley generator e_i (simple root index, 0-based)."""
        return self.index[("e", self.rd.positive_roots.index(
            tuple(1 if j == i else 0 for j in range(self.rd.rank))))]

    def f(self, i):
        return self.index[("f", self.rd.positive_roots.index(
            tuple(1 if j == i else 0 for j in range(self.rd.rank))))]

    def h(self, i):
        return self.index[("h", i)]

    def _check_axioms(self):
        fld = self.field
        rank = self.rd.rank
        for i in range(rank):
            ei, fi, hi = self.e(i), self.f(i), self.h(i)
            br = self.bracket(self.basis_vector(ei), self.basis_vector(fi))
            assert br == self.basis_vector(hi), "[e_i, f_i] != h_i"
            for j in range(rank):
                ej = self.e(j)
                br = self.bracket(self.basis_vector(hi), self.basis_vector(ej))
                expect = [fld.zero] * self.dim
                expect[ej] = fld.scalar(self.rd.cartan[j][i])
                assert br == tuple(expect), "[h_i, e_j] != a_ji e_j"
        # Jacobi on all basis triples
        for i, j, k in itertools.combinations(range(self.dim), 3):
            x, y, z = (self.basis_vector(t) for t in (i, j, k))
            s = _vadd(
                _vadd(
                    self.bracket(x, self.bracket(y, z)),
                    self.bracket(y, self.bracket(z, x)),
                    fld,
                ),
                self.bracket(z, self.bracket(x, y)),
                fld,
            )
            assert all(c.is_zero() for c in s), "Jacobi identity failed"


def _vadd(u, v, fld):
    return tuple(a + b for a, b in zip(u, v))


def _commutator(a, b, fld):
    n = len(a)
    ab = [
        [sum((a[i][k] * b[k][j] for k in range(n)), fld.zero) for j in range(n)]
        for i in range(n)
    ]
    ba = [
        [sum((b[i][k] * a[k][j] for k in range(n)), fld.zero) for j in range(n)]
        for i in range(n)
    ]
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def build_sl(n_plus_1, fld=QQ):
    return ChevalleyAlgebra(n_plus_1, fld)


class GAutomorphism:
    """An automorphism of g of the form torus scaling composed with a diagram
    symmetry: e_i -> zeta^{a_i} e_{tau(i)}, f_i -> zeta^{-a_i} f_{tau(i)},
    h_i -> h_{tau(i)}."""

    def __init__(self, algebra, tau, exponents, zeta, matrix=None):
        self.algebra = algebra
        self.out_part = tau
        self.exponents = tuple(exponents)
        self.zeta = zeta
        self.matrix = matrix if matrix is not None else self._extend()
        self._verify()
        self.order = self._compute_order()

    def _extend(self):
        g = self.algebra
        fld = g.field
        rank = g.rd.rank
        images = {}
        for i in range(rank):
            zp = self.zeta ** self.exponents[i]
            ti = self.out_part.perm[i]
            images[("e", _simple_index(g, i))] = _scaled_basis(
                g, ("e", _simple_index(g, ti)), zp
            )
            images[("f", _simple_index(g, i))] = _scaled_basis(
                g, ("f", _simple_index(g, ti)), zp.inverse()
            )
            images[("h", i)] = g.basis_vector(g.index[("h", ti)])
        # extend to non-simple root vectors by bracket words, in height order
        for k, rc in enumerate(g.rd.positive_roots):
            if sum(rc) == 1:
                continue
            i = rc.index(1)
            rest = tuple(0 if j == i else rc[j] for j in range(len(rc)))
            krest = g.rd.positive_roots.index(rest)
            for kind in ("e", "f"):
                a = g.basis_vector(g.index[(kind, _simple_index(g, i))])
                b = g.basis_vector(g.index[(kind, krest)])
                br = g.bracket(a, b)
                c = br[g.index[(kind, k)]]
                assert not c.is_zero()
                img = g.bracket(images[(kind, _simple_index(g, i))], images[(kind, krest)])
                inv = c.inverse()
                images[(kind, k)] = tuple(x * inv for x in img)
        cols = [images[lab] for lab in g.labels]
        return Matrix(list(zip(*cols)), ncols=g.dim, fld=fld)

    def _verify(self):
        g = self.algebra
        images = [self.matrix.apply(g.basis_vector(i)) for i in range(g.dim)]
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self.matrix.apply(g.bracket(g.basis_vector(i), g.basis_vector(j)))
                rhs = g.bracket(images[i], images[j])
                if lhs != rhs:
                    raise ValueError("not an automorphism: bracket not preserved")

    def _compute_order(self):
        ident = Matrix.identity(self.algebra.field, self.algebra.dim)
        m = self.matrix
        for k in range(1, 257):
            if m == ident:
                return k
            m = m.matmul(self.matrix)
        raise ValueError("automorphism order exceeds bound")

    def apply(self, v):
        return self.matrix.apply(v)

    def compose(self, other):
        return GAutomorphism(
            self.algebra,
            self.out_part.compose(other.out_part),
            (0,) * self.algebra.rd.rank,
            self.algebra.field.one,
            matrix=self.matrix.matmul(other.matrix),
        )

    def inverse_matrix(self):
        return self.matrix.inverse()

    def commutes_with(self, other):
        return self.matrix.matmul(other.matrix) == other.matrix.matmul(self.matrix)


def _simple_index(g, i):
    return g.rd.positive_roots.index(
        tuple(1 if j == i else 0 for j in range(g.rd.rank))
    )


def _scaled_basis(g, lab, c):
    v = [g.field.zero] * g.dim
    v[g.index[lab]] = c
    return tuple(v)


def identity_automorphism(g):
    return GAutomorphism(
        g, DiagramSymmetry.identity(g.rd.rank), (0,) * g.rd.rank, g.field.one
    )


class GModule:
    """A finite-dimensional g-module given by an exact action matrix per
    Chevalley basis element."""

    def __init__(self, algebra, actions, highest=None, check=True):
        self.algebra = algebra
        self.actions = actions
        self.dim = actions[0].ncols if actions else 0
        self.highest = highest
        if check:
            self._check_bracket()

    def _check_bracket(self):
        g = self.algebra
        for (i, j), terms in g._table.items():
            if j < i:
                continue
            lhs = _mat_sub(
                self.actions[i].matmul(self.actions[j]),
                self.actions[j].matmul(self.actions[i]),
            )
            rhs = _sparse_combo(self.actions, terms, self.dim, g.field)
            if lhs != rhs:
                raise ValueError("action matrices do not represent the bracket")

    def character(self):
        """g-weight multiplicities via joint Cartan eigenspaces."""
        g = self.algebra
        rank = g.rd.rank
        hops = [self.actions[g.h(i)] for i in range(rank)]
        fld = g.field
        bound = max(
            (abs(int(x.as_rational())) for m in hops for row in m.entries for x in row if x.is_rational()),
            default=0,
        )
        bound = max(bound, self.dim)
        candidates = [fld.scalar(c) for c in range(-bound, bound + 1)]
        full = Subspace(
            self.dim,
            [tuple(fld.one if i == j else fld.zero for j in range(self.dim)) for i in range(self.dim)],
            fld=fld,
        )
        pieces = joint_eigenspaces(hops, full, candidates)
        out = {}
        for key, sp in pieces.items():
            w = Weight(tuple(int(ev.as_rational()) for ev in key))
            out[w] = out.get(w, 0) + sp.dim
        return out


def _mat_sub(a, b):
    return Matrix(
        [tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(a.entries, b.entries)],
        ncols=a.ncols,
        fld=a.field,
    )


def _sparse_combo(actions, terms, dim, fld):
    acc = Matrix([[fld.zero] * dim for _ in range(dim)], ncols=dim, fld=fld)
    for k, c in terms:
        acc = Matrix(
            [
                tuple(x + c * y for x, y in zip(r1, r2))
                for r1, r2 in zip(acc.entries, actions[k].entries)
            ],
            ncols=dim,
            fld=fld,
        )
    return acc


def natural_module(g):
    """The natural (n+1)-dimensional representation of sl_{n+1}."""
    return GModule(
        g,
        [Matrix(m, ncols=g.n, fld=g.field) for m in g.basis_matrices],
        highest=0,
        check=False,
    )


def exterior_power(mod, k):
    """Wedge power of a module, with action extended by the Leibniz rule."""
    g = mod.algebra
    fld = g.field
    subsets = list(itertools.combinations(range(mod.dim), k))
    pos = {s: i for i, s in enumerate(subsets)}
    dim = len(subsets)
    actions = []
    for m in mod.actions:
        rows = [[fld.zero] * dim for _ in range(dim)]
        for s in subsets:
            j = pos[s]
            for slot in range(k):
                col = m.transpose().entries[s[slot]]  # image of e_{s[slot]}
                for tgt in range(mod.dim):
                    c = col[tgt]
                    if c.is_zero() or (tgt in s and tgt != s[slot]):
                        continue
                    new = list(s)
                    new[slot] = tgt
                    inv_count = sum(
                        1
                        for a in range(k)
                        for b in range(a + 1, k)
                        if new[a] > new[b]
                    )
                    perm = tuple(sorted(new))
                    cc = c if inv_count % 2 == 0 else -c
                    rows[pos[perm]][j] = rows[pos[perm]][j] + cc
        actions.append(Matrix(rows, ncols=dim, fld=fld))
    return GModule(g, actions, highest=pos[tuple(range(k))], check=False)


def tensor_actions(mods):
    """Tensor product of GModules over the same algebra (diagonal action)."""
    g = mods[0].algebra
    fld = g.field
    dims = [m.dim for m in mods]
    dim = 1
    for d in dims:
        dim *= d
    strides = []
    acc = 1
    for d in reversed(dims):
        strides.append(acc)
        acc *= d
    strides = list(reversed(strides))

    actions = []
    for bi in range(g.dim):
        rows = [[fld.zero] * dim for _ in range(dim)]
        for slot, m in enumerate(mods):
            act = m.actions[bi]
            outer = dim // dims[slot]
            for j in range(dim):
                idx = (j // strides[slot]) % dims[slot]
                base = j - idx * strides[slot]
                for tgt in range(dims[slot]):
                    c = act.entries[tgt][idx]
                    if not c.is_zero():
                        rows[base + tgt * strides[slot]][j] = (
                            rows[base + tgt * strides[slot]][j] + c
                        )
        actions.append(Matrix(rows, ncols=dim, fld=fld))
    return GModule(g, actions, check=False), strides


def irreducible_module(g, lam, max_ambient=20000, check=True):
    """V(lam) as the cyclic closure of the top vector inside a tensor product
    of fundamental modules (exterior powers of the natural representation)."""
    if not lam.is_dominant():
        raise ValueError("highest weight must be dominant")
    nat = natural_module(g)
    factors = []
    for i, c in enumerate(lam.coords):
        if c:
            wedge = exterior_power(nat, i + 1)
            factors.extend([wedge] * c)
    if not factors:
        # trivial module
        fld = g.field
        zero = Matrix([[fld.zero]], ncols=1, fld=fld)
        return GModule(g, [zero] * g.dim, highest=0, check=False)
    ambient = 1
    for m in factors:
        ambient *= m.dim
    if ambient > max_ambient:
        raise ValueError(
            "ambient tensor dimension %d exceeds budget %d" % (ambient, max_ambient)
        )
    tens, strides = tensor_actions(factors)
    fld = g.field
    hw = sum(m.highest * s for m, s in zip(factors, strides))
    seedv = [fld.zero] * tens.dim
    seedv[hw] = fld.one
    lowering = [
        tens.actions[g.index[("f", k)]] for k in range(len(g.rd.positive_roots))
    ]
    space = saturate(Subspace(tens.dim, [tuple(seedv)], fld=fld), lowering)
    from .linalg import restrict_operator

    actions = [restrict_operator(a, space) for a in tens.actions]
    hw_coords = tuple(
        x for x in _coords_in(space, tuple(seedv))
    )
    mod = GModule(g, actions, highest=hw_coords, check=check)
    if check:
        expected = g.rd.freudenthal_mults(lam)
        if mod.character() != expected:
            raise ValueError("constructed module has wrong character")
    return mod


def _coords_in(space, vec):
    return tuple(vec[p] for p in space.pivots)


def pullback(mod, aut):
    """The module with action twisted by an automorphism: u acts as
    rho(aut^{-1}(u))."""
    g = mod.algebra
    inv = aut.inverse_matrix()
    actions = []
    for i in range(g.dim):
        col = inv.apply(g.basis_vector(i))
        terms = [(k, c) for k, c in enumerate(col) if not c.is_zero()]
        actions.append(_sparse_combo(mod.actions, terms, mod.dim, g.field))
    return GModule(g, actions, check=False)
