"""Chevalley-Eilenberg cohomology in degrees 0 and 1, an Ext ladder over
increasing truncations, and the homological characterization battery for
twisted local Weyl modules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .coordalg import EtaFunction
from .ema import InvariantAlgebra, TruncatedAlgebra
from .linalg import Matrix, Subspace
from .repmod import (
    FiniteModule,
    PsiFunction,
    evaluation_module,
    extend_to,
    height_psi,
    height_psi_orbits,
    hom_space,
    is_maximal_weight,
    psi_gamma,
)
from .rootdata import Weight


def _bracket_terms_of(L):
    bt = getattr(L, "bracket_terms", None)
    if bt is not None:
        return bt
    table = L._table
    return lambda i, j: table[(i, j)]


class CEComplex:
    """The bottom of the Chevalley-Eilenberg complex for a finite-dimensional
    Lie algebra acting on a finite-dimensional module."""

    def __init__(self, L, actions, vdim, fld):
        self.L = L
        self.ldim = L.dim
        self.vdim = vdim
        self.field = fld
        self.actions = actions
        bt = _bracket_terms_of(L)
        l, v = self.ldim, vdim
        # C0 = V; C1 = maps L -> V indexed (i, a); C2 indexed (pair p, a)
        self.pairs = list(itertools.combinations(range(l), 2))
        self.d0 = Matrix(
            [
                tuple(actions[i].entries[a])
                for i in range(l)
                for a in range(v)
            ],
            ncols=v,
            fld=fld,
        )
        rows = []
        for (i1, i2) in self.pairs:
            br = bt(i1, i2)
            for a in range(v):
                row = [fld.zero] * (l * v)
                # x1 . f(x2)
                for b in range(v):
                    c = actions[i1].entries[a][b]
                    if not c.is_zero():
                        row[i2 * v + b] = row[i2 * v + b] + c
                # - x2 . f(x1)
                for b in range(v):
                    c = actions[i2].entries[a][b]
                    if not c.is_zero():
                        row[i1 * v + b] = row[i1 * v + b] - c
                # - f([x1, x2])
                for k, c in br:
                    row[k * v + a] = row[k * v + a] - c
                rows.append(tuple(row))
        self.d1 = Matrix(rows, ncols=l * v, fld=fld)
        if not self.d1.matmul(self.d0).is_zero():
            raise AssertionError("d1 after d0 is not zero")

    def h0_dim(self):
        return self.vdim - self.d0.rank()

    def h1(self):
        """(dimension, representative cocycles as coefficient vectors)."""
        ker = self.d1.nullspace()
        img = Subspace(
            self.ldim * self.vdim,
            [self.d0.apply(_unit(self.field, self.vdim, a)) for a in range(self.vdim)],
            fld=self.field,
        )
        reps = []
        for b in ker.basis:
            r = img.reduce(b)
            if any(not c.is_zero() for c in r):
                img.add_vector(r)
                reps.append(r)
        return len(reps), reps


def _unit(fld, n, j):
    v = [fld.zero] * n
    v[j] = fld.one
    return tuple(v)


def hom_module(L, m1: FiniteModule, m2: FiniteModule):
    """Hom(M1, M2) as an L-module: (x.T) = rho2(x) T - T rho1(x), flattened
    row-major; returns (actions, dim).  Works for any module object carrying
    `actions` and `dim` (including plain g-modules)."""
    fld = m1.actions[0].field if m1.actions else m1.algebra.field
    d1, d2 = m1.dim, m2.dim
    dim = d2 * d1
    actions = []
    for a1, a2 in zip(m1.actions, m2.actions):
        rows = [[fld.zero] * dim for _ in range(dim)]
        for r in range(d2):
            for c in range(d1):
                col = r * d1 + c
                for r2 in range(d2):
                    x = a2.entries[r2][r]
                    if not x.is_zero():
                        rows[r2 * d1 + c][col] = rows[r2 * d1 + c][col] + x
                for c2 in range(d1):
                    x = a1.entries[c][c2]
                    if not x.is_zero():
                        rows[r * d1 + c2][col] = rows[r * d1 + c2][col] - x
        actions.append(Matrix(rows, ncols=dim, fld=fld))
    return actions, dim


def h1(L, m1: FiniteModule, m2: FiniteModule):
    """Ext^1 between modules over L via H^1(L, Hom(M1, M2))."""
    actions, dim = hom_module(L, m1, m2)
    cx = CEComplex(L, actions, dim, m1.field)
    return cx.h1()


@dataclass
class ExtLadder:
    rungs: list  # (exponent, h1 dimension)
    stabilized: bool
    hom_dim: int

    @property
    def dims(self):
        return [d for _, d in self.rungs]


def _rung_algebra(sample_algebra, exponent):
    """Algebra of the same shape with a uniform exponent on the support."""
    if isinstance(sample_algebra, InvariantAlgebra):
        eta = EtaFunction.of(
            {p: exponent for p in sample_algebra.eta.support()}
        )
        return InvariantAlgebra(sample_algebra.g, sample_algebra.group, eta)
    eta = EtaFunction.of({p: exponent for p in sample_algebra.points})
    return TruncatedAlgebra(sample_algebra.g, eta)


def ext1_ladder(m1: FiniteModule, m2: FiniteModule, rungs=3, base=None, algebras=None) -> ExtLadder:
    """H^1 of truncations with growing exponent; extensions of any pair of
    finite modules live on some rung, so stabilized dims certify vanishing up
    to that depth.  The base exponent sits one above the modules' own
    truncations so that genuinely new extensions can appear on the ladder."""
    alg1, alg2 = m1.algebra, m2.algebra
    if base is None:
        base = max(alg1.eta.max_exponent(), alg2.eta.max_exponent()) + 1
    out = []
    homd = None
    for i in range(rungs):
        if algebras is not None and (base + i) in algebras:
            L = algebras[base + i]
        else:
            L = _rung_algebra_joint(alg1, alg2, base + i)
            if algebras is not None:
                algebras[base + i] = L
        e1 = extend_to(m1, L)
        e2 = extend_to(m2, L)
        if homd is None:
            homd = len(hom_space(e1, e2))
        dim, _ = h1(L, e1, e2)
        out.append((base + i, dim))
    stable = len(out) >= 2 and out[-1][1] == out[-2][1]
    return ExtLadder(out, stable, homd)


def _rung_algebra_joint(alg1, alg2, exponent):
    if isinstance(alg1, InvariantAlgebra):
        pts = sorted(
            set(alg1.eta.support()) | set(alg2.eta.support()),
            key=lambda p: p.sort_key(),
        )
        eta = EtaFunction.of({p: exponent for p in pts})
        return InvariantAlgebra(alg1.g, alg1.group, eta)
    pts = sorted(set(alg1.points) | set(alg2.points), key=lambda p: p.sort_key())
    eta = EtaFunction.of({p: exponent for p in pts})
    return TruncatedAlgebra(alg1.g, eta)


def enumerate_phi(group, orbit_reps, rank, bound):
    """All equivariant phi with support inside the given orbits and
    fundamental coordinates at most `bound` (including the zero function)."""
    coord_range = range(bound + 1)
    weight_choices = [
        Weight(c) for c in itertools.product(coord_range, repeat=rank)
    ]
    out = []
    for combo in itertools.product(weight_choices, repeat=len(orbit_reps)):
        mapping = {
            p: w for p, w in zip(orbit_reps, combo) if not w.is_zero()
        }
        psi = PsiFunction.of(mapping)
        out.append(psi_gamma(group, psi))
    return out


@dataclass
class BatteryReport:
    psi: PsiFunction
    candidates: list = dc_field(default_factory=list)  # (phi, hom dim, ladder dims)
    verdict: str = "PASS"
    witness: object = None


def characterization_battery(
    module: FiniteModule,
    psi: PsiFunction,
    weight_bound=None,
    rungs=3,
    early_stop=False,
) -> BatteryReport:
    """The Hom/Ext vanishing test against all lower-height candidates: PASS
    exactly when every Hom and every ladder rung vanishes."""
    alg = module.algebra
    if not isinstance(alg, InvariantAlgebra):
        raise ValueError("battery expects a module over an invariant algebra")
    group = alg.group
    rd = alg.g.rd
    ok, top = is_maximal_weight(module, psi)
    if not ok:
        raise ValueError(
            "module is not maximal weight with top %r (found %r)" % (psi, top)
        )
    if weight_bound is None:
        weight_bound = max(
            (c for _, w in psi.assignments for c in w.coords), default=1
        )
    done = set()
    reps = []
    for p, _ in psi.assignments:
        if p in done:
            continue
        if p not in alg.eta.support():
            # pick the orbit representative that indexes the algebra
            for q in group.orbit(p):
                if q in alg.eta.support():
                    p = q
                    break
        for q in group.orbit(p):
            done.add(q)
        reps.append(p)
    target_h = height_psi_orbits(group, psi)
    report = BatteryReport(psi=psi)
    rung_cache = {}
    for phi in enumerate_phi(group, reps, rd.rank, weight_bound):
        if not height_psi_orbits(group, phi) < target_h:
            continue
        n = evaluation_module(phi, alg) if not phi.is_zero() else _trivial_module(alg)
        hd = len(hom_space(module, n))
        ladder = ext1_ladder(module, n, rungs=rungs, algebras=rung_cache)
        report.candidates.append((phi, hd, ladder.dims))
        if hd != 0 or any(d != 0 for d in ladder.dims):
            report.verdict = "FAIL"
            if report.witness is None:
                report.witness = (phi, hd, ladder.dims)
            if early_stop:
                return report
    return report


def _trivial_module(alg):
    fld = alg.field
    zero = Matrix([[fld.zero]], ncols=1, fld=fld)
    return FiniteModule(alg, [zero] * alg.dim, cyclic=(fld.one,))
