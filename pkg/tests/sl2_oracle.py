"""Independent brute-force oracle for sl2 single-point local Weyl module
dimensions.

Model: the universal cyclic module with (n+ tensor A) w = 0 and the
h-character is C[f_0, ..., f_{N-1}] w (commutative, since the lowering part
of sl2 tensor C[u]/(u^N) is abelian).  The raising and Cartan operators act
on this free polynomial space by normal ordering:

    e_a f_b = f_b e_a + h_{a+b},   h_c f_b = f_b h_c - 2 f_{b+c},
    e_a w = 0,                      h_c w = m delta_{c,0} w.

The Weyl module is the quotient by the submodule generated by f_0^{m+1} w;
that submodule is the closure of the single seed under multiplication by
every f_a and under every e_a and h_c.  Monomials are enumerated degree by
degree; once an entire degree layer lies in the relation space every higher
layer does too (multiplication by the f_a maps a full layer onto the next),
so the enumeration is exhaustive.

Everything here is deliberately self-contained: plain Fractions, its own
row reduction, no imports from the package under test.
"""

from fractions import Fraction
from itertools import combinations_with_replacement


def _monomials(N, degree):
    return [tuple(sorted(c)) for c in combinations_with_replacement(range(N), degree)]


def _mul_f(a, vec):
    return {tuple(sorted(mono + (a,))): c for mono, c in vec.items()}


def _act_e(a, mono, N, m):
    """e_a on a monomial times w, as a dict of lower-degree monomials."""
    if not mono:
        return {}
    b, rest = mono[0], mono[1:]
    out = {}
    for mo, c in _act_e(a, rest, N, m).items():
        key = tuple(sorted((b,) + mo))
        out[key] = out.get(key, Fraction(0)) + c
    if a + b < N:
        for mo, c in _act_h(a + b, rest, N, m).items():
            out[mo] = out.get(mo, Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def _act_h(c_idx, mono, N, m):
    """h_c on a monomial times w (same degree)."""
    if not mono:
        return {(): Fraction(m)} if c_idx == 0 else {}
    b, rest = mono[0], mono[1:]
    out = {}
    for mo, c in _act_h(c_idx, rest, N, m).items():
        key = tuple(sorted((b,) + mo))
        out[key] = out.get(key, Fraction(0)) + c
    if b + c_idx < N:
        key = tuple(sorted((b + c_idx,) + rest))
        out[key] = out.get(key, Fraction(0)) - 2
    return {k: v for k, v in out.items() if v}


class _Echelon:
    """Row space over Fraction keyed by monomial index."""

    def __init__(self, index):
        self.index = index
        self.rows = {}  # pivot position -> row list

    def _reduce(self, row):
        for piv in sorted(self.rows):
            if row[piv]:
                c = row[piv]
                row = [x - c * y for x, y in zip(row, self.rows[piv])]
        return row

    def add(self, vec):
        row = [Fraction(0)] * len(self.index)
        for mono, c in vec.items():
            row[self.index[mono]] = c
        row = self._reduce(row)
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is None:
            return False
        inv = 1 / row[piv]
        self.rows[piv] = [x * inv for x in row]
        return True

    def contains_all(self, monos):
        covered = 0
        for mono in monos:
            vec = {mono: Fraction(1)}
            row = [Fraction(0)] * len(self.index)
            row[self.index[mono]] = Fraction(1)
            if not any(self._reduce(row)):
                covered += 1
        return covered == len(monos)

    @property
    def dim(self):
        return len(self.rows)


def weyl_dim_sl2(m, max_degree=None):
    """Dimension of the sl2 local Weyl module for lambda = m * omega at a
    single point, truncation exponent N = max(1, m)."""
    N = max(1, m)
    cap = m + 2 if max_degree is None else max_degree
    while True:
        monos = []
        for d in range(cap + 1):
            monos.extend(_monomials(N, d))
        index = {mo: i for i, mo in enumerate(monos)}
        ech = _Echelon(index)
        seed = {(0,) * (m + 1): Fraction(1)}
        frontier = [seed]
        ech.add(seed)
        while frontier:
            new = []
            for vec in frontier:
                images = []
                for a in range(N):
                    prod = _mul_f(a, vec)
                    if all(len(mo) <= cap for mo in prod):
                        images.append(prod)
                    eimg = {}
                    himg = {}
                    for mono, c in vec.items():
                        for mo, c2 in _act_e(a, mono, N, m).items():
                            eimg[mo] = eimg.get(mo, Fraction(0)) + c * c2
                        for mo, c2 in _act_h(a, mono, N, m).items():
                            himg[mo] = himg.get(mo, Fraction(0)) + c * c2
                    images.append({k: v for k, v in eimg.items() if v})
                    images.append({k: v for k, v in himg.items() if v})
                for img in images:
                    if img and ech.add(img):
                        new.append(img)
            frontier = new
        top_layer = _monomials(N, cap)
        if ech.contains_all(top_layer):
            # the top layer is entirely relations, hence so is every higher
            # layer; the quotient is exhausted below the cap
            return len(monos) - ech.dim
        cap += 1


def weyl_weight_dims_sl2(m):
    """Also return the h_0-weight layer dimensions (by f-degree) of the
    quotient, for character cross-checks."""
    N = max(1, m)
    cap = m + 2
    monos = []
    for d in range(cap + 1):
        monos.extend(_monomials(N, d))
    index = {mo: i for i, mo in enumerate(monos)}
    ech = _Echelon(index)
    seed = {(0,) * (m + 1): Fraction(1)}
    frontier = [seed]
    ech.add(seed)
    while frontier:
        new = []
        for vec in frontier:
            for a in range(N):
                prod = _mul_f(a, vec)
                images = [prod] if all(len(mo) <= cap for mo in prod) else []
                eimg = {}
                himg = {}
                for mono, c in vec.items():
                    for mo, c2 in _act_e(a, mono, N, m).items():
                        eimg[mo] = eimg.get(mo, Fraction(0)) + c * c2
                    for mo, c2 in _act_h(a, mono, N, m).items():
                        himg[mo] = himg.get(mo, Fraction(0)) + c * c2
                images.append({k: v for k, v in eimg.items() if v})
                images.append({k: v for k, v in himg.items() if v})
                for img in images:
                    if img and ech.add(img):
                        new.append(img)
        frontier = new
    # per-degree quotient dims; relation rows are mixed-degree in general,
    # but the closure preserves the f-degree grading for e/h and shifts it
    # for multiplication, and every generator is homogeneous, so pivots
    # group by degree
    by_degree = {}
    pivot_monos = {monos[piv] for piv in ech.rows}
    for d in range(cap + 1):
        layer = _monomials(N, d)
        by_degree[d] = sum(1 for mo in layer if mo not in pivot_monos)
    return by_degree
