"""Scenario files: a JSON-shaped description of a multiloop setup (Lie type,
torus, group generators, named points and psi functions), with exact-value
parsing and full validation."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from math import lcm

from .coordalg import (
    GammaGroup,
    GroupGenerator,
    Point,
    PointAction,
    validate_free_and_Xstar,
)
from .fields import field
from .liealg import GAutomorphism, build_sl
from .linalg import Matrix
from .repmod import PsiFunction, is_equivariant, psi_gamma
from .rootdata import DiagramSymmetry, Weight


class ScenarioError(ValueError):
    """Malformed scenario input (exit code 2 territory)."""


def parse_scalar(text, fld):
    """Exact scalar literals: integers, "p/q" rationals, "zeta^k" roots of
    unity (zeta is the primitive root of the scenario field), and products
    like "-zeta^3"."""
    if isinstance(text, int):
        return fld.scalar(text)
    if not isinstance(text, str):
        raise ScenarioError("scalar literal must be a string or integer: %r" % (text,))
    s = text.strip()
    neg = False
    if s.startswith("-"):
        neg = True
        s = s[1:].strip()
    if s.startswith("zeta"):
        if s == "zeta":
            k = 1
        elif s.startswith("zeta^"):
            try:
                k = int(s[5:])
            except ValueError:
                raise ScenarioError("bad root of unity literal: %r" % (text,))
        else:
            raise ScenarioError("bad root of unity literal: %r" % (text,))
        val = fld.zeta**k
    else:
        try:
            if "/" in s:
                p, q = s.split("/")
                val = fld.scalar(int(p)) / fld.scalar(int(q))
            else:
                val = fld.scalar(int(s))
        except (ValueError, ZeroDivisionError):
            raise ScenarioError("bad rational literal: %r" % (text,))
    return -val if neg else val


def format_scalar(x):
    """Inverse-ish of parse_scalar, for reports."""
    if x.is_rational():
        q = x.as_rational()
        if q.denominator == 1:
            return str(int(q.numerator))
        return "%d/%d" % (q.numerator, q.denominator)
    fld = x.field
    z = fld.one
    for k in range(fld.order):
        if x == z:
            return "zeta^%d" % k
        if x == -z:
            return "-zeta^%d" % k
        z = z * fld.zeta
    return "[" + ",".join(
        "%d/%d" % (c.numerator, c.denominator) for c in x.coeffs
    ) + "]"


@dataclass
class Scenario:
    name: str
    field: object
    algebra: object
    group: GammaGroup
    nvars: int
    points: dict  # name -> Point
    psis: dict  # name -> PsiFunction
    raw: dict = dc_field(default_factory=dict)
    validation: dict = dc_field(default_factory=dict)

    def point_name(self, p: Point):
        for name, q in self.points.items():
            if q == p:
                return name
        return "(" + ", ".join(format_scalar(c) for c in p.coords) + ")"


_LIE_TYPES = {"A1": 2, "A2": 3, "A3": 4}


def load_scenario(path=None, data=None) -> Scenario:
    if data is None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError("cannot read scenario: %s" % exc)
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a mapping")

    lie_type = data.get("lie_type")
    if lie_type not in _LIE_TYPES:
        raise ScenarioError("lie_type must be one of %s" % sorted(_LIE_TYPES))
    nvars = data.get("num_variables")
    if not isinstance(nvars, int) or nvars < 1:
        raise ScenarioError("num_variables must be a positive integer")

    gens_spec = data.get("generators", [])
    orders = [g.get("order") for g in gens_spec]
    for o in orders:
        if not isinstance(o, int) or o < 1:
            raise ScenarioError("generator order must be a positive integer")
    base_order = lcm(1, *orders) if orders else 1
    order = data.get("cyclotomic_order", base_order)
    if not isinstance(order, int) or order % base_order != 0:
        raise ScenarioError(
            "cyclotomic_order must be a multiple of the generator order lcm %d"
            % base_order
        )
    fld = field(order)
    g = build_sl(_LIE_TYPES[lie_type], fld)
    rank = g.rd.rank

    generators = []
    for spec in gens_spec:
        scaling = spec.get("scaling")
        if not isinstance(scaling, list) or len(scaling) != nvars:
            raise ScenarioError("generator scaling must list %d entries" % nvars)
        pa = PointAction(tuple(parse_scalar(s, fld) for s in scaling))
        aut_spec = spec.get("automorphism", {})
        tau_name = aut_spec.get("tau", "identity")
        if tau_name == "identity":
            tau = DiagramSymmetry.identity(rank)
        elif tau_name == "flip":
            tau = DiagramSymmetry.flip(rank)
        else:
            raise ScenarioError("tau must be 'identity' or 'flip'")
        a = aut_spec.get("a", [0] * rank)
        if not isinstance(a, list) or len(a) != rank:
            raise ScenarioError("automorphism exponents must list %d entries" % rank)
        zeta = parse_scalar(aut_spec.get("zeta", "zeta^0"), fld)
        try:
            aut = GAutomorphism(g, tau, tuple(int(x) for x in a), zeta)
        except ValueError as exc:
            raise ScenarioError("bad automorphism: %s" % exc)
        gen_order = spec["order"]
        gen_zeta = fld.root_of_unity(gen_order, 1) if gen_order > 1 else fld.one
        generators.append(GroupGenerator(gen_order, pa, aut, gen_zeta))

    group = GammaGroup(g, generators, check=False)
    axiom_errors = []
    for idx, gen in enumerate(generators):
        m = gen.automorphism.matrix
        acc = m
        for _ in range(gen.order - 1):
            acc = acc.matmul(m)
        if acc != Matrix.identity(fld, g.dim):
            axiom_errors.append(
                "generator %d: automorphism order does not divide %d" % (idx, gen.order)
            )
    for (i1, g1), (i2, g2) in itertools.combinations(enumerate(generators), 2):
        if not g1.automorphism.commutes_with(g2.automorphism):
            axiom_errors.append(
                "generators %d and %d do not commute" % (i1, i2)
            )

    points = {}
    for name, coords in (data.get("points") or {}).items():
        if not isinstance(coords, list) or len(coords) != nvars:
            raise ScenarioError("point %r must list %d coordinates" % (name, nvars))
        try:
            points[name] = Point(tuple(parse_scalar(c, fld) for c in coords))
        except ValueError as exc:
            raise ScenarioError("bad point %r: %s" % (name, exc))

    psis = {}
    psi_checks = {}
    for name, spec in (data.get("psi") or {}).items():
        values = spec.get("values", {})
        mapping = {}
        for pname, coords in values.items():
            if pname not in points:
                raise ScenarioError("psi %r names unknown point %r" % (name, pname))
            if not isinstance(coords, list) or len(coords) != rank:
                raise ScenarioError(
                    "psi %r weight at %r must list %d coordinates" % (name, pname, rank)
                )
            mapping[points[pname]] = Weight(tuple(int(c) for c in coords))
        try:
            psi = PsiFunction.of(mapping)
        except ValueError as exc:
            raise ScenarioError("bad psi %r: %s" % (name, exc))
        if spec.get("equivariant") and not axiom_errors:
            # A failed equivariant extension (non-transversal support) is a
            # mathematical validation failure, not a malformed file.
            try:
                psi = psi_gamma(group, psi)
                psi_checks[name] = is_equivariant(group, psi)
            except ValueError:
                psi_checks[name] = False
        psis[name] = psi

    report = validate_free_and_Xstar(group, [])
    # Named points may share orbits (transversality is per-psi, enforced when
    # extending equivariantly); here we only ask that each one sits in the
    # free locus: nonzero coordinates and a trivial stabilizer.
    bad_points = []
    for name, p in points.items():
        for gamma in group.elements:
            if any(gamma) and group.act_point(gamma, p) == p:
                bad_points.append(name)
                break
    validation = {
        "group_axioms_ok": not axiom_errors,
        "group_axiom_errors": axiom_errors,
        "free_action": report["free"],
        "non_free_elements": [list(x) for x in report["non_free_elements"]],
        "x_star_ok": not bad_points,
        "x_star_violations": sorted(bad_points),
        "psi_equivariance": psi_checks,
        "generator_count": len(generators),
        "group_size": group.size,
    }
    return Scenario(
        name=data.get("name", "scenario"),
        field=fld,
        algebra=g,
        group=group,
        nvars=nvars,
        points=points,
        psis=psis,
        raw=data,
        validation=validation,
    )


def validation_passed(scn: Scenario) -> bool:
    v = scn.validation
    return bool(
        v["group_axioms_ok"]
        and v["free_action"]
        and v["x_star_ok"]
        and all(v["psi_equivariance"].values())
    )
