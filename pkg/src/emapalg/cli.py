"""Command-line interface: scenario validation, Weyl/twist/irreps/mult/ext/
battery reports with deterministic human and machine output.

Exit codes: 0 success, 1 mathematical-check failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from .coordalg import EtaFunction
from .ema import InvariantAlgebra, TruncatedAlgebra
from .homology import characterization_battery, enumerate_phi, ext1_ladder
from .repmod import (
    direct_sum,
    evaluation_module,
    extend_to,
    height_psi_orbits,
    hom_space,
    multiplicities,
    tensor_product,
)
from .scenario import (
    Scenario,
    ScenarioError,
    load_scenario,
    validation_passed,
)
from .weyl import twisted_weyl, weyl_dim_bound, weyl_module

DEFAULT_MAX_DIM = 4096


class CapExceeded(Exception):
    def __init__(self, size, cap):
        super().__init__("module dimension %d exceeds EMA_WEYL_MAX_DIM=%d" % (size, cap))
        self.size = size


class MathCheckFailure(Exception):
    pass


def _max_dim():
    raw = os.environ.get("EMA_WEYL_MAX_DIM", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_DIM
    except ValueError:
        raise ScenarioError("EMA_WEYL_MAX_DIM must be an integer: %r" % raw)


def _check_cap(size):
    cap = _max_dim()
    if size > cap:
        raise CapExceeded(size, cap)


def fmt_psi(scn: Scenario, psi) -> str:
    if psi.is_zero():
        return "0"
    parts = [
        "%s: (%s)" % (scn.point_name(p), ",".join(str(c) for c in w.coords))
        for p, w in psi.assignments
    ]
    return "{" + "; ".join(parts) + "}"


def _resolve_psi(scn: Scenario, name):
    if name not in scn.psis:
        raise ScenarioError("unknown psi name %r" % name)
    return scn.psis[name]


def _mult_table(scn: Scenario, module):
    table = multiplicities(module)
    items = sorted(
        ((fmt_psi(scn, k), v) for k, v in table.items()), key=lambda kv: kv[0]
    )
    return [[k, v] for k, v in items]


def _orbit_reps(scn: Scenario):
    reps = []
    seen = set()
    for name in sorted(scn.points):
        p = scn.points[name]
        if p in seen:
            continue
        for q in scn.group.orbit(p):
            seen.add(q)
        reps.append(p)
    return reps


def cmd_validate(scn: Scenario, args):
    results = dict(scn.validation)
    results["passed"] = validation_passed(scn)
    if not results["passed"]:
        raise MathCheckFailure(results)
    return results


def cmd_weyl(scn: Scenario, args):
    psi = _resolve_psi(scn, args.psi)
    if psi.equivariant:
        from .repmod import psi_restrict

        psi = psi_restrict(psi, scn.group, _orbit_reps(scn))
    _check_cap(weyl_dim_bound(scn.algebra, psi))
    w = weyl_module(scn.algebra, psi)
    _check_cap(w.dim)
    return {
        "psi": fmt_psi(scn, psi),
        "dim": w.dim,
        "certificate": {k: v for k, v in sorted(w.certificate.items())},
        "multiplicities": _mult_table(scn, w.module),
    }


def cmd_twist(scn: Scenario, args):
    psi = _resolve_psi(scn, args.psi)
    if not psi.equivariant:
        raise ScenarioError("twist needs an equivariant psi (%r is not)" % args.psi)
    if args.transversal:
        try:
            points = [scn.points[n] for n in args.transversal.split(",")]
        except KeyError as exc:
            raise ScenarioError("unknown point name %s" % exc)
    else:
        points = [p for p in _orbit_reps(scn) if any(q in psi.support() for q in scn.group.orbit(p))]
    from .repmod import psi_restrict, untwist

    _check_cap(weyl_dim_bound(scn.algebra, psi_restrict(psi, scn.group, points)))
    tw, w, inv = twisted_weyl(scn.group, psi, points)
    _check_cap(tw.dim)
    back = untwist(tw)
    if back.actions != w.module.actions:
        raise MathCheckFailure("untwist of the twisted Weyl module is not the identity")
    return {
        "psi": fmt_psi(scn, psi),
        "transversal": [scn.point_name(p) for p in points],
        "dim": tw.dim,
        "untwisted_dim": w.dim,
        "untwist_roundtrip": "identity",
        "multiplicities": _mult_table(scn, tw),
    }


def cmd_irreps(scn: Scenario, args):
    reps = _orbit_reps(scn)
    rank = scn.algebra.rd.rank
    out = []
    for phi in enumerate_phi(scn.group, reps, rank, args.bound):
        # one tensor factor per support orbit
        dim = 1
        for p in reps:
            if p in phi.support():
                dim *= scn.algebra.rd.weyl_dim(phi[p])
        out.append([fmt_psi(scn, phi), dim])
    out.sort()
    return {"bound": args.bound, "count": len(out), "classes": out}


def _parse_module_expr(scn: Scenario, expr):
    """Tiny grammar: atoms V(name) | W(name), combined with + (direct sum)
    and * (tensor product); * binds tighter than +."""
    import re

    tokens = re.findall(r"[VW]\(\s*\w+\s*\)|[+*]", expr.replace(" ", ""))
    if "".join(tokens).replace(" ", "") != expr.replace(" ", ""):
        raise ScenarioError("cannot parse module expression %r" % expr)
    atoms = []
    ops = []
    expect_atom = True
    for t in tokens:
        if t in "+*":
            if expect_atom:
                raise ScenarioError("misplaced operator in %r" % expr)
            ops.append(t)
            expect_atom = True
        else:
            if not expect_atom:
                raise ScenarioError("missing operator in %r" % expr)
            atoms.append((t[0], t[2:-1].strip()))
            expect_atom = False
    if expect_atom:
        raise ScenarioError("dangling operator in %r" % expr)
    return atoms, ops


def _common_algebra(scn: Scenario, psis, twisted):
    pts = sorted(
        {p for psi in psis for p in psi.support()}, key=lambda p: p.sort_key()
    )
    exp = max(
        max(1, scn.algebra.rd.pairing_htheta(psi.total_weight())) for psi in psis
    )
    if twisted:
        done = set()
        reps = []
        for p in pts:
            if p in done:
                continue
            for q in scn.group.orbit(p):
                done.add(q)
            reps.append(p)
        eta = EtaFunction.of({p: exp for p in reps})
        return InvariantAlgebra(scn.algebra, scn.group, eta)
    eta = EtaFunction.of({p: exp for p in pts})
    return TruncatedAlgebra(scn.algebra, eta)


def cmd_mult(scn: Scenario, args):
    atoms, ops = _parse_module_expr(scn, args.expr)
    psis = [_resolve_psi(scn, name) for _, name in atoms]
    flags = {psi.equivariant for psi in psis}
    if len(flags) > 1:
        raise ScenarioError("module expression mixes equivariant and plain psi")
    twisted = flags.pop() if flags else False
    for kind, name in atoms:
        if kind == "W":
            _check_cap(weyl_dim_bound(scn.algebra, _plain(scn, name)))
    common = _common_algebra(scn, psis, twisted)
    mods = []
    for (kind, name), psi in zip(atoms, psis):
        if kind == "V":
            m = evaluation_module(psi, common)
        elif twisted:
            tw, _, _ = twisted_weyl(scn.group, psi, _orbit_reps(scn))
            m = extend_to(tw, common)
        else:
            m = extend_to(weyl_module(scn.algebra, psi).module, common)
        mods.append(m)
    acc = mods[0]
    # left-to-right with * binding tighter
    pending_sum = None
    for op, m in zip(ops, mods[1:]):
        if op == "*":
            acc = tensor_product(acc, m)
        else:
            if pending_sum is None:
                pending_sum = acc
            else:
                pending_sum = direct_sum(pending_sum, acc)
            acc = m
    if pending_sum is not None:
        acc = direct_sum(pending_sum, acc)
    _check_cap(acc.dim)
    return {
        "expr": args.expr,
        "dim": acc.dim,
        "multiplicities": _mult_table(scn, acc),
    }


def _plain(scn: Scenario, name):
    psi = _resolve_psi(scn, name)
    if psi.equivariant:
        from .repmod import psi_restrict

        psi = psi_restrict(psi, scn.group, _orbit_reps(scn))
    return psi


def _battery_module(scn: Scenario, name):
    psi = _resolve_psi(scn, name)
    if not psi.equivariant:
        raise ScenarioError("command needs an equivariant psi (%r is not)" % name)
    reps = [
        p
        for p in _orbit_reps(scn)
        if any(q in psi.support() for q in scn.group.orbit(p))
    ]
    from .repmod import psi_restrict

    _check_cap(weyl_dim_bound(scn.algebra, psi_restrict(psi, scn.group, reps)))
    tw, _, _ = twisted_weyl(scn.group, psi, reps)
    _check_cap(tw.dim)
    return tw, psi


def cmd_ext(scn: Scenario, args):
    tw, psi = _battery_module(scn, args.psi)
    alg = tw.algebra
    rank = scn.algebra.rd.rank
    target_h = height_psi_orbits(scn.group, psi)
    reps = sorted(alg.eta.support(), key=lambda p: p.sort_key())
    rows = []
    cache = {}
    for phi in enumerate_phi(scn.group, reps, rank, args.bound):
        if not height_psi_orbits(scn.group, phi) < target_h:
            continue
        if phi.is_zero():
            from .homology import _trivial_module

            n = _trivial_module(alg)
        else:
            n = evaluation_module(phi, alg)
        hd = len(hom_space(tw, n))
        ladder = ext1_ladder(tw, n, rungs=args.rungs, algebras=cache)
        rows.append([fmt_psi(scn, phi), hd, ladder.dims])
    rows.sort(key=lambda r: r[0])
    return {
        "psi": fmt_psi(scn, psi),
        "dim": tw.dim,
        "rungs": args.rungs,
        "bound": args.bound,
        "candidates": rows,
    }


def cmd_battery(scn: Scenario, args):
    tw, psi = _battery_module(scn, args.psi)
    report = characterization_battery(tw, psi, weight_bound=args.bound, rungs=args.rungs)
    results = {
        "psi": fmt_psi(scn, psi),
        "dim": tw.dim,
        "verdict": report.verdict,
        "candidates": sorted(
            [[fmt_psi(scn, phi), hd, dims] for phi, hd, dims in report.candidates]
        ),
        "witness": None
        if report.witness is None
        else [fmt_psi(scn, report.witness[0]), report.witness[1], report.witness[2]],
    }
    if report.verdict != "PASS":
        raise MathCheckFailure(results)
    return results


_COMMANDS = {
    "validate": cmd_validate,
    "weyl": cmd_weyl,
    "twist": cmd_twist,
    "irreps": cmd_irreps,
    "mult": cmd_mult,
    "ext": cmd_ext,
    "battery": cmd_battery,
}


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _render_human(report):
    lines = []
    lines.append("command: %s" % report["command"])
    lines.append("scenario: %s (digest %s)" % (report["scenario"], report["digest"]))
    lines.append("status: %s" % report["status"])
    for key in sorted(report["results"]):
        val = report["results"][key]
        if isinstance(val, list) and val and isinstance(val[0], list):
            lines.append("%s:" % key)
            for row in val:
                lines.append("  " + " | ".join(str(x) for x in row))
        elif isinstance(val, dict):
            lines.append("%s:" % key)
            for k in sorted(val):
                lines.append("  %s = %s" % (k, val[k]))
        else:
            lines.append("%s: %s" % (key, val))
    return "\n".join(lines) + "\n"


def _render_machine(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _emit(report, args):
    text = _render_machine(report) if args.format == "machine" else _render_human(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    ap = argparse.ArgumentParser(prog="emapalg")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scenario")
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=["human", "machine"], default="human")

    common(sub.add_parser("validate"))
    p = sub.add_parser("weyl")
    common(p)
    p.add_argument("psi")
    p = sub.add_parser("twist")
    common(p)
    p.add_argument("psi")
    p.add_argument("--transversal", default=None)
    p = sub.add_parser("irreps")
    common(p)
    p.add_argument("--bound", type=int, default=1)
    p = sub.add_parser("mult")
    common(p)
    p.add_argument("expr")
    p = sub.add_parser("ext")
    common(p)
    p.add_argument("psi")
    p.add_argument("--rungs", type=int, default=3)
    p.add_argument("--bound", type=int, default=1)
    p = sub.add_parser("battery")
    common(p)
    p.add_argument("psi")
    p.add_argument("--rungs", type=int, default=3)
    p.add_argument("--bound", type=int, default=None)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    report = {
        "command": args.command,
        "scenario": None,
        "digest": None,
        "results": {},
        "status": "ok",
    }
    try:
        scn = load_scenario(args.scenario)
        report["scenario"] = scn.name
        report["digest"] = _digest(args.scenario)
        report["results"] = _COMMANDS[args.command](scn, args)
    except ScenarioError as exc:
        report["status"] = "input-error"
        report["results"] = {"error": str(exc)}
        _emit(report, args)
        return 2
    except CapExceeded as exc:
        report["status"] = "cap-exceeded"
        report["results"] = {"error": str(exc), "size": exc.size}
        _emit(report, args)
        return 1
    except MathCheckFailure as exc:
        payload = exc.args[0] if exc.args else {}
        report["status"] = "check-failed"
        report["results"] = payload if isinstance(payload, dict) else {"error": str(payload)}
        _emit(report, args)
        return 1
    _emit(report, args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
