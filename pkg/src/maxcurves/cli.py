"""Command-line front end.

Every command returns a report whose numbers sit inside checks:

    {"id": ..., "status": "pass" | "fail" | "info", "actual": ..., "expected": ...}

"info" entries are recorded findings that do not gate the exit code.
Exit codes: 0 all checks pass, 1 some check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import grouptheory as gt
from .autgroup import GammaGroup, SubgroupId
from .curves import CurveId, CurveParams, count_points, curve_params, enumerate_points, expected_count, genus, hasse_weil_bound
from .errors import MaxCurvesError
from .field import Additive, poly_mulmod
from .ramification import (
    KNOWN_COVERS,
    RamificationFiltration,
    build_filtration,
    cover_description,
    different_exponent,
    expansion_residuals,
    filtration_from_elements,
    frac_str,
    hurwitz_ratio,
    intersect_filtration,
    known_lower_jumps,
    lifting_obstruction,
    local_expand_P0,
    lower_index,
    phi,
    quotient_filtration,
    riemann_hurwitz_check,
    upper_jumps,
    valuation_table,
)

COMMANDS = ("count", "group", "orbits", "ramification", "expand", "verify-all")


@dataclass
class RunConfig:
    p: int
    h: int
    n: int
    command: str
    precision: int | None = None
    budget: int = 10**6
    format: str = "json"
    out: str | None = None


@dataclass
class Report:
    command: str
    params: dict
    checks: list[dict] = field(default_factory=list)

    def check(self, cid: str, actual: Any, expected: Any = None, ok: bool | None = None) -> bool:
        if ok is None:
            ok = actual == expected
        entry = {"id": cid, "status": "pass" if ok else "fail", "actual": actual}
        if expected is not None:
            entry["expected"] = expected
        self.checks.append(entry)
        return ok

    def info(self, cid: str, actual: Any) -> None:
        self.checks.append({"id": cid, "status": "info", "actual": actual})

    @property
    def failed(self) -> list[str]:
        return [c["id"] for c in self.checks if c["status"] == "fail"]

    def to_json(self) -> dict:
        return {"command": self.command, "params": self.params, "checks": self.checks, "ok": not self.failed}


def _params_json(params: CurveParams) -> dict:
    return {"p": params.p, "h": params.h, "n": params.n, "q": params.q, "m": params.m}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_count(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    r = Report("count", _params_json(params))
    for c in (CurveId.Hermitian, CurveId.Xn, CurveId.Cn):
        g = genus(c, params)
        count = count_points(c, params)
        bound = hasse_weil_bound(g, params.qn)
        r.info(f"{c.value}.genus", g)
        r.check(f"{c.value}.count", count, expected_count(c, params))
        r.check(f"{c.value}.maximal", count == bound, True)
        r.info(f"{c.value}.bound", bound)
    q2 = params.q**2
    r.check("Hermitian.count_Fq2", count_points(CurveId.Hermitian, params, field_order=q2),
            hasse_weil_bound(genus(CurveId.Hermitian, params), params.q))
    return r


def cmd_group(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    G = GammaGroup(params)
    q, p = params.q, params.p
    r = Report("group", _params_json(params))
    reports = {}
    for sid in (SubgroupId.Q, SubgroupId.Z, SubgroupId.Sigma, SubgroupId.M, SubgroupId.N, SubgroupId.Gamma):
        rep = G.structure_report(sid, budget=config.budget)
        reports[sid] = rep
        r.check(f"{sid.value}.order", rep["order"], rep["expected_order"])
    Q = reports[SubgroupId.Q]
    r.check("Q.exponent", Q["exponent"], 4 if p == 2 else p)
    r.check("Q.non_abelian", not Q["is_abelian"], True)
    r.check("Q.center_order", Q["center_order"], q)
    r.check("Q.derived_in_center", q % Q["derived_subgroup_order"] == 0, True)
    r.check("Z.elementary_abelian", reports[SubgroupId.Z]["is_elementary_abelian"], True)
    quot = G.quotient_report()
    r.check("Q/Z.order", quot["order"], q * q)
    r.check("Q/Z.elementary_abelian", quot["is_elementary_abelian"], True)
    for sid in (SubgroupId.Sigma, SubgroupId.M, SubgroupId.N):
        r.check(f"{sid.value}.abelian", reports[sid]["is_abelian"], True)
    comm = G.commutation_report()
    r.check("commutes_with_Q_is_M", comm["centralizes_Q_is_M"], True)
    r.check("commutes_with_Z_is_N", comm["centralizes_Z_is_N"], True)
    # zeta^{q^n+1} = 1 when q = 2, so Sigma then also centralizes Z
    center = reports[SubgroupId.Gamma]["center_order"]
    r.check("Gamma.center_order", center, params.m if q > 2 else params.m * q)
    r.info("Gamma.center_is_M", center == params.m)
    r.info("Gamma.exponent", reports[SubgroupId.Gamma]["exponent"])
    return r


def cmd_orbits(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    G = GammaGroup(params)
    r = Report("orbits", _params_json(params))
    points = enumerate_points(CurveId.Cn, params, budget=max(config.budget, 10**4))
    sizes = [o.size for o in G.orbits(SubgroupId.Gamma, points, budget=config.budget)]
    r.check("Gamma.orbit_sizes", sizes, G.predicted_gamma_profile())
    q_sizes = sorted({o.size for o in G.orbits(SubgroupId.Q, points, budget=config.budget)})
    r.check("Q.orbit_sizes", q_sizes, [1, params.q**3])
    r.check("Q.semiregular", G.semiregular_check(points), True)
    return r


def _stepwise_phi(u: int, f: RamificationFiltration) -> Fraction:
    # unit-step sum of |G_i|/|G_0|, independent of the segment integration in phi
    return sum((Fraction(f.order_at(i), f.e0) for i in range(1, u + 1)), Fraction(0))


def _stepwise_different(f: RamificationFiltration) -> int:
    last = f.segments[-1][0] if f.segments else -1
    return sum(f.order_at(i) - 1 for i in range(last + 1))


def _mutations(params: CurveParams) -> list[RamificationFiltration]:
    q, m, qn1 = params.q, params.m, params.qn + 1
    return [RamificationFiltration(((m, q**3), (qn1, order)), q**3) for order in (q * q, 1)]


def cmd_ramification(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    q, m, n, qn1 = params.q, params.m, params.n, params.qn + 1
    r = Report("ramification", _params_json(params))
    for cover in KNOWN_COVERS:
        f = build_filtration(cover, params)
        r.check(f"{cover}.lower_jumps", f.lower_jumps, known_lower_jumps(cover, params))
        r.check(f"{cover}.first_jump_invariant", frac_str(phi(f.lower_jumps[0], f)), str(f.lower_jumps[0]))
        r.check(f"{cover}.upper_jumps", [frac_str(v) for v in upper_jumps(f)],
                [frac_str(_stepwise_phi(j, f)) for j in f.lower_jumps])
        r.check(f"{cover}.different", different_exponent(f), _stepwise_different(f))
        r.check(f"{cover}.rh_ok", riemann_hurwitz_check(cover_description(cover, params, f)), True)
    r.check("Cn/Hq.rh_ok", riemann_hurwitz_check(cover_description("Cn/Hq", params)), True)
    r.check("Cn/P1s.rh_ok", riemann_hurwitz_check(cover_description("Cn/P1s", params)), True)
    for mutated in _mutations(params):
        order = mutated.segments[1][1]
        rh = riemann_hurwitz_check(cover_description("Cn/P1z", params, mutated))
        r.check(f"Cn/P1z.mutation_middle_{order}.rh_rejects", not rh, True)

    # filtrations recomputed from the group elements and valuations
    G = GammaGroup(params)
    qs = G.enumerate_subgroup(SubgroupId.Q, budget=config.budget)
    idx: Callable = lambda g: lower_index(G, g)
    realized = filtration_from_elements(qs, idx)
    r.check("Cn/P1z.from_elements", realized.to_json(), build_filtration("Cn/P1z", params).to_json())
    realized_z = intersect_filtration(qs, G.enumerate_subgroup(SubgroupId.Z), idx)
    r.check("Cn/Xn.from_elements", realized_z.to_json(), build_filtration("Cn/Xn", params).to_json())
    quot = quotient_filtration(build_filtration("Cn/P1z", params), build_filtration("Cn/Xn", params))
    r.check("Cn/P1z_mod_Z.lower_jumps", quot.lower_jumps, [m])
    trivial = quotient_filtration(build_filtration("Cn/Xn", params), build_filtration("Cn/Xn", params))
    r.check("Cn/Xn_mod_Z.trivial", list(trivial.segments), [])
    r.check("pullback.m(q+1)", m * (q + 1), qn1)

    vt = valuation_table(params)
    r.check("valuation.P0", vt.at_P0, {"y": m, "x": qn1, "z": 1})
    r.check("valuation.Pinf", vt.at_Pinf, {"y": -q * m, "x": -qn1, "z": -(q**3), "t": 1})

    lo = lifting_obstruction(params)
    A = q ** (n - 3)
    r.check("lifting.claimed_zero_order", lo["claimed_zero_order"], (A - 1) * (q**3 + 1))
    r.check("lifting.residual", lo["residual"], 2 * A * (A - 1))
    r.check("lifting.lifts_possible", lo["lifts_possible"], n == 3)
    r.info("lifting.pole_identity_solution", lo["pole_identity_solution"])
    r.info("lifting.claim_matches_pole_identity", lo["claim_matches_pole_identity"])
    r.info("lifting.residual_with_pole_solution", lo["residual_with_pole_solution"])

    hr = hurwitz_ratio(params)
    r.check("hurwitz.gamma_order", hr["gamma_order"], len(G.enumerate_subgroup(SubgroupId.Gamma, budget=config.budget)))
    r.info("hurwitz.bound", hr["hurwitz_bound"])
    r.info("hurwitz.ratio", frac_str(hr["ratio"]))
    return r


def cmd_expand(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    N = config.precision or 2 * (params.qn + 1)
    r = Report("expand", {**_params_json(params), "precision": N})
    exp = local_expand_P0(params, N)
    r1, r2 = expansion_residuals(params, exp)
    vt = valuation_table(params).at_P0
    r.check("y.leading_exponent", exp.y_series.valuation, vt["y"])
    r.check("x.leading_exponent", exp.x_series.valuation, vt["x"])
    r.check("equation_yz", r1.is_zero(), True)
    r.check("equation_xy", r2.is_zero(), True)
    r.info("y.terms", [[e, c] for e, c in exp.y_series.terms()])
    r.info("x.terms", [[e, c] for e, c in exp.x_series.terms()])
    return r


# ---------------------------------------------------------------------------
# Property corpora used by verify-all
# ---------------------------------------------------------------------------


def field_corpus(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    t = params.tower
    q = params.q
    r = Report("field", _params_json(params))
    rng = random.Random(0)
    pairs = [(rng.randrange(t.order), rng.randrange(t.order)) for _ in range(200)]
    mism = sum(
        1 for a, b in pairs
        if t.coeffs(t.mul(a, b)) != (poly_mulmod(t.coeffs(a), t.coeffs(b), list(t.modulus), t.p) + [0] * t.degree)[: t.degree]
    )
    r.check("mul_matches_poly_reference", mism, 0)
    r.check("frobenius_order", t.frob(t.primitive, t.degree), t.primitive)
    r.check("subfield_q2_size", len(t.subfield(q * q)), q * q)
    sizes = [t.count_additive(Additive.AS_q, c) for c in t.elements()]
    r.check("AS_q_fibres_partition", sum(sizes), t.order)
    r.check("AS_q_kernel", t.additive_kernel_size(Additive.AS_q), q)
    r.check("AS_q2_kernel", t.additive_kernel_size(Additive.AS_q2), q * q)
    zeta = t.root_of_unity((params.qn + 1) * (q - 1))
    r.check("zeta_order", t.unit_order // math.gcd(t.log(zeta), t.unit_order), (params.qn + 1) * (q - 1))
    return r


def grouptheory_corpus(config: RunConfig) -> Report:
    params = curve_params(config.p, config.h, config.n)
    r = Report("grouptheory", _params_json(params))
    for name, Q, R, action in gt.coprime_action_instances():
        r.check(f"coprime_action[{name}]", gt.verify_lbob(Q, R, action), True)
    for name, A, Q, expected in gt.ti_instances():
        r.check(f"ti[{name}]", gt.ti_check(A, Q), expected)
    G = GammaGroup(params)
    if G.subgroup_order(SubgroupId.Gamma) <= 2000:
        points = enumerate_points(CurveId.Cn, params)
        gens = G.generators(G.enumerate_subgroup(SubgroupId.Gamma))
        image = gt.closure([G.permutation(g, points) for g in gens])
        r.check("Gamma.permutation_closure", image.order, G.subgroup_order(SubgroupId.Gamma))
        q_image = gt.closure([G.permutation(g, points) for g in G.generators(G.enumerate_subgroup(SubgroupId.Q))])
        profile = gt.unique_fixed_point_profile(gt.natural_action(q_image), q_image)
        r.check("Q.unique_fixed_point", sorted(set(profile.values())), [1])
        r.check("Q.center_via_permutations", gt.center(q_image).order, params.q)
    else:
        r.info("Gamma.permutation_closure", "skipped: |Gamma| > 2000")
    return r


def cmd_verify_all(config: RunConfig) -> Report:
    suites = [
        ("field", field_corpus),
        ("count", cmd_count),
        ("group", cmd_group),
        ("orbits", cmd_orbits),
        ("ramification", cmd_ramification),
        ("expand", cmd_expand),
        ("grouptheory", grouptheory_corpus),
    ]
    params = curve_params(config.p, config.h, config.n)
    r = Report("verify-all", _params_json(params))
    for name, fn in suites:
        start = time.perf_counter()
        try:
            sub = fn(config)
            checks = sub.checks
        except MaxCurvesError as exc:
            checks = [{"id": "error", "status": "fail", "actual": f"{type(exc).__name__}: {exc}"}]
        elapsed = round(time.perf_counter() - start, 3)
        for c in checks:
            r.checks.append({**c, "id": f"{name}.{c['id']}", "seconds": elapsed})
    return r


HANDLERS = {
    "count": cmd_count,
    "group": cmd_group,
    "orbits": cmd_orbits,
    "ramification": cmd_ramification,
    "expand": cmd_expand,
    "verify-all": cmd_verify_all,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _scalar(v: Any) -> str:
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "status", "actual", "expected"])
        for c in report.checks:
            w.writerow([c["id"], c["status"], _scalar(c["actual"]), _scalar(c.get("expected", ""))])
        return buf.getvalue()
    lines = [f"{report.command} p={report.params['p']} h={report.params['h']} n={report.params['n']}"]
    for c in report.checks:
        exp = f" (expected {_scalar(c['expected'])})" if "expected" in c else ""
        lines.append(f"{c['status'].upper():5} {c['id']}: {_scalar(c['actual'])}{exp}")
    lines.append("OK" if not report.failed else "FAILED: " + ", ".join(report.failed))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxcurves", description="Verify point counts, automorphisms and ramification of C_n.")
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--h", type=int, default=1)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--precision", type=int, default=None, help="series precision for expand (default 2(q^n+1))")
    ap.add_argument("--budget", type=int, default=10**6, help="cap on enumerated group elements")
    ap.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap.add_argument("command", choices=COMMANDS)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    config = RunConfig(args.p, args.h, args.n, args.command, args.precision, args.budget, args.format, args.out)
    try:
        curve_params(config.p, config.h, config.n)
    except (MaxCurvesError, ValueError) as exc:
        print(f"maxcurves: invalid parameters: {exc}", file=sys.stderr)
        return 2
    try:
        report = HANDLERS[config.command](config)
    except MaxCurvesError as exc:
        print(f"maxcurves: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ValueError) else 1
    text = render(report, config.format)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report.failed:
        print("failed checks: " + ", ".join(report.failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
