"""Command-line front end: run single problem files, or verify a corpus of
fixtures against expected values and the applicable theorem checks.

Reports are JSON lines on stdout (exact rationals as [num, den], never
floats), with a human-readable table on stderr.  Runs are deterministic:
fixed branch orders, seeded randomness, sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import maclane, ramify
from .basefield import standard_sample
from .errors import ValuantError
from .fields import format_poly
from .invariants import (
    PolyValuation,
    abstract_key_check,
    distances,
    epsilon_report,
    krasner_degree_check,
    pair_valuation_eval,
)
from .problem import ProblemFile, parse_problem
from .tower import extension_invariants
from .value import INFINITY, Value, vmin


def _value_from_text(text: str) -> Value:
    if text.lower() in ("inf", "infinity", "oo"):
        return INFINITY
    return Value(Fraction(text))


def _mu_from_spec(spec: str, problem: ProblemFile) -> PolyValuation:
    parts = spec.split(":")
    kind = parts[0].lower()
    if kind == "gauss":
        return PolyValuation.gauss(problem.base, _value_from_text(parts[1] if len(parts) > 1 else "0"))
    if kind == "point":
        return PolyValuation.point(problem.element(parts[1]))
    if kind == "pair":
        return PolyValuation.pair(problem.element(parts[1]), _value_from_text(parts[2]))
    raise ValuantError(f"unknown valuation spec {spec!r}")


def run_query(problem: ProblemFile, seed: int = 0, max_iterations: int = 64, expect=None):
    """Execute the problem's query; returns (report dict, exit code)."""
    cmd = problem.query.get("cmd")
    if not cmd:
        raise ValuantError("query section needs cmd=...")
    report = {"cmd": cmd}
    code = 0
    if cmd == "value":
        a = problem.element(problem.query["element"])
        report["value"] = a.val().as_pair()
    elif cmd == "minpoly":
        a = problem.element(problem.query["element"])
        m = a.min_poly()
        report["degree"] = m.degree
        report["poly"] = format_poly(m, "X", problem.base.field.format)
    elif cmd == "distances":
        a = problem.element(problem.query["element"])
        report.update(distances(a).as_json())
    elif cmd == "j":
        a = problem.element(problem.query["element"])
        gamma = _value_from_text(problem.query["gamma"])
        profile = distances(a)
        report["j"] = profile.j_at(gamma)
    elif cmd == "epsilon":
        f = problem.base_poly(problem.query["f"])
        mu = _mu_from_spec(problem.query["mu"], problem)
        report.update(epsilon_report(mu, f).as_json())
    elif cmd == "approximate":
        if "f" in problem.query:
            Q = problem.base_poly(problem.query["f"])
        else:
            Q = problem.element(problem.query["element"]).min_poly()
        result = maclane.approximate(problem.base, Q, max_iterations=max_iterations)
        report["extension_count"] = result.extension_count
        report["extensions"] = [ext.as_dict() for ext in result.extensions]
    elif cmd == "depth":
        a = problem.element(problem.query["element"])
        report["depth"] = maclane.depth_of(a)
    elif cmd == "invariants":
        a = problem.element(problem.query["element"])
        report.update(extension_invariants(a).as_dict())
    elif cmd == "count_ram":
        if problem.model is None:
            raise ValuantError("count_ram needs a [model] section")
        report["count_ram"] = ramify.count_ram(problem.model)
        report["ideals"] = sorted(
            {
                json.dumps(i.as_json() if i != ramify.UNIT else "unit", sort_keys=True)
                for i in ramify.ramification_ideals(problem.model).values()
            }
        )
    elif cmd == "basis_check":
        a = problem.element(problem.query["element"])
        trials = int(problem.query.get("trials", "200"))
        holds, witness = ramify.valuation_basis_check(a, trials=trials, seed=seed)
        report["holds"] = holds
        if witness is not None:
            report["witness"] = [problem.base.field.format(c) for c in witness]
            code = 1
    elif cmd == "key_check":
        q = problem.base_poly(problem.query["q"])
        mu = _mu_from_spec(problem.query["mu"], problem)
        trials = int(problem.query.get("trials", "0"))
        report.update(abstract_key_check(q, mu, problem.base, trials=trials, seed=seed).as_json())
    elif cmd == "verify":
        report, code = verify_fixture(problem, expect or {}, seed=seed, max_iterations=max_iterations)
    else:
        raise ValuantError(f"unknown command {cmd!r}")
    return report, code


# ---------------------------------------------------------------------------
# fixture verification


def _check(checks, name, status, detail=None):
    checks[name] = {"status": status}
    if detail is not None:
        checks[name]["detail"] = detail


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


def _p_adic_order(n: int, p: int) -> int:
    v = 0
    while n % p == 0 and n > 1:
        n //= p
        v += 1
    return v


def verify_fixture(problem: ProblemFile, expect: dict, seed: int = 0, max_iterations: int = 64):
    """Compute every applicable invariant and theorem check for one fixture,
    compare with the expected sidecar, and report pass/fail/n-a per check."""
    decl = problem.tower.declarations
    expected_values = expect.get("expect", {})
    checks: dict = {}
    values: dict = {}
    failures = []

    profile = None
    a = None
    p = problem.base.residue_field.char or 1

    if "element" in problem.query:
        a = problem.element(problem.query["element"])
        profile = distances(a)
        values["degree"] = profile.degree
        values["S"] = [v.as_pair() for v in profile.s_set]
        values["multiset"] = profile.multiset.as_json()
        values["omega"] = profile.omega.as_pair()
        values["v_a"] = profile.value_of_a.as_pair()

        # extra element values declared in the query (value_<name> = expr)
        for key, expr in problem.query.items():
            if key.startswith("value_"):
                values[key] = problem.element(expr).val().as_pair()

        # singleton <-> full j at the Krasner constant
        singleton = profile.s_count == 1
        j_omega = profile.j_at(profile.omega)
        values["j_at_omega"] = j_omega
        _check(
            checks,
            "singleton_iff_full_j",
            "pass" if singleton == (j_omega == profile.degree) else "fail",
            {"s_count": profile.s_count, "j": j_omega},
        )

        # strictly increasing j along decreasing distance thresholds
        js = [profile.j_at(g) for g in profile.s_set]
        _check(
            checks,
            "j_chain_strict",
            "pass" if all(js[i] < js[i + 1] for i in range(len(js) - 1)) else "fail",
            {"j_chain": js},
        )

        # prime degree forces a single distance
        if _is_prime(profile.degree):
            _check(checks, "prime_degree_singleton", "pass" if singleton else "fail")
        else:
            _check(checks, "prime_degree_singleton", "n-a")

        # sampled distances to the base never exceed the smallest conjugate gap
        sample = standard_sample(problem.base)
        min_s = profile.s_set[-1]
        ok = True
        attained_omega = False
        for z in sample:
            d = (a - problem.tower.from_base(z)).val()
            if min_s < d and not d.is_infinite:
                ok = False
            if d == profile.omega:
                attained_omega = True
        _check(checks, "distance_below_s", "pass" if ok else "fail")

        # Krasner: perturbations above the constant cannot drop the degree
        shift_exp = 1
        if not profile.omega.is_infinite:
            shift_exp = max(1, int(profile.omega.finite) + 1)
        tshift = problem.tower.from_base(problem.base.uniformizer_power(shift_exp))
        perturbations = [
            tshift,
            tshift * a,
            problem.tower.from_base(problem.base.uniformizer_power(shift_exp + 1)),
        ]
        if problem.tower.level_count >= 1:
            perturbations.append(tshift * problem.tower.generator(1))
        _check(
            checks,
            "krasner_radius",
            "pass" if krasner_degree_check(profile, perturbations) else "fail",
        )

        # j at the Krasner constant lands in the derivative argmax set
        try:
            rep = epsilon_report(PolyValuation.pair(a, profile.omega), profile.min_poly, cross_check=False)
            _check(
                checks,
                "j_in_argmax",
                "pass" if j_omega in rep.argmax_set else "fail",
                {"I": list(rep.argmax_set), "j": j_omega, "epsilon": rep.epsilon.as_pair()},
            )
        except ValuantError as err:
            _check(checks, "j_in_argmax", "n-a", str(err))

        # inductive-valuation invariants when the residue field is finite
        mresult = None
        if problem.base.maclane_supported and a.is_separable():
            mresult = maclane.approximate(problem.base, profile.min_poly, max_iterations=max_iterations)
            values["maclane"] = {
                "count": mresult.extension_count,
                "extensions": [
                    {"e": ext.e, "f": ext.f, "depth": ext.depth, "defect_flag": ext.defect_flag}
                    for ext in mresult.extensions
                ],
            }
            if mresult.extension_count == 1 and mresult.extensions[0].defectless:
                ext = mresult.extensions[0]
                defect = profile.degree // (ext.e * ext.f)
                pow_ok = defect == p ** _p_adic_order(defect, p) if p > 1 else defect == 1
                _check(
                    checks,
                    "ostrowski_product",
                    "pass" if ext.e * ext.f * defect == profile.degree and pow_ok else "fail",
                    {"e": ext.e, "f": ext.f, "defect": defect},
                )
                agree = _chain_agreement(problem, ext, a, seed=seed, trials=30)
                _check(checks, "chain_value_agreement", "pass" if agree else "fail")
            else:
                _check(checks, "ostrowski_product", "n-a")
                _check(checks, "chain_value_agreement", "n-a")
        else:
            _check(checks, "ostrowski_product", "n-a")
            _check(checks, "chain_value_agreement", "n-a")

        # tame fixtures: one distance per chain level, and the constant is
        # attained at a base element
        if decl.get("tame"):
            depth = None
            if mresult is not None and mresult.extension_count == 1:
                depth = mresult.extensions[0].depth
            if depth is None:
                depth = decl.get("depth")
            _check(
                checks,
                "tame_depth_count",
                "pass" if depth is not None and profile.s_count == depth else "fail",
                {"depth": depth, "s_count": profile.s_count},
            )
            _check(checks, "omega_attained_in_base", "pass" if attained_omega else "fail")
        else:
            _check(checks, "tame_depth_count", "n-a")
            _check(checks, "omega_attained_in_base", "n-a")

        # pure non-tame bound on the number of distances
        if decl.get("pure") and not decl.get("tame"):
            l_index = decl.get("L_index", 1)
            deg_l = profile.degree // l_index
            vp = _p_adic_order(deg_l, p) if p > 1 else 0
            attained = decl.get("max_dist_attained")
            plus = 0
            if attained is not None and Value(attained) in profile.s_set:
                plus = 1
            bound = vp + plus
            _check(
                checks,
                "pure_bound",
                "pass" if profile.s_count <= bound else "fail",
                {"bound": bound, "s_count": profile.s_count, "sharp": profile.s_count == bound},
            )
        else:
            _check(checks, "pure_bound", "n-a")

        # purely wild: every j along the chain is a power of p
        if decl.get("purely_wild"):
            ok = all(j == p ** _p_adic_order(j, p) for j in js) if p > 1 else False
            _check(checks, "j_powers_of_p", "pass" if ok else "fail", {"j_chain": js})
        else:
            _check(checks, "j_powers_of_p", "n-a")

        # valuation basis trials for distinguished-at-zero generators
        if decl.get("distinguished_at_zero"):
            holds, witness = ramify.valuation_basis_check(a, trials=200, seed=seed)
            _check(checks, "basis_200", "pass" if holds else "fail")
        else:
            _check(checks, "basis_200", "n-a")

    if problem.model is not None:
        model = problem.model
        count = ramify.count_ram(model)
        values["count_ram"] = count
        ideals = ramify.ramification_ideals(model)
        # subgroup monotonicity of the cut ideals
        mono = True
        subs = ramify.subgroups(model)
        for h1 in subs:
            for h2 in subs:
                if h2 <= h1:
                    i1, i2 = ideals[tuple(sorted(h1))], ideals[tuple(sorted(h2))]
                    if i1 != ramify.UNIT and i2 != ramify.UNIT and not i1.contains(i2):
                        mono = False
        _check(checks, "ideal_monotone", "pass" if mono else "fail")
        # group-power distance monotonicity d(sigma^i) >= d(sigma)
        ok = True
        for i in range(1, model.order):
            j = i
            for _ in range(model.order):
                j = model.table[j][i]
                if model.distance[j] < model.distance[i]:
                    ok = False
        _check(checks, "power_distance_monotone", "pass" if ok else "fail")
        if model.regime == "defect":
            minima = set()
            for H in subs:
                dm = vmin([model.distance[i] for i in H if i != 0])
                minima.add(dm)
            _check(
                checks,
                "principal_cut_count",
                "pass" if count == len(minima) else "fail",
                {"count": count, "distinct_minima": len(minima)},
            )
        else:
            _check(checks, "principal_cut_count", "n-a")
        if profile is not None:
            model_ms = [[v.as_pair(), m] for v, m in model.distance_multiset()]
            profile_ms = [[v.as_pair(), m] for v, m in profile.multiset.all_entries()]
            match = model_ms == profile_ms and count == profile.s_count
            _check(
                checks,
                "ram_count_matches",
                "pass" if match else "fail",
                {"count_ram": count, "s_count": profile.s_count},
            )
        elif expect.get("expect", {}).get("s_count") is not None:
            match = count == expect["expect"]["s_count"]
            _check(checks, "ram_count_matches", "pass" if match else "fail")
        else:
            _check(checks, "ram_count_matches", "n-a")

    # compare computed values against the expected sidecar
    for key, expected in sorted(expected_values.items()):
        actual = values.get(key)
        if actual != expected:
            failures.append({"key": key, "expected": expected, "actual": actual})
    # compare check statuses where the sidecar pins them
    for name, status in sorted(expect.get("theorems", {}).items()):
        actual_status = checks.get(name, {}).get("status", "missing")
        if actual_status != status:
            failures.append({"check": name, "expected": status, "actual": actual_status})
    for name, data in checks.items():
        if data["status"] == "fail" and not any(f.get("check") == name for f in failures):
            failures.append({"check": name, "expected": "pass", "actual": "fail"})

    report = {
        "cmd": "verify",
        "values": values,
        "checks": checks,
        "failures": failures,
        "ok": not failures,
    }
    return report, (0 if not failures else 1)


def _chain_agreement(problem: ProblemFile, ext, a, seed: int, trials: int) -> bool:
    import random

    from .basefield import random_element
    from .fields import Poly

    rng = random.Random(seed)
    K = problem.base.field
    n = ext.terminal_key.degree
    for _ in range(trials):
        deg = rng.randrange(0, n)
        g = Poly(K, [random_element(problem.base, rng) for _ in range(deg + 1)])
        if g.is_zero:
            continue
        lhs = ext.value_of(g)
        rhs = problem.tower.eval_base_poly(g, a).val()
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# entry points


def _emit(report: dict, json_only: bool):
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    sys.stdout.flush()
    if not json_only:
        _human(report)
        sys.stderr.flush()


def _human(report: dict):
    err = sys.stderr
    if report.get("cmd") == "verify" or "fixture" in report:
        name = report.get("fixture", "")
        err.write(f"-- {name or 'fixture'}: {'ok' if report.get('ok') else 'FAILED'}\n")
        for cname, data in sorted(report.get("checks", {}).items()):
            err.write(f"   {cname:28s} {data['status']}\n")
        for f in report.get("failures", []):
            err.write(f"   !! {json.dumps(f, sort_keys=True)}\n")
    else:
        for key, val in sorted(report.items()):
            if key == "cmd":
                continue
            err.write(f"   {key}: {json.dumps(val, sort_keys=True)}\n")


def cmd_run(args) -> int:
    path = Path(args.file)
    try:
        problem = parse_problem(path.read_bytes())
        problem.path = str(path)
        expect = None
        sidecar = path.with_suffix(".expect.json")
        if sidecar.exists():
            expect = json.loads(sidecar.read_text())
        report, code = run_query(
            problem, seed=args.seed, max_iterations=args.max_iterations, expect=expect
        )
    except ValuantError as err:
        _emit({"error": getattr(err, "code", "error"), "message": str(err)}, args.json_only)
        return 2
    _emit(report, args.json_only)
    return code


def cmd_verify(args) -> int:
    root = Path(args.directory)
    fixtures = sorted(root.glob("*.problem"))
    worst = 0
    names = []
    all_checks = set()
    rows = []
    for path in fixtures:
        try:
            problem = parse_problem(path.read_bytes())
            problem.path = str(path)
            sidecar = path.with_suffix(".expect.json")
            expect = json.loads(sidecar.read_text()) if sidecar.exists() else {}
            if problem.query.get("cmd") != "verify":
                report, code = run_query(
                    problem, seed=args.seed, max_iterations=args.max_iterations, expect=expect
                )
            else:
                report, code = verify_fixture(
                    problem, expect, seed=args.seed, max_iterations=args.max_iterations
                )
        except ValuantError as err:
            report, code = {"error": getattr(err, "code", "error"), "message": str(err)}, 2
        report = {"fixture": path.stem, **report}
        _emit(report, True)
        names.append(path.stem)
        rows.append(report)
        all_checks.update(report.get("checks", {}).keys())
        worst = max(worst, code)
    if not args.json_only:
        _summary_table(rows, sorted(all_checks))
    return worst


def _summary_table(rows, check_names):
    err = sys.stderr
    if not rows:
        err.write("empty corpus\n")
        return
    width = max((len(r["fixture"]) for r in rows), default=8) + 2
    err.write("fixture".ljust(width))
    cols = [c[:14] for c in check_names]
    for c in cols:
        err.write(c.ljust(16))
    err.write("result\n")
    for r in rows:
        err.write(r["fixture"].ljust(width))
        for c in check_names:
            status = r.get("checks", {}).get(c, {}).get("status", "-")
            err.write(status.ljust(16))
        err.write(("ok" if r.get("ok") else ("error" if "error" in r else "FAIL")) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="valuant", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument(
        "--max-iterations", type=int, default=64, help="augmentation cap for the valuation loop"
    )
    parser.add_argument("--json-only", action="store_true", help="suppress the stderr table")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one problem file")
    p_run.add_argument("file")
    p_run.set_defaults(fn=cmd_run)
    p_ver = sub.add_parser("verify", help="verify a corpus directory")
    p_ver.add_argument("directory")
    p_ver.set_defaults(fn=cmd_verify)
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
