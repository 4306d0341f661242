"""Command-line verification suite and invariant reports.

``hamloc verify`` runs every registered check for a range of n and renders
a per-n report, text or JSON; ``hamloc invariants`` prints the
characteristic classes, Betti numbers and ring presentation of the standard
model at one n.  JSON output is byte-stable across runs: ordering is fixed,
rationals render canonically and timings are canonicalized to zero in the
serialized form (measured values stay on the in-memory records).

Exit codes: 0 all checks passed, 1 at least one failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations_with_replacement

from . import __version__
from .localization import (
    EquivariantInput,
    HamiltonianModel,
    abbv_integrate,
    grassmannian_model,
    monomial_input,
    validate_model,
)
from .ring import TruncPoly, divide_exact, format_rational, generators, poly_invert_unit
from . import theorems
from .theorems import (
    ab_closed_forms,
    betti_numbers,
    c1_from_fixed_data,
    chern_of_normal_bundle,
    chern_to_equivariant,
    chern_consistency,
    coefficients_AB,
    derive_euler_classes,
    derive_total_chern_X,
    euler_divisibility_solutions,
    is_palindromic,
    module_basis_check,
    non_semifree_factor_search,
    non_semifree_obstruction,
    ring_presentation,
    semifree_c1_bound,
)


class UsageError(ValueError):
    """Bad command-line arguments; maps to exit code 2."""


PASS = "pass"
FAIL = "fail"
EXCLUDED = "excluded"


@dataclasses.dataclass(frozen=True)
class CheckResult:
    check_id: str
    section: str
    status: str
    witness: str
    elapsed_ms: int


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    n: int
    checks: tuple[CheckResult, ...]

    @property
    def summary(self) -> dict[str, int]:
        return {
            PASS: sum(1 for c in self.checks if c.status == PASS),
            FAIL: sum(1 for c in self.checks if c.status == FAIL),
            EXCLUDED: sum(1 for c in self.checks if c.status == EXCLUDED),
        }


def _status(ok: bool, witness: str) -> tuple[str, str]:
    return (PASS if ok else FAIL), witness


# -- individual checks ----------------------------------------------------


def _check_model_axioms(n: int, a0_bound: int) -> tuple[str, str]:
    model = grassmannian_model(n)
    violations = validate_model(model)
    if violations:
        return FAIL, "; ".join(violations)
    fractional = dataclasses.replace(model.y, moment_value=Fraction(3, 2))
    caught_gap = any("non-integral" in v
                     for v in validate_model(HamiltonianModel.of(model.x, fractional)))
    doubled = dataclasses.replace(model.x, weights=(2,) + (1,) * (n - 1))
    caught_div = any("does not divide" in v
                     for v in validate_model(HamiltonianModel.of(doubled, model.y)))
    return _status(caught_gap and caught_div,
                   f"violations=0 mutants-caught={int(caught_gap) + int(caught_div)}/2")


def _check_ab_coefficients(n: int, a0_bound: int) -> tuple[str, str]:
    pair = coefficients_AB(n)
    forms = ab_closed_forms(n)
    ok = pair.b == 2 * pair.a and all(forms.values())
    return _status(ok, f"c[w^{n - 1}]={pair.a} c[w^{n}]={pair.b} forms-ok={all(forms.values())}")


def _check_equivariant_chern(n: int, a0_bound: int) -> tuple[str, str]:
    cn = chern_of_normal_bundle(n)
    _total, euler = chern_to_equivariant(
        [cn.coefficient(0, i) for i in range(1, n + 1)], 1, n)
    expected = grassmannian_model(n).x.euler_class
    return _status(euler == expected, f"e(N_X)={euler.format()}")


def _check_gap_divisibility(n: int, a0_bound: int) -> tuple[str, str]:
    if n < 2:
        return EXCLUDED, "needs n >= 2"
    for m in range(2, 7):
        for variant in ("direct", "with-t-factor"):
            sols = euler_divisibility_solutions(n, m, variant, a0_bound)
            if sols:
                return FAIL, f"unexpected solution at m={m} variant={variant}: a0={sols[0].a0}"
    unit_gap = euler_divisibility_solutions(n, 1, "direct", a0_bound)
    preferred = [s for s in unit_gap if s.a0 == 2]
    if not preferred:
        return FAIL, "no a0=2 solution at m=1"
    return PASS, f"m=2..6 empty; m=1 direct solutions={len(unit_gap)} (|a0|<={a0_bound})"


def _check_localization_vanishing(n: int, a0_bound: int) -> tuple[str, str]:
    model = grassmannian_model(n)
    low = 0
    top = 0
    for total_pow in range(0, 2 * n + 1):
        for a in range(total_pow + 1):
            alpha = monomial_input(model, a, total_pow - a)
            outcome = abbv_integrate(model, alpha)
            if alpha.degree < model.total_dim:
                if not outcome.value.is_zero():
                    return FAIL, (f"nonzero integral for lift^{a}·(lift+t)^{total_pow - a}: "
                                  f"{outcome.value.format()}")
                low += 1
            else:
                outcome.rational()  # raises unless supported on t^0 alone
                top += 1
    return PASS, f"low-degree-monomials={low} all-zero; top-degree={top} all-scalar"


def _check_betti_bookkeeping(n: int, a0_bound: int) -> tuple[str, str]:
    betti = betti_numbers(n, n)
    expected = [0] * (4 * n + 1)
    for i in range(0, 4 * n + 1, 2):
        expected[i] = 2 if i == 2 * n else 1
    signed = sum((-1) ** i * b for i, b in enumerate(betti))
    ok = betti == expected and is_palindromic(betti) and signed == 2 * n + 2
    return _status(ok, f"betti={betti} euler-characteristic={signed}")


def _check_c1_coefficient(n: int, a0_bound: int) -> tuple[str, str]:
    model = grassmannian_model(n)
    value = c1_from_fixed_data(model)
    swapped = HamiltonianModel(x=model.x, y=model.y, total_dim=model.total_dim)
    mirrored = Fraction(swapped.y.weight_sum - swapped.x.weight_sum) / (
        swapped.x.moment_value - swapped.y.moment_value)
    ok = value == 2 * n and mirrored == value
    return _status(ok, f"c1={format_rational(value)}·[w]")


def _check_euler_factorization(n: int, a0_bound: int) -> tuple[str, str]:
    if n < 2:
        return EXCLUDED, "needs n >= 2"
    sols = euler_divisibility_solutions(n, 1, "direct", max(a0_bound, 2))
    preferred = [s for s in sols if s.a0 == 2]
    if not preferred:
        return FAIL, "no a0=2 factorization"
    t, u = generators(n)
    cofactor = TruncPoly(n, {(n, 0): 1})
    for i, c in enumerate(preferred[0].cofactor_coeffs, start=1):
        cofactor = cofactor + TruncPoly.monomial(n, n - i, i, c)
    ok = (t + 2 * u) * cofactor == (t + u) ** (n + 1)
    return _status(ok, f"a0=2 cofactor={cofactor.format()}")


def _admissible_multisets(n: int, top: int = 4):
    for ws in combinations_with_replacement(range(1, top + 1), n):
        if max(ws) < 2:
            continue
        if set(ws) != set(range(1, max(ws) + 1)):
            continue
        yield ws


def _check_c1_bound(n: int, a0_bound: int) -> tuple[str, str]:
    if n < 2:
        return EXCLUDED, "no admissible non-semifree weight multiset at n=1"
    worst: Fraction | None = None
    count = 0
    for ws in _admissible_multisets(n):
        result = semifree_c1_bound(n, ws)
        count += 1
        if not result.bound_holds:
            return FAIL, f"bound fails for weights={list(ws)}: c1={result.c1_coeff}"
        if worst is None or result.c1_coeff > worst:
            worst = result.c1_coeff
    return PASS, f"multisets={count} max-c1={format_rational(worst)} < {2 * n}"


def _check_factor_search(n: int, a0_bound: int) -> tuple[str, str]:
    if n < 2:
        return EXCLUDED, "needs n >= 2"
    sols = non_semifree_factor_search(n, a0_bound)
    if n % 2 == 0:
        return _status(not sols, f"solutions={len(sols)} (even n expects none)")
    ok = bool(sols) and all(s.a0 == 0 for s in sols)
    return _status(ok, f"solutions={[s.a0 for s in sols]} (odd n expects a0=0 only)")


def _check_obstruction(n: int, a0_bound: int) -> tuple[str, str]:
    if n < 3 or n % 2 == 0:
        return EXCLUDED, "configuration requires odd n >= 3"
    value = non_semifree_obstruction(n)
    predicted = Fraction(2 * (-1) ** n * coefficients_AB(n).a, 2 ** n)
    model = grassmannian_model(n)
    one = EquivariantInput(TruncPoly.one(n), TruncPoly.one(n), 0)
    semifree = abbv_integrate(model, one)
    ok = value == predicted and value != 0 and semifree.value.is_zero()
    return _status(ok, f"obstruction={format_rational(value)} semifree-integral=0")


def _check_euler_derivation(n: int, a0_bound: int) -> tuple[str, str]:
    derived = derive_euler_classes(n)
    t, u = generators(n)
    ok = (derived.a, derived.b) == (2, 2)
    ok = ok and (t + 2 * u) * derived.euler_x == (t + u) ** (n + 1)
    ok = ok and (-t + 2 * u) * derived.euler_y == (-t + u) ** (n + 1)
    if n == 1:
        ok = ok and derived.euler_x == t
    return _status(ok, f"(a,b)=({derived.a},{derived.b}) e(N_X)={derived.euler_x.format()}")


def _check_normal_chern(n: int, a0_bound: int) -> tuple[str, str]:
    via_inverse = chern_of_normal_bundle(n)
    _t, u = generators(n)
    via_division = divide_exact((1 + u) ** (n + 1), 1 + 2 * u)
    ok = via_inverse == via_division and via_inverse.has_integer_coefficients()
    return _status(ok, f"c(N_X)={via_inverse.format()}")


def _check_total_chern(n: int, a0_bound: int) -> tuple[str, str]:
    derived = derive_total_chern_X(n)
    _t, u = generators(n)
    ok = derived == (1 + u) ** (n + 1)
    return _status(ok, f"c(X)={derived.format()}")


def _check_chern_consistency(n: int, a0_bound: int) -> tuple[str, str]:
    ok = chern_consistency(n) and not chern_consistency(n, denominator_coeff=3)
    return _status(ok, "restrictions agree; perturbed denominator detected")


def _check_module_basis(n: int, a0_bound: int) -> tuple[str, str]:
    _t, v = generators(n)
    ok = module_basis_check(n) and not module_basis_check(n, beta0_shift=v ** n)
    return _status(ok, f"indices 0..{n} verified; perturbed beta_0 detected")


def _check_ring_presentation(n: int, a0_bound: int) -> tuple[str, str]:
    pres = ring_presentation(n)
    second = "y^2 = 0" if n % 2 else ("y^2 = xy" if n == 1 else f"y^2 = x^{n}y")
    first = f"x^{n + 1} = 2xy" if n + 1 > 1 else "x = 2xy"
    expected = (first, second)
    betti = list(pres.betti)
    middle_ok = betti == betti_numbers(n, n)
    ok = pres.relations == expected and pres.epsilon == (1 + (-1) ** n) // 2 and middle_ok
    return _status(ok, f"relations={list(pres.relations)} epsilon={pres.epsilon}")


def _check_duality_bookkeeping(n: int, a0_bound: int) -> tuple[str, str]:
    if not is_palindromic(betti_numbers(n, n)):
        return FAIL, "equal halves produced a non-palindromic vector"
    for k in range(1, 2 * n):
        vec = betti_numbers(k, 2 * n - k)
        if (k == n) != is_palindromic(vec):
            return FAIL, f"split ({k},{2 * n - k}) breaks the duality criterion"
    return PASS, f"splits-tested={2 * n - 1} duality-forces-equal-halves=ok"


CHECKS: tuple[tuple[str, str, object], ...] = (
    ("2", "lemma-2.2", _check_model_axioms),
    ("2", "lemma-2.5", _check_ab_coefficients),
    ("2", "lemma-2.6", _check_equivariant_chern),
    ("2", "lemma-2.7", _check_gap_divisibility),
    ("2", "theorem-2.4", _check_localization_vanishing),
    ("3", "lemma-3.2", _check_betti_bookkeeping),
    ("3", "lemma-3.4", _check_c1_coefficient),
    ("3", "prop-3.3", _check_euler_factorization),
    ("3", "theorem-1.6-bound", _check_c1_bound),
    ("4", "lemma-4.4", _check_factor_search),
    ("4", "prop-4.5", _check_obstruction),
    ("5", "prop-5.1", _check_euler_derivation),
    ("7", "lemma-7.1", _check_normal_chern),
    ("7", "prop-7.3", _check_total_chern),
    ("8", "prop-8.1-basis", _check_module_basis),
    ("8", "prop-8.1-chern", _check_chern_consistency),
    ("8", "prop-8.1-ring", _check_ring_presentation),
    ("9", "prop-9.1", _check_duality_bookkeeping),
)


def check_ids() -> list[str]:
    return [check_id for _section, check_id, _fn in CHECKS]


def _evaluate_n(n: int, suite: str, a0_bound: int) -> VerificationReport:
    results = []
    for section, check_id, fn in sorted(CHECKS, key=lambda c: (c[0], c[1])):
        if suite != "all" and suite != check_id:
            continue
        started = time.perf_counter()
        try:
            status, witness = fn(n, a0_bound)
        except Exception as exc:  # a crashing check is a failing check
            status, witness = FAIL, f"error: {exc}"
        elapsed = int(round((time.perf_counter() - started) * 1000))
        results.append(CheckResult(check_id=check_id, section=section,
                                   status=status, witness=witness,
                                   elapsed_ms=elapsed))
    return VerificationReport(n=n, checks=tuple(results))


def _evaluate_args(args: tuple[int, str, int]) -> VerificationReport:
    return _evaluate_n(*args)


def run_suite(n_min: int, n_max: int, suite: str = "all",
              a0_bound: int = 100, jobs: int = 1) -> list[VerificationReport]:
    """Evaluate the selected checks for every n in [n_min, n_max]."""
    if n_min < 1 or n_min > n_max:
        raise UsageError(f"invalid range: n_min={n_min} n_max={n_max}")
    if suite != "all" and suite not in check_ids():
        raise UsageError(f"unknown suite id {suite!r}; known: all, " + ", ".join(check_ids()))
    if a0_bound < 1:
        raise UsageError("a0-bound must be positive")
    if jobs < 1:
        raise UsageError("jobs must be positive")
    ns = list(range(n_min, n_max + 1))
    if jobs == 1 or len(ns) == 1:
        return [_evaluate_n(n, suite, a0_bound) for n in ns]
    with ProcessPoolExecutor(max_workers=min(jobs, len(ns))) as pool:
        reports = list(pool.map(_evaluate_args, [(n, suite, a0_bound) for n in ns]))
    return sorted(reports, key=lambda r: r.n)


# -- rendering -------------------------------------------------------------


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "n": report.n,
        "checks": [
            {
                "id": c.check_id,
                "section": c.section,
                "status": c.status,
                "witness": c.witness,
                # canonicalized for byte-stable reports; see module docstring
                "elapsed_ms": 0,
            }
            for c in report.checks
        ],
        "summary": report.summary,
    }


def suite_to_json(reports: list[VerificationReport], n_min: int, n_max: int) -> str:
    document = {
        "version": __version__,
        "n_min": n_min,
        "n_max": n_max,
        "reports": [report_to_dict(r) for r in reports],
    }
    return json.dumps(document, indent=2) + "\n"


def suite_to_text(reports: list[VerificationReport]) -> str:
    lines = []
    totals = {PASS: 0, FAIL: 0, EXCLUDED: 0}
    for report in reports:
        lines.append(f"== n={report.n} ==")
        for c in report.checks:
            lines.append(f"{c.section}  {c.check_id}  {c.status}  {c.witness}")
            totals[c.status] += 1
    lines.append(f"== summary ==")
    lines.append(f"pass={totals[PASS]} fail={totals[FAIL]} excluded={totals[EXCLUDED]}")
    return "\n".join(lines) + "\n"


# -- invariants report ------------------------------------------------------


def _poly_coeff_strings(p: TruncPoly, top: int) -> list[str]:
    return [format_rational(p.coefficient(0, i)) for i in range(top + 1)]


def invariants_data(n: int) -> dict:
    """All displayed invariants of the standard model at one n, JSON-ready."""
    if n < 1:
        raise UsageError("n must be at least 1")
    model = grassmannian_model(n)
    _t, w = generators(2 * n)
    total_chern = (1 + w) ** (2 * n + 2) * poly_invert_unit(1 + 2 * w)
    _t, u = generators(n)
    component_chern = (1 + u) ** (n + 1)
    normal_chern = chern_of_normal_bundle(n)
    pres = ring_presentation(n)
    basis = []
    for i in range(n + 1):
        alpha = monomial_input(model, i, 0)
        basis.append({
            "name": f"alpha_{i}",
            "restriction_to_x": alpha.restriction_to_x.format(gvar="u"),
            "restriction_to_y": alpha.restriction_to_y.format(gvar="v"),
        })
    for i in range(n + 1):
        _ty, v = generators(n)
        beta_y = v ** i * model.y.euler_class
        basis.append({
            "name": f"beta_{i}",
            "restriction_to_x": "0",
            "restriction_to_y": beta_y.format(gvar="v"),
        })
    return {
        "n": n,
        "c1_coefficient": 2 * n,
        "total_chern_m": _poly_coeff_strings(total_chern, 2 * n),
        "total_chern_x": _poly_coeff_strings(component_chern, n),
        "total_chern_y": _poly_coeff_strings(component_chern, n),
        "normal_chern_x": _poly_coeff_strings(normal_chern, n),
        "normal_chern_y": _poly_coeff_strings(normal_chern, n),
        "betti": list(pres.betti),
        "relations": list(pres.relations),
        "equivariant_basis": basis,
    }


def _series_text(label: str, coeffs: list[str], var: str) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == "0":
            continue
        if i == 0:
            terms.append(c)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == "1" else f"{c}·{mono}")
    return f"{label} = " + (" + ".join(terms) if terms else "0")


def invariants_text(data: dict) -> str:
    n = data["n"]
    lines = [f"invariants n={n}"]
    lines.append(f"c1(M) = {data['c1_coefficient']}·[w]")
    lines.append(_series_text("c(M)", data["total_chern_m"], "w"))
    lines.append(_series_text("c(X)", data["total_chern_x"], "u"))
    lines.append(_series_text("c(Y)", data["total_chern_y"], "v"))
    lines.append(_series_text("c(N_X)", data["normal_chern_x"], "u"))
    lines.append(_series_text("c(N_Y)", data["normal_chern_y"], "v"))
    lines.append("betti = " + " ".join(str(b) for b in data["betti"]))
    for relation in data["relations"]:
        lines.append(f"relation: {relation}")
    for entry in data["equivariant_basis"]:
        lines.append(f"basis {entry['name']}: X -> {entry['restriction_to_x']} ; "
                     f"Y -> {entry['restriction_to_y']}")
    return "\n".join(lines) + "\n"


def emit_invariants(n: int, fmt: str = "text") -> str:
    data = invariants_data(n)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "text":
        return invariants_text(data)
    raise UsageError(f"unknown format {fmt!r}")


# -- entry point -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamloc",
        description="Exact verification suite for two-fixed-component circle actions")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the check suite over a range of n")
    verify.add_argument("--n-min", type=int, default=1)
    verify.add_argument("--n-max", type=int, default=5)
    verify.add_argument("--suite", default="all",
                        help="check id to run, or 'all' (default)")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--out", default=None, help="write the report to a file")
    verify.add_argument("--jobs", type=int, default=1,
                        help="parallel workers across n")
    verify.add_argument("--a0-bound", type=int, default=100, dest="a0_bound",
                        help="search bound for the factorization scans")

    invariants = sub.add_parser("invariants",
                                help="print the displayed invariants at one n")
    invariants.add_argument("--n", type=int, required=True)
    invariants.add_argument("--format", choices=("text", "json"), default="text")
    invariants.add_argument("--out", default=None)
    return parser


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            reports = run_suite(args.n_min, args.n_max, suite=args.suite,
                                a0_bound=args.a0_bound, jobs=args.jobs)
            if args.format == "json":
                text = suite_to_json(reports, args.n_min, args.n_max)
            else:
                text = suite_to_text(reports)
            _write(text, args.out)
            failed = any(c.status == FAIL for r in reports for c in r.checks)
            return 1 if failed else 0
        if args.command == "invariants":
            _write(emit_invariants(args.n, args.format), args.out)
            return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
