"""Reproduction suite: the verdict table plus the randomized property checks.

Every check is seeded, so two runs with the same budgets give the same
report. ``run`` returns one :class:`Outcome` per criterion.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from . import finsys
from . import seqclassify as sc
from . import seqmodel as sm
from .config import bundled
from .seqclassify import Budgets, Relation

SEED = 20240531
RESIDUAL_TOL = 1e-8          # witness residual, criterion 2
ANGLE_TOL = 1e-8             # recovered angle multisets, criterion 3
SH_ORACLE_TOL = 0.01         # symbolic vs numeric Schatten exponent, criterion 5
SH_BOUNDARY_STEP = 0.1       # schatten_member probe offset, criterion 5
TRUNCATIONS = (8, 32, 128)   # criterion 7
COND_MAX = 20.0              # condition number of random L, M, criterion 2


@dataclass(frozen=True)
class Outcome:
    id: str
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.id} {self.name}: {self.detail}"


# -- criterion 1: verdict table ---------------------------------------------

@dataclass(frozen=True)
class Expectation:
    id: str
    name: str
    left: str
    right: str
    relation: str
    expected: Relation
    rule: str | None


TABLE = (
    Expectation("1a", "diag(1,1/2) vs diag(1,1/3), bounded", "fin-half", "fin-third",
                "bounded", Relation.BOUNDED, "F1"),
    Expectation("1a", "diag(1,1/2) vs diag(1,1/3), unitary", "fin-half", "fin-third",
                "unitary", Relation.NOT_UNITARY, "F2"),
    Expectation("1b", "cos/sin system vs orthogonal pair", "sin-theta", "orthogonal-pair",
                "bounded", Relation.NOT_BOUNDED, "R3"),
    Expectation("1c", "(1/n) vs (1/((n+1)log(n+1)))", "inv-n", "inv-n-log",
                "bounded", Relation.NOT_BOUNDED, "R5"),
    Expectation("1d", "(1/n) vs (1/n^2), algebraic", "inv-n", "inv-n2",
                "algebraic", Relation.ALGEBRAIC, "A2"),
    Expectation("1d", "(1/n) vs (1/n^2), bounded", "inv-n", "inv-n2",
                "bounded", Relation.NOT_BOUNDED, "R5"),
    Expectation("1e", "shift 1/n vs diagonal 1/n", "shift-inv-n", "inv-n",
                "bounded", Relation.NOT_BOUNDED, "R2"),
    Expectation("1f", "(n^2) vs (2)", "n2", "const-2", "bounded", Relation.BOUNDED, "R4"),
    Expectation("1g", "(n^2)+(1/n^2) vs (2)+(1/n^2)", "n2-plus-inv-n2", "const2-plus-inv-n2",
                "bounded", Relation.BOUNDED, "R5s"),
    Expectation("1h", "(n^2)+(1/n^2) vs (n^3)+(1/n^3)", "n2-plus-inv-n2", "n3-plus-inv-n3",
                "bounded", Relation.NOT_BOUNDED, "R7"),
    Expectation("1i", "[2,3]+(1/n^2) vs [2,3]+(1/n^3)", "interval-plus-inv-n2",
                "interval-plus-inv-n3", "bounded", Relation.NOT_BOUNDED, "R7"),
    Expectation("1j", "(1/n)^1 vs (1/n)^2", "inv-n", "inv-n2", "bounded",
                Relation.NOT_BOUNDED, "R5"),
    Expectation("1j", "(1/n)^2 vs (1/n)^3", "inv-n2", "inv-n3", "bounded",
                Relation.NOT_BOUNDED, "R5"),
)


def classify_ids(left: str, right: str, relation: str, budgets: Budgets,
                 disabled: frozenset[str] = frozenset()) -> sc.Verdict:
    cfg = bundled()
    a, b = cfg.get(left), cfg.get(right)
    if a.is_diagonal != b.is_diagonal:
        raise ValueError(f"cannot compare {a.kind} with {b.kind}")
    if not a.is_diagonal:
        return sc.classify_finite(a.system(), b.system(), relation)
    if relation == "bounded":
        return sc.classify_bounded_graph(a.spec(), b.spec(), budgets, disabled)
    return sc.classify_diagonal(a.spec(), b.spec(), relation, budgets)


def check_table(budgets: Budgets, disabled: frozenset[str] = frozenset()) -> list[Outcome]:
    out = []
    for e in TABLE:
        v = classify_ids(e.left, e.right, e.relation, budgets, disabled)
        ok = v.relation is e.expected and (e.rule is None or v.rule_id == e.rule)
        detail = f"{v.relation.value} via {v.rule_id} (want {e.expected.value} via {e.rule})"
        if e.id == "1c":
            sh = [sm.sh_exponent(bundled().get(i).spec()) for i in (e.left, e.right)]
            ok = ok and sh == [1.0, 1.0]
            detail += f"; Sh = {sh[0]:g}, {sh[1]:g}"
        if e.id == "1b":
            closed = sc.sum_closed_graph(bundled().get(e.left).spec())
            ok = ok and not closed
            detail += f"; E1+E2 closed: {closed}"
        out.append(Outcome(e.id, e.name, ok, detail))
    return out


# -- criteria 2-4: finite property suites -----------------------------------

def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def well_conditioned(rng: np.random.Generator, n: int, cond: float = COND_MAX) -> np.ndarray:
    s = rng.uniform(1.0, cond, n)
    s[0], s[-1] = 1.0, rng.uniform(1.0, cond)
    return random_orthogonal(rng, n) @ np.diag(s) @ random_orthogonal(rng, n)


def random_rank(rng: np.random.Generator, k2: int, k1: int, r: int) -> np.ndarray:
    return rng.standard_normal((k2, r)) @ rng.standard_normal((r, k1))


def theorem_pairs(rng: np.random.Generator, trials: int):
    """Matched pairs ``(T, L T M)`` and rank-mismatched pairs, shapes up to 8x8."""
    matched, mismatched = [], []
    for _ in range(trials):
        k2, k1 = rng.integers(1, 9, size=2)
        r = int(rng.integers(0, min(k1, k2) + 1))
        t = random_rank(rng, k2, k1, r)
        matched.append((t, well_conditioned(rng, k2) @ t @ well_conditioned(rng, k1)))
    for _ in range(trials):
        k2, k1 = rng.integers(1, 9, size=2)
        r, r2 = rng.choice(min(k1, k2) + 1, size=2, replace=False)
        mismatched.append((random_rank(rng, k2, k1, int(r)), random_rank(rng, k2, k1, int(r2))))
    return matched, mismatched


def check_theorem(trials: int = 200, seed: int = SEED) -> tuple[Outcome, list]:
    rng = np.random.default_rng(seed)
    matched, mismatched = theorem_pairs(rng, trials)
    fails, worst = 0, 0.0
    pairs = []
    for t, t2 in matched:
        w = finsys.witness_graph_bounded(t, t2)
        q = finsys.quiver_iso_a2(t, t2)
        if w is None or not q or max(w.residuals) > RESIDUAL_TOL:
            fails += 1
        else:
            worst = max(worst, *w.residuals)
        pairs.append((finsys.graph_system(t), finsys.graph_system(t2)))
    refused = 0
    for t, t2 in mismatched:
        if finsys.witness_graph_bounded(t, t2) is None and not finsys.quiver_iso_a2(t, t2):
            refused += 1
        pairs.append((finsys.graph_system(t), finsys.graph_system(t2)))
    ok = fails == 0 and refused == len(mismatched)
    detail = (f"{len(matched) - fails}/{len(matched)} witnesses (max residual {worst:.1e} "
              f"<= {RESIDUAL_TOL:g}); {refused}/{len(mismatched)} mismatches refused")
    return Outcome("2", "graph witness round trip", ok, detail), pairs


def assemble(rng: np.random.Generator, dims: tuple[int, int, int, int],
             angles: np.ndarray) -> finsys.FiniteSystem:
    """System with prescribed Halmos part dimensions and generic angles."""
    mm, mp, pm, pp = dims
    g = len(angles)
    n = mm + mp + pm + pp + 2 * g
    q = random_orthogonal(rng, n)
    cols = np.split(q, np.cumsum([mm, mp, pm, pp, g]), axis=1)
    m_, mp_, pm_, _, x, y = cols
    e1 = np.hstack([m_, mp_, x])
    e2 = np.hstack([m_, pm_, x * np.cos(angles) + y * np.sin(angles)])
    return finsys.FiniteSystem(n, e1, e2)


def halmos_cases(rng: np.random.Generator, count: int):
    cases = []
    while len(cases) < count:
        n = int(rng.integers(8, 17))
        g = int(rng.integers(0, n // 2 + 1))
        cuts = np.sort(rng.integers(0, n - 2 * g + 1, size=3))
        dims = tuple(int(d) for d in np.diff(np.concatenate([[0], cuts, [n - 2 * g]])))
        angles = np.sort(rng.uniform(0.05, math.pi / 2 - 0.05, g))
        cases.append((dims, angles, assemble(rng, dims, angles)))
    return cases


def check_halmos(count: int = 100, seed: int = SEED) -> tuple[Outcome, list]:
    rng = np.random.default_rng(seed + 1)
    cases = halmos_cases(rng, count)
    bad, worst = 0, 0.0
    pairs = []
    for dims, angles, s in cases:
        h = finsys.halmos_decompose(s)
        if h.dims != dims + (len(angles),):
            bad += 1
            continue
        err = float(np.max(np.abs(h.generic_angles - angles), initial=0.0))
        worst = max(worst, err)
        bad += err > ANGLE_TOL
        pairs.append((s, s.transformed(random_orthogonal(rng, s.ambient_dim))))
    for (_, _, s), (_, _, s2) in zip(cases, cases[1:]):
        pairs.append((s, s2))
    detail = f"{count - bad}/{count} recovered; max angle error {worst:.1e} <= {ANGLE_TOL:g}"
    return Outcome("3", "Halmos decomposition recovery", bad == 0, detail), pairs


def check_unitary_refines(pairs) -> Outcome:
    bad = unitary = 0
    for a, b in pairs:
        if finsys.classify_unitary_fin(a, b):
            unitary += 1
            bad += not finsys.classify_bounded_fin(a, b)
    detail = f"{len(pairs)} pairs, {unitary} unitary, {bad} unitary but not bounded"
    return Outcome("4", "unitary refines bounded", bad == 0, detail)


# -- criteria 5-7: sequence models ------------------------------------------

def check_schatten() -> Outcome:
    problems = []
    for s in (0.5, 1.0, 2.0, 3.0):
        spec = sm.DiagonalSpec.single(p=-s)
        if sm.sh_exponent(spec) != 1 / s:
            problems.append(f"Sh(1/n^{s:g}) = {sm.sh_exponent(spec)!r}")
        if not sm.schatten_member(spec, 1 / s + SH_BOUNDARY_STEP):
            problems.append(f"1/n^{s:g} not in C^(1/s+0.1)")
        if sm.schatten_member(spec, 1 / s - SH_BOUNDARY_STEP):
            problems.append(f"1/n^{s:g} in C^(1/s-0.1)")
    worst = 0.0
    for sys in bundled().systems:
        if not sys.is_diagonal:
            continue
        spec = sys.spec()
        sym, num = sm.sh_exponent(spec), sm.sh_exponent_numeric(spec)
        if math.isinf(sym) or math.isinf(num):
            if sym != num:
                problems.append(f"{sys.id}: {sym} vs {num}")
            continue
        worst = max(worst, abs(sym - num))
        if abs(sym - num) > SH_ORACLE_TOL:
            problems.append(f"{sys.id}: {sym:.4f} vs {num:.4f}")
    detail = "; ".join(problems) or f"exact 1/s; oracle gap {worst:.1e} <= {SH_ORACLE_TOL:g}"
    return Outcome("5", "Schatten exponents", not problems, detail)


def random_compact_spec(rng: np.random.Generator) -> sm.DiagonalSpec:
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        p = -float(rng.choice([0.5, 1.0, 1.5, 2.0, 3.0]))
        q = float(rng.choice([0.0, 0.0, 1.0, -1.0]))
        terms.append(sm.SymTerm(c=float(rng.uniform(0.5, 2.0)), a=float(rng.integers(0, 3)),
                                p=p, b=float(rng.integers(1, 4)), q=q))
    overrides = []
    if rng.random() < 0.5:
        overrides.append((int(rng.integers(0, len(terms))), int(rng.integers(1, 50)),
                          float(rng.uniform(0.01, 1.0))))
    return sm.DiagonalSpec(branches=tuple(terms), overrides=tuple(overrides))


def mu_count(mu: np.ndarray, alpha: float, beta: float) -> int:
    return int(np.sum((mu >= alpha) & (mu <= beta)))


def check_counting(count: int = 50, n: int = 2000, seed: int = SEED) -> Outcome:
    rng = np.random.default_rng(seed + 2)
    cells = mismatches = 0
    for _ in range(count):
        spec = random_compact_spec(rng)
        mu = sm.mu_sequence(spec, n)
        grid = np.geomspace(mu[-1] * 1.001, mu[0], 24)
        grid = np.concatenate([grid, mu[rng.integers(0, n - 1, 8)]])
        for alpha in grid:
            for beta in grid[grid >= alpha]:
                if alpha <= mu[-1]:
                    continue
                cells += 1
                mismatches += sm.counting(spec, alpha, beta) != mu_count(mu, alpha, beta)
    detail = f"{count} specs, {cells} cells, {mismatches} mismatches"
    return Outcome("6", "counting vs mu consistency", mismatches == 0, detail)


def check_truncations(budgets: Budgets) -> Outcome:
    cfg = bundled()
    rows, ok = [], True
    for e in TABLE:
        if e.expected is not Relation.BOUNDED:
            continue
        a, b = cfg.get(e.left), cfg.get(e.right)
        if not a.is_diagonal:
            continue
        for size in TRUNCATIONS:
            ta = sm.truncate_matrix(a.spec(), size)
            tb = sm.truncate_matrix(b.spec(), size)
            agree = finsys.classify_bounded_fin(finsys.graph_system(ta), finsys.graph_system(tb))
            ok &= agree
            rows.append(f"{e.id}@{size}:{'ok' if agree else 'DISAGREE'}")
    return Outcome("7", "finite truncation soundness", ok, " ".join(rows))


# -- driver ------------------------------------------------------------------

def run_once(budgets: Budgets, disabled: frozenset[str] = frozenset()) -> list[Outcome]:
    out = check_table(budgets, disabled)
    thm, pairs = check_theorem()
    hal, pairs2 = check_halmos()
    out += [thm, hal, check_unitary_refines(pairs + pairs2), check_schatten(),
            check_counting(), check_truncations(budgets)]
    return out


def run(budgets: Budgets | None = None, disabled: frozenset[str] = frozenset()) -> list[Outcome]:
    """Criteria 1-7, then a repeat of the verdict table and counting suite that must match."""
    budgets = budgets or bundled().budgets
    first = run_once(budgets, disabled)
    again = check_table(budgets, disabled) + [check_counting()]
    keys = {(o.id, o.name) for o in again}
    same = report_json([o for o in first if (o.id, o.name) in keys]) == report_json(again)
    return first + [Outcome("8", "determinism", same,
                            "repeat pass gave " + ("identical" if same else "different") + " reports")]


def report(outcomes: list[Outcome]) -> dict:
    return {"criteria": [asdict(o) for o in outcomes],
            "passed": all(o.passed for o in outcomes)}


def report_json(outcomes: list[Outcome]) -> str:
    return json.dumps(report(outcomes), indent=2, sort_keys=True)
