"""Verdict engine for graph systems over diagonal models.

``classify_bounded_graph`` walks a fixed list of rules and the first one that
applies decides; each verdict names that rule. Rules that can only refute
(kernel, cokernel, closedness, Schatten exponent, spectral counting) never
produce an isomorphism claim, and when no rule applies the answer is
``Undecided``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from enum import Enum

import numpy as np

from . import finsys
from . import seqmodel as sm
from .seqmodel import INF, DiagonalSpec


class Relation(str, Enum):
    BOUNDED = "BoundedlyIsomorphic"
    NOT_BOUNDED = "NotBoundedlyIsomorphic"
    ALGEBRAIC = "AlgebraicallyIsomorphic"
    NOT_ALGEBRAIC = "NotAlgebraicallyIsomorphic"
    UNITARY = "UnitarilyIsomorphic"
    NOT_UNITARY = "NotUnitarilyIsomorphic"
    UNDECIDED = "Undecided"


CITATIONS = {
    "R1": "dim ker T is a bounded-isomorphism invariant: E1 & E2 = ker T + 0",
    "R2": "codimension of the closure of ran T is a unitary invariant of the operator range",
    "R3": "bounded isomorphisms preserve closedness of E1 + E2 = K + ran T",
    "R4": "closed ranges with equal kernel and cokernel: both systems split into a "
          "complementary (idempotent) pair plus kernel and cokernel pieces",
    "R5": "compact positive T, T': isomorphic iff equal kernels and "
          "g1 mu_n(T') <= mu_n(T) <= g2 mu_n(T')",
    "R5s": "closed-range summand plus compact summand: summand-wise isomorphism "
           "of direct sums",
    "R6": "the Schatten exponent Sh(T) is a bounded-isomorphism invariant",
    "R7": "Fillmore-Williams counting lemma: equal ranges force "
          "dim E[a,b] <= dim F[a/K, Kb] for one K >= 1 (necessary condition)",
    "R8": "||T1^-1 - T2^-1|| < 1 gives a unipotent bounded isomorphism",
    "R9": "no criterion applies",
    "A1": "Hamel dimension of K / ran T is 0 for closed, continuum for non-closed ranges",
    "A2": "equal Hamel-dimension quadruples",
    "D1": "derived three-subspace systems force the domain of T to be all of K",
    "D2": "derived three-subspace classification agrees with the two-subspace one "
          "for bounded T",
    "D3": "no criterion applies to two unbounded operators",
    "F1": "finite dimension: bounded and algebraic isomorphism both reduce to equal "
          "dimension quadruples",
    "F2": "Halmos decomposition: equal part dimensions and equal generic-angle multisets",
    "U0": "unitary classification of infinite-dimensional systems is not algorithmic here",
}


@dataclass(frozen=True)
class Verdict:
    relation: Relation
    rule_id: str
    citation: str
    detail: str = ""

    @classmethod
    def of(cls, relation: Relation, rule_id: str, detail: str = "") -> Verdict:
        return cls(relation, rule_id, CITATIONS[rule_id], detail)

    @property
    def decided(self) -> bool:
        return self.relation is not Relation.UNDECIDED

    def to_dict(self) -> dict:
        return {"relation": self.relation.value, "rule_id": self.rule_id,
                "citation": self.citation, "detail": self.detail}


@dataclass
class Budgets:
    n_terms: int = 100_000       # mu terms compared for multi-branch ratios
    head: int = 10_000           # head scan length
    k_cap_exp: int = 30          # dilation constants K = 2^0 .. 2^k_cap_exp
    grid: int = 200              # log-spaced alpha values
    min_k_exp: int = 16          # smallest K-cap exponent trusted for an obstruction

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_BUDGETS = Budgets()
WIDEN = 1.01


# -- ratio test --------------------------------------------------------------

@dataclass(frozen=True)
class RatioBounds:
    bounded_above: bool
    bounded_below: bool
    gamma1: float | None = None
    gamma2: float | None = None
    limit: float | None = None


def _same(x: float, y: float) -> bool:
    return math.isclose(x, y, rel_tol=1e-12, abs_tol=1e-15)


def _cmp_exponents(e: tuple[float, float], f: tuple[float, float]) -> int:
    """Compare decay profiles ``n^p log^q``: +1 if ``e`` decays slower."""
    for x, y in zip(e, f):
        if not _same(x, y):
            return 1 if x > y else -1
    return 0


def _slowest(spec: DiagonalSpec) -> tuple[float, float]:
    best = None
    for t in spec.branches:
        if best is None or _cmp_exponents(t.exponents, best) > 0:
            best = t.exponents
    return best


def _asymptotic_constant(spec: DiagonalSpec) -> float:
    # mu_n ~ C n^p log(n)^q: the slowest branches add up in the counting
    # function, sum_i (c_i / x)^(-1/p), which inverts to C = (sum c_i^(-1/p))^(-p)
    p, q = _slowest(spec)
    group = [t.c for t in spec.branches if _cmp_exponents(t.exponents, (p, q)) == 0]
    if p == 0:
        return max(group)
    return sum(c ** (-1.0 / p) for c in group) ** (-p)


def ratio_bounded(a: DiagonalSpec, b: DiagonalSpec,
                  budgets: Budgets = DEFAULT_BUDGETS) -> RatioBounds:
    """Is ``mu_n(a) / mu_n(b)`` bounded above and/or below?

    The decision is symbolic: the ratio is comparable to
    ``n^(p-p') log(n)^(q-q')`` for the slowest-decaying branches. The gammas
    come from the first terms of both singular-value sequences together
    with the limiting ratio, widened by 1%.
    """
    if not (a.is_compact and b.is_compact):
        raise ValueError("ratio test needs compact models")
    if a.branches == b.branches and a.overrides == b.overrides:
        return RatioBounds(True, True, 1.0, 1.0, 1.0)
    single = len(a.branches) == 1 and len(b.branches) == 1
    n = budgets.head if single else budgets.n_terms
    r = sm.mu_sequence(a, n) / sm.mu_sequence(b, n)
    lo, hi = float(r.min()), float(r.max())
    order = _cmp_exponents(_slowest(a), _slowest(b))
    if order == 0:
        lim = _asymptotic_constant(a) / _asymptotic_constant(b)
        return RatioBounds(True, True, min(lo, lim) / WIDEN, max(hi, lim) * WIDEN, lim)
    if order > 0:
        return RatioBounds(False, True, lo / WIDEN, None, INF)
    return RatioBounds(True, False, None, hi * WIDEN, 0.0)


# -- spectral counting obstruction ------------------------------------------

def _last_at_least(br_term: sm.SymTerm, n0: int, xs: np.ndarray) -> np.ndarray:
    """Largest ``n >= n0`` with ``v(n) >= x`` for a decreasing tail (``n0 - 1`` if none)."""
    t = br_term
    with np.errstate(all="ignore"):
        x = np.power(xs / t.c, 1.0 / t.p) - t.a if t.p != 0 else np.exp(np.power(xs / t.c, 1.0 / t.q)) - t.b
        if t.q != 0 and t.p != 0:
            for _ in range(30):
                xc = np.clip(x, 1.0, 2.0**60)
                x = np.power(xs / (t.c * np.power(np.log(xc + t.b), t.q)), 1.0 / t.p) - t.a
    x = np.nan_to_num(x, nan=2.0**60, posinf=2.0**60)
    k = np.clip(np.floor(x), n0 - 1, 2.0**60)
    for _ in range(4):
        up = t.values(k + 1) >= xs
        k = np.where(up, k + 1, k)
        down = (k >= n0) & (t.values(np.maximum(k, 1)) < xs)
        k = np.where(down, k - 1, k)
    return k


def count_at_least(spec: DiagonalSpec | None, xs: np.ndarray) -> np.ndarray:
    """Vectorized ``#{mu_n >= x}`` for a compact model (float, exact below 2^53)."""
    xs = np.asarray(xs, dtype=float)
    total = np.zeros(xs.shape)
    if spec is None:
        return total
    for i, t in enumerate(spec.branches):
        br = spec._branches[i]
        extra = np.sort(np.concatenate([br.head, np.fromiter(br.tail_overrides.values(), float)]))
        total += extra.size - np.searchsorted(extra, xs, side="left")
        last = _last_at_least(t, br.n0, xs)
        total += np.maximum(last - br.n0 + 1, 0)
        if br.tail_overrides:
            ov = np.sort(np.fromiter(br.tail_overrides, float))
            total -= np.searchsorted(ov, last, side="right")
    return total


class _Normalized:
    """Bounded stand-in with the same range class: closed-range summands collapse
    to one eigenvalue ``closed`` of infinite multiplicity, compact summands stay."""

    def __init__(self, spec: DiagonalSpec, closed: float):
        self.compact = spec.compact_part()
        self.closed = closed if spec.has_closed_part else None

    def count(self, alpha: float, beta: float) -> float:
        if self.closed is not None and alpha <= self.closed <= beta:
            return INF
        return sm.counting(self.compact, alpha, beta) if self.compact else 0

    def grid(self, alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
        ge = count_at_least(self.compact, alphas)
        gt = count_at_least(self.compact, np.nextafter(betas, np.inf))
        n = np.maximum(ge[:, None] - gt[None, :], 0.0)
        if self.closed is not None:
            hit = (alphas[:, None] <= self.closed) & (self.closed <= betas[None, :])
            n = np.where(hit, INF, n)
        return n

    def top(self) -> float:
        if self.compact is None:
            return 0.0
        return max(float(self.compact.branch_values(i, self.compact.branch_n0(i) + 1).max())
                   for i in range(len(self.compact.branches)))


@dataclass(frozen=True)
class Violation:
    k: float
    direction: str      # "a<=b" or "b<=a": which inequality fails
    alpha: float
    beta: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class Obstruction:
    k_cap: float
    violations: tuple[Violation, ...]
    certificate: str | None = None

    def summary(self) -> str:
        v = self.violations[-1]
        s = (f"for every K = 2^0..{self.k_cap:.0f} some window violates the counting "
             f"inequality; at K = {v.k:.0f}: N[{v.alpha:.6g}, {v.beta:.6g}] = {v.lhs:g} "
             f"> {v.rhs:g} ({v.direction})")
        if self.certificate:
            s += f"; {self.certificate}"
        return s


def _pure_power(spec: DiagonalSpec | None) -> sm.SymTerm | None:
    if spec is None or len(spec.branches) != 1 or spec.overrides:
        return None
    t = spec.branches[0]
    return t if t.a == 0 and t.q == 0 and t.p < 0 else None


def _power_certificate(na: _Normalized, nb: _Normalized) -> tuple[str, bool] | None:
    """Symbolic all-K refutation for ``c n^p (+) closed`` against ``d n^p' (+) closed``.

    With the slower sequence c and ``m0 = min{m : c_m <= 1/K}``, comparability
    would force ``c_(n+m0) <= K d_n`` for all n, i.e. ``n^|p'| / (n+m0)^|p|``
    bounded; that fails whenever ``|p'| > |p|``.
    """
    if na.closed is None or nb.closed is None:
        return None
    ta, tb = _pure_power(na.compact), _pure_power(nb.compact)
    if ta is None or tb is None or _same(ta.p, tb.p):
        return None
    a_slow = ta.p > tb.p
    slow, fast = (ta, tb) if a_slow else (tb, ta)
    text = (f"n^{-fast.p:g} / (n + m0)^{-slow.p:g} is unbounded in n for every m0 "
            f"since {-fast.p:g} > {-slow.p:g}")
    return text, a_slow


def _m0_violation(slow: _Normalized, fast: _Normalized, k: float,
                  direction: str) -> Violation | None:
    # window [alpha, beta] below closed/K, alpha = c_(n + m0) pushed down until
    # the slow side out-counts the dilated fast side
    beta = min(slow.closed, fast.closed) / k * (1 - 1e-12)
    beta = min(beta, slow.top())
    if beta <= 0:
        return None
    t = slow.compact.branches[0]
    m0 = sm._first_true(lambda m: sm.eval_term(t, m) <= beta, 1, sm._solve(t, beta))
    n = 1
    while n < 2**62:
        alpha = sm.eval_term(t, n + m0)
        if alpha <= 0:
            return None
        lhs = slow.count(alpha, beta)
        rhs = fast.count(alpha / k, k * beta)
        if lhs > rhs:
            return Violation(k, direction, alpha, beta, lhs, rhs)
        n *= 2
    return None


def _grid_violation(x: _Normalized, y: _Normalized, k: float, alphas: np.ndarray,
                    betas: np.ndarray, direction: str) -> Violation | None:
    lhs = x.grid(alphas, betas)
    rhs = y.grid(alphas / k, betas * k)
    valid = alphas[:, None] <= betas[None, :]
    with np.errstate(invalid="ignore"):
        margin = np.where(valid & (lhs > rhs), np.where(np.isinf(lhs), INF, lhs - rhs), -1.0)
    flat = np.argsort(margin, axis=None)[::-1][:10]
    for idx in flat:
        i, j = np.unravel_index(idx, margin.shape)
        if margin[i, j] <= 0:
            break
        al, be = float(alphas[i]), float(betas[j])
        l_exact, r_exact = x.count(al, be), y.count(al / k, be * k)
        if l_exact > r_exact:
            return Violation(k, direction, al, be, l_exact, r_exact)
    return None


def _branch_floor(spec: DiagonalSpec | None) -> float:
    if spec is None:
        return 0.0
    return max(sm.eval_term(t, 2**50) for t in spec.branches)


def counting_obstructed(a: DiagonalSpec, b: DiagonalSpec,
                        budgets: Budgets = DEFAULT_BUDGETS) -> Obstruction | None:
    """Search for a refutation of the counting comparability of ``a`` and ``b``.

    Both models are first replaced by bounded stand-ins (closed-range
    summands become one eigenvalue of infinite multiplicity), which keeps the
    graph systems' isomorphism class. For each ``K = 2^0 .. 2^k_cap_exp`` a
    window ``[alpha, beta]`` is sought with ``N_a[alpha, beta] >
    N_b[alpha/K, K beta]`` or the same with ``a``, ``b`` swapped; an
    obstruction needs such a window at every ``K``. Budgets below
    ``min_k_exp`` are not trusted and yield None.
    """
    if budgets.k_cap_exp < budgets.min_k_exp:
        return None
    top = max(_Normalized(a, 1.0).top(), _Normalized(b, 1.0).top(), 1.0)
    closed = 2.0 * top
    na, nb = _Normalized(a, closed), _Normalized(b, closed)
    floor = max(_branch_floor(na.compact), _branch_floor(nb.compact), 1e-300)
    cert = _power_certificate(na, nb)
    found = []
    for e in range(budgets.k_cap_exp + 1):
        k = float(2**e)
        v = None
        if cert is not None:
            a_slow = cert[1]
            v = (_m0_violation(na, nb, k, "a<=b") if a_slow
                 else _m0_violation(nb, na, k, "b<=a"))
        if v is None:
            lo = min(floor * k, closed / 4)
            alphas = np.geomspace(lo, 2 * closed, budgets.grid)
            betas = np.unique(np.concatenate([alphas, [closed / k * (1 - 1e-12),
                                                       closed * (1 - 1e-12)]]))
            v = (_grid_violation(na, nb, k, alphas, betas, "a<=b")
                 or _grid_violation(nb, na, k, alphas, betas, "b<=a"))
        if v is None:
            return None
        found.append(v)
    return Obstruction(float(2**budgets.k_cap_exp), tuple(found), cert[0] if cert else None)


# -- inverse perturbation ----------------------------------------------------

@dataclass(frozen=True)
class InverseCertificate:
    sup_diff: float
    head: int


def _invertible(spec: DiagonalSpec) -> bool:
    return (spec.kernel_dim == sm.Finite(0) and spec.shift_offset == 0
            and not spec.decaying)


def inverse_perturbation_iso(a: DiagonalSpec, b: DiagonalSpec,
                             budgets: Budgets = DEFAULT_BUDGETS) -> InverseCertificate | None:
    """Certificate that ``sup |1/a_n - 1/b_n| < 1`` (entries paired branch by branch).

    Head indices are scanned directly; past the scan both reciprocals are
    monotone, so each stays between its value at the scan end and its limit,
    which bounds the tail difference. None means inconclusive.
    """
    if not (_invertible(a) and _invertible(b)):
        raise ValueError("inverse perturbation needs models with bounded inverse")
    if len(a.branches) != len(b.branches) or sorted(a.interval_parts) != sorted(b.interval_parts):
        return None
    sup = 0.0
    for i, (ta, tb) in enumerate(zip(a.branches, b.branches)):
        ov = [n for j, n, _ in a.overrides + b.overrides if j == i]
        n = max([budgets.head, a.branch_n0(i), b.branch_n0(i)] + ov)
        ra = 1.0 / a.branch_values(i, n)
        rb = 1.0 / b.branch_values(i, n)
        sup = max(sup, float(np.max(np.abs(ra - rb))))
        if ta == tb:
            continue  # identical formulas past the scan
        ends = []
        for t, r in ((ta, ra), (tb, rb)):
            lim = sm.eventual_limit(t)
            lim = 0.0 if lim == INF else 1.0 / lim
            nxt = 1.0 / sm.eval_term(t, n + 1)
            ends.append((min(lim, nxt), max(lim, nxt)))
        (la, ha), (lb, hb) = ends
        sup = max(sup, abs(ha - lb), abs(hb - la))
    if sup < 1.0:
        return InverseCertificate(sup, budgets.head)
    return None


# -- verdicts ----------------------------------------------------------------

def sum_closed_graph(spec: DiagonalSpec) -> bool:
    """Closedness of ``E1 + E2 = K + ran T`` for the graph system of ``spec``."""
    return sm.range_closed(spec)


def _sh_note(a: DiagonalSpec, b: DiagonalSpec) -> str:
    return f"Sh = {sm.sh_exponent(a):g} vs {sm.sh_exponent(b):g}"


def classify_bounded_graph(a: DiagonalSpec, b: DiagonalSpec,
                           budgets: Budgets = DEFAULT_BUDGETS,
                           disabled: frozenset[str] = frozenset()) -> Verdict:
    """First applicable rule of R1..R9 decides; ``disabled`` skips rules (mutation checks)."""
    return _classify(a, b, budgets, frozenset(disabled))


def _classify(a: DiagonalSpec, b: DiagonalSpec, budgets: Budgets,
              disabled: frozenset[str]) -> Verdict:
    NOT, ISO = Relation.NOT_BOUNDED, Relation.BOUNDED
    on = lambda rule: rule not in disabled
    if on("R1") and a.kernel_dim != b.kernel_dim:
        return Verdict.of(NOT, "R1", f"dim ker = {a.kernel_dim} vs {b.kernel_dim}")
    ca, cb = sm.cokernel_dim(a), sm.cokernel_dim(b)
    if on("R2") and ca != cb:
        return Verdict.of(NOT, "R2", f"codim of closed range = {ca} vs {cb}")
    closed_a, closed_b = sm.range_closed(a), sm.range_closed(b)
    if on("R3") and closed_a != closed_b:
        return Verdict.of(NOT, "R3", f"range closed: {closed_a} vs {closed_b}")
    if on("R4") and closed_a and closed_b:
        return Verdict.of(ISO, "R4", "both ranges closed")
    if on("R5") and a.is_compact and b.is_compact:
        rb = ratio_bounded(a, b, budgets)
        if rb.bounded_above and rb.bounded_below:
            return Verdict.of(ISO, "R5", f"gamma1 = {rb.gamma1:.6g}, gamma2 = {rb.gamma2:.6g}; "
                              + _sh_note(a, b))
        side = "above" if not rb.bounded_above else "below"
        return Verdict.of(NOT, "R5", f"mu ratio unbounded {side}; " + _sh_note(a, b))
    if on("R5s") and a.decaying and b.decaying and not (a.is_compact or b.is_compact):
        # both split as closed-range summand (+) compact summand
        rb = ratio_bounded(a.compact_part(), b.compact_part(), budgets)
        if rb.bounded_above and rb.bounded_below:
            return Verdict.of(ISO, "R5s", f"compact summands comparable: gamma1 = "
                              f"{rb.gamma1:.6g}, gamma2 = {rb.gamma2:.6g}")
    sa, sb = sm.sh_exponent(a), sm.sh_exponent(b)
    if on("R6") and math.isfinite(sa) and math.isfinite(sb) and not _same(sa, sb):
        return Verdict.of(NOT, "R6", _sh_note(a, b))
    obs = counting_obstructed(a, b, budgets) if on("R7") else None
    if obs is not None:
        return Verdict.of(NOT, "R7", obs.summary())
    if on("R8") and _invertible(a) and _invertible(b):
        cert = inverse_perturbation_iso(a, b, budgets)
        if cert is not None:
            return Verdict.of(ISO, "R8", f"sup |1/a_n - 1/b_n| <= {cert.sup_diff:.6g} < 1")
    note = ""
    if budgets.k_cap_exp < budgets.min_k_exp:
        note = (f"counting search skipped: K cap 2^{budgets.k_cap_exp} below trusted "
                f"minimum 2^{budgets.min_k_exp}")
    return Verdict.of(Relation.UNDECIDED, "R9", note)


def graph_hamel_quadruple(spec: DiagonalSpec) -> tuple[sm.CardinalDim, ...]:
    """Hamel dimensions (E1&E2, E1/meet, E2/meet, H/(E1+E2)) of the graph system."""
    quotient = sm.cokernel_dim(spec) if sm.range_closed(spec) else sm.CONTINUUM
    return (spec.kernel_dim, sm.CONTINUUM, sm.CONTINUUM, quotient)


def classify_algebraic_graph(a: DiagonalSpec, b: DiagonalSpec) -> Verdict:
    for s in (a, b):
        if s.kernel_dim != sm.Finite(0):
            raise ValueError("algebraic criterion needs nonzero diagonal entries (trivial kernel)")
    closed_a, closed_b = sm.range_closed(a), sm.range_closed(b)
    if closed_a != closed_b:
        return Verdict.of(Relation.NOT_ALGEBRAIC, "A1",
                          f"range closed: {closed_a} vs {closed_b}")
    qa, qb = graph_hamel_quadruple(a), graph_hamel_quadruple(b)
    if qa != qb:
        return Verdict.of(Relation.NOT_ALGEBRAIC, "A2",
                          f"quadruples {tuple(map(str, qa))} vs {tuple(map(str, qb))}")
    return Verdict.of(Relation.ALGEBRAIC, "A2", f"quadruple {tuple(map(str, qa))}")


def derived_three_compatible(a: DiagonalSpec, b: DiagonalSpec,
                             budgets: Budgets = DEFAULT_BUDGETS) -> Verdict:
    """Bounded isomorphism of the derived systems ``(H; K+0, 0+K, graph T)``."""
    ta, tb = sm.domain_total(a), sm.domain_total(b)
    if ta != tb:
        return Verdict.of(Relation.NOT_BOUNDED, "D1", f"bounded: {ta} vs {tb}")
    if ta:
        v = classify_bounded_graph(a, b, budgets)
        return Verdict(v.relation, v.rule_id, CITATIONS["D2"] + "; " + v.citation, v.detail)
    return Verdict.of(Relation.UNDECIDED, "D3")


def classify_finite(a: finsys.FiniteSystem, b: finsys.FiniteSystem, relation: str = "bounded",
                    tol: float = finsys.ANGLE_TOL) -> Verdict:
    """Verdict wrapper around the finite-dimensional classifiers."""
    if relation == "unitary":
        ok = finsys.classify_unitary_fin(a, b, tol)
        ha, hb = finsys.halmos_decompose(a, tol), finsys.halmos_decompose(b, tol)
        return Verdict.of(Relation.UNITARY if ok else Relation.NOT_UNITARY, "F2",
                          f"Halmos dims {ha.dims} vs {hb.dims}")
    qa, qb = finsys.dim_quadruple(a, tol), finsys.dim_quadruple(b, tol)
    ok = a.ambient_dim == b.ambient_dim and qa == qb
    if relation == "algebraic":
        rel = Relation.ALGEBRAIC if ok else Relation.NOT_ALGEBRAIC
    elif relation == "bounded":
        rel = Relation.BOUNDED if ok else Relation.NOT_BOUNDED
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return Verdict.of(rel, "F1", f"quadruples {tuple(qa)} vs {tuple(qb)}")


def classify_diagonal(a: DiagonalSpec, b: DiagonalSpec, relation: str = "bounded",
                      budgets: Budgets = DEFAULT_BUDGETS) -> Verdict:
    if relation == "bounded":
        return classify_bounded_graph(a, b, budgets)
    if relation == "algebraic":
        return classify_algebraic_graph(a, b)
    if relation == "unitary":
        return Verdict.of(Relation.UNDECIDED, "U0")
    raise ValueError(f"unknown relation {relation!r}")
