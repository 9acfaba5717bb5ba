"""Symbolic diagonal models of closed operators on l^2(N).

An operator is a direct sum of *branches*, each a diagonal operator whose
n-th entry is ``c * (n + a)**p * log(n + b)**q``, plus optional finite
overrides, a kernel of given dimension, a shift that pushes the range down
by a fixed offset, and multiplication operators on intervals ``[lo, hi]``
(continuous spectrum of infinite multiplicity).

Everything the classifiers need is answered here: singular values, Schatten
exponent, spectral counting, closedness of the range, boundedness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
import numpy as np

HEAD_SCAN = 10_000
INF = math.inf
MAX_INDEX = 10**307


@dataclass(frozen=True)
class SymTerm:
    """The sequence ``n -> c * (n + a)**p * log(n + b)**q`` for ``n >= 1``."""

    c: float = 1.0
    a: float = 0.0
    p: float = 0.0
    b: float = 1.0
    q: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"coefficient must be positive, got {self.c}")
        if self.a < 0:
            raise ValueError(f"shift a must be >= 0, got {self.a}")
        if self.b < 1:
            raise ValueError(f"log shift b must be >= 1, got {self.b}")
        for name in ("c", "a", "p", "b", "q"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def values(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=float)
        out = self.c * np.power(ns + self.a, self.p)
        if self.q != 0:
            out = out * np.power(np.log(ns + self.b), self.q)
        return out

    def power(self, s: float) -> SymTerm:
        """Entrywise ``s``-th power, still a term of the same family."""
        return SymTerm(self.c**s, self.a, self.p * s, self.b, self.q * s)

    @property
    def direction(self) -> int:
        """Eventual monotonicity: -1 decreasing to 0, +1 increasing to infinity, 0 constant."""
        if self.p != 0:
            return -1 if self.p < 0 else 1
        if self.q != 0:
            return -1 if self.q < 0 else 1
        return 0

    @property
    def exponents(self) -> tuple[float, float]:
        return (self.p, self.q)

    def as_dict(self) -> dict:
        return {"c": self.c, "a": self.a, "p": self.p, "b": self.b, "q": self.q}


def eval_term(t: SymTerm, n: int) -> float:
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    return float(t.values(np.array([float(n)]))[0])


@dataclass(frozen=True)
class CardinalDim:
    """Finite count, or ``None`` for the continuum."""

    count: int | None = 0

    def __post_init__(self):
        if self.count is not None and self.count < 0:
            raise ValueError(f"negative dimension {self.count}")

    @property
    def is_continuum(self) -> bool:
        return self.count is None

    def __add__(self, other: CardinalDim | int) -> CardinalDim:
        k = other.count if isinstance(other, CardinalDim) else other
        if self.count is None or k is None:
            return CONTINUUM
        return CardinalDim(self.count + k)

    def __str__(self):
        return "continuum" if self.count is None else str(self.count)

    def to_json(self):
        return "continuum" if self.count is None else self.count

    @classmethod
    def parse(cls, value) -> CardinalDim:
        if isinstance(value, CardinalDim):
            return value
        if value in ("continuum", "c", None):
            return CONTINUUM
        k = int(value)
        if k < 0 or k != value:
            raise ValueError(f"bad dimension {value!r}")
        return cls(k)


CONTINUUM = CardinalDim(None)


def Finite(k: int) -> CardinalDim:
    return CardinalDim(int(k))


# -- per-branch monotone structure -------------------------------------------

def _eventually_monotone(t: SymTerm, x: float) -> bool:
    # sign of d/dx log v(x) times (x+a)(x+b)log(x+b) is
    # g(x) = p (x+b) log(x+b) + q (x+a); g'' = p/(x+b) has the sign of p, so
    # g(x), g'(x) both carrying sign(p) at x settles it for all larger x
    p, q = t.p, t.q
    if p == 0 or q == 0 or (p > 0) == (q > 0):
        return True
    lg = math.log(x + t.b)
    g = p * (x + t.b) * lg + q * (x + t.a)
    dg = p * (lg + 1) + q
    return g * p > 0 and dg * p >= 0


@dataclass(frozen=True)
class _Branch:
    term: SymTerm
    n0: int                      # monotone (direction) for n >= n0
    head: np.ndarray             # effective values for n < n0
    tail_overrides: dict         # n >= n0 -> value

    def value(self, n: int) -> float:
        if n < self.n0:
            return float(self.head[n - 1])
        if n in self.tail_overrides:
            return self.tail_overrides[n]
        return eval_term(self.term, n)

    def values(self, count: int) -> np.ndarray:
        """Effective values for ``n = 1..count``."""
        ns = np.arange(1, count + 1, dtype=float)
        vals = self.term.values(ns)
        k = min(len(self.head), count)
        vals[:k] = self.head[:k]
        for n, v in self.tail_overrides.items():
            if n <= count:
                vals[n - 1] = v
        return vals


def _build_branch(t: SymTerm, overrides: dict) -> _Branch:
    d = t.direction
    n0 = 1
    if d != 0:
        vals = t.values(np.arange(1, HEAD_SCAN + 2, dtype=float))
        bad = np.nonzero(d * np.diff(vals) < 0)[0]
        if bad.size:
            n0 = int(bad[-1]) + 2
        if not _eventually_monotone(t, float(HEAD_SCAN)):
            raise ValueError(f"term {t} is not monotone past n = {HEAD_SCAN}")
    head = t.values(np.arange(1, n0, dtype=float))
    tail = {}
    for n, v in overrides.items():
        if n < n0:
            head[n - 1] = v
        else:
            tail[n] = float(v)
    return _Branch(t, n0, head, tail)


# -- integer search on monotone predicates ---------------------------------

def _first_true(pred, lo: int, guess: int) -> int:
    """Smallest ``n >= lo`` with ``pred(n)``; ``pred`` monotone False..True, eventually True."""
    g = max(lo, int(guess))
    if pred(g):
        hi, step = g, 1
        while True:
            cand = hi - step
            if cand < lo:
                bad = lo - 1
                break
            if not pred(cand):
                bad = cand
                break
            hi, step = cand, step * 2
    else:
        bad, step = g, 1
        while True:
            cand = bad + step
            if cand > MAX_INDEX:
                raise OverflowError("count exceeds representable index range")
            if pred(cand):
                hi = cand
                break
            bad, step = cand, step * 2
    while hi - bad > 1:
        mid = (hi + bad) // 2
        if pred(mid):
            hi = mid
        else:
            bad = mid
    return hi


def _solve(t: SymTerm, y: float) -> float:
    """Approximate real ``x`` with ``v(x) = y`` on the monotone part (a search hint only)."""
    if t.p == 0:
        if t.q == 0:
            return 1.0
        # c log(x+b)^q = y
        try:
            lg = (y / t.c) ** (1.0 / t.q)
        except OverflowError:
            return float(MAX_INDEX)
        if lg > 700:
            return float(MAX_INDEX)
        return max(1.0, math.exp(lg) - t.b)
    try:
        x = (y / t.c) ** (1.0 / t.p) - t.a
    except (OverflowError, ZeroDivisionError):
        return float(MAX_INDEX)
    if t.q != 0:
        # fixed point on x = (y / (c log(x+b)^q))^(1/p) - a
        for _ in range(20):
            x = max(x, 1.0)
            if x > 1e300:
                break
            try:
                x = (y / (t.c * math.log(x + t.b) ** t.q)) ** (1.0 / t.p) - t.a
            except (OverflowError, ZeroDivisionError, ValueError):
                break
    if not math.isfinite(x) or x > 1e300:
        return float(MAX_INDEX)
    return max(1.0, x)


def _branch_count(br: _Branch, alpha: float, beta: float) -> float:
    head = br.head
    total = int(np.sum((head >= alpha) & (head <= beta)))
    total += sum(1 for v in br.tail_overrides.values() if alpha <= v <= beta)
    t = br.term
    d = t.direction
    v = lambda n: eval_term(t, n)
    if d == 0:
        return INF if alpha <= t.c <= beta else total
    n0 = br.n0
    if d < 0:
        lo = _first_true(lambda n: v(n) <= beta, n0, _solve(t, beta))
        hi = _first_true(lambda n: v(n) < alpha, n0, _solve(t, alpha)) - 1
    else:
        lo = _first_true(lambda n: v(n) >= alpha, n0, _solve(t, alpha))
        hi = _first_true(lambda n: v(n) > beta, n0, _solve(t, beta)) - 1
    if hi >= lo:
        total += hi - lo + 1
        total -= sum(1 for n in br.tail_overrides if lo <= n <= hi)
    return total


# -- the model ---------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalSpec:
    branches: tuple[SymTerm, ...] = ()
    overrides: tuple[tuple[int, int, float], ...] = ()
    shift_offset: int = 0
    kernel_dim: CardinalDim = field(default_factory=lambda: Finite(0))
    interval_parts: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "overrides",
                           tuple((int(i), int(n), float(v)) for i, n, v in self.overrides))
        object.__setattr__(self, "interval_parts",
                           tuple((float(lo), float(hi)) for lo, hi in self.interval_parts))
        object.__setattr__(self, "kernel_dim", CardinalDim.parse(self.kernel_dim))
        if not self.branches and not self.interval_parts:
            raise ValueError("a model needs at least one branch or interval part")
        if self.shift_offset < 0:
            raise ValueError("shift_offset must be >= 0")
        for i, n, v in self.overrides:
            if not 0 <= i < len(self.branches):
                raise ValueError(f"override refers to missing branch {i}")
            if n < 1 or not v > 0 or not math.isfinite(v):
                raise ValueError(f"override ({i}, {n}, {v}) must have n >= 1 and value > 0")
        for lo, hi in self.interval_parts:
            if not 0 < lo <= hi or not math.isfinite(hi):
                raise ValueError(f"interval part ({lo}, {hi}) needs 0 < lo <= hi")
        self._branches  # construction-time monotonicity check

    @classmethod
    def single(cls, c=1.0, a=0.0, p=0.0, b=1.0, q=0.0, **kw) -> DiagonalSpec:
        return cls(branches=(SymTerm(c, a, p, b, q),), **kw)

    @cached_property
    def _branches(self) -> tuple[_Branch, ...]:
        per = [dict() for _ in self.branches]
        for i, n, v in self.overrides:
            per[i][n] = v
        return tuple(_build_branch(t, o) for t, o in zip(self.branches, per))

    # -- structural predicates

    @property
    def decaying(self) -> tuple[SymTerm, ...]:
        return tuple(t for t in self.branches if t.direction < 0)

    @property
    def has_closed_part(self) -> bool:
        """Some branch or interval is bounded below (closed-range summand)."""
        return bool(self.interval_parts) or any(t.direction >= 0 for t in self.branches)

    @property
    def is_compact(self) -> bool:
        return not self.has_closed_part

    def compact_part(self) -> DiagonalSpec | None:
        keep = [i for i, t in enumerate(self.branches) if t.direction < 0]
        if not keep:
            return None
        idx = {old: new for new, old in enumerate(keep)}
        return DiagonalSpec(
            branches=tuple(self.branches[i] for i in keep),
            overrides=tuple((idx[i], n, v) for i, n, v in self.overrides if i in idx),
        )

    def with_kernel(self, k) -> DiagonalSpec:
        return DiagonalSpec(self.branches, self.overrides, self.shift_offset,
                            CardinalDim.parse(k), self.interval_parts)

    def value(self, branch: int, n: int) -> float:
        return self._branches[branch].value(n)

    def branch_values(self, branch: int, count: int) -> np.ndarray:
        return self._branches[branch].values(count)

    def branch_n0(self, branch: int) -> int:
        return self._branches[branch].n0

    def as_dict(self) -> dict:
        return {
            "branches": [t.as_dict() for t in self.branches],
            "overrides": [list(o) for o in self.overrides],
            "shift_offset": self.shift_offset,
            "kernel_dim": self.kernel_dim.to_json(),
            "interval_parts": [list(iv) for iv in self.interval_parts],
        }

    @classmethod
    def from_dict(cls, d: dict) -> DiagonalSpec:
        unknown = set(d) - {"branches", "overrides", "shift_offset", "kernel_dim", "interval_parts"}
        if unknown:
            raise ValueError(f"unknown diagonal fields: {sorted(unknown)}")
        return cls(
            branches=tuple(SymTerm(**b) for b in d.get("branches", [])),
            overrides=tuple(tuple(o) for o in d.get("overrides", [])),
            shift_offset=int(d.get("shift_offset", 0)),
            kernel_dim=CardinalDim.parse(d.get("kernel_dim", 0)),
            interval_parts=tuple(tuple(iv) for iv in d.get("interval_parts", [])),
        )


def direct_sum(*specs: DiagonalSpec) -> DiagonalSpec:
    branches, overrides, intervals = [], [], []
    kernel, shift = Finite(0), 0
    for s in specs:
        base = len(branches)
        branches.extend(s.branches)
        overrides.extend((i + base, n, v) for i, n, v in s.overrides)
        intervals.extend(s.interval_parts)
        kernel = kernel + s.kernel_dim
        shift += s.shift_offset
    return DiagonalSpec(tuple(branches), tuple(overrides), shift, kernel, tuple(intervals))


# -- operations --------------------------------------------------------------

def _converges(t: SymTerm, alpha: float) -> bool:
    pa, qa = t.p * alpha, t.q * alpha
    if math.isclose(pa, -1.0, rel_tol=1e-12, abs_tol=0.0):
        return qa < -1.0 and not math.isclose(qa, -1.0, rel_tol=1e-12)
    return pa < -1.0


def schatten_member(spec: DiagonalSpec, alpha: float) -> bool:
    """Whether ``sum mu_n^alpha`` converges (trace of ``|T|^alpha`` finite)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if spec.interval_parts:
        return False
    return all(_converges(t, alpha) for t in spec.branches)


def sh_exponent(spec: DiagonalSpec) -> float:
    """Infimum of the Schatten exponents containing the operator; ``inf`` if none.

    A branch ``n^p (log n)^q`` with ``p < 0`` contributes ``-1/p`` (the log
    factor only decides the boundary exponent itself). Non-compact or
    non-Schatten models return ``inf`` by convention.
    """
    if spec.interval_parts:
        return INF
    sh = 0.0
    for t in spec.branches:
        if t.p < 0:
            sh = max(sh, -1.0 / t.p)
        else:
            return INF
    return sh


def mu_sequence(spec: DiagonalSpec, count: int) -> np.ndarray:
    """First ``count`` singular values (decreasing rearrangement over all branches)."""
    if not spec.is_compact:
        raise ValueError("singular values requested for a non-compact model")
    if count < 0:
        raise ValueError("count must be >= 0")
    parts = []
    for br in spec._branches:
        # top `count` values of a branch lie among its first n0 + count + #overrides
        m = br.n0 + count + len(br.tail_overrides)
        parts.append(np.sort(br.values(m))[::-1][:count])
    merged = np.sort(np.concatenate(parts))[::-1]
    return merged[:count]


def counting(spec: DiagonalSpec, alpha: float, beta: float) -> float:
    """Dimension of the spectral subspace of ``|T|`` for ``[alpha, beta]``; may be ``inf``."""
    if not 0 < alpha <= beta:
        raise ValueError(f"need 0 < alpha <= beta, got {alpha}, {beta}")
    for lo, hi in spec.interval_parts:
        if lo == hi:
            if alpha <= lo <= beta:
                return INF
        elif min(hi, beta) > max(lo, alpha):
            return INF
    total = 0
    for br in spec._branches:
        total += _branch_count(br, alpha, beta)
        if total == INF:
            return INF
    return total


class SpectralProfile:
    """The counting function ``(alpha, beta) -> N(alpha, beta)`` of a model."""

    def __init__(self, spec: DiagonalSpec):
        self.spec = spec

    def __call__(self, alpha: float, beta: float) -> float:
        return counting(self.spec, alpha, beta)


def range_closed(spec: DiagonalSpec) -> bool:
    """Closed range iff nonzero diagonal values stay away from 0."""
    return not spec.decaying


def domain_total(spec: DiagonalSpec) -> bool:
    """Everywhere defined (bounded) iff no branch grows without bound."""
    return all(t.direction <= 0 for t in spec.branches)


def cokernel_dim(spec: DiagonalSpec) -> CardinalDim:
    """Codimension of the closure of the range."""
    return spec.kernel_dim + spec.shift_offset


def eventual_limit(t: SymTerm) -> float:
    return {-1: 0.0, 0: t.c, 1: INF}[t.direction]


def truncate_matrix(spec: DiagonalSpec, size: int) -> np.ndarray:
    """Finite section with ``size`` diagonal entries, branches interleaved.

    Interval parts contribute evenly spaced points of the interval, a finite
    kernel contributes zero columns, and the shift places the entries
    ``shift_offset`` rows below the diagonal.
    """
    pieces = len(spec.branches) + len(spec.interval_parts)
    per = -(-size // pieces)
    cols = []
    for i in range(len(spec.branches)):
        cols.append(spec.branch_values(i, per))
    for lo, hi in spec.interval_parts:
        cols.append(np.linspace(lo, hi, per))
    diag = np.stack(cols, axis=1).reshape(-1)[:size]
    k = spec.kernel_dim.count or 0
    n = size + k
    m = np.zeros((n + spec.shift_offset, n))
    m[np.arange(size) + spec.shift_offset, np.arange(size)] = diag
    return m


# -- numerical oracle for the Schatten exponent ---------------------------------

def _tail_log_integrand(t: SymTerm, alpha: float, u: np.ndarray) -> np.ndarray:
    # log of v(e^u)^alpha * e^u  (substitution x = e^u)
    lx = u + np.log1p(t.a * np.exp(-u))
    lv = math.log(t.c) + t.p * lx
    if t.q != 0:
        lv = lv + t.q * np.log(u + np.log1p(t.b * np.exp(-u)))
    return alpha * lv + u


def _tail_converges(t: SymTerm, alpha: float, u0: float, u1: float = 2e4) -> bool:
    u = np.linspace(u0, 2 * u1, 400_001)
    g = _tail_log_integrand(t, alpha, u)
    if g.max() > 700:
        return False
    f = np.exp(g)
    du = u[1] - u[0]
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * du)])
    half = cum[len(u) // 2]
    full = cum[-1]
    return full - half <= 1e-6 * max(half, 1e-300)


def sh_exponent_numeric(spec: DiagonalSpec, lo: float = 1e-3, hi: float = 50.0,
                        head: int = 10**6, resolution: float = 1e-3) -> float:
    """Independent estimate of the Schatten exponent by quadrature.

    Sums the first ``head`` terms explicitly and decides convergence of the
    remainder by integrating ``v(x)^alpha`` in logarithmic coordinates out
    to ``x = e^40000``; bisection over ``alpha`` locates the threshold.
    """
    if spec.interval_parts or any(t.direction >= 0 for t in spec.branches):
        return INF
    u0 = math.log(head)
    best = 0.0
    for i, t in enumerate(spec.branches):
        partial = float(np.sum(spec.branch_values(i, head) ** hi))
        if not math.isfinite(partial) or not _tail_converges(t, hi, u0):
            return INF
        a, b = lo, hi
        if _tail_converges(t, a, u0):
            continue
        while b - a > resolution:
            mid = 0.5 * (a + b)
            if _tail_converges(t, mid, u0):
                b = mid
            else:
                a = mid
        best = max(best, 0.5 * (a + b))
    return best

