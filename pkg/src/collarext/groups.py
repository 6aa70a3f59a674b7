"""Word-growth data for finitely generated groups.

Each group model carries a canonical symmetric generating set and a
normal-form representation with a cheap right action by generators.
Ball counts are exact breadth-first enumerations over normal forms,
so ``counts[R]`` is the number of group elements of word length at
most R, with ``counts[0] = 1``.

Supported models: free groups, free abelian groups, the discrete
Heisenberg group, and finite direct and free products of these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Total number of distinct elements a single enumeration may visit
# before it stops and flags the result as partial.
BALL_BUDGET = 100_000_000


class _FreeEngine:
    """Reduced words in F_N, encoded as base-(2N+1) integers.

    Letters are 1..2N with inverse(letter) = letter +- N; the last
    letter occupies the least significant digit so that appending a
    generator is a single divmod (cancel) or multiply-add (extend).
    """

    def __init__(self, n: int):
        self.n = n
        self.base = 2 * n + 1
        self.identity = 0
        self.moves = tuple(range(1, 2 * n + 1))

    def _inverse(self, letter: int) -> int:
        return letter + self.n if letter <= self.n else letter - self.n

    def apply(self, word: int, letter: int):
        head, last = divmod(word, self.base)
        if last == self._inverse(letter):
            return head
        return word * self.base + letter

    def generator_names(self):
        names = [f"x{i}" for i in range(1, self.n + 1)]
        return names + [f"{s}^-1" for s in names]


class _AbelianEngine:
    """Z^m with generators +-e_i; elements are integer tuples."""

    def __init__(self, m: int):
        self.m = m
        self.identity = (0,) * m
        self.moves = tuple((i, s) for i in range(m) for s in (1, -1))

    def apply(self, elem, move):
        i, s = move
        return elem[:i] + (elem[i] + s,) + elem[i + 1 :]

    def generator_names(self):
        out = []
        for i in range(1, self.m + 1):
            out += [f"e{i}", f"e{i}^-1"]
        return out


class _HeisenbergEngine:
    """Integer Heisenberg group as triples (a, b, c).

    (a, b, c) stands for the unipotent matrix [[1, c, b], [0, 1, a],
    [0, 0, 1]], so (a,b,c)*(a',b',c') = (a+a', b+b'+c a', c+c').
    Generators are the four matrices with a single +-1 above the
    diagonal in the a and c slots; right multiplication reduces to
    the four rules below.
    """

    identity = (0, 0, 0)
    moves = ("a+", "a-", "c+", "c-")

    def apply(self, elem, move):
        a, b, c = elem
        if move == "a+":
            return (a + 1, b + c, c)
        if move == "a-":
            return (a - 1, b - c, c)
        if move == "c+":
            return (a, b, c + 1)
        return (a, b, c - 1)

    def generator_names(self):
        return ["A", "A^-1", "C", "C^-1"]


class _ProductEngine:
    """Direct product; generators act on one coordinate at a time."""

    def __init__(self, engines):
        self.engines = tuple(engines)
        self.identity = tuple(e.identity for e in self.engines)
        self.moves = tuple(
            (i, mv) for i, e in enumerate(self.engines) for mv in e.moves
        )

    def apply(self, elem, move):
        i, mv = move
        return elem[:i] + (self.engines[i].apply(elem[i], mv),) + elem[i + 1 :]

    def generator_names(self):
        out = []
        for i, e in enumerate(self.engines, start=1):
            out += [f"[{i}]{name}" for name in e.generator_names()]
        return out


class _FreeProductEngine:
    """Free product; normal forms are alternating blocks.

    An element is a tuple of (factor index, nontrivial factor element)
    with adjacent indices distinct.  A generator merges into the last
    block when the factors match, dropping the block if the product
    becomes the factor identity, and starts a new block otherwise.
    """

    def __init__(self, engines):
        self.engines = tuple(engines)
        self.identity = ()
        self.moves = tuple(
            (i, mv) for i, e in enumerate(self.engines) for mv in e.moves
        )

    def apply(self, elem, move):
        i, mv = move
        eng = self.engines[i]
        if elem and elem[-1][0] == i:
            x = eng.apply(elem[-1][1], mv)
            if x == eng.identity:
                return elem[:-1]
            return elem[:-1] + ((i, x),)
        return elem + ((i, eng.apply(eng.identity, mv)),)

    def generator_names(self):
        out = []
        for i, e in enumerate(self.engines, start=1):
            out += [f"[{i}]{name}" for name in e.generator_names()]
        return out


@dataclass(frozen=True)
class GroupModel:
    """A finitely generated group with its canonical generating set.

    Build instances through the classmethod constructors; ``kind`` is
    one of "free", "abelian", "heisenberg", "direct_product",
    "free_product".  ``rank`` is the free rank N or the abelian rank m
    and is 0 for the other kinds.
    """

    kind: str
    rank: int = 0
    factors: tuple["GroupModel", ...] = ()

    @classmethod
    def free(cls, n: int) -> "GroupModel":
        if n < 1:
            raise ValueError("free group rank must be at least 1")
        return cls(kind="free", rank=int(n))

    @classmethod
    def abelian(cls, m: int) -> "GroupModel":
        if m < 1:
            raise ValueError("abelian rank must be at least 1")
        return cls(kind="abelian", rank=int(m))

    @classmethod
    def heisenberg(cls) -> "GroupModel":
        return cls(kind="heisenberg")

    @classmethod
    def direct_product(cls, *factors: "GroupModel") -> "GroupModel":
        if len(factors) < 2:
            raise ValueError("direct product needs at least two factors")
        return cls(kind="direct_product", factors=tuple(factors))

    @classmethod
    def free_product(cls, *factors: "GroupModel") -> "GroupModel":
        if len(factors) < 2:
            raise ValueError("free product needs at least two factors")
        return cls(kind="free_product", factors=tuple(factors))

    def engine(self):
        if self.kind == "free":
            return _FreeEngine(self.rank)
        if self.kind == "abelian":
            return _AbelianEngine(self.rank)
        if self.kind == "heisenberg":
            return _HeisenbergEngine()
        if self.kind == "direct_product":
            return _ProductEngine(f.engine() for f in self.factors)
        if self.kind == "free_product":
            return _FreeProductEngine(f.engine() for f in self.factors)
        raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def generator_count(self) -> int:
        return len(self.engine().moves)

    def describe(self) -> str:
        """Readable name including the generating set."""
        gens = ", ".join(self.engine().generator_names())
        return f"{self._name()} with generators {{{gens}}}"

    def _name(self) -> str:
        if self.kind == "free":
            return f"free group F_{self.rank}"
        if self.kind == "abelian":
            return f"Z^{self.rank}"
        if self.kind == "heisenberg":
            return "integer Heisenberg group"
        join = " x " if self.kind == "direct_product" else " * "
        return "(" + join.join(f._name() for f in self.factors) + ")"


@dataclass(frozen=True)
class GrowthData:
    """Cumulative ball counts ``counts[R] = |B_R|`` for R = 0..R_max.

    ``partial`` marks an enumeration stopped by the element budget; in
    that case the counts present are still exact, there are just fewer
    of them than requested.
    """

    counts: tuple[int, ...]
    group: GroupModel | None = None
    partial: bool = False

    def __post_init__(self):
        if len(self.counts) == 0:
            raise ValueError("growth data needs at least the R = 0 count")
        if self.counts[0] != 1:
            raise ValueError("ball of radius 0 must count exactly the identity")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("ball counts must be nondecreasing")

    @property
    def r_max(self) -> int:
        return len(self.counts) - 1

    def spheres(self) -> tuple[int, ...]:
        """Exact sphere sizes |S_R| = |B_R| - |B_{R-1}|, with |S_0| = 1."""
        return (1,) + tuple(
            b - a for a, b in zip(self.counts, self.counts[1:])
        )


def ball_count(group: GroupModel, r_max: int, budget: int = BALL_BUDGET) -> GrowthData:
    """Exact ball counts by breadth-first search over normal forms.

    Stops early with ``partial=True`` if the number of distinct
    elements visited would exceed ``budget``.
    """
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    eng = group.engine()
    visited = {eng.identity}
    frontier = [eng.identity]
    counts = [1]
    partial = False
    for _ in range(r_max):
        nxt = []
        for elem in frontier:
            for mv in eng.moves:
                y = eng.apply(elem, mv)
                if y not in visited:
                    visited.add(y)
                    nxt.append(y)
        if len(visited) > budget:
            partial = True
            break
        counts.append(len(visited))
        if not nxt:
            break
        frontier = nxt
    return GrowthData(counts=tuple(counts), group=group, partial=partial)


def free_ball_recursion(n: int, r_max: int) -> GrowthData:
    """Closed-form ball counts for F_n: |S_r| = 2n(2n-1)^(r-1).

    Exact integer arithmetic; use this instead of the enumeration when
    the radius makes the ball too large to hold in memory.
    """
    if n < 1:
        raise ValueError("free group rank must be at least 1")
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    counts = [1]
    sphere = 1
    for r in range(1, r_max + 1):
        sphere = 2 * n if r == 1 else sphere * (2 * n - 1)
        counts.append(counts[-1] + sphere)
    return GrowthData(counts=tuple(counts), group=GroupModel.free(n))


def _log_points(data: GrowthData):
    r = np.arange(1, data.r_max + 1, dtype=float)
    y = np.array([math.log(c) for c in data.counts[1:]])
    return np.log(r), y


def _slope_fit(x: np.ndarray, y: np.ndarray):
    """LSQ slope plus a residual-based standard error."""
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    n = len(x)
    sxx = float(np.sum((x - x.mean()) ** 2))
    if n > 2 and sxx > 0:
        sigma2 = float(np.sum(resid**2)) / (n - 2)
        stderr = math.sqrt(max(sigma2, 0.0) / sxx)
    else:
        stderr = 0.0
    return float(coef[0]), stderr


@dataclass(frozen=True)
class GrowthFit:
    """Polynomial growth order estimate from log-log ball counts."""

    degree: float
    width: float
    superpolynomial: bool

    def describe(self) -> str:
        if self.superpolynomial:
            return "superpolynomial growth (log-log slope drifts upward)"
        return f"growth order {self.degree:.3f} +- {self.width:.3f}"


def growth_order_fit(data: GrowthData) -> GrowthFit:
    """Fit the growth order from the upper half of the radius range.

    The degree is the least-squares slope of log counts against log R
    over R in [ceil(R_max/2), R_max], with a width of twice the slope
    standard error.  If that slope runs well above the full-range
    slope the data is growing faster than any fixed power and the fit
    is flagged superpolynomial instead.
    """
    if data.r_max < 6:
        raise ValueError("growth fit needs at least 6 radii")
    x, y = _log_points(data)
    lo = (data.r_max + 1) // 2
    upper, u_err = _slope_fit(x[lo - 1 :], y[lo - 1 :])
    full, _ = _slope_fit(x, y)
    drifting = (upper - full) > 1.0 and upper > 1.3 * full
    return GrowthFit(degree=upper, width=2.0 * u_err, superpolynomial=drifting)


@dataclass(frozen=True)
class EntropyEstimate:
    """Exponential growth rate estimate log|B_R|/R at the final radius.

    ``sequence[R-1]`` holds the same quotient at radius R for
    convergence display.
    """

    value: float
    sequence: np.ndarray

    def __float__(self) -> float:
        return self.value


def entropy_estimate(data: GrowthData) -> EntropyEstimate:
    if len(data.counts) < 4:
        raise ValueError("entropy estimate needs at least 4 data points")
    seq = np.array(
        [math.log(c) / r for r, c in enumerate(data.counts[1:], start=1)]
    )
    return EntropyEstimate(value=float(seq[-1]), sequence=seq)


def free_group_entropy(n: int) -> float:
    """Exact growth entropy log(2N-1) of the free group F_N, N >= 2."""
    if n < 2:
        raise ValueError("free group entropy needs rank at least 2")
    return math.log(2 * n - 1)
