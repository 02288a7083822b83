"""Balanced-measure testing and cyclic decomposition on the integer lattice.

A finite-support nonnegative measure is balanced exactly when its first
moment vanishes (finite support makes it integrable, where balancedness and
mean zero coincide).  Balanced measures split into a nonnegative
superposition of empirical measures of cycle classes; the splitting is
constructive and exact: each round extracts a vertex of the barycentric
polytope over the current support, converts its coefficients into integer
multiplicities via their lcm, and peels off as much mass as nonnegativity
allows.  Every round kills at least one non-origin atom, so at most
``|support|`` rounds run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from itertools import product

from .errors import (
    Infeasible,
    NoSolution,
    NotBalanced,
    NotGeneralPosition,
    OracleExhausted,
    TooLarge,
    ZeroNotInterior,
)
from .exact_lp import barycentric_vertex, exact_rank, solve_exact_linear
from .ratio import ONE, ZERO, Rat, denominator_lcm, to_rat

IRREDUCIBILITY_BOUND = 24


def _point(p) -> tuple:
    return tuple(int(c) for c in p)


@dataclass(frozen=True)
class LatticeMeasure:
    """Finite-support nonnegative rational measure on Z^d.

    Zero atoms are dropped on construction, so ``atoms`` only ever holds
    strictly positive masses.
    """

    dimension: int
    atoms: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for point, mass in self.atoms.items():
            point = _point(point)
            if len(point) != self.dimension:
                raise ValueError(f"point {point} is not {self.dimension}-dimensional")
            mass = to_rat(mass)
            if mass < 0:
                raise ValueError(f"negative mass at {point}")
            if mass > 0:
                if point in cleaned:
                    raise ValueError(f"duplicate atom at {point}")
                cleaned[point] = mass
        object.__setattr__(self, "atoms", cleaned)

    def mass(self, point) -> Rat:
        return self.atoms.get(_point(point), ZERO)

    def total_mass(self) -> Rat:
        return sum(self.atoms.values(), ZERO)

    def support(self):
        return sorted(self.atoms)

    def items(self):
        return sorted(self.atoms.items())

    def is_zero(self) -> bool:
        return not self.atoms

    def origin(self) -> tuple:
        return (0,) * self.dimension


@dataclass(frozen=True)
class LatticeCycleClass:
    """Multiset of displacement vectors with multiplicities summing to zero.

    The zero vector is only legal as the sole entry with multiplicity one
    (the cardinality-1 cycle); longer cycles visit distinct points and so
    never produce a zero displacement.
    """

    entries: dict

    def __post_init__(self):
        cleaned = {}
        for vec, mult in self.entries.items():
            vec = _point(vec)
            mult = int(mult)
            if mult <= 0:
                raise ValueError("multiplicities must be positive")
            if vec in cleaned:
                raise ValueError(f"duplicate displacement {vec}")
            cleaned[vec] = mult
        if not cleaned:
            raise ValueError("cycle class must be nonempty")
        dims = {len(v) for v in cleaned}
        if len(dims) != 1:
            raise ValueError("displacements of mixed dimension")
        d = dims.pop()
        total = [0] * d
        for vec, mult in cleaned.items():
            for i, c in enumerate(vec):
                total[i] += mult * c
        if any(total):
            raise ValueError("weighted displacements must sum to zero")
        zero = (0,) * d
        if zero in cleaned and (len(cleaned) > 1 or cleaned[zero] != 1):
            raise ValueError("zero displacement only allowed as the trivial class")
        object.__setattr__(self, "entries", cleaned)

    @property
    def dimension(self) -> int:
        return len(next(iter(self.entries)))

    def total_multiplicity(self) -> int:
        return sum(self.entries.values())

    def items(self):
        return sorted(self.entries.items())

    def is_trivial(self) -> bool:
        return set(self.entries) == {(0,) * self.dimension}

    def __hash__(self):
        return hash(tuple(self.items()))

    def __eq__(self, other):
        return isinstance(other, LatticeCycleClass) and self.entries == other.entries


@dataclass
class LatticeDecomposition:
    """Terms ``(class, weight)`` plus the mass carried by the trivial class."""

    terms: list
    trivial_mass: Rat

    def total_weight(self) -> Rat:
        return sum((w for _, w in self.terms), ZERO) + self.trivial_mass

    def reconstruct(self, dimension: int) -> LatticeMeasure:
        acc: dict = {}
        origin = (0,) * dimension
        if self.trivial_mass > 0:
            acc[origin] = self.trivial_mass
        for cls, weight in self.terms:
            q = empirical_measure(cls)
            for point, mass in q.atoms.items():
                acc[point] = acc.get(point, ZERO) + weight * mass
        return LatticeMeasure(dimension, acc)


def empirical_measure(cls: LatticeCycleClass) -> LatticeMeasure:
    """Probability measure putting mass ``n_i / sum(n)`` on each displacement."""
    total = cls.total_multiplicity()
    return LatticeMeasure(
        cls.dimension, {vec: Rat(mult, total) for vec, mult in cls.entries.items()}
    )


def mean(p: LatticeMeasure):
    """Exact first moment as a vector of rationals."""
    result = [ZERO] * p.dimension
    for point, mass in p.atoms.items():
        for i, c in enumerate(point):
            result[i] += mass * c
    return tuple(result)


def is_balanced(p: LatticeMeasure) -> bool:
    """Finite support means integrable, where balanced reduces to mean zero."""
    return all(c == 0 for c in mean(p))


def irreducible_class(points) -> LatticeCycleClass:
    """The unique irreducible class spanned by points in general position.

    Solves the barycentric system for the origin exactly, then clears
    denominators with their lcm: ``n_i = lcm * mu_i``.  Raises
    :class:`NotGeneralPosition` when the difference vectors are dependent
    and :class:`ZeroNotInterior` when some coefficient fails to be strictly
    positive (origin outside the open simplex).
    """
    pts = [_point(p) for p in points]
    if not pts:
        raise ValueError("points must be nonempty")
    if len(set(pts)) != len(pts):
        raise NotGeneralPosition("duplicate points")
    d = len(pts[0])
    k = len(pts)
    diffs = [[p[i] - pts[0][i] for i in range(d)] for p in pts[1:]]
    if diffs and exact_rank(diffs) != k - 1:
        raise NotGeneralPosition("difference vectors are linearly dependent")

    rows = [[Rat(p[i]) for p in pts] for i in range(d)]
    rows.append([ONE] * k)
    rhs = [ZERO] * d + [ONE]
    try:
        mu = solve_exact_linear(rows, rhs)
    except NoSolution:
        raise ZeroNotInterior("origin not in the affine hull of the points")
    if any(c <= 0 for c in mu):
        raise ZeroNotInterior("origin not in the relative interior of the hull")
    b = denominator_lcm(mu)
    return LatticeCycleClass({p: int(b * c) for p, c in zip(pts, mu)})


def is_irreducible(cls: LatticeCycleClass, max_total: int = IRREDUCIBILITY_BOUND) -> bool:
    """No proper nonempty sub-multiset of the displacements sums to zero.

    Exhaustive search over sub-multisets, meet-in-the-middle over the two
    halves of the distinct-vector list.  Refuses classes with total
    multiplicity above ``max_total`` (default 24) via :class:`TooLarge`.
    """
    if cls.total_multiplicity() > max_total:
        raise TooLarge(
            f"total multiplicity {cls.total_multiplicity()} exceeds {max_total}"
        )
    items = cls.items()
    d = cls.dimension
    half = len(items) // 2
    left, right = items[:half], items[half:]

    def combos(group):
        out = []
        ranges = [range(n + 1) for _, n in group]
        for counts in product(*ranges):
            s = [0] * d
            for (vec, _), c in zip(group, counts):
                for i, x in enumerate(vec):
                    s[i] += c * x
            out.append(
                (
                    tuple(s),
                    all(c == 0 for c in counts),
                    all(c == n for c, (_, n) in zip(counts, group)),
                )
            )
        return out

    right_map: dict = {}
    for s, empty, full in combos(right):
        count, n_empty, n_full = right_map.get(s, (0, 0, 0))
        right_map[s] = (count + 1, n_empty + int(empty), n_full + int(full))

    for s, empty, full in combos(left):
        key = tuple(-c for c in s)
        entry = right_map.get(key)
        if entry is None:
            continue
        count, n_empty, n_full = entry
        if empty:
            count -= n_empty
        if full:
            count -= n_full
        if count > 0:
            return False
    return True


def caratheodory_step(p: LatticeMeasure):
    """Extract one cycle class, its maximal weight and the residual measure.

    The weight is ``min p(w) / q(w)`` over the class support with ``q`` the
    class's empirical measure; the minimizing atom disappears from the
    residual, which stays nonnegative and balanced.
    """
    if not is_balanced(p):
        raise NotBalanced("measure has nonzero mean", violators=[mean(p)])
    points = [x for x in p.support() if any(x)]
    if not points:
        raise ValueError("measure is trivial (support only at the origin)")
    try:
        solution = barycentric_vertex(points, p.origin())
    except Infeasible as exc:  # impossible for balanced p
        raise AssertionError("balanced measure with origin outside hull") from exc

    mu = dict(solution.as_pairs(points))
    b = denominator_lcm(mu.values())
    cls = LatticeCycleClass({w: int(b * c) for w, c in mu.items()})
    weight = min(p.mass(w) / c for w, c in mu.items())

    residual = dict(p.atoms)
    for w, c in mu.items():
        new_mass = residual[w] - weight * c
        if new_mass == 0:
            del residual[w]
        else:
            residual[w] = new_mass
    return cls, weight, LatticeMeasure(p.dimension, residual)


def decompose_lattice(p: LatticeMeasure) -> LatticeDecomposition:
    """Full cyclic decomposition of a balanced finite-support measure.

    Raises :class:`NotBalanced` when the mean is nonzero (equivalently, no
    cyclic decomposition exists).  The result reproduces ``p`` atom by atom
    exactly, using at most ``|support|`` terms.
    """
    if not is_balanced(p):
        raise NotBalanced("measure has nonzero mean", violators=[mean(p)])
    trivial = p.mass(p.origin())
    current = LatticeMeasure(
        p.dimension, {x: m for x, m in p.atoms.items() if any(x)}
    )
    terms = []
    while not current.is_zero():
        cls, weight, current = caratheodory_step(current)
        terms.append((cls, weight))
    return LatticeDecomposition(terms, trivial)


class HeavyTailOracle1D:
    """Query access to a 1-d measure with infinite first moment on each side.

    The caller asserts the two-sided heavy-tail property; it cannot be
    verified from finitely many queries.  Queries are memoized, and scans
    for the innermost positive atom give up past ``search_limit`` with
    :class:`OracleExhausted`.
    """

    def __init__(self, mass_at, search_limit: int = 10**6):
        self._mass_at = mass_at
        self._cache: dict = {}
        self.search_limit = int(search_limit)

    def mass(self, x: int) -> Rat:
        if x not in self._cache:
            value = to_rat(self._mass_at(x))
            if value < 0:
                raise ValueError(f"oracle returned negative mass at {x}")
            self._cache[x] = value
        return self._cache[x]


def decompose_1d_heavy_tail(oracle: HeavyTailOracle1D, steps: int):
    """Run the two-sided peeling scheme for ``steps`` rounds.

    Each round pairs the innermost positive atoms ``x+ >= 1`` and
    ``x- <= -1`` into the two-vector class ``{(x+, n+), (x-, n-)}`` with
    ``n+/n-`` the reduced fraction equal to ``-x-/x+``, and removes the
    largest multiple of its empirical measure that one of the two atoms
    allows (the side with the smaller directed mass empties first; ties
    empty both).  Returns the emitted ``(class, weight)`` list and a map of
    residual masses at every touched point; the residual equals the oracle
    off that map.
    """
    residual: dict = {}

    def current(x: int) -> Rat:
        return residual.get(x, oracle.mass(x))

    def scan(start: int, step: int) -> int:
        x = start
        while abs(x) <= oracle.search_limit:
            if current(x) > 0:
                return x
            x += step
        side = "positive" if step > 0 else "negative"
        raise OracleExhausted(
            f"no positive mass on the {side} side within {oracle.search_limit}"
        )

    terms = []
    x_pos, x_neg = 1, -1
    for _ in range(int(steps)):
        x_pos = scan(x_pos, 1)
        x_neg = scan(x_neg, -1)
        mp, mn = current(x_pos), current(x_neg)
        g = gcd(x_pos, -x_neg)
        n_pos, n_neg = (-x_neg) // g, x_pos // g
        if mp * x_pos + mn * x_neg >= 0:
            weight = mn * (n_pos + n_neg) / n_neg
        else:
            weight = mp * (n_pos + n_neg) / n_pos
        cls = LatticeCycleClass({(x_pos,): n_pos, (x_neg,): n_neg})
        residual[x_pos] = mp - weight * Rat(n_pos, n_pos + n_neg)
        residual[x_neg] = mn - weight * Rat(n_neg, n_pos + n_neg)
        if residual[x_pos] < 0 or residual[x_neg] < 0:
            raise AssertionError("peeling produced a negative residual")
        terms.append((cls, weight))
    return terms, residual


@dataclass(frozen=True)
class LiftedTerm:
    """One cycle class of a periodic decomposition on the infinite lattice.

    The stated weight applies to every translate of the class; translates
    are not enumerated.
    """

    cycle: object
    weight: Rat
    translates: str


def periodic_lift(decomposition, periods=None):
    """Describe the periodic lift of a decomposition to the infinite lattice.

    Accepts a :class:`LatticeDecomposition` or any iterable of
    ``(cycle, weight)`` pairs (e.g. an elementary torus decomposition's
    terms).  Emits each class once.
    """
    if periods is None:
        scope = "all integer translates"
    else:
        scope = "all " + "x".join(str(int(n)) for n in periods) + "-periodic translates"
    records = []
    if isinstance(decomposition, LatticeDecomposition):
        pairs = list(decomposition.terms)
        if decomposition.trivial_mass > 0:
            dim = pairs[0][0].dimension if pairs else 1
            trivial = LatticeCycleClass({(0,) * dim: 1})
            pairs.append((trivial, decomposition.trivial_mass))
    else:
        pairs = list(decomposition)
    for cycle, weight in pairs:
        records.append(LiftedTerm(cycle, to_rat(weight), scope))
    return records
