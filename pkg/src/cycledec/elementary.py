"""Decompositions restricted to elementary cycles, and their membership tests.

Elementary cycles are the back-and-forth cycles on single edges and the
4-step cycles around oriented faces.  Whether given rates split over these
cycles reduces, through the recovered two-chain, to a one-dimensional
interval feasibility problem: each edge contributes the interval spanned by
the chain values of its two faces, shifted by the edge's symmetric part,
and the rates are decomposable exactly when all shifted intervals share a
point.  That common point is the additive constant used to build the
explicit decomposition.

Non-orientable surfaces have no constant freedom (the chain is unique) and
edges traversed the same way by both faces contribute the complement of an
open interval instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NegativeEdgeWeight,
    NotBalanced,
    NotHomologous,
    NotInRe,
    TooLarge,
)
from .exact_lp import lp_feasible
from .complexes import (
    TwoComplex,
    TwoChain,
    boundary1,
    check_rates,
    in_d_lambda2,
    rates_to_field,
    recover_psi,
    symmetric_part,
)
from .ratio import ONE, ZERO, Rat, to_rat


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]."""

    lo: Rat
    hi: Rat

    def shifted_distance_to_zero(self, shift=ZERO) -> Rat:
        lo = self.lo + shift
        hi = self.hi + shift
        if lo > 0:
            return lo
        if hi < 0:
            return -hi
        return ZERO

    def distance_to(self, other: "Interval") -> Rat:
        return max(ZERO, other.lo - self.hi, self.lo - other.hi)


@dataclass(frozen=True)
class CoInterval:
    """Closed complement of the open interval (lo, hi)."""

    lo: Rat
    hi: Rat

    def shifted_distance_to_zero(self, shift=ZERO) -> Rat:
        if shift != 0:
            raise ValueError("co-intervals carry no shift freedom")
        if self.lo >= 0 or self.hi <= 0:
            return ZERO
        return min(-self.lo, self.hi)


def edge_intervals(psi: TwoChain, complex: TwoComplex) -> dict:
    """Per chosen edge, the constraint set spanned by its two face values.

    Edges seen with opposite signs by their two faces get the closed
    interval between the chain values; edges seen with equal signs (only
    possible on non-orientable complexes) get the complement of the open
    interval.  Edges incident to no face (impossible on a validated closed
    surface) map to ``None``, meaning no constraint beyond nonnegativity.
    """
    out = {}
    for eid in range(complex.n_edges):
        incidences = complex.edge_faces[eid]
        if not incidences:
            out[eid] = None
            continue
        if len(incidences) != 2:
            raise ValueError("edge incidences must come in pairs")
        (f1, s1), (f2, s2) = incidences
        a, b = psi.values[f1], psi.values[f2]
        lo, hi = min(a, b), max(a, b)
        if s1 != s2:
            out[eid] = Interval(lo, hi)
        else:
            out[eid] = CoInterval(lo, hi)
    return out


@dataclass
class ReVerdict:
    """Outcome of the elementary-decomposability test.

    ``witness_c`` is a feasible additive constant when the answer is yes;
    ``violating_edges`` certifies the failed polyhedron inequality (or the
    single failed edge on non-orientable complexes) when it is no.
    """

    ok: bool
    reason: str | None = None
    witness_c: Rat | None = None
    violating_edges: tuple | None = None


def _field_and_symmetric(rates, complex):
    rates = check_rates(rates, complex)
    phi = rates_to_field(rates, complex)
    sym = symmetric_part(rates, complex)
    s = [sym.get(edge, ZERO) for edge in complex.edges]
    return phi, s


def in_Re(rates: dict, complex: TwoComplex) -> ReVerdict:
    """Decide whether the rates decompose over elementary cycles.

    Pipeline: project the rates to their vector field; a field that is not
    a face boundary already rules the decomposition out (necessary
    condition for homotopically trivial cycles, hence for elementary
    ones).  Otherwise recover a chain, shift each edge interval by the
    edge's symmetric part and intersect in one pass; a nonempty
    intersection yields the witness constant (its midpoint), an empty one
    yields two edges violating the pairwise polyhedron inequality.
    """
    if not complex.orientable:
        return in_Re_nonorientable(rates, complex)
    phi, s = _field_and_symmetric(rates, complex)
    if complex.is_torus() and not in_d_lambda2(phi):
        return ReVerdict(False, reason="NotHomologous")
    try:
        psi = recover_psi(phi)
    except NotHomologous:
        return ReVerdict(False, reason="NotHomologous")
    intervals = edge_intervals(psi, complex)

    lo, lo_edge = None, None
    hi, hi_edge = None, None
    for eid in range(complex.n_edges):
        interval = intervals[eid]
        cand_lo = -interval.hi - s[eid]
        cand_hi = -interval.lo + s[eid]
        if lo is None or cand_lo > lo:
            lo, lo_edge = cand_lo, eid
        if hi is None or cand_hi < hi:
            hi, hi_edge = cand_hi, eid
    if lo is None:
        return ReVerdict(True, witness_c=ZERO)
    if lo <= hi:
        return ReVerdict(True, witness_c=(lo + hi) / 2)
    return ReVerdict(
        False,
        reason="PolyhedronViolated",
        violating_edges=(complex.edges[lo_edge], complex.edges[hi_edge]),
    )


def pairwise_in_Re(rates: dict, complex: TwoComplex) -> bool:
    """All-pairs polyhedron test; cross-check for the one-pass intersection."""
    phi, s = _field_and_symmetric(rates, complex)
    try:
        psi = recover_psi(phi)
    except NotHomologous:
        return False
    intervals = edge_intervals(psi, complex)
    n = complex.n_edges
    for i in range(n):
        for j in range(i, n):
            if s[i] + s[j] < intervals[i].distance_to(intervals[j]):
                return False
    return True


def in_Re_nonorientable(rates: dict, complex: TwoComplex) -> ReVerdict:
    """Edge-by-edge test against the unique recovered chain.

    Every edge must have symmetric part at least its constraint set's
    distance to zero; there is no shared constant to choose.
    """
    if complex.orientable:
        raise ValueError("complex is orientable; use in_Re")
    phi, s = _field_and_symmetric(rates, complex)
    try:
        psi = recover_psi(phi)
    except NotHomologous:
        return ReVerdict(False, reason="NotHomologous")
    intervals = edge_intervals(psi, complex)
    violations = []
    for eid in range(complex.n_edges):
        interval = intervals[eid]
        need = ZERO if interval is None else interval.shifted_distance_to_zero()
        if s[eid] < need:
            violations.append(complex.edges[eid])
    if violations:
        return ReVerdict(
            False, reason="PolyhedronViolated", violating_edges=tuple(violations)
        )
    return ReVerdict(True, witness_c=ZERO)


@dataclass
class ElementaryDecomposition:
    """Weights over edge cycles and oriented face cycles.

    ``face_weights`` maps a chosen-face id to the pair
    ``(weight of its cycle, weight of the reversed cycle)``.
    """

    edge_weights: dict
    face_weights: dict
    chosen_constant: Rat

    def reconstruct(self, complex: TwoComplex) -> dict:
        acc: dict = {}

        def add(u, v, w):
            if w != 0:
                acc[(u, v)] = acc.get((u, v), ZERO) + w

        for eid, weight in self.edge_weights.items():
            u, v = complex.edges[eid]
            add(u, v, weight)
            add(v, u, weight)
        for fid, (forward, backward) in self.face_weights.items():
            for eid, sign in complex.face_edges[fid]:
                u, v = complex.edges[eid]
                if sign == 1:
                    add(u, v, forward)
                    add(v, u, backward)
                else:
                    add(v, u, forward)
                    add(u, v, backward)
        return acc

    def matches(self, rates: dict, complex: TwoComplex) -> bool:
        return self.reconstruct(complex) == check_rates(rates, complex)


def elementary_decompose(
    rates: dict, complex: TwoComplex, c_star=None
) -> ElementaryDecomposition:
    """Build the explicit elementary decomposition.

    Faces carry ``[psi(f) + c]_+`` forwards and ``[-psi(f) - c]_+``
    backwards; each edge cycle absorbs what remains of the symmetric part,
    which the feasibility of ``c`` keeps nonnegative.  ``c_star`` defaults
    to the witness constant; passing an infeasible one raises
    :class:`NegativeEdgeWeight`.  On non-orientable complexes there is no
    constant to choose and ``c_star`` must be omitted or zero.
    """
    verdict = in_Re(rates, complex)
    if not verdict.ok:
        raise NotInRe(f"rates are not elementary-decomposable: {verdict.reason}")
    if complex.orientable:
        c = verdict.witness_c if c_star is None else to_rat(c_star)
    else:
        if c_star not in (None, 0):
            raise ValueError("non-orientable recovery admits no constant freedom")
        c = ZERO

    phi, s = _field_and_symmetric(rates, complex)
    psi = recover_psi(phi)
    intervals = edge_intervals(psi, complex)

    face_weights = {}
    for fid in range(complex.n_faces):
        value = psi.values[fid] + c
        face_weights[fid] = (max(value, ZERO), max(-value, ZERO))
    edge_weights = {}
    for eid in range(complex.n_edges):
        interval = intervals[eid]
        if interval is None:
            need = ZERO
        elif isinstance(interval, Interval):
            need = interval.shifted_distance_to_zero(c)
        else:
            need = interval.shifted_distance_to_zero()
        weight = s[eid] - need
        if weight < 0:
            raise NegativeEdgeWeight(
                f"constant {c} is infeasible at edge {complex.edges[eid]}"
            )
        edge_weights[eid] = weight
    return ElementaryDecomposition(edge_weights, face_weights, c)


@dataclass
class OneDimFamily:
    """All cycle decompositions of constant-field rates on the 1-d torus.

    Parameterized by ``a`` between zero and the minimal edge weight: edge
    cycles carry their symmetric part minus ``a`` and the two full loops
    carry ``[c]_+ + a`` and ``[-c]_+ + a``.  The rates split over edge
    cycles alone exactly when the field constant ``c`` is zero.
    """

    complex: TwoComplex
    constant: Rat
    min_weight: Rat
    symmetric: list

    @property
    def in_r_star(self) -> bool:
        return self.constant == 0

    def weights_at(self, a):
        a = to_rat(a)
        if a < 0 or a > self.min_weight:
            raise NegativeEdgeWeight(
                f"parameter {a} outside [0, {self.min_weight}] gives a "
                "negative cycle weight"
            )
        edge_weights = {eid: s - a for eid, s in enumerate(self.symmetric)}
        rho_plus = max(self.constant, ZERO) + a
        rho_minus = max(-self.constant, ZERO) + a
        return edge_weights, rho_plus, rho_minus

    def reconstruct_at(self, a) -> dict:
        edge_weights, rho_plus, rho_minus = self.weights_at(a)
        acc: dict = {}
        for eid, (u, v) in enumerate(self.complex.edges):
            forward = edge_weights[eid] + rho_plus
            backward = edge_weights[eid] + rho_minus
            if forward != 0:
                acc[(u, v)] = forward
            if backward != 0:
                acc[(v, u)] = backward
        return acc


def decompose_1d(rates: dict, complex: TwoComplex) -> OneDimFamily:
    """Closed-form decomposition family on the one-dimensional torus.

    Requires the associated field to be constant (equivalently divergence
    free); otherwise raises :class:`NotBalanced` with the vertices where
    the divergence fails to vanish.
    """
    if not (complex.is_torus() and complex.torus_dimension() == 1):
        raise ValueError("decompose_1d expects the 1-d torus")
    rates = check_rates(rates, complex)
    phi = rates_to_field(rates, complex)
    constants = set(phi.values)
    if len(constants) > 1:
        violators = [
            v
            for v in complex.vertices
            if boundary1(phi).at(v) != 0
        ]
        raise NotBalanced("field is not constant", violators=violators)
    c = constants.pop() if constants else ZERO
    m = min(
        min(rates.get((u, v), ZERO), rates.get((v, u), ZERO))
        for u, v in complex.edges
    )
    sym = symmetric_part(rates, complex)
    symmetric = [sym.get(edge, ZERO) for edge in complex.edges]
    return OneDimFamily(complex, c, m, symmetric)


def r_star_necessary(rates: dict, complex: TwoComplex) -> bool:
    """Necessary condition for homotopically trivial decomposability.

    Membership of the field in the face-boundary image.  The full
    characterization of homotopically trivial decomposability is open and
    not decided here.
    """
    phi = rates_to_field(check_rates(rates, complex), complex)
    return in_d_lambda2(phi)


def sufficient_diameter_bound(rates: dict, complex: TwoComplex):
    """One-sided test through the face-adjacency spanning tree.

    Chain differences between faces are bounded by the weight of any
    spanning tree of the face adjacency graph with edge weights ``|phi|``;
    a minimum spanning tree gives the bound ``M``.  If every symmetric
    part reaches ``M / 2`` the rates are elementary-decomposable.  Returns
    ``(sufficient, M)``; a negative answer decides nothing.
    """
    if complex.n_faces == 0:
        raise ValueError("complex has no faces")
    phi, s = _field_and_symmetric(rates, complex)
    if not in_d_lambda2(phi):
        raise NotHomologous("field is not a face boundary")

    dual_edges = sorted(
        (abs(phi.values[eid]), eid) for eid in range(complex.n_edges)
    )
    parent = list(range(complex.n_faces))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    bound = ZERO
    used = 0
    for weight, eid in dual_edges:
        faces = [fid for fid, _ in complex.edge_faces[eid]]
        a, b = find(faces[0]), find(faces[1])
        if a != b:
            parent[a] = b
            bound += weight
            used += 1
            if used == complex.n_faces - 1:
                break
    half = bound / 2
    sufficient = all(value >= half for value in s)
    return sufficient, bound


def brute_force_Re_oracle(rates: dict, complex: TwoComplex, max_vars: int = 400) -> bool:
    """Independent feasibility oracle for the elementary decomposition.

    Sets up the defining linear system directly, one nonnegative variable
    per edge cycle and per oriented face cycle, one equation per oriented
    edge, and asks the exact LP for feasibility.  Intended for small
    complexes; guarded by ``max_vars``.
    """
    rates = check_rates(rates, complex)
    n_edge_vars = complex.n_edges
    n_face_vars = 2 * complex.n_faces
    n_vars = n_edge_vars + n_face_vars
    if n_vars > max_vars:
        raise TooLarge(f"{n_vars} variables exceed the budget of {max_vars}")

    rows = []
    rhs = []
    for eid, (u, v) in enumerate(complex.edges):
        for forward in (True, False):
            row = [ZERO] * n_vars
            row[eid] = ONE
            for fid, sign in complex.edge_faces[eid]:
                traverses_forward = sign == 1
                if traverses_forward == forward:
                    row[n_edge_vars + 2 * fid] += ONE
                else:
                    row[n_edge_vars + 2 * fid + 1] += ONE
            rows.append(row)
            rhs.append(rates.get((u, v) if forward else (v, u), ZERO))
    feasible, _ = lp_feasible(a_eq=rows, b_eq=rhs)
    return feasible
