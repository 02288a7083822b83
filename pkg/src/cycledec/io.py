"""Line-oriented file formats: measures, graphs, fields, surfaces, outputs.

All numeric payloads are ``num/den`` strings.  Writers sort everything, so
identical inputs give byte-identical files.  Readers raise
:class:`InputFormatError` with the offending line number.
"""

from __future__ import annotations

from .complexes import TwoComplex, VectorField
from .errors import InputFormatError
from .lattice import LatticeCycleClass, LatticeDecomposition, LatticeMeasure
from .finite_graph import GraphCycle, GraphDecomposition
from .ratio import ZERO, parse_rat, rat_decimal, rat_str, to_rat


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line


def _fmt(value, decimals=None) -> str:
    out = rat_str(value)
    if decimals is not None:
        out += "~" + rat_decimal(value, decimals)
    return out


def _parse_value(token: str, path, line_no):
    try:
        return parse_rat(token.split("~", 1)[0])
    except ValueError as exc:
        raise InputFormatError(path, line_no, str(exc))


# -- measures -----------------------------------------------------------


def parse_measure(text: str, path="<measure>") -> LatticeMeasure:
    atoms = {}
    dimension = None
    for line_no, line in _content_lines(text):
        tokens = line.split()
        if len(tokens) < 2:
            raise InputFormatError(path, line_no, "expected coordinates and a mass")
        try:
            point = tuple(int(t) for t in tokens[:-1])
        except ValueError:
            raise InputFormatError(path, line_no, "coordinates must be integers")
        if dimension is None:
            dimension = len(point)
        elif len(point) != dimension:
            raise InputFormatError(
                path, line_no, f"expected {dimension} coordinates, got {len(point)}"
            )
        if point in atoms:
            raise InputFormatError(path, line_no, f"duplicate point {point}")
        atoms[point] = _parse_value(tokens[-1], path, line_no)
    if dimension is None:
        raise InputFormatError(path, 0, "empty measure file")
    return LatticeMeasure(dimension, atoms)


def format_measure(measure: LatticeMeasure, decimals=None) -> str:
    lines = [
        " ".join(str(c) for c in point) + " " + _fmt(mass, decimals)
        for point, mass in measure.items()
    ]
    return "\n".join(lines) + "\n"


def read_measure(path) -> LatticeMeasure:
    with open(path, encoding="utf-8") as fh:
        return parse_measure(fh.read(), path)


# -- weighted digraphs --------------------------------------------------


def parse_graph(text: str, path="<graph>"):
    """Returns ``(name, {(u, v): weight})`` with opaque string labels."""
    name = None
    weights = {}
    for line_no, line in _content_lines(text):
        tokens = line.split()
        if name is None:
            if tokens[0] != "digraph" or len(tokens) != 2:
                raise InputFormatError(path, line_no, "expected header: digraph <name>")
            name = tokens[1]
            continue
        if len(tokens) != 3:
            raise InputFormatError(path, line_no, "expected: <u> <v> <num/den>")
        u, v = tokens[0], tokens[1]
        if (u, v) in weights:
            raise InputFormatError(path, line_no, f"duplicate edge {u} {v}")
        weights[(u, v)] = _parse_value(tokens[2], path, line_no)
    if name is None:
        raise InputFormatError(path, 0, "missing digraph header")
    return name, weights


def format_graph(name: str, weights: dict, decimals=None) -> str:
    lines = [f"digraph {name}"]
    for (u, v), w in sorted(weights.items()):
        lines.append(f"{u} {v} " + _fmt(w, decimals))
    return "\n".join(lines) + "\n"


def read_graph(path):
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), path)


def labels_to_coords(weights: dict, path="<graph>") -> dict:
    """Convert ``i,j`` (or ``i``) string labels to integer tuples."""
    out = {}
    for (u, v), w in weights.items():
        try:
            cu = tuple(int(c) for c in u.split(","))
            cv = tuple(int(c) for c in v.split(","))
        except ValueError:
            raise InputFormatError(path, 0, f"label {u!r} or {v!r} is not coordinates")
        out[(cu, cv)] = w
    return out


def coords_label(point) -> str:
    return ",".join(str(c) for c in point)


def vertex_label(v) -> str:
    """Torus vertices print as coordinates, surface labels as themselves."""
    return coords_label(v) if isinstance(v, tuple) else str(v)


# -- fields -------------------------------------------------------------


def parse_field(text: str, path="<field>"):
    """Returns ``(complex, field)``; the header fixes the torus shape."""
    complex = None
    entries = {}
    for line_no, line in _content_lines(text):
        tokens = line.split()
        if complex is None:
            if tokens[0] != "field" or tokens[1] != "torus" or len(tokens) not in (3, 4):
                raise InputFormatError(
                    path, line_no, "expected header: field torus <N> [<N2>]"
                )
            dims = [int(t) for t in tokens[2:]]
            complex = (
                TwoComplex.torus1(dims[0])
                if len(dims) == 1
                else TwoComplex.torus2(dims[0], dims[1])
            )
            continue
        d = complex.torus_dimension()
        if len(tokens) != d + 2:
            raise InputFormatError(
                path, line_no, f"expected {d} coordinates, a direction and a value"
            )
        try:
            point = tuple(int(t) for t in tokens[:d])
            direction = int(tokens[d])
        except ValueError:
            raise InputFormatError(path, line_no, "coordinates must be integers")
        if not 1 <= direction <= d:
            raise InputFormatError(path, line_no, f"direction must be in 1..{d}")
        shape = complex.torus_shape
        if any(not 0 <= c < n for c, n in zip(point, shape)):
            raise InputFormatError(path, line_no, f"vertex {point} outside the torus")
        head = list(point)
        head[direction - 1] = (head[direction - 1] + 1) % shape[direction - 1]
        key = (point, tuple(head))
        if key in entries:
            raise InputFormatError(path, line_no, f"duplicate edge {point} dir {direction}")
        entries[key] = _parse_value(tokens[-1], path, line_no)
    if complex is None:
        raise InputFormatError(path, 0, "missing field header")
    return complex, VectorField.from_dict(complex, entries)


def format_field(field: VectorField, decimals=None) -> str:
    complex = field.complex
    if not complex.is_torus():
        raise ValueError("field files are defined for torus complexes")
    shape = complex.torus_shape
    lines = ["field torus " + " ".join(str(n) for n in shape)]
    for eid in sorted(range(complex.n_edges), key=lambda e: complex.edges[e]):
        value = field.values[eid]
        if value == 0:
            continue
        u, v = complex.edges[eid]
        if complex.torus_dimension() == 1:
            direction = 1
        else:
            direction = complex.edge_direction(eid) + 1
        lines.append(
            " ".join(str(c) for c in u) + f" {direction} " + _fmt(value, decimals)
        )
    return "\n".join(lines) + "\n"


def read_field(path):
    with open(path, encoding="utf-8") as fh:
        return parse_field(fh.read(), path)


# -- surface complexes ---------------------------------------------------


def parse_surface(text: str, path="<surface>") -> TwoComplex:
    name = "surface"
    orientable = None
    vertices = []
    edges = []
    faces = []
    for line_no, line in _content_lines(text):
        tokens = line.split()
        kind = tokens[0]
        if kind == "surface":
            if len(tokens) != 2:
                raise InputFormatError(path, line_no, "expected: surface <name>")
            name = tokens[1]
        elif kind == "orientable":
            if len(tokens) != 2 or tokens[1] not in ("yes", "no"):
                raise InputFormatError(path, line_no, "expected: orientable yes|no")
            orientable = tokens[1] == "yes"
        elif kind == "vertex":
            if len(tokens) != 2:
                raise InputFormatError(path, line_no, "expected: vertex <label>")
            vertices.append(tokens[1])
        elif kind == "edge":
            if len(tokens) != 3:
                raise InputFormatError(path, line_no, "expected: edge <u> <v>")
            edges.append((tokens[1], tokens[2]))
        elif kind == "face":
            try:
                signed = [int(t) for t in tokens[1:]]
            except ValueError:
                raise InputFormatError(path, line_no, "face entries must be signed ints")
            if not signed or any(s == 0 for s in signed):
                raise InputFormatError(
                    path, line_no, "face needs nonzero signed edge indices"
                )
            boundary = []
            for s in signed:
                idx = abs(s) - 1
                if idx >= len(edges):
                    raise InputFormatError(path, line_no, f"edge index {abs(s)} undefined")
                boundary.append((idx, 1 if s > 0 else -1))
            faces.append(tuple(boundary))
        else:
            raise InputFormatError(path, line_no, f"unknown directive {kind!r}")
    if orientable is None:
        raise InputFormatError(path, 0, "missing orientable header")
    try:
        complex = TwoComplex(vertices, edges, faces, orientable, name=name)
        complex.validate()
    except ValueError as exc:
        raise InputFormatError(path, 0, str(exc))
    return complex


def format_surface(complex: TwoComplex) -> str:
    lines = [f"surface {complex.name}", f"orientable {'yes' if complex.orientable else 'no'}"]
    lines += [f"vertex {v}" for v in complex.vertices]
    lines += [f"edge {u} {v}" for u, v in complex.edges]
    for boundary in complex.face_edges:
        lines.append(
            "face " + " ".join(f"{sign * (eid + 1):+d}" for eid, sign in boundary)
        )
    return "\n".join(lines) + "\n"


def read_surface(path) -> TwoComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read(), path)


# -- decomposition records ------------------------------------------------


def format_graph_decomposition(dec: GraphDecomposition, source: str, decimals=None) -> str:
    lines = [f"decomposition graph {source}"]
    for cycle, weight in dec.terms:
        lines.append(
            f"term {_fmt(weight, decimals)} cycle " + " ".join(str(v) for v in cycle.vertices)
        )
    return "\n".join(lines) + "\n"


def format_lattice_decomposition(
    dec: LatticeDecomposition, source: str, decimals=None
) -> str:
    lines = [f"decomposition lattice {source}"]
    if dec.trivial_mass != 0:
        lines.append(f"trivial {_fmt(dec.trivial_mass, decimals)}")
    for cls, weight in dec.terms:
        entries = " ".join(
            coords_label(vec) + f"*{mult}" for vec, mult in cls.items()
        )
        lines.append(f"term {_fmt(weight, decimals)} class {entries}")
    return "\n".join(lines) + "\n"


def format_birkhoff_decomposition(terms, source: str, decimals=None) -> str:
    lines = [f"decomposition birkhoff {source}"]
    for pi, weight in terms:
        mapping = " ".join(f"{u}>{v}" for u, v in sorted(pi.items()))
        lines.append(f"term {_fmt(weight, decimals)} perm {mapping}")
    return "\n".join(lines) + "\n"


def face_vertex_cycle(complex, fid):
    """Vertex sequence traversed by a chosen face's boundary."""
    vertices = []
    for eid, sign in complex.face_edges[fid]:
        u, v = complex.edges[eid]
        vertices.append(u if sign == 1 else v)
    return vertices


def format_elementary_decomposition(dec, complex, source: str, decimals=None) -> str:
    """Each cycle class as a ``term <weight> cycle <vertices>`` record."""
    lines = [
        f"decomposition elementary {source}",
        f"constant {_fmt(dec.chosen_constant, decimals)}",
    ]
    for eid in sorted(dec.edge_weights, key=lambda e: str(complex.edges[e])):
        weight = dec.edge_weights[eid]
        if weight == 0:
            continue
        u, v = complex.edges[eid]
        lines.append(
            f"term {_fmt(weight, decimals)} cycle {vertex_label(u)} {vertex_label(v)}"
        )
    for fid in sorted(dec.face_weights):
        forward, backward = dec.face_weights[fid]
        cycle = face_vertex_cycle(complex, fid)
        if forward != 0:
            labels = " ".join(vertex_label(v) for v in cycle)
            lines.append(f"term {_fmt(forward, decimals)} cycle {labels}")
        if backward != 0:
            labels = " ".join(vertex_label(v) for v in reversed(cycle))
            lines.append(f"term {_fmt(backward, decimals)} cycle {labels}")
    return "\n".join(lines) + "\n"


def format_1d_family(family, source: str, a, decimals=None) -> str:
    edge_weights, rho_plus, rho_minus = family.weights_at(a)
    lines = [
        f"decomposition 1d {source}",
        f"constant {_fmt(family.constant, decimals)}",
        f"parameter {_fmt(to_rat(a), decimals)}",
        f"max-parameter {_fmt(family.min_weight, decimals)}",
        f"rstar {'yes' if family.in_r_star else 'no'}",
    ]
    complex = family.complex
    for eid in sorted(edge_weights, key=lambda e: complex.edges[e]):
        if edge_weights[eid] == 0:
            continue
        u, v = complex.edges[eid]
        lines.append(
            f"term {_fmt(edge_weights[eid], decimals)} cycle "
            f"{coords_label(u)} {coords_label(v)}"
        )
    n = complex.n_vertices
    if rho_plus != 0:
        labels = " ".join(str(i) for i in range(n))
        lines.append(f"term {_fmt(rho_plus, decimals)} cycle {labels}")
    if rho_minus != 0:
        labels = " ".join(str(i) for i in [0] + list(range(n - 1, 0, -1)))
        lines.append(f"term {_fmt(rho_minus, decimals)} cycle {labels}")
    return "\n".join(lines) + "\n"


def format_heavy_tail(terms, residual, source: str, decimals=None) -> str:
    lines = [f"decomposition 1d-heavy {source}"]
    for cls, weight in terms:
        entries = " ".join(coords_label(v) + f"*{m}" for v, m in cls.items())
        lines.append(f"term {_fmt(weight, decimals)} class {entries}")
    for x in sorted(residual):
        lines.append(f"residual {x} {_fmt(residual[x], decimals)}")
    return "\n".join(lines) + "\n"


def format_lift(records, decimals=None) -> str:
    lines = ["periodic-lift"]
    for record in records:
        if isinstance(record.cycle, LatticeCycleClass):
            body = "class " + " ".join(
                coords_label(v) + f"*{m}" for v, m in record.cycle.items()
            )
        else:
            body = str(record.cycle)
        lines.append(f"term {_fmt(record.weight, decimals)} {body} @ {record.translates}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str, path="<decomposition>"):
    """Generic reader for the ``decomposition`` formats.

    Returns ``(mode, source, records)`` where records are
    ``("term", weight, kind, payload_tokens)``, ``("trivial", mass)``,
    ``("constant", value)``, ``("parameter", value)`` or other
    ``(key, value)`` headers in file order.
    """
    mode = None
    source = None
    records = []
    for line_no, line in _content_lines(text):
        tokens = line.split()
        if mode is None:
            if tokens[0] != "decomposition" or len(tokens) != 3:
                raise InputFormatError(
                    path, line_no, "expected header: decomposition <mode> <source>"
                )
            mode, source = tokens[1], tokens[2]
            continue
        if tokens[0] == "term":
            if len(tokens) < 3:
                raise InputFormatError(path, line_no, "term needs a weight and a kind")
            weight = _parse_value(tokens[1], path, line_no)
            records.append(("term", weight, tokens[2], tokens[3:]))
        elif tokens[0] in ("trivial", "constant", "parameter", "max-parameter"):
            records.append((tokens[0], _parse_value(tokens[1], path, line_no)))
        elif tokens[0] == "residual":
            records.append(("residual", int(tokens[1]), _parse_value(tokens[2], path, line_no)))
        elif tokens[0] == "rstar":
            records.append(("rstar", tokens[1] == "yes"))
        else:
            raise InputFormatError(path, line_no, f"unknown record {tokens[0]!r}")
    if mode is None:
        raise InputFormatError(path, 0, "missing decomposition header")
    return mode, source, records


def _parse_class(tokens, path):
    entries = {}
    for token in tokens:
        if "*" not in token:
            raise InputFormatError(path, 0, f"malformed class entry {token!r}")
        coords, mult = token.rsplit("*", 1)
        vec = tuple(int(c) for c in coords.split(","))
        entries[vec] = int(mult)
    return LatticeCycleClass(entries)


def reconstruct_decomposition(mode, records, path="<decomposition>"):
    """Rebuild the weight/measure sum encoded by a parsed decomposition.

    Graph-like modes return an oriented-edge weight map (vertex labels as
    written, coordinates as tuples); lattice-like modes return an atom
    map.  The caller compares against its input exactly.
    """
    if mode in ("graph", "birkhoff"):
        acc = {}

        def add(u, v, w):
            acc[(u, v)] = acc.get((u, v), ZERO) + w

        for record in records:
            if record[0] != "term":
                continue
            _, weight, kind, payload = record
            if kind == "cycle":
                cycle = GraphCycle(tuple(payload))
                for u, v in cycle.edges():
                    add(u, v, weight)
            elif kind == "perm":
                for token in payload:
                    u, v = token.split(">", 1)
                    add(u, v, weight)
            else:
                raise InputFormatError(path, 0, f"unexpected term kind {kind!r}")
        return {e: w for e, w in acc.items() if w != 0}
    if mode in ("lattice", "1d-heavy"):
        atoms = {}
        trivial = ZERO
        for record in records:
            if record[0] == "trivial":
                trivial += record[1]
            elif record[0] == "term":
                _, weight, kind, payload = record
                if kind != "class":
                    raise InputFormatError(path, 0, f"unexpected term kind {kind!r}")
                cls = _parse_class(payload, path)
                total = cls.total_multiplicity()
                for vec, mult in cls.items():
                    atoms[vec] = atoms.get(vec, ZERO) + weight * to_rat(mult) / total
        if trivial != 0:
            dim = len(next(iter(atoms))) if atoms else 1
            origin = (0,) * dim
            atoms[origin] = atoms.get(origin, ZERO) + trivial
        return {p: m for p, m in atoms.items() if m != 0}
    raise InputFormatError(path, 0, f"no reconstruction rule for mode {mode!r}")


def _parse_vertex(token: str, complex, path):
    if complex.is_torus():
        try:
            return tuple(int(c) for c in token.split(","))
        except ValueError:
            raise InputFormatError(path, 0, f"bad coordinates {token!r}")
    return token


def reconstruct_on_complex(mode, records, complex, path="<decomposition>"):
    """Rebuild elementary or 1d decomposition weights on a complex.

    Every term is a vertex cycle; each traversed oriented edge (including
    both directions of a 2-cycle) must exist on the complex and collects
    the term's weight.
    """
    acc = {}

    def add(u, v, w):
        if w != 0:
            acc[(u, v)] = acc.get((u, v), ZERO) + w

    for record in records:
        if record[0] != "term":
            continue
        _, weight, kind, payload = record
        if kind != "cycle":
            raise InputFormatError(path, 0, f"unexpected term kind {kind!r}")
        vertices = [_parse_vertex(token, complex, path) for token in payload]
        n = len(vertices)
        for i, u in enumerate(vertices):
            v = vertices[(i + 1) % n]
            complex.edge_id(u, v)
            add(u, v, weight)
    return acc
