from coxproper.engine import GeometricRepresentation


def all_elements(engine: GeometricRepresentation):
    """Exhaustive element list via the public API only (test-side BFS)."""
    frontier = [engine.identity()]
    out = list(frontier)
    while frontier:
        nxt = {}
        for g in frontier:
            descents = g.left_descents()
            for i in range(1, engine.rank + 1):
                if i not in descents:
                    h = engine.left_multiply(i, g)
                    nxt[h.key] = h
        frontier = list(nxt.values())
        out.extend(frontier)
    return out


def poincare_layer_sizes(degrees):
    """Coefficients of prod (1 + q + ... + q^(d-1)): elements per length."""
    poly = [1]
    for d in degrees:
        new = [0] * (len(poly) + d - 1)
        for i, c in enumerate(poly):
            for j in range(d):
                new[i + j] += c
        poly = new
    return poly


DEGREES = {
    "A1": [2],
    "A2": [2, 3],
    "A3": [2, 3, 4],
    "A4": [2, 3, 4, 5],
    "B2": [2, 4],
    "B3": [2, 4, 6],
    "B4": [2, 4, 6, 8],
    "D4": [2, 4, 6, 4],
    "D5": [2, 4, 6, 8, 5],
    "F4": [2, 6, 8, 12],
    "H3": [2, 6, 10],
    "H4": [2, 12, 20, 30],
    "E6": [2, 5, 6, 8, 9, 12],
    "E7": [2, 6, 8, 10, 12, 14, 18],
}
