"""Exact-arithmetic element engine via the geometric representation.

An element w is stored as the matrix of w^{-1} in simple-root coordinates:
column i holds the coordinates of w^{-1}(alpha_i).  Generator i is a left
descent of w exactly when that column is a negative root, and left
multiplication by s_i is a right multiplication of the stored matrix, which
touches only column i and the columns of its diagram neighbors.

Reflections act by s_i(alpha_j) = alpha_j + c[i][j] * alpha_i.  The
coefficients c are chosen so every supported bond stays inside an exact
ring: c[i][j] * c[j][i] must equal 4*cos(pi/m)^2 for a bond labeled m,
giving (1,1) for m=3, (2,1) for m=4, (3,1) for m=6 (the asymmetric pair is
assigned with the larger value on the lower index), and (phi, phi) for m=5
where phi is the golden ratio.  A/B/D/E/F therefore run on plain integers;
only H3/H4 (and I2(5)) pay for golden-integer arithmetic.  Other bond
labels are rejected; general dihedral groups are handled symbolically in
:mod:`coxproper.proper`.

Matrices are kept as flat tuples (column-major) of scalars; the tuple is
also the canonical deduplication key used by the enumeration pipeline.
"""

from __future__ import annotations

from .core import CoxeterMatrix
from .errors import InternalError, ParameterError, UnsupportedTypeError


class GoldenInt:
    """Exact element a + b*phi of Z[phi], phi the golden ratio (phi^2 = phi + 1)."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int) -> None:
        self.a = a
        self.b = b

    def sign(self) -> int:
        """Exact sign of the real number a + b*phi; no floating point."""
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # Mixed signs: a + b*phi > 0  <=>  2a + b > -b*sqrt(5).
        t = 2 * a + b
        if b < 0:
            return 1 if t > 0 and t * t > 5 * b * b else -1
        return 1 if t >= 0 or t * t < 5 * b * b else -1

    def _coerce(self, other) -> "GoldenInt | None":
        if isinstance(other, GoldenInt):
            return other
        if isinstance(other, int):
            return GoldenInt(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenInt(o.a - self.a, o.b - self.b)

    def __neg__(self):
        return GoldenInt(-self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a + b*phi)(c + d*phi) = ac + bd + (ad + bc + bd)*phi
        a, b, c, d = self.a, self.b, o.a, o.b
        return GoldenInt(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"GoldenInt({self.a}, {self.b})"

    def __str__(self):
        return f"{self.a}{self.b:+}*phi"


PHI = GoldenInt(0, 1)

# s_i(alpha_j) coefficient pairs per bond label; larger entry goes to the
# lower generator index across an asymmetric bond.
_BOND_COEFFS = {2: (0, 0), 3: (1, 1), 4: (2, 1), 6: (3, 1)}


class GroupElement:
    """Immutable group element: flat inverse matrix plus cached length."""

    __slots__ = ("engine", "key", "length")

    def __init__(self, engine: "GeometricRepresentation", key: tuple, length: int):
        self.engine = engine
        self.key = key
        self.length = length

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<GroupElement len={self.length} word={' '.join(map(str, self.word())) or 'e'}>"

    @property
    def inverse_matrix(self) -> tuple[tuple, ...]:
        """Columns of the stored matrix: column i is w^{-1}(alpha_i)."""
        n = self.engine.rank
        return tuple(self.key[i * n : (i + 1) * n] for i in range(n))

    def left_descents(self) -> frozenset[int]:
        return self.engine.left_descents(self)

    def descent_count(self) -> int:
        return self.engine._descent_mask(self.key).bit_count()

    def word(self) -> tuple[int, ...]:
        return self.engine.canonical_word(self)

    def inverse(self) -> "GroupElement":
        return self.engine.inverse(self)

    def is_identity(self) -> bool:
        return self.key == self.engine.identity_key


class GeometricRepresentation:
    """Reflection matrices over an exact ring for one Coxeter matrix."""

    def __init__(self, matrix: CoxeterMatrix):
        self.matrix = matrix
        n = matrix.rank
        self.rank = n
        labels = {matrix.bonds[i][j] for i in range(n) for j in range(i + 1, n)}
        unsupported = labels - {2, 3, 4, 6, 5}
        if unsupported:
            raise UnsupportedTypeError(
                f"bond labels {sorted(unsupported)} have no exact integer or "
                "golden-integer representation here; dihedral groups are "
                "handled symbolically by the proper module"
            )
        self.golden = 5 in labels
        one = GoldenInt(1, 0) if self.golden else 1
        zero = GoldenInt(0, 0) if self.golden else 0

        coeff = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                m = matrix.bonds[i][j]
                if m == 2:
                    continue
                if m == 5:
                    coeff[i][j] = coeff[j][i] = PHI
                else:
                    lo, hi = _BOND_COEFFS[m]
                    coeff[i][j] = lo * one if self.golden else lo
                    coeff[j][i] = hi * one if self.golden else hi

        # Column update lists: left-multiplying by s_i rewrites column i to
        # its negation and adds coeff[i][j] * (old column i) to each
        # neighbor column j.
        self._updates = tuple(
            tuple(
                (j * n, coeff[i][j])
                for j in range(n)
                if j != i and matrix.bonds[i][j] >= 3
            )
            for i in range(n)
        )
        self._coeff = coeff
        ident = []
        for i in range(n):
            col = [zero] * n
            col[i] = one
            ident.extend(col)
        self.identity_key = tuple(ident)
        self._zero = zero
        self._positive_roots: tuple | None = None

    # -- raw kernel operating on flat keys ---------------------------------

    def _apply(self, key: tuple, i0: int) -> tuple:
        """Key of s_{i0+1} * w given the key of w (right-multiplies by s_i)."""
        n = self.rank
        off = i0 * n
        ci = key[off : off + n]
        out = list(key)
        out[off : off + n] = [-v for v in ci]
        for joff, c in self._updates[i0]:
            if c == 1:
                out[joff : joff + n] = [
                    a + b for a, b in zip(key[joff : joff + n], ci)
                ]
            else:
                out[joff : joff + n] = [
                    a + c * b for a, b in zip(key[joff : joff + n], ci)
                ]
        return tuple(out)

    def _descent_mask(self, key: tuple) -> int:
        """Bitmask of left descents; bit i set when column i is negative."""
        n = self.rank
        mask = 0
        off = 0
        for i in range(n):
            if max(key[off : off + n]) <= 0:
                mask |= 1 << i
            off += n
        return mask

    # -- public element API -------------------------------------------------

    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_key, 0)

    def _check_generator(self, i: int) -> int:
        if not 1 <= i <= self.rank:
            raise ParameterError(f"generator index {i} outside 1..{self.rank}")
        return i - 1

    def simple_reflection(self, i: int) -> GroupElement:
        i0 = self._check_generator(i)
        return GroupElement(self, self._apply(self.identity_key, i0), 1)

    def left_multiply(self, i: int, g: GroupElement) -> GroupElement:
        i0 = self._check_generator(i)
        n = self.rank
        shorter = max(g.key[i0 * n : (i0 + 1) * n]) <= 0
        return GroupElement(
            self, self._apply(g.key, i0), g.length + (-1 if shorter else 1)
        )

    def left_descents(self, g: GroupElement) -> frozenset[int]:
        """Left descent set J(w), validating the root sign dichotomy."""
        n = self.rank
        out = []
        for i in range(n):
            col = g.key[i * n : (i + 1) * n]
            has_pos = any(v > 0 for v in col)
            has_neg = any(v < 0 for v in col)
            if has_pos == has_neg:
                raise InternalError(
                    f"column {i + 1} is not a root vector; element is corrupted"
                )
            if has_neg:
                out.append(i + 1)
        return frozenset(out)

    def element_from_word(self, word) -> GroupElement:
        """Build s_{i1} s_{i2} ... s_{ik} from the index sequence (i1..ik)."""
        g = self.identity()
        for i in reversed(tuple(word)):
            g = self.left_multiply(i, g)
        return g

    def canonical_word(self, g: GroupElement) -> tuple[int, ...]:
        """Reduced word obtained by peeling the smallest left descent."""
        word = []
        key = g.key
        while True:
            mask = self._descent_mask(key)
            if not mask:
                break
            i0 = (mask & -mask).bit_length() - 1
            word.append(i0 + 1)
            key = self._apply(key, i0)
        return tuple(word)

    def inverse(self, g: GroupElement) -> GroupElement:
        return self.element_from_word(reversed(self.canonical_word(g)))

    def positive_roots(self, cap: int = 10_000) -> tuple[tuple, ...]:
        """All positive roots, as coordinate tuples in the simple basis.

        Computed as the closure of the simple roots under the reflections;
        the closure size is capped to catch non-finite input matrices.
        """
        if self._positive_roots is not None:
            return self._positive_roots
        n = self.rank
        one = GoldenInt(1, 0) if self.golden else 1
        simple = []
        for i in range(n):
            v = [self._zero] * n
            v[i] = one
            simple.append(tuple(v))
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(n):
                    # s_i changes only coordinate i:
                    # v_i' = -v_i + sum_j coeff[i][j] * v_j
                    acc = -v[i]
                    for joff, c in self._updates[i]:
                        acc = acc + c * v[joff // n]
                    if acc == v[i]:
                        continue
                    img = v[:i] + (acc,) + v[i + 1 :]
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
            if len(seen) > cap:
                raise UnsupportedTypeError(
                    f"root closure exceeded {cap} vectors; matrix is not of "
                    "finite type (or raise the cap)"
                )
        positive = [v for v in seen if all(c >= 0 for c in v)]
        positive.sort(key=_root_sort_key)
        self._positive_roots = tuple(positive)
        return self._positive_roots

    def length_by_roots(self, g: GroupElement) -> int:
        """Number of positive roots sent negative; equals ell(g).

        Applies the stored matrix of g^{-1} to every positive root; this
        counts ell(g^{-1}) = ell(g) and is independent of the cached
        BFS length.
        """
        n = self.rank
        cols = [g.key[i * n : (i + 1) * n] for i in range(n)]
        count = 0
        for root in self.positive_roots():
            img = [self._zero] * n
            for c, coord in enumerate(root):
                if coord == 0:
                    continue
                col = cols[c]
                img = [acc + coord * col[r] for r, acc in enumerate(img)]
            if max(img) <= 0:
                count += 1
        return count


def _root_sort_key(v):
    out = []
    for c in v:
        if isinstance(c, GoldenInt):
            out.append((c.a, c.b))
        else:
            out.append((c, 0))
    return out


def engine_for(label_or_matrix) -> GeometricRepresentation:
    """Engine for a standard label or an explicit Coxeter matrix."""
    if isinstance(label_or_matrix, CoxeterMatrix):
        return GeometricRepresentation(label_or_matrix)
    from .core import build_standard

    return GeometricRepresentation(build_standard(label_or_matrix))
