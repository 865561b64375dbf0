"""Walker metrics in canonical coordinates and their tangent-space data.

The metric family lives on coordinates (u, v, x, y) with line element block
form ((0, I), (I, W)) where W collects three arbitrary functions a, b, c of
all four coordinates.  The plane field spanned by the first two coordinate
vectors is null and parallel; every structure downstream (tetrad, connection,
curvature) is polynomial in a, b, c and their derivatives, so the whole
layer stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateTetradError, InputError
from .poly import ONE, ZERO, Poly, RationalFunction

HALF = Fraction(1, 2)

Vector = tuple[RationalFunction, RationalFunction, RationalFunction, RationalFunction]
Matrix4 = tuple[tuple[Poly, ...], ...]

COORDS = ("u", "v", "x", "y")


def _rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction(value)


def _vec(components) -> Vector:
    out = tuple(_rf(c) for c in components)
    if len(out) != 4:
        raise ValueError("vectors have four components")
    return out


ZERO_VEC: Vector = _vec([ZERO, ZERO, ZERO, ZERO])


@dataclass(frozen=True)
class WalkerMetric:
    """The three metric functions, plus an optional display label."""

    a: Poly
    b: Poly
    c: Poly
    label: str = ""

    @classmethod
    def from_dict(cls, data) -> "WalkerMetric":
        if not isinstance(data, dict):
            raise InputError("metric specification must be a JSON object")
        missing = [k for k in ("a", "b", "c") if k not in data]
        if missing:
            raise InputError(f"metric specification missing keys: {missing}")
        parsed = {}
        for key in ("a", "b", "c"):
            text = data[key]
            if not isinstance(text, str):
                raise InputError(f"metric function {key!r} must be a string")
            try:
                parsed[key] = Poly.parse(text)
            except ValueError as err:
                raise InputError(f"bad polynomial for {key!r}: {err}") from err
        label = data.get("label", "")
        if not isinstance(label, str):
            raise InputError("label must be a string")
        return cls(parsed["a"], parsed["b"], parsed["c"], label)

    def to_dict(self) -> dict:
        out = {"a": str(self.a), "b": str(self.b), "c": str(self.c)}
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class MetricTensor:
    g: Matrix4
    ginv: Matrix4

    def lower(self, V: Vector) -> Vector:
        return _vec(
            [sum((_rf(self.g[a][b]) * V[b] for b in range(4)), _rf(ZERO)) for a in range(4)]
        )

    def inner(self, V: Vector, W: Vector) -> RationalFunction:
        total = _rf(ZERO)
        for a in range(4):
            for b in range(4):
                entry = self.g[a][b]
                if entry.is_zero:
                    continue
                total = total + _rf(entry) * V[a] * W[b]
        return total


def assemble_metric(w: WalkerMetric) -> MetricTensor:
    a, b, c = w.a, w.b, w.c
    one = ONE
    zero = ZERO
    g = (
        (zero, zero, one, zero),
        (zero, zero, zero, one),
        (one, zero, a, c),
        (zero, one, c, b),
    )
    ginv = (
        (-a, -c, one, zero),
        (-c, -b, zero, one),
        (one, zero, zero, zero),
        (zero, one, zero, zero),
    )
    return MetricTensor(g=g, ginv=ginv)


@dataclass(frozen=True)
class Christoffel:
    """Connection symbols gamma[k][i][j] with k the contravariant index."""

    gamma: tuple[tuple[tuple[Poly, ...], ...], ...]


def christoffel(mt: MetricTensor) -> Christoffel:
    g, ginv = mt.g, mt.ginv
    dg = [[[g[i][j].diff(COORDS[k]) for j in range(4)] for i in range(4)] for k in range(4)]
    gamma = []
    for k in range(4):
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                total = ZERO
                for d in range(4):
                    factor = ginv[k][d]
                    if factor.is_zero:
                        continue
                    total = total + factor * (dg[i][d][j] + dg[j][d][i] - dg[d][i][j])
                row.append(total * HALF)
            rows.append(tuple(row))
        gamma.append(tuple(rows))
    return Christoffel(gamma=tuple(gamma))


@dataclass(frozen=True)
class Tetrad:
    """Null tetrad (l, n, m, mt) with dyad normalization scalars chi, chi_t.

    Inner products: l.n = chi*chi_t, m.mt = -chi*chi_t, all others zero.
    """

    l: Vector
    n: Vector
    m: Vector
    mt: Vector
    chi: RationalFunction = field(default_factory=lambda: _rf(ONE))
    chi_t: RationalFunction = field(default_factory=lambda: _rf(ONE))


def walker_tetrad(w: WalkerMetric) -> Tetrad:
    a, b, c = w.a, w.b, w.c
    l = _vec([ONE, ZERO, ZERO, ZERO])
    mt = _vec([ZERO, ONE, ZERO, ZERO])
    n = _vec([a * -HALF, c * -HALF, ONE, ZERO])
    m = _vec([c * HALF, b * HALF, ZERO, Poly.const(-1)])
    return Tetrad(l=l, n=n, m=m, mt=mt)


def validate_tetrad(mt: MetricTensor, t: Tetrad) -> None:
    """Check all ten inner products against the stated normalization."""
    unit = t.chi * t.chi_t
    if unit.is_zero:
        raise DegenerateTetradError("chi * chi_t vanishes identically")
    pairs = [
        (t.l, t.l, _rf(ZERO)),
        (t.n, t.n, _rf(ZERO)),
        (t.m, t.m, _rf(ZERO)),
        (t.mt, t.mt, _rf(ZERO)),
        (t.l, t.m, _rf(ZERO)),
        (t.l, t.mt, _rf(ZERO)),
        (t.n, t.m, _rf(ZERO)),
        (t.n, t.mt, _rf(ZERO)),
        (t.l, t.n, unit),
        (t.m, t.mt, -unit),
    ]
    names = ["l.l", "n.n", "m.m", "mt.mt", "l.m", "l.mt", "n.m", "n.mt", "l.n", "m.mt"]
    for name, (V, W, expect) in zip(names, pairs):
        if mt.inner(V, W) != expect:
            raise DegenerateTetradError(f"normalization violated for {name}")


@dataclass(frozen=True)
class IvdWSymbols:
    """Soldering-form matrices: up[a][A][A'] and their inverses down[a][A][A']."""

    up: tuple
    down: tuple


def ivdw_symbols(w: WalkerMetric) -> IvdWSymbols:
    a, b, c = w.a, w.b, w.c
    one, zero = ONE, ZERO
    neg_one = Poly.const(-1)
    up = (
        ((one, zero), (zero, zero)),
        ((zero, zero), (one, zero)),
        ((a * HALF, zero), (c * HALF, one)),
        ((c * HALF, neg_one), (b * HALF, zero)),
    )
    down = (
        ((one, c * HALF), (zero, a * -HALF)),
        ((zero, b * HALF), (one, c * -HALF)),
        ((zero, zero), (zero, one)),
        ((zero, neg_one), (zero, zero)),
    )
    return IvdWSymbols(up=up, down=down)


def vector_to_spinor_matrix(symbols: IvdWSymbols, V: Vector):
    """V^a -> V^{AA'} as a 2x2 matrix of rational functions."""
    out = [[_rf(ZERO), _rf(ZERO)], [_rf(ZERO), _rf(ZERO)]]
    for a in range(4):
        for A in range(2):
            for Ap in range(2):
                entry = symbols.up[a][A][Ap]
                if entry.is_zero:
                    continue
                out[A][Ap] = out[A][Ap] + V[a] * entry
    return tuple(tuple(row) for row in out)


def spinor_matrix_to_vector(symbols: IvdWSymbols, M) -> Vector:
    comps = []
    for a in range(4):
        total = _rf(ZERO)
        for A in range(2):
            for Ap in range(2):
                entry = symbols.down[a][A][Ap]
                if entry.is_zero:
                    continue
                total = total + _rf(M[A][Ap]) * entry
        comps.append(total)
    return _vec(comps)


def covariant_derivative_vector(ch: Christoffel, V: Vector):
    """nabla[b][a] = (d_b V^a) + Gamma^a_{bc} V^c, returned as a 4x4 grid."""
    V = _vec(V)
    out = []
    for b in range(4):
        row = []
        for a in range(4):
            total = V[a].diff(COORDS[b])
            for c in range(4):
                coeff = ch.gamma[a][b][c]
                if coeff.is_zero or V[c].is_zero:
                    continue
                total = total + _rf(coeff) * V[c]
            row.append(total)
        out.append(tuple(row))
    return tuple(out)


def directional_vector_derivative(nabla, W: Vector) -> Vector:
    """Contract a covariant derivative grid with a direction vector W^b."""
    comps = []
    for a in range(4):
        total = _rf(ZERO)
        for b in range(4):
            if W[b].is_zero:
                continue
            total = total + W[b] * nabla[b][a]
        comps.append(total)
    return _vec(comps)


class DirectionalOps:
    """Scalar directional derivatives D, Delta, delta, Dp of a tetrad.

    D follows l, Delta follows mt, delta follows m, and Dp follows n.
    """

    def __init__(self, t: Tetrad):
        self._dirs = {"D": t.l, "Delta": t.mt, "delta": t.m, "Dp": t.n}

    def apply(self, name: str, f) -> RationalFunction:
        vec = self._dirs[name]
        f = _rf(f)
        total = _rf(ZERO)
        for b in range(4):
            if vec[b].is_zero:
                continue
            total = total + vec[b] * f.diff(COORDS[b])
        return total

    def D(self, f):
        return self.apply("D", f)

    def Delta(self, f):
        return self.apply("Delta", f)

    def delta(self, f):
        return self.apply("delta", f)

    def Dp(self, f):
        return self.apply("Dp", f)

    NAMES = ("D", "Delta", "delta", "Dp")


def tetrad_transform(t: Tetrad, lam, lam_t, mu, mu_t) -> Tetrad:
    """Boost-rotation family preserving the normalization scalars.

    l scales by lam*lam_t, n picks up the inverse factor plus null-rotation
    terms, and m, mt mix accordingly.  lam and lam_t must be invertible
    (not identically zero); mu, mu_t are unrestricted.
    """
    lam, lam_t, mu, mu_t = _rf(lam), _rf(lam_t), _rf(mu), _rf(mu_t)
    if lam.is_zero or lam_t.is_zero:
        raise InputError("lam and lam_t must not vanish identically")
    ll = lam * lam_t
    inv_ll = RationalFunction(ONE) / ll
    inv_lam = RationalFunction(ONE) / lam
    inv_lam_t = RationalFunction(ONE) / lam_t

    def comb(*pairs) -> Vector:
        comps = []
        for i in range(4):
            total = _rf(ZERO)
            for coeff, vec in pairs:
                if vec[i].is_zero:
                    continue
                total = total + coeff * vec[i]
            comps.append(total)
        return _vec(comps)

    new_l = comb((ll, t.l))
    new_n = comb((inv_ll, t.n), (inv_lam * mu_t, t.mt), (mu * inv_lam_t, t.m), ((mu * mu_t), t.l))
    new_m = comb((lam * inv_lam_t, t.m), (lam * mu_t, t.l))
    new_mt = comb((inv_lam * lam_t, t.mt), (mu * lam_t, t.l))
    return Tetrad(l=new_l, n=new_n, m=new_m, mt=new_mt, chi=t.chi, chi_t=t.chi_t)


def scale_normalization(t: Tetrad, f, f_t) -> Tetrad:
    """Rescale the two dyads independently, producing chi = f, chi_t = f_t.

    Unlike tetrad_transform this leaves the normalization scalars non-unit,
    which exercises the derivative terms in the coefficient extraction.
    """
    f, f_t = _rf(f), _rf(f_t)
    if f.is_zero or f_t.is_zero:
        raise InputError("scale factors must not vanish identically")

    def scale(vec: Vector, factor: RationalFunction) -> Vector:
        return _vec([factor * comp for comp in vec])

    return Tetrad(
        l=scale(t.l, f * f_t),
        n=t.n,
        m=scale(t.m, f),
        mt=scale(t.mt, f_t),
        chi=t.chi * f,
        chi_t=t.chi_t * f_t,
    )


def tetrad_covectors(mt: MetricTensor, t: Tetrad):
    """Lowered one-forms (l_a, n_a, m_a, mt_a)."""
    return mt.lower(t.l), mt.lower(t.n), mt.lower(t.m), mt.lower(t.mt)
