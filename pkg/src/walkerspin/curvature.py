"""Curvature of Walker metrics: tensor route, coefficient route, and the
field-equation and commutator residuals connecting them.

The coefficient route computes every curvature dyad component from first
derivatives of the 32 connection scalars; the tensor route goes through
Christoffel symbols and the Ricci tensor.  Wherever a quantity is
expressible both ways the two are compared and a disagreement raises
InternalInconsistencyError, so a passing run certifies the whole chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InternalInconsistencyError
from .poly import ONE, ZERO, Poly, RationalFunction
from .spincoeff import Frame
from .walker import (
    COORDS,
    Christoffel,
    MetricTensor,
    Tetrad,
    WalkerMetric,
)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)

_RF_ZERO = RationalFunction(ZERO)


def _rf(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction(value)


# ---------------------------------------------------------------------------
# Tensor route.
# ---------------------------------------------------------------------------


def ricci_tensor(ch: Christoffel):
    """Ricci tensor from the connection alone, no rank-four intermediate."""
    g = ch.gamma
    out = []
    for b in range(4):
        row = []
        for d in range(4):
            entry = Poly.zero()
            for a in range(4):
                entry = entry + g[a][d][b].diff(COORDS[a]) - g[a][a][b].diff(COORDS[d])
                for e in range(4):
                    entry = entry + g[a][a][e] * g[e][d][b] - g[a][d][e] * g[e][a][b]
            row.append(entry)
        out.append(tuple(row))
    return tuple(out)


def scalar_curvature(mt: MetricTensor, ricci) -> Poly:
    total = Poly.zero()
    for b in range(4):
        for d in range(4):
            total = total + mt.ginv[b][d] * ricci[b][d]
    return total


@dataclass(frozen=True)
class RiemannData:
    """Fully lowered curvature tensor with its traces."""

    lowered: tuple   # R_abcd
    ricci: tuple     # R_bd
    scalar: Poly


def riemann(mt: MetricTensor, ch: Christoffel) -> RiemannData:
    g = ch.gamma
    up = [[[[Poly.zero() for _ in range(4)] for _ in range(4)] for _ in range(4)]
          for _ in range(4)]
    for a in range(4):
        for b in range(4):
            for c in range(4):
                for d in range(c + 1, 4):
                    entry = g[a][d][b].diff(COORDS[c]) - g[a][c][b].diff(COORDS[d])
                    for e in range(4):
                        entry = entry + g[a][c][e] * g[e][d][b] - g[a][d][e] * g[e][c][b]
                    up[a][b][c][d] = entry
                    up[a][b][d][c] = -entry
    lowered = tuple(
        tuple(
            tuple(
                tuple(
                    sum(
                        (mt.g[a][e] * up[e][b][c][d] for e in range(4)),
                        Poly.zero(),
                    )
                    for d in range(4)
                )
                for c in range(4)
            )
            for b in range(4)
        )
        for a in range(4)
    )
    traced = tuple(
        tuple(
            sum((up[a][b][a][d] for a in range(4)), Poly.zero()) for d in range(4)
        )
        for b in range(4)
    )
    direct = ricci_tensor(ch)
    for b in range(4):
        for d in range(4):
            if traced[b][d] != direct[b][d]:
                raise InternalInconsistencyError(
                    "Ricci trace of the curvature tensor disagrees with the "
                    "direct contraction formula"
                )
    return RiemannData(lowered=lowered, ricci=direct,
                       scalar=scalar_curvature(mt, direct))


def bianchi_contracted_residual(mt: MetricTensor, ch: Christoffel, ricci, scalar):
    """Components of div(Ricci) - grad(scalar)/2; identically zero."""
    g = ch.gamma
    nabla = [[[None] * 4 for _ in range(4)] for _ in range(4)]
    for a in range(4):
        for b in range(4):
            for c in range(4):
                entry = ricci[b][c].diff(COORDS[a])
                for d in range(4):
                    entry = entry - g[d][a][b] * ricci[d][c] - g[d][a][c] * ricci[b][d]
                nabla[a][b][c] = entry
    out = []
    for b in range(4):
        entry = Poly.zero()
        for a in range(4):
            for e in range(4):
                entry = entry + mt.ginv[a][e] * nabla[e][a][b]
        out.append(entry - scalar.diff(COORDS[b]) * HALF)
    return tuple(out)


# ---------------------------------------------------------------------------
# Dyad components.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureSpinors:
    """Curvature dyad components: both quartic families, the mixed 3x3
    block, and the scalar pieces."""

    Psi0: RationalFunction = _RF_ZERO
    Psi1: RationalFunction = _RF_ZERO
    Psi2: RationalFunction = _RF_ZERO
    Psi3: RationalFunction = _RF_ZERO
    Psi4: RationalFunction = _RF_ZERO
    PsiT0: RationalFunction = _RF_ZERO
    PsiT1: RationalFunction = _RF_ZERO
    PsiT2: RationalFunction = _RF_ZERO
    PsiT3: RationalFunction = _RF_ZERO
    PsiT4: RationalFunction = _RF_ZERO
    Phi: tuple = ((_RF_ZERO,) * 3,) * 3
    Lambda: RationalFunction = _RF_ZERO
    Pi: RationalFunction = _RF_ZERO
    S: RationalFunction = _RF_ZERO

    def psi(self, k: int) -> RationalFunction:
        return getattr(self, f"Psi{k}")

    def psi_t(self, k: int) -> RationalFunction:
        return getattr(self, f"PsiT{k}")


def prime_curvature(c: CurvatureSpinors) -> CurvatureSpinors:
    """Component relabelling under the priming involution."""
    sign = lambda k: 1 if k % 2 == 0 else -1
    phi = tuple(
        tuple(sign(i + j) * c.Phi[2 - i][2 - j] for j in range(3)) for i in range(3)
    )
    return CurvatureSpinors(
        Psi0=c.Psi4, Psi1=-c.Psi3, Psi2=c.Psi2, Psi3=-c.Psi1, Psi4=c.Psi0,
        PsiT0=c.PsiT4, PsiT1=-c.PsiT3, PsiT2=c.PsiT2, PsiT3=-c.PsiT1, PsiT4=c.PsiT0,
        Phi=phi, Lambda=c.Lambda, Pi=c.Pi, S=c.S,
    )


def tilde_curvature(c: CurvatureSpinors) -> CurvatureSpinors:
    """Component relabelling when the two dyads exchange roles."""
    phi = tuple(tuple(c.Phi[j][i] for j in range(3)) for i in range(3))
    return CurvatureSpinors(
        Psi0=c.PsiT0, Psi1=c.PsiT1, Psi2=c.PsiT2, Psi3=c.PsiT3, Psi4=c.PsiT4,
        PsiT0=c.Psi0, PsiT1=c.Psi1, PsiT2=c.Psi2, PsiT3=c.Psi3, PsiT4=c.Psi4,
        Phi=phi, Lambda=c.Lambda, Pi=c.Pi, S=c.S,
    )


def _check(label: str, value, *alternates):
    for alt in alternates:
        if value != alt:
            raise InternalInconsistencyError(
                f"redundant routes for {label} disagree"
            )
    return value


def walker_curvature_components(w: WalkerMetric, frame: Frame | None = None) -> CurvatureSpinors:
    """All curvature dyad components of the canonical frame.

    Every component that admits more than one first-order expression is
    computed along each route and compared exactly.
    """
    if frame is None:
        frame = Frame.walker(w)
    s = frame.coeffs
    D = frame.ops.D
    A = frame.ops.Delta
    dl = frame.ops.delta
    Dp = frame.ops.Dp

    a, b, c = w.a, w.b, w.c
    a11 = a.diff("u").diff("u")
    b22 = b.diff("v").diff("v")
    c12 = c.diff("u").diff("v")
    c11 = c.diff("u").diff("u")

    Psi0 = -D(s.sigma)
    Psi1 = _check("Psi1", D(s.beta), -((D(s.tau) + A(s.sigma)) * HALF))
    Psi2 = _check(
        "Psi2",
        (D(s.gamma) + A(s.beta - s.tau)) * THIRD,
        (D(s.gamma + s.rho_p) + A(s.beta)) * THIRD,
        _rf((a11 + b22 - 4 * c12) * Fraction(1, 12)),
    )
    Psi3 = _check("Psi3", A(s.gamma), (A(s.rho_p) - D(s.kappa_p)) * HALF)
    Psi4 = -A(s.kappa_p)

    S = _check(
        "scalar",
        4 * (D(s.gamma) + A(s.beta + 2 * s.tau)),
        4 * (D(s.gamma - 2 * s.rho_p) + A(s.beta)),
        _rf(a11 + b22 + 2 * c12),
    )
    PsiT2 = _check(
        "PsiT2",
        S * Fraction(1, 12),
        (D(s.gamma_t) - A(s.alpha_t)) * THIRD,
    )
    PsiT3 = _check(
        "PsiT3",
        dl(s.gamma_t) - Dp(s.alpha_t),
        -((D(s.kappa_tp) + A(s.sigma_tp)) * HALF),
    )
    PsiT4 = (
        2 * (s.sigma_tp * s.epsilon_tp - s.kappa_tp * s.beta_tp)
        - dl(s.kappa_tp)
        - Dp(s.sigma_tp)
    )

    Phi01 = _check("Phi01", D(s.beta_tp), (A(s.sigma) - D(s.tau)) * HALF)
    Phi02 = _check(
        "Phi02",
        D(s.sigma_tp),
        Dp(s.sigma) - dl(s.tau) + 2 * (s.tau * s.beta - s.sigma * s.gamma),
    )
    Phi11 = _check(
        "Phi11",
        (D(s.gamma) - A(s.beta)) * HALF,
        (D(s.gamma_t) + A(s.alpha_t)) * HALF,
        _rf((a11 - b22) * Fraction(1, 8)),
    )
    Phi12 = _check(
        "Phi12",
        s.tau * s.rho_p + s.kappa_p * s.sigma - Dp(s.beta) + dl(s.gamma),
        (A(s.sigma_tp) - D(s.kappa_tp)) * HALF,
    )
    Phi21 = _check("Phi21", A(s.gamma_t), -((D(s.kappa_p) + A(s.rho_p)) * HALF))
    Phi22 = _check(
        "Phi22",
        -A(s.kappa_tp),
        2 * (s.rho_p * s.epsilon_p - s.kappa_p * s.alpha_p) - dl(s.kappa_p) - Dp(s.rho_p),
    )

    _check("Psi1+Phi01", Psi1 + Phi01, _rf(c11 * -HALF))

    Lambda = S * Fraction(-1, 24)
    phi = (
        (_RF_ZERO, Phi01, Phi02),
        (_RF_ZERO, Phi11, Phi12),
        (_RF_ZERO, Phi21, Phi22),
    )
    return CurvatureSpinors(
        Psi0=Psi0, Psi1=Psi1, Psi2=Psi2, Psi3=Psi3, Psi4=Psi4,
        PsiT0=_RF_ZERO, PsiT1=_RF_ZERO, PsiT2=PsiT2, PsiT3=PsiT3, PsiT4=PsiT4,
        Phi=phi, Lambda=Lambda, Pi=Lambda, S=S,
    )


def phi_lambda_from_ricci(ricci, scalar: Poly, mt: MetricTensor, t: Tetrad):
    """Trace-free Ricci dyad components and the scalar multiple.

    Valid only for unit normalization; the dyad dictionary used here
    presumes it, so anything else is refused.
    """
    if t.chi * t.chi_t != RationalFunction(ONE):
        raise InputError("Ricci dyad components require unit normalization")
    phi_ab = [
        [
            _rf((ricci[a][b_] - scalar * Fraction(1, 4) * mt.g[a][b_]) * HALF)
            for b_ in range(4)
        ]
        for a in range(4)
    ]

    def pairing(V, W):
        total = _RF_ZERO
        for a in range(4):
            if V[a].is_zero:
                continue
            for b_ in range(4):
                entry = phi_ab[a][b_]
                if entry.is_zero:
                    continue
                total = total + entry * V[a] * W[b_]
        return total

    l, n, m, mtld = t.l, t.n, t.m, t.mt
    phi11 = pairing(l, n)
    if phi11 != pairing(m, mtld):
        raise InternalInconsistencyError(
            "trace-free Ricci pairing violates the completeness relation"
        )
    phi = (
        (pairing(l, l), pairing(l, m), pairing(m, m)),
        (pairing(l, mtld), phi11, pairing(m, n)),
        (pairing(mtld, mtld), pairing(mtld, n), pairing(n, n)),
    )
    lam = _rf(scalar * Fraction(-1, 24))
    return phi, lam


# ---------------------------------------------------------------------------
# Field equations and commutators.
# ---------------------------------------------------------------------------


_TILDE_NAME = {}
for _fam in ("kappa", "sigma", "rho", "tau", "epsilon", "alpha", "beta", "gamma"):
    _TILDE_NAME[_fam] = f"{_fam}_t"
    _TILDE_NAME[f"{_fam}_t"] = _fam
    _TILDE_NAME[f"{_fam}_p"] = f"{_fam}_tp"
    _TILDE_NAME[f"{_fam}_tp"] = f"{_fam}_p"


def field_equation_residuals(frame: Frame, curv: CurvatureSpinors):
    """Left minus right side of all 48 first-order curvature equations.

    Keys are a..l with a prime marker for the partner equation and a ~
    marker for the equations of the second dyad.
    """
    ops = frame.ops
    s = frame.coeffs
    Pi = curv.Pi

    def build(get, psi, phi, op_map, mark):
        def dop(op, name):
            return ops.apply(op_map.get(op, op), get(name))

        g = get
        eqs = {}
        eqs["a"] = (
            dop("Delta", "kappa") - dop("D", "rho")
        ) - (
            g("rho") * g("rho") + g("sigma") * g("sigma_t") - g("kappa_t") * g("tau")
            + g("kappa") * (g("tau_p") + 2 * g("alpha") + g("beta_t") + g("beta_p"))
            - g("rho") * (g("epsilon") + g("epsilon_t")) + phi(0, 0)
        )
        eqs["a'"] = (
            -dop("delta", "kappa_p") - dop("Dp", "rho_p")
        ) - (
            g("rho_p") * g("rho_p") + g("sigma_p") * g("sigma_tp")
            - g("kappa_tp") * g("tau_p")
            + g("kappa_p") * (g("tau") + 2 * g("alpha_p") + g("beta_tp") + g("beta"))
            - g("rho_p") * (g("epsilon_p") + g("epsilon_tp")) + phi(2, 2)
        )
        eqs["b"] = (
            dop("delta", "kappa") - dop("D", "sigma")
        ) - (
            g("sigma") * (g("rho") + g("rho_t") - g("gamma_tp") + g("gamma_p")
                          - 2 * g("epsilon"))
            - g("kappa") * (g("tau") - g("tau_tp") - g("alpha_t") - g("alpha_p")
                            - 2 * g("beta"))
            + psi(0)
        )
        eqs["b'"] = (
            -dop("Delta", "kappa_p") - dop("Dp", "sigma_p")
        ) - (
            g("sigma_p") * (g("rho_p") + g("rho_tp") - g("gamma_t") + g("gamma")
                            - 2 * g("epsilon_p"))
            - g("kappa_p") * (g("tau_p") - g("tau_t") - g("alpha_tp") - g("alpha")
                              - 2 * g("beta_p"))
            + psi(4)
        )
        eqs["c"] = (
            dop("Dp", "kappa") - dop("D", "tau")
        ) - (
            g("rho") * (g("tau") + g("tau_tp")) + g("sigma") * (g("tau_t") + g("tau_p"))
            - g("tau") * (g("gamma_tp") + g("epsilon"))
            + g("kappa") * (g("gamma_t") + 2 * g("gamma") - g("epsilon_p"))
            + psi(1) + phi(0, 1)
        )
        eqs["c'"] = (
            dop("D", "kappa_p") - dop("Dp", "tau_p")
        ) - (
            g("rho_p") * (g("tau_p") + g("tau_t"))
            + g("sigma_p") * (g("tau_tp") + g("tau"))
            - g("tau_p") * (g("gamma_t") + g("epsilon_p"))
            + g("kappa_p") * (g("gamma_tp") + 2 * g("gamma_p") - g("epsilon"))
            - psi(3) - phi(2, 1)
        )
        eqs["d"] = (
            dop("Delta", "sigma") - dop("delta", "rho")
        ) - (
            g("tau") * (g("rho") - g("rho_t")) + g("kappa") * (g("rho_tp") - g("rho_p"))
            - g("rho") * (g("alpha_t") + g("beta"))
            + g("sigma") * (2 * g("alpha") - g("alpha_tp") + g("beta_p"))
            - psi(1) + phi(0, 1)
        )
        eqs["d'"] = (
            -dop("delta", "sigma_p") + dop("Delta", "rho_p")
        ) - (
            g("tau_p") * (g("rho_p") - g("rho_tp"))
            + g("kappa_p") * (g("rho_t") - g("rho"))
            - g("rho_p") * (g("alpha_tp") + g("beta_p"))
            + g("sigma_p") * (2 * g("alpha_p") - g("alpha_t") + g("beta"))
            + psi(3) - phi(2, 1)
        )
        eqs["e"] = (
            dop("Dp", "sigma") - dop("delta", "tau")
        ) - (
            -g("rho_p") * g("sigma") - g("sigma_tp") * g("rho")
            + g("tau") * g("tau") - g("kappa") * g("kappa_tp")
            - g("tau") * (g("beta") - g("beta_tp"))
            + g("sigma") * (2 * g("gamma") - g("epsilon_p") + g("epsilon_tp"))
            + phi(0, 2)
        )
        eqs["e'"] = (
            dop("D", "sigma_p") + dop("Delta", "tau_p")
        ) - (
            -g("rho") * g("sigma_p") - g("sigma_t") * g("rho_p")
            + g("tau_p") * g("tau_p") - g("kappa_p") * g("kappa_t")
            - g("tau_p") * (g("beta_p") - g("beta_t"))
            + g("sigma_p") * (2 * g("gamma_p") - g("epsilon") + g("epsilon_t"))
            + phi(2, 0)
        )
        eqs["f"] = (
            dop("Delta", "tau") - dop("Dp", "rho")
        ) - (
            g("rho") * g("rho_tp") + g("sigma") * g("sigma_p")
            - g("tau") * g("tau_t") + g("kappa") * g("kappa_p")
            - g("rho") * (g("gamma") + g("gamma_t"))
            + g("tau") * (g("alpha") - g("alpha_tp"))
            - psi(2) - 2 * Pi
        )
        eqs["f'"] = (
            -dop("delta", "tau_p") - dop("D", "rho_p")
        ) - (
            g("rho_p") * g("rho_t") + g("sigma_p") * g("sigma")
            - g("tau_p") * g("tau_tp") + g("kappa_p") * g("kappa")
            - g("rho_p") * (g("gamma_p") + g("gamma_tp"))
            + g("tau_p") * (g("alpha_p") - g("alpha_t"))
            - psi(2) - 2 * Pi
        )
        eqs["g"] = (
            dop("Dp", "beta") - dop("delta", "gamma")
        ) - (
            g("tau") * g("rho_p") + g("kappa_p") * g("sigma")
            - g("kappa_tp") * g("epsilon") - g("alpha") * g("sigma_tp")
            + g("beta") * (g("epsilon_tp") - g("rho_p") + g("gamma"))
            + g("gamma") * (g("beta_tp") + g("alpha_p") + g("tau"))
            - phi(1, 2)
        )
        eqs["g'"] = (
            dop("D", "beta_p") + dop("Delta", "gamma_p")
        ) - (
            g("tau_p") * g("rho") + g("kappa") * g("sigma_p")
            - g("kappa_t") * g("epsilon_p") - g("alpha_p") * g("sigma_t")
            + g("beta_p") * (g("epsilon_t") - g("rho") + g("gamma_p"))
            + g("gamma_p") * (g("beta_t") + g("alpha") + g("tau_p"))
            + phi(1, 0)
        )
        eqs["h"] = (
            dop("Delta", "epsilon") - dop("D", "alpha")
        ) - (
            -g("tau_p") * g("rho") - g("kappa") * g("sigma_p")
            - g("kappa_t") * g("gamma") + g("beta") * g("sigma_t")
            - g("alpha") * (g("epsilon_t") - g("rho") + g("gamma_p"))
            + g("epsilon") * (g("beta_t") + g("alpha") + g("tau_p"))
            - phi(1, 0)
        )
        eqs["h'"] = (
            -dop("delta", "epsilon_p") - dop("Dp", "alpha_p")
        ) - (
            -g("tau") * g("rho_p") - g("kappa_p") * g("sigma")
            - g("kappa_tp") * g("gamma_p") + g("beta_p") * g("sigma_tp")
            - g("alpha_p") * (g("epsilon_tp") - g("rho_p") + g("gamma"))
            + g("epsilon_p") * (g("beta_tp") + g("alpha_p") + g("tau"))
            + phi(1, 2)
        )
        eqs["i"] = (
            dop("D", "beta") - dop("delta", "epsilon")
        ) - (
            g("kappa") * (g("rho_p") + g("gamma"))
            + g("sigma") * (g("tau_p") - g("alpha"))
            + g("beta") * (g("gamma_tp") - g("rho_t"))
            - g("epsilon") * (g("tau_tp") + g("alpha_t"))
            + psi(1)
        )
        eqs["i'"] = (
            dop("Dp", "beta_p") + dop("Delta", "epsilon_p")
        ) - (
            g("kappa_p") * (g("rho") + g("gamma_p"))
            + g("sigma_p") * (g("tau") - g("alpha_p"))
            + g("beta_p") * (g("gamma_t") - g("rho_tp"))
            - g("epsilon_p") * (g("tau_t") + g("alpha_tp"))
            - psi(3)
        )
        eqs["j"] = (
            dop("Delta", "gamma") - dop("Dp", "alpha")
        ) - (
            g("kappa_p") * (g("epsilon") - g("rho"))
            + g("sigma_p") * (g("beta") - g("tau"))
            + g("alpha") * (g("rho_tp") - g("gamma_t"))
            - g("gamma") * (g("tau_t") + g("alpha_tp"))
            - (g("gamma") * g("beta_p") + g("alpha") * g("epsilon_p"))
            + psi(3)
        )
        eqs["j'"] = (
            -dop("delta", "gamma_p") - dop("D", "alpha_p")
        ) - (
            g("kappa") * (g("epsilon_p") - g("rho_p"))
            + g("sigma") * (g("beta_p") - g("tau_p"))
            + g("alpha_p") * (g("rho_t") - g("gamma_tp"))
            - g("gamma_p") * (g("tau_tp") + g("alpha_t"))
            - (g("gamma_p") * g("beta") + g("alpha_p") * g("epsilon"))
            - psi(1)
        )
        eqs["k"] = (
            dop("D", "gamma") - dop("Dp", "epsilon")
        ) - (
            g("tau") * g("tau_p") - g("kappa") * g("kappa_p")
            - g("beta") * (g("tau_p") + g("tau_t"))
            - g("alpha") * (g("tau_tp") + g("tau"))
            - g("epsilon") * (g("gamma") + g("gamma_t"))
            + g("gamma") * (g("gamma_p") + g("gamma_tp"))
            + psi(2) + phi(1, 1) - Pi
        )
        eqs["k'"] = (
            dop("Dp", "gamma_p") - dop("D", "epsilon_p")
        ) - (
            g("tau") * g("tau_p") - g("kappa") * g("kappa_p")
            - g("beta_p") * (g("tau") + g("tau_tp"))
            - g("alpha_p") * (g("tau_t") + g("tau_p"))
            - g("epsilon_p") * (g("gamma_p") + g("gamma_tp"))
            + g("gamma_p") * (g("gamma") + g("gamma_t"))
            + psi(2) + phi(1, 1) - Pi
        )
        eqs["l"] = (
            dop("Delta", "beta") - dop("delta", "alpha")
        ) - (
            g("rho") * g("rho_p") - g("sigma") * g("sigma_p")
            - g("alpha") * g("alpha_t") - g("beta") * g("alpha_tp")
            + g("alpha") * (g("beta") + g("alpha_p"))
            + g("gamma") * (g("rho") - g("rho_t"))
            + g("epsilon") * (g("rho_tp") - g("rho_p"))
            + psi(2) - phi(1, 1) - Pi
        )
        eqs["l'"] = (
            -dop("delta", "beta_p") + dop("Delta", "alpha_p")
        ) - (
            g("rho") * g("rho_p") - g("sigma") * g("sigma_p")
            - g("alpha_p") * g("alpha_tp") - g("beta_p") * g("alpha_t")
            + g("alpha_p") * (g("beta_p") + g("alpha"))
            + g("gamma_p") * (g("rho_p") - g("rho_tp"))
            + g("epsilon_p") * (g("rho_t") - g("rho"))
            + psi(2) - phi(1, 1) - Pi
        )
        return {f"{key}{mark}": value for key, value in eqs.items()}

    plain = build(
        s.get,
        lambda k: curv.psi(k),
        lambda i, j: curv.Phi[i][j],
        {},
        "",
    )
    # For the second dyad the transverse operators trade places along
    # with the coefficient families and the mixed-block transpose.
    tilded = build(
        lambda name: s.get(_TILDE_NAME[name]),
        lambda k: curv.psi_t(k),
        lambda i, j: curv.Phi[j][i],
        {"Delta": "delta", "delta": "Delta"},
        "~",
    )
    plain.update(tilded)
    return plain


def commutator_residuals(frame: Frame, f):
    """Second-derivative commutators of a scalar minus their first-order
    expansions; six residuals, one per operator pair."""
    ops = frame.ops
    s = frame.coeffs
    f = _rf(f)
    D = {name: ops.apply(name, f) for name in ops.NAMES}
    second = {
        (p, q): ops.apply(p, D[q]) for p in ops.NAMES for q in ops.NAMES
    }

    def lie(p, q):
        return second[(p, q)] - second[(q, p)]

    out = {
        "[Dp,D]": lie("Dp", "D") - (
            (s.gamma + s.gamma_t) * D["D"]
            - (s.gamma_p + s.gamma_tp) * D["Dp"]
            + (s.tau + s.tau_tp) * D["Delta"]
            + (s.tau_p + s.tau_t) * D["delta"]
        ),
        "[delta,D]": lie("delta", "D") - (
            (s.beta + s.alpha_t + s.tau_tp) * D["D"]
            - s.kappa * D["Dp"]
            + s.sigma * D["Delta"]
            + (s.rho_t - s.epsilon - s.gamma_tp) * D["delta"]
        ),
        "[Dp,Delta]": lie("Dp", "Delta") - (
            (s.beta_p + s.alpha_tp + s.tau_t) * D["Dp"]
            - s.kappa_p * D["D"]
            - s.sigma_p * D["delta"]
            - (s.rho_tp - s.epsilon_p - s.gamma_t) * D["Delta"]
        ),
        "[D,Delta]": lie("D", "Delta") - (
            s.kappa_t * D["Dp"]
            - (s.tau_p + s.beta_t + s.alpha) * D["D"]
            - s.sigma_t * D["delta"]
            - (s.rho - s.epsilon_t - s.gamma_p) * D["Delta"]
        ),
        "[delta,Dp]": lie("delta", "Dp") - (
            s.kappa_tp * D["D"]
            - (s.tau + s.beta_tp + s.alpha_p) * D["Dp"]
            + s.sigma_tp * D["Delta"]
            + (s.rho_p - s.epsilon_tp - s.gamma) * D["delta"]
        ),
        "[Delta,delta]": lie("Delta", "delta") - (
            (s.rho_tp - s.rho_p) * D["D"]
            + (s.rho - s.rho_t) * D["Dp"]
            + (s.alpha_p - s.alpha_t) * D["Delta"]
            + (s.alpha - s.alpha_tp) * D["delta"]
        ),
    }
    return out


# ---------------------------------------------------------------------------
# Pointwise algebraic type of the second quartic family.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylTypeReport:
    label: str
    point: tuple
    scalar: Fraction
    invariant_a: Fraction
    invariant_b: Fraction
    psi_t3: Fraction
    psi_t4: Fraction


def classify_sd_weyl(w: WalkerMetric, point, curv: CurvatureSpinors | None = None) -> WeylTypeReport:
    """Pointwise root-multiplicity class of the second quartic family.

    The two scalar invariants are recovered from the nonzero components,
    so the classification applies to any metric in canonical form, not
    just those built from a potential.
    """
    if curv is None:
        curv = walker_curvature_components(w)
    pt = tuple(Fraction(coord) for coord in point)
    if len(pt) != 4:
        raise InputError("point must have four coordinates")
    s_val = curv.S.eval_at(pt)
    psi_t3 = curv.PsiT3.eval_at(pt)
    psi_t4 = curv.PsiT4.eval_at(pt)
    c_val = w.c.eval_at(pt)
    inv_b = -8 * psi_t3 - s_val * c_val
    inv_a = 6 * inv_b * c_val + s_val * (3 * c_val * c_val - 1) - 24 * psi_t4
    if s_val != 0:
        if s_val * s_val + inv_a * s_val + 3 * inv_b * inv_b == 0:
            label = "{2,2}Ia"
        else:
            label = "{211}II/{1 1bar 2}II"
    elif psi_t3 != 0:
        label = "{31}III"
    elif psi_t4 != 0:
        label = "{4}II"
    else:
        label = "SD-flat"
    return WeylTypeReport(
        label=label, point=pt, scalar=s_val,
        invariant_a=inv_a, invariant_b=inv_b,
        psi_t3=psi_t3, psi_t4=psi_t4,
    )
