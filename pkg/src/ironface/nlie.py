"""Non-linear integral equations for the leading and twisted QTM eigenvalues.

Two auxiliary functions b and bbar on a one-dimensional grid encode the
eigenvalue of the quantum transfer matrix.  Convolutions are evaluated with
fast transforms, in which every kernel is a Fourier multiplier:

critical regime (|Delta| < 1), x on the real line, conv f*g = (1/2pi) int f(x-y) g(y) dy
    K_hat(k) = 1 / (2 cosh(gamma k / 2)),          K(x) = (pi/gamma) / cosh(pi x / gamma)
    F_hat(k) = sinh((pi-2gamma)k/2) / (2 sinh((pi-gamma)k/2) cosh(gamma k/2))
    shifted F(x +- i gamma) has multiplier F_hat(k) exp(-+ k gamma)

massive regime (Delta > 1), x on the circle [-pi/2, pi/2), modes exp(2ikx)
    coefficients K_k = 1/cosh(gamma k), F_k = exp(-gamma|k|)/cosh(gamma k),
    the convolution of two series multiplies coefficients and halves them,
    shifted F(x +- i gamma) has coefficients F_k exp(-+ 2 k gamma).

The shifted multipliers are exact, so no contour offset is needed.  A nonzero
``epsilon`` evaluates the shifted kernel at Im = gamma - epsilon instead.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.optimize import NoConvergence, newton_krylov

from .errors import ConvergenceFailure, GridTooCoarse, OutOfStrip, QuadratureFailure
from .weights import Regime

_TAIL_DECAY = 1e-16


@dataclass(frozen=True)
class NlieConfig:
    """Numerical settings of the NLIE solver.

    ``points``/``x_max`` set the line grid of the critical regime and
    ``circle_points`` the circle grid of the massive regime.  The circle grid
    is enlarged until it holds four points per resolved mode; ``k_max``
    overrides the number of modes, which by default is where exp(-gamma k)
    drops below 1e-16.

    The fixed-point stage under-relaxes with ``mixing`` and halves it when the
    residual grows.  After ``max_iter`` steps, or for twisted equations,
    Newton-Krylov takes over.
    """

    x_max: float = 20.0
    points: int = 4096
    circle_points: int = 1024
    k_max: int | None = None
    epsilon: float = 0.0
    tol: float = 1e-11
    twisted_tol: float = 1e-9
    max_iter: int = 400
    newton_max_iter: int = 200
    mixing: float = 0.5
    tail_points: int = 20
    phi_offsets: tuple = (0.12, 0.10, 0.08, 0.06, 0.04)
    continuation_steps: int = 10
    fd_step: float = 1e-3

    def __post_init__(self):
        for name in ("points", "circle_points"):
            p = getattr(self, name)
            if p < 16 or p & (p - 1):
                raise ValueError(f"{name} must be a power of two >= 16, got {p}")
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.tol < 1e-14 or self.twisted_tol < 1e-14:
            raise ValueError("tolerances below 1e-14 are not reachable in double precision")
        if not 0.0 < self.mixing <= 1.0:
            raise ValueError("mixing must lie in (0, 1]")
        if self.max_iter < 1 or self.newton_max_iter < 1:
            raise ValueError("iteration limits must be positive")
        if len(self.phi_offsets) < 4 or min(self.phi_offsets) <= 0:
            raise ValueError("need at least four positive phi offsets for the cubic extrapolation")
        if self.tail_points < 2:
            raise ValueError("tail_points must be at least 2")


@dataclass(frozen=True)
class Grid:
    """Uniform grid, either a truncated line [-x_max, x_max) or the circle [-pi/2, pi/2)."""

    domain: str
    points: int
    spacing: float
    nodes: np.ndarray = field(repr=False)
    x_max: float | None = None

    @classmethod
    def line(cls, x_max: float, points: int) -> "Grid":
        h = 2 * x_max / points
        return cls("line", points, h, (np.arange(points) - points // 2) * h, x_max)

    @classmethod
    def circle(cls, points: int) -> "Grid":
        h = np.pi / points
        return cls("circle", points, h, -np.pi / 2 + h * np.arange(points))


@dataclass
class NlieSolution:
    grid: Grid
    ln_b: np.ndarray
    ln_bbar: np.ndarray
    beta: float
    j_coupling: float
    phi: float
    regime: Regime
    config: NlieConfig
    iterations: int
    residual: float
    method: str = "fixed-point"


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    beta: float
    delta: float
    gamma: float
    J: float
    f: float
    e: float
    s: float
    c: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class CorrelationPoint:
    T: float
    beta: float
    delta: float
    J: float
    xi_inv: float
    beta_over_xi: float
    kappa: float
    kappa_over_pi: float
    iterations: int
    ln_ratio: complex


# --- kernels ------------------------------------------------------------------

def _sinh_ratio(k, a, b, c):
    """sinh(a k) / (2 sinh(b k) cosh(c k)) for k >= 0, without overflow; a may be negative."""
    k = np.abs(np.asarray(k, dtype=float))
    small = k < 1e-10
    ks = np.where(small, 1.0, k)
    num = np.sign(a) * np.exp((abs(a) - b - c) * ks) * -np.expm1(-2 * abs(a) * ks)
    den = -np.expm1(-2 * b * ks) * (1 + np.exp(-2 * c * ks))
    return np.where(small, a / (2 * b), num / den)


def f_hat(k, gamma: float):
    """Fourier multiplier of F in the critical regime."""
    return _sinh_ratio(k, (np.pi - 2 * gamma) / 2, (np.pi - gamma) / 2, gamma / 2)


def k_hat(k, gamma: float):
    return 0.5 / np.cosh(gamma * np.asarray(k, dtype=float) / 2)


def _critical_k(x, gamma):
    with np.errstate(over="ignore"):  # cosh -> inf gives the correct limit 0
        return (np.pi / gamma) / np.cosh(np.pi * np.asarray(x) / gamma)


def _modes_needed(rate: float) -> int:
    return int(np.ceil(-np.log(_TAIL_DECAY) / rate)) + 1


def _fourier_quad(mult, x, decay, what):
    """int_{-inf}^{inf} mult(k) exp(ikx) dk for an even multiplier decaying like exp(-decay |k|)."""
    x = complex(x)
    cut = -np.log(_TAIL_DECAY) / decay
    out = []
    for part in (np.real, np.imag):
        f = lambda k: part(2 * mult(k) * np.cos(k * x))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(f, 0.0, cut, limit=2000, epsabs=1e-15, epsrel=1e-13)
        if not np.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
            raise QuadratureFailure(f"{what}: quadrature error estimate {err:.2e}")
        out.append(val)
    return complex(out[0], out[1])


def kernel(kind: str, x, regime: Regime, epsilon: float = 0.0) -> complex:
    """Evaluate K or F at a (possibly complex) point.

    F is analytic for |Im x| < gamma and K for |Im x| < gamma/2.  Points
    outside these strips (gamma - epsilon for F) raise OutOfStrip.
    """
    g = regime.gamma
    x = complex(x)
    kind = kind.upper()
    if kind not in ("K", "F"):
        raise ValueError("kind must be 'K' or 'F'")
    limit = g - epsilon if kind == "F" else g / 2
    if abs(x.imag) >= limit:
        raise OutOfStrip(f"|Im x| = {abs(x.imag)} outside the analyticity strip {limit}")
    if regime.is_critical:
        if kind == "K":
            return complex(_critical_k(x, g))
        if abs(np.pi - 2 * g) < 1e-15:
            return 0j
        return _fourier_quad(lambda k: f_hat(k, g), x, g - abs(x.imag), "F")
    if kind == "K":
        rate = g - 2 * abs(x.imag)
        coef = lambda k: 1 / np.cosh(g * k)
    else:
        rate = 2 * (g - abs(x.imag))
        coef = lambda k: np.exp(-g * np.abs(k)) / np.cosh(g * k)
    kk = np.arange(-_modes_needed(rate), _modes_needed(rate) + 1)
    return complex(np.sum(coef(kk) * np.exp(2j * kk * x)))


def ground_energy_density(x: float, regime: Regime) -> float:
    """e_0(x); at x = 0 this is the ground-state energy per site."""
    return _e0(float(x), regime)


@lru_cache(maxsize=256)
def _e0(x: float, regime: Regime) -> float:
    g = regime.gamma
    if regime.is_critical:
        a, b, c = (np.pi - g) / 2, np.pi / 2, g / 2
        f = lambda k: _sinh_ratio(k, a, b, c)
        with warnings.catch_warnings():
            # quad flags roundoff once it reaches machine precision; the
            # returned error estimate is checked below instead
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            if x == 0.0:
                val, err = integrate.quad(f, 0.0, np.inf, limit=400, epsabs=1e-15, epsrel=1e-14)
            else:
                val, err = integrate.quad(f, 0.0, np.inf, weight="cos", wvar=abs(x), limlst=200)
        if not np.isfinite(val) or err > 1e-9:
            raise QuadratureFailure(f"e0 quadrature error estimate {err:.2e}")
        return float(-2 * np.sin(g) * 2 * val)
    kk = np.arange(-_modes_needed(2 * g), _modes_needed(2 * g) + 1)
    return float(-2 * np.sinh(g) * np.sum(np.exp(-g * np.abs(kk)) / np.cosh(g * kk) * np.cos(2 * kk * x)))


def driving(x, beta: float, j_coupling: float, phi: float, regime: Regime):
    """Driving terms (d_plus, d_minus) of the two equations."""
    g = regime.gamma
    x = np.asarray(x, dtype=float)
    if regime.is_critical:
        bulk = -2 * beta * np.sin(g) * _critical_k(x, g)
        const = (beta * j_coupling - 1j * phi) * np.pi / (np.pi - g)
    else:
        kk = np.arange(-_modes_needed(g), _modes_needed(g) + 1)
        bulk = -2 * beta * np.sinh(g) * np.real(
            np.exp(2j * np.multiply.outer(x, kk)) @ (1 / np.cosh(g * kk)))
        const = beta * j_coupling - 1j * phi
    return bulk + const, bulk - const


# --- discretised equations ------------------------------------------------------

def _unwrap_from_centre(phase):
    c0 = phase.size // 2
    right = np.unwrap(phase[c0:])
    left = np.unwrap(phase[: c0 + 1][::-1])[::-1]
    return np.concatenate([left[:-1], right])


def _log_one_plus(y, u):
    """ln(1 + exp(u + y)) with a continuous imaginary part.

    Where Re(u + y) is large the overflow-safe split z + log1p(e^-z) is used.
    Elsewhere, when |exp(u)| is moderate, the form (1 + e^u) + e^u expm1(y)
    keeps full precision as 1 + e^u approaches zero.
    """
    z = u + y
    out = np.empty_like(z)
    big = z.real > 30.0
    out[big] = z[big] + np.log1p(np.exp(-z[big]))
    rest = ~big
    if abs(u.real) <= 1.0:
        eu = np.exp(u)
        out[rest] = np.log((1 + eu) + eu * np.expm1(y[rest]))
    else:
        out[rest] = np.log1p(np.exp(z[rest]))
    return out.real + 1j * _unwrap_from_centre(out.imag)


class _Problem:
    """Discretised equations for one (beta, J, phi) and a grid."""

    def __init__(self, beta, j_coupling, phi, regime: Regime, config: NlieConfig):
        self.beta, self.J, self.phi = float(beta), float(j_coupling), float(phi)
        self.regime, self.config = regime, config
        g = regime.gamma
        if config.epsilon >= g:
            raise ValueError("epsilon must be smaller than gamma")
        shift = g - config.epsilon
        if regime.is_critical:
            self._setup_line(g, shift)
        else:
            self._setup_circle(g, shift)

    # critical: line grid doubled for zero padding; the padding carries a linear
    # extrapolation of ln B so the constant asymptotics enter the convolutions
    def _setup_line(self, g, shift):
        cfg = self.config
        n = cfg.points
        self.grid = Grid.line(cfg.x_max, n)
        h = self.grid.spacing
        M = 2 * n
        self.xe = (np.arange(M) - M // 2) * h
        self.inner = slice(M // 2 - n // 2, M // 2 + n // 2)
        k = 2 * np.pi * np.fft.fftfreq(M, d=h)
        Fk = f_hat(k, g)
        self.mult = (Fk, Fk * np.exp(-k * shift), Fk * np.exp(k * shift))
        peak = 2 * abs(self.beta) * np.sin(g) * np.pi / g
        edge = 2 * abs(self.beta) * np.sin(g) * _critical_k(cfg.x_max, g)
        if edge > 1e-12 * max(1.0, peak):
            raise GridTooCoarse(f"driving term is {edge:.2e} at x_max={cfg.x_max}; increase x_max")
        dp, dm = driving(self.grid.nodes, self.beta, self.J, self.phi, self.regime)
        self.u = 2 * (self.beta * self.J - 1j * self.phi)
        # unknowns are ln b - u and ln bbar + u, which vanish at large |x|
        self.base = (dp - self.u, dm + self.u)
        self.k_eig = _critical_k(self.xe, g)

    def _setup_circle(self, g, shift):
        cfg = self.config
        need = _modes_needed(g) if cfg.k_max is None else int(cfg.k_max)
        n = cfg.circle_points
        while n < 4 * need:
            n *= 2
        self.grid = Grid.circle(n)
        k = np.fft.fftfreq(n, 1.0 / n)
        # ln cosh(g k) without overflow
        lch = g * np.abs(k) + np.log1p(np.exp(-2 * g * np.abs(k))) - np.log(2)
        Fk = np.exp(-g * np.abs(k) - lch)
        self.mult = (Fk / 2, np.exp(-g * np.abs(k) - 2 * k * shift - lch) / 2,
                     np.exp(-g * np.abs(k) + 2 * k * shift - lch) / 2)
        self.modes = k
        self.k_coef = np.exp(-lch)
        dp, dm = driving(self.grid.nodes, self.beta, self.J, self.phi, self.regime)
        self.u = 0j
        self.base = (dp.astype(complex), dm.astype(complex))

    @property
    def n(self):
        return self.grid.points

    def _extend(self, f):
        n, M, h, m = self.n, 2 * self.n, self.grid.spacing, self.config.tail_points
        fe = np.empty(M, dtype=complex)
        fe[self.inner] = f
        sl = (f[-1] - f[-1 - m]) / (m * h)
        sr = (f[m] - f[0]) / (m * h)
        hi, lo = M // 2 + n // 2, M // 2 - n // 2
        fe[hi:] = f[-1] + sl * (self.xe[hi:] - self.grid.nodes[-1])
        fe[:lo] = f[0] + sr * (self.xe[:lo] - self.grid.nodes[0])
        return fe

    def log_b(self, y, ybar):
        LB = _log_one_plus(y, self.u)
        LBb = _log_one_plus(ybar, -self.u)
        if self.regime.is_critical:
            return self._extend(LB), self._extend(LBb)
        return LB, LBb

    def _conv(self, fe, mult):
        out = np.fft.ifft(np.fft.fft(fe) * mult)
        return out[self.inner] if self.regime.is_critical else out

    def update(self, y, ybar):
        LB, LBb = self.log_b(y, ybar)
        F0, Fp, Fm = self.mult
        y_new = self.base[0] + self._conv(LB, F0) - self._conv(LBb, Fp)
        yb_new = self.base[1] - self._conv(LB, Fm) + self._conv(LBb, F0)
        return y_new, yb_new

    def ln_eigenvalue(self, x, y, ybar):
        LB, LBb = self.log_b(y, ybar)
        e0 = ground_energy_density(x, self.regime)
        if self.regime.is_critical:
            K = _critical_k(x - self.xe, self.regime.gamma)
            conv = np.sum(K * (LB + LBb)) * self.grid.spacing / (2 * np.pi)
        else:
            n = self.n
            # coefficients of ln B Bbar in exp(2ikx) relative to the node x_0 = -pi/2
            coef = np.fft.fft(LB + LBb) / n * np.exp(1j * self.modes * np.pi)
            conv = 0.5 * np.sum(self.k_coef * coef * np.exp(2j * self.modes * x))
        return complex(-self.beta * e0 + 1j * self.phi + conv)


def _pack(y, yb):
    return np.concatenate([y.real, y.imag, yb.real, yb.imag])


def _unpack(v, n):
    return v[:n] + 1j * v[n:2 * n], v[2 * n:3 * n] + 1j * v[3 * n:]


def _fixed_point(prob: _Problem, y, yb, tol, max_iter, mixing):
    res_prev = np.inf
    res = np.inf
    for it in range(1, max_iter + 1):
        yn, ybn = prob.update(y, yb)
        res = float(max(np.abs(yn - y).max(), np.abs(ybn - yb).max()))
        if not np.isfinite(res):
            return y, yb, it, res, False
        if res > res_prev and mixing > 1e-3:
            mixing *= 0.5
        res_prev = res
        y = (1 - mixing) * y + mixing * yn
        yb = (1 - mixing) * yb + mixing * ybn
        if res < tol:
            return y, yb, it, res, True
    return y, yb, max_iter, res, False


def _newton(prob: _Problem, y, yb, tol, max_iter):
    n = prob.n
    count = [0]

    def F(v):
        a, b = _unpack(v, n)
        an, bn = prob.update(a, b)
        return _pack(an - a, bn - b)

    def cb(*_):
        count[0] += 1

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            v = newton_krylov(F, _pack(y, yb), f_tol=tol, method="lgmres",
                              maxiter=max_iter, callback=cb)
        except (NoConvergence, ValueError, FloatingPointError) as exc:
            raise ConvergenceFailure(f"Newton-Krylov failed: {exc.__class__.__name__}") from exc
    y, yb = _unpack(v, n)
    res = float(np.abs(F(v)).max())
    if not np.isfinite(res) or res > tol:
        raise ConvergenceFailure(f"Newton-Krylov residual {res:.2e} above {tol:.1e}")
    return y, yb, count[0], res


def solve(beta: float, j_coupling: float, phi: float, regime: Regime,
          config: NlieConfig | None = None, init: NlieSolution | None = None) -> NlieSolution:
    """Solve the NLIE for given beta, J and twist phi.

    Untwisted equations are iterated to a fixed point first; twisted ones and
    fixed-point failures go to Newton-Krylov.  ``init`` warm-starts from a
    neighbouring solution on the same grid.
    """
    config = config or NlieConfig()
    if beta <= 0:
        raise ValueError("beta must be positive")
    prob = _Problem(beta, j_coupling, phi, regime, config)
    if init is not None and init.grid.points == prob.n and init.grid.domain == prob.grid.domain:
        # stored arrays are ln b and ln bbar; shift to the internal unknowns
        y, yb = init.ln_b - prob.u, init.ln_bbar + prob.u
    else:
        y, yb = prob.base[0].copy(), prob.base[1].copy()
    twisted = phi != 0.0
    tol = config.twisted_tol if twisted else config.tol
    iters = 0
    method = "fixed-point"
    ok = False
    if not twisted:
        y, yb, iters, res, ok = _fixed_point(prob, y, yb, tol, config.max_iter, config.mixing)
        if not ok and not np.isfinite(res):
            y, yb = prob.base[0].copy(), prob.base[1].copy()
    if not ok:
        y, yb, nit, res = _newton(prob, y, yb, tol, config.newton_max_iter)
        iters += nit
        method = "newton-krylov"
    sol = NlieSolution(prob.grid, y + prob.u, yb - prob.u, float(beta), float(j_coupling),
                       float(phi), regime, config, iters, res, method)
    sol._problem = prob
    return sol


def ln_eigenvalue(x: float, sol: NlieSolution) -> complex:
    """ln Lambda(x) = -beta e0(x) + i phi + (K * ln B Bbar)(x)."""
    prob = getattr(sol, "_problem", None)
    if prob is None:
        prob = _Problem(sol.beta, sol.j_coupling, sol.phi, sol.regime, sol.config)
    return prob.ln_eigenvalue(float(x), sol.ln_b - prob.u, sol.ln_bbar + prob.u)


# --- observables -----------------------------------------------------------------

def _regime_of(delta, regime):
    return regime if regime is not None else Regime.from_delta(delta)


def free_energy(beta: float, j_coupling: float, delta: float | None = None,
                config: NlieConfig | None = None, regime: Regime | None = None,
                init: NlieSolution | None = None) -> tuple[ThermoPoint, NlieSolution]:
    """Thermodynamics at one temperature from the leading eigenvalue.

    With g(beta) = ln Lambda(0) + beta e0, the derivatives are taken in beta by
    central differences with relative step ``fd_step``: e = e0 - g', and the
    specific heat c = beta^2 g'' avoids the cancellation of differencing f.
    Returns the point and the central solution for warm starts.
    """
    config = config or NlieConfig()
    regime = _regime_of(delta, regime)
    e0 = ground_energy_density(0.0, regime)
    hb = config.fd_step * beta
    sol = solve(beta, j_coupling, 0.0, regime, config, init)
    g0 = ln_eigenvalue(0.0, sol).real + beta * e0
    gs = []
    iters = sol.iterations
    res = sol.residual
    for b in (beta - hb, beta + hb):
        s = solve(b, j_coupling, 0.0, regime, config, sol)
        gs.append(ln_eigenvalue(0.0, s).real + b * e0)
        iters += s.iterations
        res = max(res, s.residual)
    d1 = (gs[1] - gs[0]) / (2 * hb)
    d2 = (gs[1] - 2 * g0 + gs[0]) / hb**2
    lnl = g0 - beta * e0
    f = -lnl / beta
    e = e0 - d1
    point = ThermoPoint(T=1 / beta, beta=beta, delta=regime.delta, gamma=regime.gamma,
                        J=j_coupling, f=f, e=e, s=beta * (e - f), c=beta**2 * d2,
                        iterations=iters, residual=res)
    return point, sol


def fold_kappa(k: float) -> float:
    """Map an angle to [0, pi] using k ~ -k (the subleading pair is complex conjugate)."""
    k = float(np.mod(k, 2 * np.pi))
    return 2 * np.pi - k if k > np.pi else k


def twisted_ln_eigenvalue(beta: float, j_coupling: float, regime: Regime,
                          config: NlieConfig | None = None,
                          start: NlieSolution | None = None) -> tuple[complex, int]:
    """ln Lambda_1(0), the phi = pi/2 eigenvalue.

    At J = 0 the twisted equations become singular exactly at phi = pi/2 (the
    asymptotic value of B vanishes), so the eigenvalue is continued in phi
    from 0 and extrapolated by a cubic through the points pi/2 - phi_offsets.
    The same path is used at J != 0 for uniformity.
    """
    config = config or NlieConfig()
    offs = np.sort(np.asarray(config.phi_offsets, dtype=float))[::-1]
    phis = np.pi / 2 - offs
    path = list(np.linspace(0.0, phis[0], config.continuation_steps + 2)[1:-1])
    sol = start
    iters = 0
    for phi in path:
        sol = solve(beta, j_coupling, float(phi), regime, config, sol)
        iters += sol.iterations
    vals = []
    for phi in phis:
        sol = solve(beta, j_coupling, float(phi), regime, config, sol)
        iters += sol.iterations
        vals.append(ln_eigenvalue(0.0, sol))
    coef = np.polyfit(phis - np.pi / 2, np.array(vals), 3)
    return complex(coef[-1]), iters


def correlation(beta: float, j_coupling: float, delta: float | None = None,
                config: NlieConfig | None = None, regime: Regime | None = None,
                init: NlieSolution | None = None) -> CorrelationPoint:
    """Correlation length and oscillation wave-vector from ln(Lambda_1/Lambda_max) = -1/xi + i kappa."""
    config = config or NlieConfig()
    regime = _regime_of(delta, regime)
    sol0 = solve(beta, j_coupling, 0.0, regime, config, init)
    l0 = ln_eigenvalue(0.0, sol0)
    l1, it1 = twisted_ln_eigenvalue(beta, j_coupling, regime, config, sol0)
    d = l1 - l0
    xi_inv = -d.real
    kappa = fold_kappa(d.imag)
    return CorrelationPoint(T=1 / beta, beta=beta, delta=regime.delta, J=j_coupling,
                            xi_inv=xi_inv, beta_over_xi=beta * xi_inv, kappa=kappa,
                            kappa_over_pi=kappa / np.pi, iterations=sol0.iterations + it1,
                            ln_ratio=d)


def with_overrides(config: NlieConfig, **kw) -> NlieConfig:
    """Copy of ``config`` with the non-None keyword values replaced."""
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
