"""Algebraic Bethe ansatz expressions for the quantum transfer matrix.

With weights normalised to a = 1 and b(z) = s(z)/s(z + gamma), an eigenvalue
in the sector with n down spins is Lambda(x) = lambda_1(x) + lambda_2(x),

    lambda_1(x) = e^{-beta J + 2i phi} b(-ix + lam)^{N/2} prod_j 1/b(i x_j - i x)
    lambda_2(x) = e^{beta J}          b( ix + lam)^{N/2} prod_j 1/b(i x - i x_j)

with lam = -beta/N, and the roots x_j solve lambda_1(x_j)/lambda_2(x_j) = -1.
``beta`` is the lattice inverse temperature, the same argument taken by
``operators.six_vertex_qtm``.  Small root systems are solved by damped Newton
iteration, seeded at the free-fermion point and continued in Delta.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceFailure, DivisionByZeroAtRoot, SingularSpectralParameter
from .weights import Regime

_TINY = 1e-300


@dataclass(frozen=True)
class BetheState:
    roots: tuple
    N: int
    beta: float
    j_coupling: float = 0.0
    phi: float = 0.0
    residual: float = field(default=np.nan, compare=False)
    iterations: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))
        if len(self.roots) % 2:
            raise ValueError("the number of roots must be even")
        if self.N % 2 or self.N < 2:
            raise ValueError("Trotter number must be a positive even integer")

    @property
    def n(self) -> int:
        return len(self.roots)

    @property
    def lam(self) -> float:
        return -self.beta / self.N


def _b(z, regime: Regime):
    den = regime.sfun(z + regime.gamma)
    if np.any(np.abs(den) < 1e-14):
        raise SingularSpectralParameter(f"b(z) has a pole at z={z}")
    return regime.sfun(z) / den


def _s(z, regime: Regime):
    """b(z)/b(-z) = -s(gamma - z)/s(gamma + z), regular at z = 0."""
    g = regime.gamma
    return -regime.sfun(g - z) / regime.sfun(g + z)


def lambda_parts(x, state: BetheState, regime: Regime) -> tuple[complex, complex]:
    """The two terms of the eigenvalue at spectral parameter x."""
    lam, h = state.lam, state.N // 2
    r = np.asarray(state.roots, dtype=complex)
    p1 = p2 = 1.0
    if r.size:
        f1, f2 = _b(1j * (r - x), regime), _b(1j * (x - r), regime)
        if np.any(np.abs(f1) < _TINY) or np.any(np.abs(f2) < _TINY):
            raise DivisionByZeroAtRoot(f"x={x} coincides with a Bethe root")
        p1, p2 = np.prod(1.0 / f1), np.prod(1.0 / f2)
    l1 = np.exp(-state.beta * state.j_coupling + 2j * state.phi) * _b(-1j * x + lam, regime) ** h * p1
    l2 = np.exp(state.beta * state.j_coupling) * _b(1j * x + lam, regime) ** h * p2
    return complex(l1), complex(l2)


def eigenvalue(x, state: BetheState, regime: Regime) -> complex:
    return complex(sum(lambda_parts(x, state, regime)))


def _ratios(roots, N, beta, J, phi, regime):
    """lambda_1(x_j)/lambda_2(x_j) with the coincident-root factor taken as its limit -1."""
    r = np.asarray(roots, dtype=complex)
    lam = -beta / N
    num = _b(-1j * r + lam, regime)
    den = _b(1j * r + lam, regime)
    if np.any(np.abs(den) < _TINY):
        raise DivisionByZeroAtRoot("lambda_2 vanishes at a root")
    pair = _s(1j * (r[:, None] - r[None, :]), regime)
    return np.exp(-2 * beta * J + 2j * phi) * (num / den) ** (N // 2) * np.prod(pair, axis=1)


def bethe_residual(state: BetheState, regime: Regime) -> float:
    """max_j |lambda_1(x_j)/lambda_2(x_j) + 1|; zero when there are no roots."""
    if state.n == 0:
        return 0.0
    r = _ratios(state.roots, state.N, state.beta, state.j_coupling, state.phi, regime)
    return float(np.abs(r + 1).max())


def _log_eqs(z, N, beta, J, phi, regime):
    # log(-ratio) on the principal branch, unwound to the nearest multiple of 2 pi i
    lg = np.log(-_ratios(z, N, beta, J, phi, regime))
    return lg - 2j * np.pi * np.round(lg.imag / (2 * np.pi))


def solve_bethe_newton(n: int, N: int, beta: float, j_coupling: float, phi: float,
                       regime: Regime, seed, tol: float = 1e-12,
                       max_iter: int = 200) -> BetheState:
    """Damped Newton iteration on the logarithmic Bethe equations.

    The equations are holomorphic in the roots, so the Jacobian is built from
    complex finite differences.  A step is halved until the residual norm
    decreases.  Raises ConvergenceFailure after ``max_iter`` iterations.
    """
    seed = np.asarray(seed, dtype=complex)
    if seed.size != n:
        raise ValueError(f"seed has {seed.size} roots, expected {n}")
    state = BetheState(tuple(seed), N, beta, j_coupling, phi)
    if n == 0:
        return replace(state, residual=0.0)
    z = seed.copy()
    f = lambda v: _log_eqs(v, N, beta, j_coupling, phi, regime)
    fz = f(z)
    for it in range(1, max_iter + 1):
        res = bethe_residual(replace(state, roots=tuple(z)), regime)
        if res < tol:
            return BetheState(tuple(z), N, beta, j_coupling, phi, res, it - 1)
        jac = np.empty((n, n), dtype=complex)
        for k in range(n):
            h = 1e-7 * max(1.0, abs(z[k]))
            dz = np.zeros(n, dtype=complex)
            dz[k] = h
            jac[:, k] = (f(z + dz) - f(z - dz)) / (2 * h)
        try:
            step = np.linalg.solve(jac, -fz)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure("singular Bethe Jacobian") from exc
        t = 1.0
        norm0 = np.linalg.norm(fz)
        while True:
            try:
                cand = z + t * step
                fc = f(cand)
                ok = np.all(np.isfinite(fc)) and np.linalg.norm(fc) < norm0
            except (SingularSpectralParameter, DivisionByZeroAtRoot):
                ok = False
            if ok or t < 1e-6:
                break
            t *= 0.5
        if not ok:
            raise ConvergenceFailure(f"line search stalled at iteration {it}")
        z, fz = cand, fc
    res = bethe_residual(replace(state, roots=tuple(z)), regime)
    if res < tol:
        return BetheState(tuple(z), N, beta, j_coupling, phi, res, max_iter)
    raise ConvergenceFailure(f"Bethe residual {res:.2e} after {max_iter} iterations")


def free_fermion_seeds(N: int, beta: float, j_coupling: float = 0.0,
                       phi: float = 0.0) -> list[complex]:
    """All one-particle roots at gamma = pi/2, where the equations decouple.

    There b(z) = tan z and the two-body factor is -1, so with u = i x each
    root solves r^{N/2} = -exp(2 beta J - 2i phi), r = tan(lam - u)/tan(lam + u),
    equivalently sin 2u = sin 2lam (1 - r)/(1 + r).  Each r gives the pair u
    and pi/2 - u.  A branch with r = -1 sends the roots to infinity and is
    skipped.
    """
    lam = -beta / N
    h = N // 2
    rhs = -np.exp(2 * beta * j_coupling - 2j * phi)
    base = rhs ** (1.0 / h)
    out = []
    for m in range(h):
        r = base * np.exp(2j * np.pi * m / h)
        if abs(1 + r) < 1e-12:
            continue
        w = np.sin(2 * lam) * (1 - r) / (1 + r)
        u = 0.5 * np.arcsin(complex(w))
        for uu in (u, np.pi / 2 - u):
            out.append(complex(-1j * uu))
    return out


def continue_in_delta(state: BetheState, deltas, regime_start: Regime | None = None,
                      **newton_kw) -> list[tuple[float, BetheState]]:
    """Follow a converged state along a path of anisotropies, reusing roots as seeds."""
    out = []
    roots = state.roots
    for d in deltas:
        reg = Regime.from_delta(float(d))
        st = solve_bethe_newton(len(roots), state.N, state.beta, state.j_coupling,
                                state.phi, reg, roots, **newton_kw)
        out.append((float(d), st))
        roots = st.roots
    return out
