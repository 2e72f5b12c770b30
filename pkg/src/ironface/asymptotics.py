"""Closed-form low-temperature and conformal predictions.

These serve as independent checks of the integral-equation numerics.  The
leading low-temperature form of the eigenvalue is

    ln Lambda(x) + beta e0(x) = i phi + (2 cosh(pi x/gamma)/beta) (gamma/sin gamma)
                                 [1/24 + ((beta J - i phi)/pi)^2 / (4 (1 - gamma/pi))]

from which the correlation length, the wave-vector and the specific heat
slope follow.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure
from .nlie import ground_energy_density
from .weights import Regime


class OddMagneticSector(UserWarning):
    """M is odd, which no even-length chain realises."""


def _check_gamma(gamma):
    if not 0.0 < gamma < np.pi:
        raise ValueError(f"gamma must lie in (0, pi), got {gamma}")


def velocity(gamma: float) -> float:
    """Sound velocity v = 2 pi sin(gamma)/gamma."""
    _check_gamma(gamma)
    return float(2 * np.pi * np.sin(gamma) / gamma)


@dataclass(frozen=True)
class ConformalData:
    central_charge: float
    velocity: float
    h_plus: float
    h_minus: float

    def __post_init__(self):
        if self.h_plus < 0 or self.h_minus < 0:
            raise ValueError("conformal weights must be non-negative")
        if self.velocity <= 0:
            raise ValueError("velocity must be positive")


def exponent_h(M: int, E: int, phi: float, gamma: float) -> tuple[float, float]:
    """h_pm = [M (1 - gamma/pi) +- (E + phi/pi)]^2 / (4 (1 - gamma/pi))."""
    _check_gamma(gamma)
    if M % 2:
        warnings.warn(f"M={M} is odd; even chains only realise even M", OddMagneticSector,
                      stacklevel=2)
    r = 1 - gamma / np.pi
    hp = (M * r + (E + phi / np.pi)) ** 2 / (4 * r)
    hm = (M * r - (E + phi / np.pi)) ** 2 / (4 * r)
    return float(hp), float(hm)


def conformal_data(gamma: float) -> ConformalData:
    """c = 1 with the weights of the leading sigma^z excitation (M = 0, E = 0, phi = pi/2)."""
    hp, hm = exponent_h(0, 0, np.pi / 2, gamma)
    return ConformalData(1.0, velocity(gamma), hp, hm)


def lowT_ln_lambda(x: float, beta: float, j_coupling: float, phi: float, gamma: float) -> complex:
    """Leading low-temperature form of ln Lambda(x) in the critical regime."""
    _check_gamma(gamma)
    if beta <= 0:
        raise ValueError("beta must be positive")
    e0 = ground_energy_density(x, Regime.critical(gamma))
    q = (beta * j_coupling - 1j * phi) / np.pi
    bracket = 1 / 24 + q**2 / (4 * (1 - gamma / np.pi))
    corr = 2 * np.cosh(np.pi * x / gamma) / beta * (gamma / np.sin(gamma)) * bracket
    return complex(-beta * e0 + 1j * phi + corr)


def xi_inverse_limit(gamma: float) -> float:
    """lim beta/xi as T -> 0 at J = 0: (gamma/sin gamma) / (8 (1 - gamma/pi))."""
    _check_gamma(gamma)
    return float(gamma / np.sin(gamma) / (8 * (1 - gamma / np.pi)))


def kappa_lowT(gamma: float, j_coupling: float) -> float:
    """pi/2 + J (gamma/sin gamma) / (2 (pi - gamma)), the quoted wave-vector formula."""
    _check_gamma(gamma)
    return float(np.pi / 2 + j_coupling / (2 * (np.pi - gamma)) * (gamma / np.sin(gamma)))


def kappa_from_lowT(gamma: float, j_coupling: float, beta: float = 1.0) -> float:
    """Im ln(Lambda_1/Lambda_max) of the low-temperature form, which is beta independent.

    Gives pi/2 - J (gamma/sin gamma) / (2 (pi - gamma)); the J term has the
    opposite sign to ``kappa_lowT``.
    """
    d = (lowT_ln_lambda(0.0, beta, j_coupling, np.pi / 2, gamma)
         - lowT_ln_lambda(0.0, beta, j_coupling, 0.0, gamma))
    return float(d.imag)


def specific_heat_slope(gamma: float) -> float:
    """lim c/T as T -> 0: (gamma/sin gamma)/6, i.e. pi c_conf / (3 v) with c_conf = 1."""
    _check_gamma(gamma)
    return float(gamma / np.sin(gamma) / 6)


def xxz_reference(gamma: float) -> tuple[float, float]:
    """(kappa, lim beta/xi) of the periodic XXZ chain for comparison."""
    _check_gamma(gamma)
    return float(np.pi), float(gamma / np.sin(gamma) / (2 * (1 - gamma / np.pi)))


def xx_free_energy(T: float) -> float:
    """Free energy per site of the Delta = 0 chain from Jordan-Wigner fermions.

    f = -(T/2pi) int ln(1 + exp(-4 cos(k)/T)) dk over the Brillouin zone,
    in the normalisation of the package Hamiltonians (e0 = -4/pi).
    """
    if T <= 0:
        raise ValueError("temperature must be positive")
    beta = 1.0 / T
    f = lambda k: np.logaddexp(0.0, -4 * beta * np.cos(k))
    # the Fermi points at +-pi/2 are the only non-smooth spots at low T
    pts = [-np.pi / 2, np.pi / 2]
    val, err = integrate.quad(f, -np.pi, np.pi, points=pts, limit=400, epsabs=1e-13, epsrel=1e-13)
    if err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureFailure(f"free-fermion quadrature error {err:.2e}")
    return float(-T * val / (2 * np.pi))
