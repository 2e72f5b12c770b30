"""Six-vertex Boltzmann weights and the face (IRF) weight table.

Heights live on the corners of a square face and take values +1 or -1.
Internally a height is stored as an index, 0 for +1 and 1 for -1, so a
face table is a complex array of shape (2, 2, 2, 2) indexed as
``table[a, b, c, d]``.

The corner roles follow the row transfer matrix convention used in
``operators``: a face at column i of a row has bottom-left a_i, bottom-right
a_{i+1}, top-right b_{i+1} and top-left b_i, so the corners (a, b, c, d) run
anticlockwise from the bottom-left.  The weight class is fixed by two
questions, whether a == c and whether b == d:

    a == c, b == d  ->  a(lambda)
    a == c, b != d  ->  c(lambda)
    a != c, b != d  ->  b(lambda)
    a != c, b == d  ->  d(lambda)   (zero in the six-vertex case)

This assignment passes the face Yang-Baxter equation, unitarity and the
initial condition in both regimes, which the ``check_*`` functions verify.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SingularSpectralParameter

HEIGHTS = (1, -1)
_SINGULAR_TOL = 1e-14


class RegimeKind(str, Enum):
    CRITICAL = "critical"
    MASSIVE = "massive"


@dataclass(frozen=True)
class Regime:
    """Crossing parameter together with the regime it belongs to.

    Critical means Delta = cos(gamma) with 0 < gamma < pi, massive means
    Delta = cosh(gamma) with gamma > 0.
    """

    kind: RegimeKind
    gamma: float

    def __post_init__(self):
        kind = RegimeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        g = float(self.gamma)
        if kind is RegimeKind.CRITICAL and not (0.0 < g < np.pi):
            raise ValueError(f"critical regime needs 0 < gamma < pi, got {g}")
        if kind is RegimeKind.MASSIVE and not g > 0.0:
            raise ValueError(f"massive regime needs gamma > 0, got {g}")
        object.__setattr__(self, "gamma", g)

    @classmethod
    def critical(cls, gamma: float) -> "Regime":
        return cls(RegimeKind.CRITICAL, gamma)

    @classmethod
    def massive(cls, gamma: float) -> "Regime":
        return cls(RegimeKind.MASSIVE, gamma)

    @classmethod
    def from_delta(cls, delta: float) -> "Regime":
        """Map an anisotropy to its regime.

        |Delta| <= 1 is critical (Delta = 1 itself has gamma = 0 and is
        rejected by the critical constructor), Delta > 1 is massive and
        Delta < -1 is not supported.
        """
        delta = float(delta)
        if delta < -1.0:
            raise ValueError("Delta < -1 is not supported")
        if delta <= 1.0:
            return cls.critical(float(np.arccos(delta)))
        return cls.massive(float(np.arccosh(delta)))

    @property
    def is_critical(self) -> bool:
        return self.kind is RegimeKind.CRITICAL

    @property
    def delta(self) -> float:
        return float(np.cos(self.gamma) if self.is_critical else np.cosh(self.gamma))

    def sfun(self, z):
        """sin in the critical regime, sinh in the massive one."""
        return np.sin(z) if self.is_critical else np.sinh(z)


@dataclass(frozen=True)
class VertexWeights:
    a: complex
    b: complex
    c: complex
    d: complex = 0.0

    def delta(self) -> complex:
        """(a^2 + b^2 - c^2) / (2ab); equals Delta for the six-vertex weights."""
        return (self.a**2 + self.b**2 - self.c**2) / (2 * self.a * self.b)


def vertex_weights(lam, regime: Regime) -> VertexWeights:
    """Six-vertex weights normalised to a = 1.

    b = s(lam)/s(lam + gamma), c = s(gamma)/s(lam + gamma) with s = sin or
    sinh depending on the regime.  Complex lam is accepted.
    """
    s = regime.sfun
    den = s(lam + regime.gamma)
    if np.abs(den) < _SINGULAR_TOL:
        raise SingularSpectralParameter(f"s(lambda + gamma) vanishes at lambda={lam}")
    return VertexWeights(1.0, s(lam) / den, s(regime.gamma) / den, 0.0)


# class label per corner pattern: 0 -> a, 1 -> b, 2 -> c, 3 -> d
def _class_of(a, b, c, d):
    if a == c:
        return 0 if b == d else 2
    return 1 if b != d else 3


CLASS_INDEX = np.zeros((2, 2, 2, 2), dtype=int)
for _idx in itertools.product((0, 1), repeat=4):
    CLASS_INDEX[_idx] = _class_of(*_idx)


@dataclass(frozen=True)
class FaceWeightTable:
    """The 16 face weights at one spectral parameter."""

    lam: complex
    entries: np.ndarray  # shape (2, 2, 2, 2), index 0 <-> height +1

    def weight(self, a: int, b: int, c: int, d: int) -> complex:
        """Weight for corner heights given as +1/-1."""
        idx = tuple(0 if h == 1 else 1 for h in (a, b, c, d))
        return self.entries[idx]

    def class_counts(self) -> tuple[int, int, int, int]:
        return tuple(int(np.sum(CLASS_INDEX == k)) for k in range(4))

    def rotated(self) -> "FaceWeightTable":
        """Quarter-turn rotation Wbar(a,b,c,d) = W(b,c,d,a)."""
        return FaceWeightTable(self.lam, conjugate_entries(self.entries))


def conjugate_entries(t: np.ndarray) -> np.ndarray:
    """Entries of the rotated table used by the conjugated transfer matrix."""
    return np.transpose(t, (3, 0, 1, 2))


def face_weight_table(lam, regime: Regime, eight_vertex_d=None) -> FaceWeightTable:
    w = vertex_weights(lam, regime)
    d = 0.0 if eight_vertex_d is None else eight_vertex_d
    values = np.array([w.a, w.b, w.c, d], dtype=complex)
    return FaceWeightTable(complex(lam), values[CLASS_INDEX])


def _tables(regime, *lams):
    return [face_weight_table(l, regime).entries for l in lams]


def check_yang_baxter(lam, mu, regime: Regime) -> float:
    """Max residual of the face Yang-Baxter equation over the six outer heights.

    The identity checked is
        sum_i W(a,b,i,f|l-m) W(i,d,e,f|m) W(b,c,d,i|l)
      = sum_i W(a,i,e,f|l) W(b,c,i,a|m) W(i,c,d,e|l-m).
    """
    u, v, w = _tables(regime, lam - mu, mu, lam)
    lhs = np.einsum("abif,idef,bcdi->abcdef", u, v, w)
    rhs = np.einsum("aief,bcia,icde->abcdef", w, v, u)
    return float(np.abs(lhs - rhs).max())


def check_unitarity(lam, regime: Regime) -> tuple[float, complex]:
    """Residual of sum_i W(a,b,i,d|l) W(i,b,c,d|-l) = rho(l) rho(-l) delta_ac.

    Returns the max deviation and the fitted scalar rho(l) rho(-l).  The
    scalar is read off the a = c entries and the residual includes its
    spread across the outer heights.
    """
    p, m = _tables(regime, lam, -lam)
    prod = np.einsum("abid,ibcd->abcd", p, m)
    diag = np.array([prod[a, b, a, d] for a, b, d in itertools.product((0, 1), repeat=3)])
    rho2 = complex(diag.mean())
    target = np.zeros_like(prod)
    for a, b, d in itertools.product((0, 1), repeat=3):
        target[a, b, a, d] = rho2
    return float(np.abs(prod - target).max()), rho2


def check_initial_condition(regime: Regime) -> float:
    """max |W(a,b,c,d|0) - rho(0) delta_ac| with rho(0) = c(0) = 1."""
    t = face_weight_table(0.0, regime).entries
    rho0 = vertex_weights(0.0, regime).c
    target = np.zeros_like(t)
    for a, b, d in itertools.product((0, 1), repeat=3):
        target[a, b, a, d] = rho0
    return float(np.abs(t - target).max())
