"""Dense operators for small systems.

Basis convention: a chain of L spins is indexed by an integer whose most
significant bit is site 0, and bit value 0 means spin up (sigma^z = +1).
This matches ``numpy.kron`` ordering with site 0 as the leftmost factor.

Builders return :class:`DenseOperator`.  The three-spin chain Hamiltonian
is also available in sparse form for the finite-size scan, which goes
beyond the dense limit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .errors import FitFailure, SizeTooLarge
from .weights import Regime, conjugate_entries, face_weight_table, vertex_weights

DENSE_LIMIT = 12

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1j], [1j, 0.0]])
SZ = np.diag([1.0, -1.0])
I2 = np.eye(2)


@dataclass(frozen=True)
class DenseOperator:
    matrix: np.ndarray
    labels: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def hermitian(self) -> bool:
        m = self.matrix
        return bool(np.abs(m - m.conj().T).max() < 1e-12)

    def export_mm(self, path, tol: float = 0.0) -> None:
        """Write nonzero entries as 'row col re im' lines (1-based indices)."""
        rows, cols = np.nonzero(np.abs(self.matrix) > tol)
        with open(path, "w") as fh:
            fh.write(f"% dim {self.dim} {self.labels}\n")
            fh.write(f"{self.dim} {self.dim} {rows.size}\n")
            for r, c in zip(rows, cols):
                v = self.matrix[r, c]
                fh.write(f"{r + 1} {c + 1} {v.real:.17g} {v.imag:.17g}\n")


@dataclass(frozen=True)
class ModelParams:
    delta: float
    j_coupling: float = 0.0
    gamma8v: float = 0.0
    phi: float = 0.0

    @property
    def regime(self) -> Regime:
        return Regime.from_delta(self.delta)


def _check_size(L: int, limit: int | None):
    limit = DENSE_LIMIT if limit is None else limit
    if L > limit:
        raise SizeTooLarge(f"L={L} exceeds dense limit {limit}")


def bits(L: int) -> np.ndarray:
    """(2^L, L) array of site occupations, 1 meaning spin down."""
    s = np.arange(2**L)
    return (s[:, None] >> (L - 1 - np.arange(L))) & 1


def site_op(L: int, ops: dict) -> np.ndarray:
    """Kronecker product with ops[i] on site i and identity elsewhere."""
    return reduce(np.kron, [ops.get(i, I2) for i in range(L)], np.ones((1, 1)))


# --- Hamiltonians -----------------------------------------------------------

def build_h_8v(L: int, delta: float, gamma8v: float, limit: int | None = None) -> DenseOperator:
    """sum_i (G+1) sx_i + (G-1) sz_{i-1} sx_i sz_{i+1} + Delta (G+1)(sz_{i-1} sz_{i+1} - 1)."""
    if L < 3:
        raise ValueError("three-spin Hamiltonian needs L >= 3")
    _check_size(L, limit)
    g = gamma8v
    eye = np.eye(2**L)
    H = np.zeros((2**L, 2**L))
    for i in range(L):
        l, r = (i - 1) % L, (i + 1) % L
        H += (g + 1) * site_op(L, {i: SX})
        if g != 1:
            H += (g - 1) * site_op(L, {l: SZ, i: SX, r: SZ})
        H += delta * (g + 1) * (site_op(L, {l: SZ, r: SZ}) - eye)
    return DenseOperator(H, {"L": L, "model": "8v", "delta": delta, "gamma8v": g})


def build_h_irf(L: int, delta: float, limit: int | None = None) -> DenseOperator:
    """sum_i sx_i - sz_{i-1} sx_i sz_{i+1} + Delta (sz_{i-1} sz_{i+1} - 1), periodic."""
    op = build_h_8v(L, delta, 0.0, limit)
    return DenseOperator(op.matrix, {"L": L, "model": "irf", "delta": delta})


def h_irf_sparse(L: int, delta: float) -> sp.csr_matrix:
    """Sparse real form of the three-spin Hamiltonian, for L beyond the dense limit."""
    if L < 3:
        raise ValueError("three-spin Hamiltonian needs L >= 3")
    n = 2**L
    s = np.arange(n)
    z = [1 - 2 * ((s >> (L - 1 - i)) & 1) for i in range(L)]
    diag = np.zeros(n)
    rows, cols, vals = [], [], []
    for i in range(L):
        zz = z[(i - 1) % L] * z[(i + 1) % L]
        diag += delta * (zz - 1)
        amp = 1.0 - zz
        keep = amp != 0
        rows.append((s ^ (1 << (L - 1 - i)))[keep])
        cols.append(s[keep])
        vals.append(amp[keep])
    off = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return (off + sp.diags(diag)).tocsr()


def _xxz_bond(delta):
    return np.kron(SX, SX) + np.kron(SY, SY).real + delta * (np.kron(SZ, SZ) - np.eye(4))


def build_h_xxz(L: int, delta: float, phi: float, limit: int | None = None) -> DenseOperator:
    """Twisted XXZ chain; the bond (L, 1) is conjugated by diag(exp(2i phi), 1) on site L."""
    if L < 2:
        raise ValueError("XXZ chain needs L >= 2")
    _check_size(L, limit)
    bond = _xxz_bond(delta)
    H = np.zeros((2**L, 2**L), dtype=complex)
    for i in range(L - 1):
        H += np.kron(np.kron(np.eye(2**i), bond), np.eye(2 ** (L - i - 2)))
    # boundary bond between site L-1 and site 0
    terms = [(SX, SX), (SY, SY), (SZ, SZ)]
    coef = [1.0, 1.0, delta]
    G = np.diag([np.exp(2j * phi), 1.0])
    Gi = np.diag([np.exp(-2j * phi), 1.0])
    hb = np.zeros_like(H)
    for (p, q), c in zip(terms, coef):
        hb += c * site_op(L, {L - 1: Gi @ p @ G, 0: q})
    hb -= delta * np.eye(2**L)
    H += hb
    return DenseOperator(H, {"L": L, "model": "xxz", "delta": delta, "phi": phi})


def xxz_sector(L: int, delta: float, phi: float, n_down: int) -> np.ndarray:
    """Dense XXZ block with a fixed number of down spins (dimension C(L, n))."""
    allstates = np.arange(2**L, dtype=np.int64)
    pop = np.array([bin(s).count("1") for s in range(2**L)])
    states = allstates[pop == n_down]
    m = states.size
    H = np.zeros((m, m), dtype=complex)
    diag = np.zeros(m)
    for i in range(L):
        j = (i + 1) % L
        bi = (states >> (L - 1 - i)) & 1
        bj = (states >> (L - 1 - j)) & 1
        diag += delta * (np.where(bi == bj, 1.0, -1.0) - 1)
        k = np.nonzero(bi != bj)[0]
        t = states[k] ^ ((1 << (L - 1 - i)) | (1 << (L - 1 - j)))
        amp = np.full(k.size, 2.0, dtype=complex)
        if j == 0:
            # raising site L-1 carries exp(-2i phi), lowering it exp(2i phi)
            amp *= np.where(bi[k] == 1, np.exp(-2j * phi), np.exp(2j * phi))
        H[np.searchsorted(states, t), k] += amp
    H[np.arange(m), np.arange(m)] += diag
    if np.abs(H.imag).max(initial=0.0) < 1e-14:
        return np.ascontiguousarray(H.real)
    return H


# --- symmetry operators -----------------------------------------------------

def build_charges(L: int, limit: int | None = None):
    """(Sigma^z, Pi^x, Pi^x on even sites, Pi^x on odd sites), sites 0-based."""
    _check_size(L, limit)
    sig = sum(site_op(L, {i: SZ, (i + 1) % L: SZ}) for i in range(L))
    pix = site_op(L, {i: SX for i in range(L)})
    pe = site_op(L, {i: SX for i in range(0, L, 2)})
    po = site_op(L, {i: SX for i in range(1, L, 2)})
    lab = {"L": L}
    return tuple(DenseOperator(m, dict(lab, name=n)) for m, n in
                 ((sig, "Sigma_z"), (pix, "Pi_x"), (pe, "Pi_x_even"), (po, "Pi_x_odd")))


def build_u_transform(L: int, limit: int | None = None) -> DenseOperator:
    """U = [[I, P], [P, -I]] / sqrt(2) with P = Pi^x on sites 1..L-1 and the block index on site 0."""
    if L < 2:
        raise ValueError("U needs L >= 2")
    _check_size(L, limit)
    P = site_op(L - 1, {i: SX for i in range(L - 1)})
    I = np.eye(2 ** (L - 1))
    U = np.block([[I, P], [P, -I]]) / np.sqrt(2.0)
    return DenseOperator(U, {"L": L, "name": "U"})


# --- transfer matrices ------------------------------------------------------

def _row_product(tables, L):
    """M[a, b] = prod_i tables[i][a_i, a_{i+1}, b_{i+1}, b_i] with periodic sites."""
    bs = bits(L)
    n = 2**L
    M = np.ones((n, n), dtype=complex)
    for i in range(L):
        j = (i + 1) % L
        t = tables[i]
        M *= t[bs[:, i][:, None], bs[:, j][:, None], bs[:, j][None, :], bs[:, i][None, :]]
    return M


def build_t_irf(lam, L: int, regime: Regime, conjugated: bool = False,
                limit: int | None = None) -> DenseOperator:
    """Row transfer matrix; rows index the lower heights, columns the upper ones.

    The conjugated variant uses the quarter-turn rotated weight
    Wbar(a,b,c,d) = W(b,c,d,a).
    """
    _check_size(L, limit)
    t = face_weight_table(lam, regime).entries
    if conjugated:
        t = conjugate_entries(t)
    M = _row_product([t] * L, L)
    return DenseOperator(M, {"L": L, "lambda": lam, "conjugated": conjugated,
                             "boundary": "periodic"})


def translation(L: int) -> np.ndarray:
    """Permutation matrix with M[a, b] = 1 when b_{i+1} = a_i."""
    bs = bits(L)
    n = 2**L
    shifted = np.roll(bs, 1, axis=1)
    idx = shifted @ (1 << (L - 1 - np.arange(L)))
    M = np.zeros((n, n))
    M[np.arange(n), idx] = 1.0
    return M


@dataclass(frozen=True)
class HamiltonianFit:
    alpha: float
    shift: float
    residual: float


def hamiltonian_from_transfer(L: int, delta: float, step: float = 1e-5,
                              conjugated: bool = False, tol: float = 1e-6) -> HamiltonianFit:
    """Fit T'(0) T(0)^{-1} = alpha H_IRF + c I.

    The derivative uses central differences at step h and h/2 combined by one
    Richardson step.
    """
    regime = Regime.from_delta(delta)

    def deriv(h):
        tp = build_t_irf(h, L, regime, conjugated).matrix
        tm = build_t_irf(-h, L, regime, conjugated).matrix
        return (tp - tm) / (2 * h)

    d = (4 * deriv(step / 2) - deriv(step)) / 3
    T0 = build_t_irf(0.0, L, regime, conjugated).matrix
    Hn = d @ np.linalg.inv(T0)
    H = build_h_irf(L, delta).matrix
    A = np.stack([H.ravel(), np.eye(H.shape[0]).ravel()], axis=1).astype(complex)
    coef, *_ = np.linalg.lstsq(A, Hn.ravel(), rcond=None)
    res = float(np.abs(A @ coef - Hn.ravel()).max())
    fit = HamiltonianFit(float(coef[0].real), float(coef[1].real), res)
    if res > tol:
        raise FitFailure(f"log-derivative fit residual {res:.3e} exceeds {tol}")
    return fit


def trotter_scale(regime: Regime) -> float:
    """Expected alpha in T'(0) T(0)^{-1} = alpha H: 1/(2 s(gamma))."""
    return float(1.0 / (2.0 * regime.sfun(regime.gamma)))


def build_qtm(x: float, N: int, beta: float, regime: Regime,
              limit: int | None = None) -> DenseOperator:
    """Face quantum transfer matrix at spectral parameter x.

    Columns alternate W(.|ix + lambda) and Wbar(.|-ix + lambda), lambda = -beta/N,
    starting with W on site 0.  beta here is the lattice inverse temperature:
    the Trotter limit reproduces exp(-beta (alpha H_IRF + c)).
    """
    if N % 2:
        raise ValueError("Trotter number must be even")
    _check_size(N, limit)
    lam = -beta / N
    t1 = face_weight_table(1j * x + lam, regime).entries
    t2 = conjugate_entries(face_weight_table(-1j * x + lam, regime).entries)
    M = _row_product([t1 if i % 2 == 0 else t2 for i in range(N)], N)
    return DenseOperator(M, {"N": N, "x": x, "beta": beta})


def reordering_traces(N: int, L: int, beta: float, regime: Regime) -> tuple[complex, complex]:
    """Both sides of Tr[(T Tbar)^{N/2}] = Tr[(T^QTM)^L] at lambda = -beta/N.

    The two traces sum the same classical lattice in row and column order.
    """
    lam = -beta / N
    T = build_t_irf(lam, L, regime).matrix
    Tb = build_t_irf(lam, L, regime, conjugated=True).matrix
    Q = build_qtm(0.0, N, beta, regime).matrix
    rows = np.trace(np.linalg.matrix_power(T @ Tb, N // 2))
    cols = np.trace(np.linalg.matrix_power(Q, L))
    return complex(rows), complex(cols)


# --- six-vertex operators ---------------------------------------------------

def r_matrix(z, regime: Regime) -> np.ndarray:
    w = vertex_weights(z, regime)
    return np.array([[w.a, 0, 0, 0], [0, w.b, w.c, 0], [0, w.c, w.b, 0], [0, 0, 0, w.a]],
                    dtype=complex)


def r_matrix_rotated(z, regime: Regime) -> np.ndarray:
    """R with a and b exchanged; the column factor of the six-vertex QTM on odd sites."""
    w = vertex_weights(z, regime)
    return np.array([[w.b, 0, 0, 0], [0, w.a, w.c, 0], [0, w.c, w.a, 0], [0, 0, 0, w.b]],
                    dtype=complex)


def _monodromy_trace(factors, twist, N, states):
    """Restriction of tr_A[G_A X_{N-1} ... X_0] to the listed basis states.

    factors[j] is a 4x4 matrix on (auxiliary, site j) with index order
    (aux_out, site_out), (aux_in, site_in).
    """
    D = 2**N
    m = len(states)
    out = np.zeros((D, m), dtype=complex)
    for alpha in range(2):
        psi = np.zeros((2, D, m), dtype=complex)
        psi[alpha, states, np.arange(m)] = 1.0
        for j, X in enumerate(factors):
            X4 = X.reshape(2, 2, 2, 2)
            p = psi.reshape(2, 2**j, 2, 2 ** (N - j - 1), m)
            psi = np.einsum("ABab,aibkc->AiBkc", X4, p).reshape(2, D, m)
        out += twist[alpha] * psi[alpha]
    return out


def six_vertex_qtm(x: float, N: int, beta: float, regime: Regime, phi: float = 0.0,
                   j_coupling: float = 0.0, n_down: int | None = None,
                   limit: int | None = None) -> np.ndarray:
    """Twisted six-vertex quantum transfer matrix, optionally restricted to n_down.

    Factors are R(ix + lambda) on even sites and the rotated R(-ix + lambda)
    on odd sites, lambda = -beta/N, with auxiliary twist
    diag(exp(-beta J + 2i phi), exp(beta J)).  The number of down spins is
    conserved, so the restriction is an exact block.
    """
    if N % 2:
        raise ValueError("Trotter number must be even")
    _check_size(N, limit)
    lam = -beta / N
    factors = [r_matrix(1j * x + lam, regime) if j % 2 == 0 else
               r_matrix_rotated(-1j * x + lam, regime) for j in range(N)]
    twist = (np.exp(-beta * j_coupling + 2j * phi), np.exp(beta * j_coupling))
    if n_down is None:
        states = np.arange(2**N)
    else:
        states = np.array([s for s in range(2**N) if bin(s).count("1") == n_down], dtype=int)
    cols = _monodromy_trace(factors, twist, N, states)
    return cols[states, :]


def six_vertex_row_tm(lam, L: int, regime: Regime, phi: float,
                      limit: int | None = None) -> np.ndarray:
    """T_6v(lambda; phi) = tr_A[G_A R_{A,L-1}(lambda) ... R_{A,0}(lambda)], G = diag(exp(2i phi), 1)."""
    _check_size(L, limit)
    R = r_matrix(lam, regime)
    states = np.arange(2**L)
    return _monodromy_trace([R] * L, (np.exp(2j * phi), 1.0), L, states)
