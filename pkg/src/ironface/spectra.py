"""Exact-diagonalisation analyses built on the dense operators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp
from scipy.sparse.linalg import eigsh

from .errors import DegeneracyAmbiguity, FitFailure, MappingMismatch
from .operators import (DenseOperator, build_h_irf, build_h_xxz, build_qtm, build_t_irf,
                        h_irf_sparse, reordering_traces, six_vertex_row_tm, xxz_sector)
from .operators import hamiltonian_from_transfer
from .weights import Regime


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    sector_labels: dict = field(default_factory=dict)
    eigenvectors: np.ndarray | None = None


def _sort_desc(ev):
    return np.argsort(-np.real(ev), kind="stable")


def eigen_decompose(op, vectors: bool = False) -> Spectrum:
    """Full spectrum sorted by real part, descending.

    Accepts a DenseOperator or a plain array; the Hermitian solver is used when
    the operator is Hermitian to 1e-12.
    """
    M = op.matrix if isinstance(op, DenseOperator) else np.asarray(op)
    herm = np.abs(M - M.conj().T).max() < 1e-12
    if herm:
        if vectors:
            w, v = np.linalg.eigh(M)
        else:
            w, v = np.linalg.eigvalsh(M), None
    else:
        if vectors:
            w, v = np.linalg.eig(M)
        else:
            w, v = np.linalg.eigvals(M), None
    order = _sort_desc(w)
    return Spectrum(w[order], {}, None if v is None else v[:, order])


def parity_mask(L: int, even: bool = True) -> np.ndarray:
    """States with an even (or odd) number of down spins."""
    n = np.array([bin(s).count("1") for s in range(2**L)])
    return (n % 2 == 0) if even else (n % 2 == 1)


def match_multisets(a, b) -> float:
    """Max deviation after sort-then-pair on (real, imag)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        return np.inf
    key = lambda z: np.lexsort((np.round(z.imag, 8), np.round(z.real, 8)))
    return float(np.abs(a[key(a)] - b[key(b)]).max())


@dataclass
class MappingReport:
    max_mismatch: float
    transfer_mismatch: float
    per_sector_counts: dict


def verify_vertex_irf_map(L: int, delta: float, lam=None, tol: float = 1e-8,
                          rng=None) -> MappingReport:
    """Compare the three-spin chain with the even sectors of two twisted XXZ chains.

    The Hamiltonian check compares full spectra.  The transfer-matrix check
    compares T_IRF(lambda) with the even sectors of T_6v(lambda; 0) and
    T_6v(lambda; pi/2) at one spectral parameter, random unless given.
    """
    if L % 2:
        raise ValueError("mapping check needs even L")
    regime = Regime.from_delta(delta)
    even = parity_mask(L)
    hirf = np.linalg.eigvalsh(build_h_irf(L, delta).matrix)
    parts, counts = [], {}
    for phi, name in ((0.0, "phi=0"), (np.pi / 2, "phi=pi/2")):
        H = build_h_xxz(L, delta, phi).matrix[np.ix_(even, even)]
        w = np.linalg.eigvalsh(H)
        parts.append(w)
        counts[name] = int(w.size)
    union = np.concatenate(parts)
    mism = float(np.abs(np.sort(hirf) - np.sort(union)).max()) if union.size == hirf.size else np.inf

    if lam is None:
        rng = np.random.default_rng(rng)
        lam = complex(rng.uniform(0.05, 0.5), rng.uniform(-0.2, 0.2))
    tirf = np.linalg.eigvals(build_t_irf(lam, L, regime).matrix)
    tparts = [np.linalg.eigvals(six_vertex_row_tm(lam, L, regime, phi)[np.ix_(even, even)])
              for phi in (0.0, np.pi / 2)]
    tmism = _nearest_mismatch(tirf, np.concatenate(tparts))
    report = MappingReport(mism, tmism, counts)
    if max(mism, tmism) > tol:
        raise MappingMismatch(f"spectral mapping deviates by {max(mism, tmism):.3e}")
    return report


def _nearest_mismatch(a, b):
    """Symmetric nearest-neighbour distance; robust to near-degenerate complex clusters."""
    if a.size != b.size:
        return np.inf
    d1 = np.abs(a[:, None] - b[None, :]).min(axis=1).max()
    d2 = np.abs(b[:, None] - a[None, :]).min(axis=1).max()
    return float(max(d1, d2))


# --- QTM form factors -------------------------------------------------------

@dataclass
class FormFactorReport:
    lambda_max: complex
    subdominant_pair: tuple
    formfactors: tuple
    formfactor_nonzero: bool
    is_conjugate_pair: bool
    diagonal_formfactor: complex


def _clusters(ev, tol):
    order = np.argsort(-np.abs(ev), kind="stable")
    groups = []
    for i in order:
        for g in groups:
            if abs(ev[i] - ev[g[0]]) < tol * max(1.0, abs(ev[g[0]])):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def qtm_formfactor_scan(N: int, beta: float, delta: float, site: int = 0,
                        ff_tol: float = 1e-10) -> FormFactorReport:
    """Leading sigma^z form factors of the face QTM at x = 0.

    Form factors are summed over clusters of degenerate eigenvalues, which makes
    them independent of the eigenvector basis chosen inside a cluster.
    """
    regime = Regime.from_delta(delta)
    Q = build_qtm(0.0, N, beta, regime).matrix
    ev, K = np.linalg.eig(Q)
    Kinv = np.linalg.inv(K)
    sz = np.ones(2**N)
    sz[((np.arange(2**N) >> (N - 1 - site)) & 1) == 1] = -1.0
    S = Kinv @ (sz[:, None] * K)
    groups = _clusters(ev, 1e-9)
    imax = groups[0]
    if len(imax) > 1:
        raise DegeneracyAmbiguity("leading QTM eigenvalue is degenerate")
    m = imax[0]
    weights = []
    for g in groups[1:]:
        ff = sum(S[m, r] * S[r, m] for r in g)
        weights.append((g, ff))
    live = [(g, ff) for g, ff in weights if abs(ff) > ff_tol]
    if len(live) < 2:
        raise DegeneracyAmbiguity("fewer than two subleading states with nonzero form factor")
    (g1, f1), (g2, f2) = live[0], live[1]
    l1, l2 = ev[g1[0]], ev[g2[0]]
    if len(live) > 2 and abs(abs(ev[live[2][0][0]]) - abs(l1)) < 1e-12 * abs(l1):
        raise DegeneracyAmbiguity("more than two subleading states share the leading modulus")
    conj = bool(abs(l1 - np.conj(l2)) < 1e-9 * abs(l1) and abs(l1.imag) > 1e-12)
    return FormFactorReport(ev[m], (l1, l2), (f1, f2), True, conj, S[m, m] * S[m, m])


# --- Trotter limit --------------------------------------------------------------

def trotter_deviation(Ns, L: int, beta: float, delta: float) -> list[float]:
    """|ln Z_QTM(N) - ln Tr exp(-beta (alpha H_IRF + c))| for each Trotter number.

    beta is the lattice inverse temperature; alpha and c come from the
    log-derivative fit, so the target carries the same normalisation as the
    lattice.  Z_QTM(N) = Tr[(T^QTM)^L].
    """
    regime = Regime.from_delta(delta)
    fit = hamiltonian_from_transfer(L, delta)
    H = build_h_irf(L, delta).matrix
    w = np.linalg.eigvalsh(fit.alpha * H + fit.shift * np.eye(H.shape[0]))
    exact = logsumexp(-beta * w)
    out = []
    for N in Ns:
        _, z = reordering_traces(int(N), L, beta, regime)
        out.append(float(abs(np.log(z).real - exact)))
    return out


# --- free energies by exact diagonalisation ----------------------------------

def xxz_free_energy_ed(L: int, delta: float, T: float, phi: float = 0.0) -> float:
    """-T ln Tr exp(-H_XXZ / T) / L from magnetisation-resolved diagonalisation.

    Without twist the sectors n and L - n are related by a global spin flip,
    so only n <= L/2 is diagonalised.
    """
    logs = []
    flip_symmetric = phi == 0.0
    for n in range(L + 1):
        if flip_symmetric and n > L // 2:
            logs.append(logs[L - n])
            continue
        w = np.linalg.eigvalsh(xxz_sector(L, delta, phi, n))
        logs.append(logsumexp(-w / T))
    return float(-T * logsumexp(logs) / L)


# --- finite-size scaling ----------------------------------------------------

@dataclass
class FssResult:
    sizes: list
    ground_energies: list
    gaps: list
    e_inf: float
    c_estimate: float | None
    h_estimates: list
    velocity: float
    nu_plus: list | None = None


def low_levels(L: int, delta: float, k: int = 6) -> np.ndarray:
    """Lowest k levels of the three-spin chain (sparse Lanczos)."""
    H = h_irf_sparse(L, delta)
    w = eigsh(H, k=k, which="SA", return_eigenvectors=False, tol=1e-12)
    return np.sort(w)


def finite_size_scan(sizes, delta: float, degeneracy_tol: float = 1e-7) -> FssResult:
    """Conformal data from the lowest levels of the three-spin chain.

    The ground energy per site is fitted to e_inf + (A + B (-1)^{L/2}) / L^2.
    The alternating term absorbs the L mod 4 change of the lowest level.  The
    central charge comes from the L = 0 mod 4 branch, c = -6 (A + B) / (pi v)
    with v = 2 pi sin(gamma)/gamma.  Each size also gives h = L gap / (4 pi v)
    from the first nonzero gap, with h = h_+ = h_- for the leading excitation.
    """
    sizes = [int(L) for L in sizes]
    regime = Regime.from_delta(delta)
    if not regime.is_critical:
        raise ValueError("finite-size scan is defined for the critical regime")
    g = regime.gamma
    v = 2 * np.pi * np.sin(g) / g
    e0, gaps = [], []
    for L in sizes:
        w = low_levels(L, delta)
        e0.append(float(w[0]))
        above = w[w > w[0] + degeneracy_tol]
        gaps.append(float(above[0] - w[0]))
    Ls = np.array(sizes, dtype=float)
    E = np.array(e0) / Ls
    if len(sizes) >= 3:
        alt = np.where(Ls % 4 == 0, 1.0, -1.0)
        cols = [np.ones_like(Ls), Ls**-2]
        if len(set(alt)) > 1 and len(sizes) >= 3:
            cols.append(alt * Ls**-2)
        A = np.vstack(cols).T
        coef, *_ = np.linalg.lstsq(A, E, rcond=None)
        a_tot = coef[1] + (coef[2] if len(cols) == 3 else 0.0)
        c_est = float(-6 * a_tot / (np.pi * v))
        e_inf = float(coef[0])
    else:
        c_est, e_inf = None, float(E[-1])
    h = [float(L * gp / (4 * np.pi * v)) for L, gp in zip(sizes, gaps)]
    if any(not np.isfinite(x) for x in h):
        raise FitFailure("non-finite gap estimate")
    return FssResult(sizes, e0, gaps, e_inf, c_est, h, float(v))
