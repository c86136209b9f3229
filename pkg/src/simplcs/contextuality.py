"""Simplicial distributions and contextuality certification.

Deterministic distributions are enumerated exactly (kernel of the additive
edge condition over Z_d); the noncontextuality decision is an exact-rational
LP feasibility problem solved by phase-1 simplex with Bland's rule, so every
verdict carries a machine-checkable certificate: a convex decomposition, or a
Farkas vector against the marginal constraints.

The quantum side (commuting d-torsion unitaries, projective measurements,
density operators) lives in floating complex arithmetic and is snapped to
exact rationals before the LP sees it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .linsys import LinearSystem
from .simplicial import TruncatedSSet, complex_of_system, nzd_sigma
from .zmod import ZModMatrix, kernel_basis

SNAP_DENOMINATOR = 2 ** 16
TOL = 1e-9


class DistributionError(ValueError):
    pass


# ------------------------------------------------------------- distributions

@dataclass(frozen=True)
class RationalDist:
    """Finite-support distribution with exact nonnegative rational weights."""

    weights: tuple  # ((outcome, Fraction), ...) sorted

    @staticmethod
    def from_dict(d: dict) -> "RationalDist":
        items = []
        total = Fraction(0)
        for k, v in d.items():
            v = Fraction(v)
            if v < 0:
                raise DistributionError(f"negative weight at {k!r}")
            if v:
                items.append((k, v))
                total += v
        if total != 1:
            raise DistributionError(f"weights sum to {total}, not 1")
        return RationalDist(tuple(sorted(items, key=lambda kv: repr(kv[0]))))

    def __call__(self, outcome) -> Fraction:
        for k, v in self.weights:
            if k == outcome:
                return v
        return Fraction(0)

    def support(self):
        return [k for k, _ in self.weights]

    def push(self, fn: Callable) -> "RationalDist":
        out: dict = {}
        for k, v in self.weights:
            kk = fn(k)
            out[kk] = out.get(kk, Fraction(0)) + v
        return RationalDist.from_dict(out)


def _outcome_face(i: int, theta: tuple, d: int) -> tuple:
    if i == 0:
        return theta[1:]
    if i == len(theta):
        return theta[:-1]
    return theta[:i - 1] + ((theta[i - 1] + theta[i]) % d,) + theta[i + 1:]


def _outcome_deg(j: int, theta: tuple) -> tuple:
    return theta[:j] + (0,) + theta[j:]


class SimplicialDistribution:
    """Exact outcome distributions per simplex (degrees <= 2), compatible with
    the structure maps of the host and of N(Z_d)."""

    def __init__(self, host: TruncatedSSet, d: int, dists: dict,
                 validate: bool = True):
        self.host = host
        self.d = d
        self.dists = dists
        if validate:
            self.validate()

    def __call__(self, n: int, tok) -> RationalDist:
        return self.dists[(n, tok)]

    def validate(self) -> None:
        host, d = self.host, self.d
        cap = min(host.cap, 2)
        for n in range(cap + 1):
            for tok in host.simplices[n]:
                if (n, tok) not in self.dists:
                    raise DistributionError(f"missing distribution at {tok!r}")
                for theta, _ in self.dists[(n, tok)].weights:
                    if len(theta) != n or any(not 0 <= a < d for a in theta):
                        raise DistributionError(f"bad outcome {theta!r}")
        for n in range(1, cap + 1):
            for tok in host.simplices[n]:
                p = self.dists[(n, tok)]
                for i in range(n + 1):
                    want = self.dists[(n - 1, host.face(n, i, tok))]
                    got = p.push(lambda th: _outcome_face(i, th, d))
                    if got != want:
                        raise DistributionError(
                            f"face compatibility fails at {tok!r} (d_{i})")
        for n in range(cap):
            for tok in host.simplices[n]:
                p = self.dists[(n, tok)]
                for j in range(n + 1):
                    want = self.dists[(n + 1, host.degeneracy(n, j, tok))]
                    got = p.push(lambda th: _outcome_deg(j, th))
                    if got != want:
                        raise DistributionError(
                            f"degeneracy compatibility fails at {tok!r} (s_{j})")


# --------------------------------------------------------- deterministic maps

def _edge_positions(host: TruncatedSSet) -> dict:
    cache = getattr(host, "_edge_pos", None)
    if cache is None:
        cache = {tok: k for k, tok in enumerate(host.simplices[1])}
        host._edge_pos = cache
    return cache


@dataclass(frozen=True)
class DeterministicDist:
    """A 1-cochain f with f(d_1 sigma) = f(d_2 sigma) + f(d_0 sigma)."""

    host: TruncatedSSet
    d: int
    values: tuple  # value per host.simplices[1] in order

    def value(self, tok) -> int:
        return self.values[_edge_positions(self.host)[tok]]

    def on_simplex(self, n: int, tok) -> tuple:
        if n == 0:
            return ()
        if n == 1:
            return (self.value(tok),)
        return (self.value(self.host.face(2, 2, tok)),
                self.value(self.host.face(2, 0, tok)))


def enumerate_deterministic(host: TruncatedSSet, d: int
                            ) -> list[DeterministicDist]:
    """All solutions of the additive edge condition, via kernel enumeration."""
    edges = list(host.simplices[1])
    pos = {tok: k for k, tok in enumerate(edges)}
    rows = []
    for sig in host.simplices[2]:
        row = [0] * len(edges)
        row[pos[host.face(2, 1, sig)]] += 1
        row[pos[host.face(2, 2, sig)]] -= 1
        row[pos[host.face(2, 0, sig)]] -= 1
        rows.append([e % d for e in row])
    if not rows:
        rows = [[0] * len(edges)]
    kern = kernel_basis(ZModMatrix(rows, d, num_cols=len(edges)))
    return [DeterministicDist(host, d, vec) for vec in kern.enumerate_span()]


def delta_distribution(f: DeterministicDist) -> SimplicialDistribution:
    dists = {}
    for n in range(min(f.host.cap, 2) + 1):
        for tok in f.host.simplices[n]:
            dists[(n, tok)] = RationalDist.from_dict({f.on_simplex(n, tok): 1})
    return SimplicialDistribution(f.host, f.d, dists)


def theta(weights: dict) -> SimplicialDistribution:
    """Mix deterministic distributions: Theta(sum l_f delta^f)."""
    if not weights:
        raise DistributionError("empty support is not a distribution")
    lam = {f: Fraction(v) for f, v in weights.items()}
    if any(v < 0 for v in lam.values()) or sum(lam.values()) != 1:
        raise DistributionError("weights must be a rational distribution")
    some = next(iter(lam))
    host, d = some.host, some.d
    pos = _edge_positions(host)
    dists = {}
    for n in range(min(host.cap, 2) + 1):
        for tok in host.simplices[n]:
            if n == 0:
                idxs: tuple = ()
            elif n == 1:
                idxs = (pos[tok],)
            else:
                idxs = (pos[host.face(2, 2, tok)], pos[host.face(2, 0, tok)])
            acc: dict = {}
            for f, v in lam.items():
                th = tuple(f.values[i] for i in idxs)
                acc[th] = acc.get(th, Fraction(0)) + v
            dists[(n, tok)] = RationalDist.from_dict(acc)
    return SimplicialDistribution(host, d, dists)


# ------------------------------------------------------------ exact LP core

@dataclass
class Verdict:
    contextual: bool
    weights: Optional[dict] = None          # DeterministicDist -> Fraction
    farkas: Optional[list] = None           # (row label, Fraction) pairs
    row_labels: Optional[list] = None


def _marginal_rows(p: SimplicialDistribution,
                   dets: Sequence[DeterministicDist]):
    """One 0/1 row per (nondegenerate 2-simplex, outcome), plus normalization.

    Rows are returned as (support frozenset over det indices, rhs, label).
    """
    host, d = p.host, p.d
    pos = _edge_positions(host)
    nf = len(dets)
    rows = [(frozenset(range(nf)), Fraction(1), ("norm",))]
    for sig in host.nondegenerate(2):
        i2, i0 = pos[host.face(2, 2, sig)], pos[host.face(2, 0, sig)]
        fibers: dict = {}
        for k, f in enumerate(dets):
            fibers.setdefault((f.values[i2], f.values[i0]), []).append(k)
        pdist = p(2, sig)
        for theta_out in itertools.product(range(d), repeat=2):
            rows.append((frozenset(fibers.get(theta_out, ())),
                         pdist(theta_out), (sig, theta_out)))
    return rows


def _eliminate(rows, nf):
    """Exact integer Gaussian elimination with provenance over the input rows.

    Returns (basis, contradiction): basis entries are (int vector, Fraction
    rhs, provenance dict); a contradiction is a provenance dict y with
    y'A = 0 and y'c != 0.
    """
    basis: list[tuple[list[int], Fraction, dict]] = []
    pivots: list[int] = []
    for ridx, (support, rhs, _) in enumerate(rows):
        vec = [0] * nf
        for k in support:
            vec[k] = 1
        rhs = Fraction(rhs)
        prov = {ridx: Fraction(1)}
        for (bvec, brhs, bprov), pcol in zip(basis, pivots):
            if vec[pcol]:
                q, pval = vec[pcol], bvec[pcol]
                vec = [pval * a - q * b for a, b in zip(vec, bvec)]
                rhs = pval * rhs - q * brhs
                prov = {k: pval * v for k, v in prov.items()}
                for k, v in bprov.items():
                    prov[k] = prov.get(k, Fraction(0)) - q * v
        from math import gcd
        g = 0
        for a in vec:
            g = gcd(g, a)
        if g > 1:
            vec = [a // g for a in vec]
            rhs = rhs / g
            prov = {k: v / g for k, v in prov.items()}
        if any(vec):
            pcol = next(k for k, a in enumerate(vec) if a)
            if vec[pcol] < 0:
                vec = [-a for a in vec]
                rhs = -rhs
                prov = {k: -v for k, v in prov.items()}
            basis.append((vec, rhs, prov))
            pivots.append(pcol)
        elif rhs != 0:
            return basis, prov
    return basis, None


def _phase1_simplex(a_rows: list[list[Fraction]], c: list[Fraction]
                    ) -> tuple[Optional[list[Fraction]],
                               Optional[list[Fraction]]]:
    """Feasibility of Ax = c, x >= 0.

    Returns (x, None) when feasible, (None, y) with y'A <= 0, y'c > 0 when not.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    sign = []
    tab = []
    for row, rhs in zip(a_rows, c):
        if rhs < 0:
            sign.append(-1)
            row = [-v for v in row]
            rhs = -rhs
        else:
            sign.append(1)
        tab.append([Fraction(v) for v in row]
                   + [Fraction(1 if j == len(tab) else 0) for j in range(m)]
                   + [Fraction(rhs)])
    basis = [n + i for i in range(m)]
    total = n + m
    zrow = [sum(tab[i][j] for i in range(m)) for j in range(total + 1)]
    for j in range(n, total):
        zrow[j] -= 1

    iterations = 0
    bland_after = 20 * (m + 2)  # Dantzig first; Bland guarantees termination
    while True:
        iterations += 1
        if iterations > bland_after:
            enter = next((j for j in range(total) if zrow[j] > 0), None)
        else:
            enter = None
            best_z = 0
            for j in range(total):
                if zrow[j] > best_z:
                    best_z = zrow[j]
                    enter = j
        if enter is None:
            break
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][total] / tab[i][enter]
                if best is None or ratio < best[0] or \
                        (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise ArithmeticError("phase-1 unbounded (cannot happen)")
        _, piv = best
        pv = tab[piv][enter]
        if pv != 1:
            tab[piv] = [v / pv for v in tab[piv]]
        for i in range(m):
            if i != piv and tab[i][enter]:
                f = tab[i][enter]
                prow = tab[piv]
                tab[i] = [v - f * w if w else v
                          for v, w in zip(tab[i], prow)]
        if zrow[enter]:
            f = zrow[enter]
            prow = tab[piv]
            zrow = [v - f * w if w else v for v, w in zip(zrow, prow)]
        basis[piv] = enter

    if zrow[total] == 0:
        x = [Fraction(0)] * n
        for i, b in enumerate(basis):
            if b < n:
                x[b] = tab[i][total]
        return x, None
    y = [(zrow[n + i] + 1) * sign[i] for i in range(m)]
    return None, y


def is_contextual(p: SimplicialDistribution,
                  dets: Optional[Sequence[DeterministicDist]] = None
                  ) -> Verdict:
    """Exact LP: is p a convex mixture of deterministic distributions?

    The defining constraints are the marginal equalities on nondegenerate
    2-simplices (plus normalization); presolve reduces them to an equivalent
    independent system with provenance so certificates refer back to the
    original rows.
    """
    if dets is None:
        dets = enumerate_deterministic(p.host, p.d)
    rows = _marginal_rows(p, dets)
    nf = len(dets)
    # dedupe identical supports; contradictions are immediate certificates
    seen: dict = {}
    dedup = []
    for idx, (support, rhs, label) in enumerate(rows):
        if support in seen:
            j, other = seen[support]
            if other != rhs:
                hi, lo = (idx, j) if rhs > other else (j, idx)
                verdict = Verdict(True, farkas=[(rows[hi][2], Fraction(1)),
                                                (rows[lo][2], Fraction(-1))],
                                  row_labels=[r[2] for r in rows])
                verify_verdict(p, verdict, dets)
                return verdict
        else:
            seen[support] = (idx, rhs)
            dedup.append((support, rhs, label))

    basis, contradiction = _eliminate(dedup, nf)
    if contradiction is not None:
        y = contradiction
        if sum(v * dedup[k][1] for k, v in y.items()) < 0:
            y = {k: -v for k, v in y.items()}
        verdict = Verdict(True,
                          farkas=[(dedup[k][2], v) for k, v in sorted(y.items())
                                  if v],
                          row_labels=[r[2] for r in rows])
        verify_verdict(p, verdict, dets)
        return verdict

    a_rows = [[Fraction(v) for v in vec] for vec, _, _ in basis]
    rhs = [r for _, r, _ in basis]
    x, y_red = _phase1_simplex(a_rows, rhs)
    if x is not None:
        weights = {dets[k]: v for k, v in enumerate(x) if v}
        verdict = Verdict(False, weights=weights,
                          row_labels=[r[2] for r in rows])
        verify_verdict(p, verdict, dets)
        return verdict
    y: dict = {}
    for i, (_, _, prov) in enumerate(basis):
        if y_red[i]:
            for k, v in prov.items():
                y[k] = y.get(k, Fraction(0)) + y_red[i] * v
    farkas = [(dedup[k][2], v) for k, v in sorted(y.items()) if v]
    verdict = Verdict(True, farkas=farkas, row_labels=[r[2] for r in rows])
    verify_verdict(p, verdict, dets)
    return verdict


def verify_verdict(p: SimplicialDistribution, verdict: Verdict,
                   dets: Optional[Sequence[DeterministicDist]] = None) -> None:
    """Re-check the certificate by substitution into the original constraints."""
    if dets is None:
        dets = enumerate_deterministic(p.host, p.d)
    rows = _marginal_rows(p, dets)
    by_label = {label: (support, rhs) for support, rhs, label in rows}
    if not verdict.contextual:
        lam = verdict.weights
        assert all(v > 0 for v in lam.values())
        assert sum(lam.values()) == 1
        pos = {id(f): k for k, f in enumerate(dets)}
        sparse = {pos[id(f)]: v for f, v in lam.items()}
        for support, rhs, label in rows:
            got = sum(v for k, v in sparse.items() if k in support)
            if got != rhs:
                raise AssertionError(f"witness violates constraint {label!r}")
    else:
        dot_c = Fraction(0)
        col_sums: dict = {}
        for label, coeff in verdict.farkas:
            support, rhs = by_label[label]
            dot_c += coeff * rhs
            for k in support:
                col_sums[k] = col_sums.get(k, Fraction(0)) + coeff
        if not all(s <= 0 for s in col_sums.values()) or not dot_c > 0:
            raise AssertionError("Farkas certificate fails verification")


# ------------------------------------------------------------- quantum side

def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def spectral_measurement(unitaries: Sequence[np.ndarray], d: int
                         ) -> dict[tuple, np.ndarray]:
    """Joint eigenspace projectors of commuting d-torsion unitaries.

    Pi(a) = prod_i (1/d) sum_k w^{-a_i k} U_i^k; validated Hermitian,
    idempotent, pairwise orthogonal, summing to the identity (tol 1e-9).
    """
    us = [np.asarray(u, dtype=complex) for u in unitaries]
    if not us:
        return {(): np.eye(1, dtype=complex)}
    dim = us[0].shape[0]
    ident = np.eye(dim, dtype=complex)
    for u in us:
        if u.shape != (dim, dim):
            raise DistributionError("dimension mismatch")
        if np.linalg.norm(np.linalg.matrix_power(u, d) - ident) > TOL:
            raise DistributionError("unitary is not d-torsion")
    for u, v in itertools.combinations(us, 2):
        if np.linalg.norm(u @ v - v @ u) > TOL:
            raise DistributionError("unitaries do not commute")
    w = omega(d)
    powers = []
    for u in us:
        pows = [ident]
        for _ in range(d - 1):
            pows.append(pows[-1] @ u)
        powers.append(pows)
    out = {}
    for a in itertools.product(range(d), repeat=len(us)):
        proj = ident
        for i, ai in enumerate(a):
            comp = sum(w ** (-ai * k) * powers[i][k] for k in range(d)) / d
            proj = proj @ comp
        out[a] = proj
    total = sum(out.values())
    if np.linalg.norm(total - ident) > TOL:
        raise DistributionError("projectors do not sum to the identity")
    for a, proj in out.items():
        if np.linalg.norm(proj @ proj - proj) > TOL or \
                np.linalg.norm(proj - proj.conj().T) > TOL:
            raise DistributionError("projector validation failed")
    return out


def snap_probability(value: float) -> Fraction:
    frac = Fraction(value).limit_denominator(SNAP_DENOMINATOR)
    if abs(float(frac) - value) > TOL:
        raise DistributionError(
            f"probability {value!r} does not snap to a bounded rational")
    return frac


def is_matrix_solution(t_mats: Sequence[np.ndarray], system: LinearSystem
                       ) -> bool:
    """Torsion, per-row commutation, and row products = omega^{b} * identity."""
    d = system.modulus
    dim = t_mats[0].shape[0]
    ident = np.eye(dim, dtype=complex)
    w = omega(d)
    for u in t_mats:
        if np.linalg.norm(np.linalg.matrix_power(u, d) - ident) > TOL:
            return False
    for row in system.matrix.rows:
        supp = [v for v, e in enumerate(row) if e]
        for a, b in itertools.combinations(supp, 2):
            if np.linalg.norm(t_mats[a] @ t_mats[b]
                              - t_mats[b] @ t_mats[a]) > TOL:
                return False
    for row, bval in zip(system.matrix.rows, system.rhs):
        acc = ident
        for v, e in enumerate(row):
            if e:
                acc = acc @ np.linalg.matrix_power(t_mats[v], e)
        if np.linalg.norm(acc - (w ** bval) * ident) > TOL:
            return False
    return True


def quantum_distribution(system: LinearSystem, t_mats: Sequence[np.ndarray],
                         rho: np.ndarray, cap: int = 2,
                         host: Optional[TruncatedSSet] = None
                         ) -> SimplicialDistribution:
    """p_sigma(a) = Tr(rho Pi_sigma(a)) on N(Z_d, Sigma), snapped to rationals."""
    d = system.modulus
    if not is_matrix_solution(t_mats, system):
        raise DistributionError("T is not an operator solution of the system")
    rho = np.asarray(rho, dtype=complex)
    if np.linalg.norm(rho - rho.conj().T) > TOL or \
            abs(np.trace(rho) - 1) > TOL or \
            min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) < -TOL:
        raise DistributionError("rho is not a density operator")
    if host is None:
        host = nzd_sigma(complex_of_system(system), d, cap=cap)

    def u_of(func) -> np.ndarray:
        dim = t_mats[0].shape[0]
        acc = np.eye(dim, dtype=complex)
        for v, a in enumerate(func):
            if a:
                acc = acc @ np.linalg.matrix_power(t_mats[v], a)
        return acc

    dists = {}
    for n in range(min(host.cap, 2) + 1):
        for tok in host.simplices[n]:
            if n == 0:
                dists[(n, tok)] = RationalDist.from_dict({(): Fraction(1)})
                continue
            projs = spectral_measurement([u_of(f) for f in tok], d)
            vals = {}
            for a, proj in projs.items():
                tr = np.trace(rho @ proj)
                if abs(tr.imag) > TOL:
                    raise DistributionError("complex probability")
                vals[a] = snap_probability(max(tr.real, 0.0))
            total = sum(vals.values())
            if total != 1:
                raise DistributionError(f"snapped weights sum to {total}")
            dists[(n, tok)] = RationalDist.from_dict(vals)
    return SimplicialDistribution(host, d, dists)


# ----------------------------------------------------- two-qubit Pauli fixture

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def mermin_peres_solution() -> list[np.ndarray]:
    """Two-qubit real Pauli solution of the K_{3,3} system with b=(0,...,0,1).

    Cell (i, j) of the magic square is assigned to the K_{3,3} edge (i, j+3);
    rows multiply to +1 and columns to (+1, +1, -1).
    """
    eye = np.eye(2, dtype=complex)
    xz = PAULI_X @ PAULI_Z
    zx = PAULI_Z @ PAULI_X
    square = {
        (1, 4): np.kron(PAULI_X, eye),
        (1, 5): np.kron(eye, PAULI_X),
        (1, 6): np.kron(PAULI_X, PAULI_X),
        (2, 4): np.kron(eye, PAULI_Z),
        (2, 5): np.kron(PAULI_Z, eye),
        (2, 6): np.kron(PAULI_Z, PAULI_Z),
        (3, 4): np.kron(PAULI_X, PAULI_Z),
        (3, 5): np.kron(PAULI_Z, PAULI_X),
        (3, 6): np.kron(xz, zx),
    }
    from .linsys import K33_COLUMNS
    return [square[edge] for edge in K33_COLUMNS]


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def random_phase_state(dim: int, rng) -> np.ndarray:
    """A random pure state with fourth-root-of-unity amplitudes.

    Outcome statistics against Pauli-type projectors stay dyadic, so the
    exact-rational snapping accepts these states (a Haar-random state would
    produce irrational probabilities and be rejected).
    """
    vec = np.array([rng.choice((1, -1, 1j, -1j)) for _ in range(dim)],
                   dtype=complex)
    vec = vec / np.linalg.norm(vec)
    return np.outer(vec, vec.conj())


# ------------------------------------------------------------------ file I/O

def dump_distribution(p: SimplicialDistribution) -> str:
    """Lines `simplex-id outcome(csv) numerator/denominator`."""
    lines = []
    for n in range(min(p.host.cap, 2) + 1):
        for tok in p.host.simplices[n]:
            for theta_out, v in p(n, tok).weights:
                csv = ",".join(map(str, theta_out)) if theta_out else "-"
                lines.append(f"{tok!r} {csv} {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def parse_distribution(host: TruncatedSSet, d: int, text: str
                       ) -> SimplicialDistribution:
    by_repr = {}
    for n in range(min(host.cap, 2) + 1):
        for tok in host.simplices[n]:
            by_repr[repr(tok)] = (n, tok)
    acc: dict = {}
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        head, _, frac = line.rpartition(" ")
        ident, _, csv = head.rpartition(" ")
        if ident not in by_repr:
            raise DistributionError(f"line {num}: unknown simplex {ident!r}")
        n, tok = by_repr[ident]
        theta_out = () if csv == "-" else tuple(int(x) for x in csv.split(","))
        numden = frac.split("/")
        value = Fraction(int(numden[0]), int(numden[1]) if len(numden) > 1 else 1)
        acc.setdefault((n, tok), {})[theta_out] = value
    dists = {key: RationalDist.from_dict(v) for key, v in acc.items()}
    return SimplicialDistribution(host, d, dists)


def verdict_report(verdict: Verdict) -> str:
    def enc_frac(v: Fraction) -> str:
        return f"{v.numerator}/{v.denominator}"

    if verdict.contextual:
        body = {"verdict": "contextual",
                "farkas": [[repr(label), enc_frac(coeff)]
                           for label, coeff in verdict.farkas]}
    else:
        body = {"verdict": "noncontextual",
                "witness": {repr(tuple(f.values)): enc_frac(v)
                            for f, v in sorted(verdict.weights.items(),
                                               key=lambda kv: kv[0].values)}}
    return json.dumps(body, sort_keys=True, indent=1)
