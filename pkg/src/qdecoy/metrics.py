"""Estimation fidelity G, induced fidelity F (disturbance D = 1 - F), and the
linear-functional forms of both.

G is the eavesdropper's mean success probability at naming the transmitted
basis state: per outcome r she guesses the index j_(r) maximizing
<j|A_r†A_r|j>, and G = (1/n) sum_r <j_(r)|A_r†A_r|j_(r)>. F is the mean
overlap the forwarded state keeps with a decoy, averaged over the pairing
ensemble; the receiver catches tampering with probability D = 1 - F.

Both quantities are linear in the state operator $ of the attack: G is a trace
against the block-diagonal operator € built from the guess table, F = Tr(L $)
for a fixed n^2 x n^2 matrix L (pound_matrix). For attacks with diagonal Kraus
operators the traces collapse to sums over the diagonal coefficients
(spectral_quantities), with G = g/n and D = 1/2 - f/(2n^2) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .attacks import GeneralizedMeasurement
from .choi import choi_of_kraus, mat_to_vec
from .ensembles import Ensemble
from .linalg import kron

_EURO_DENSE_LIMIT = 4096


@dataclass(frozen=True)
class GuessTable:
    """Per-outcome best guesses: index j_(r) and its weight <j|A_r†A_r|j>."""

    guess: np.ndarray
    weight: np.ndarray


@dataclass(frozen=True)
class FunctionalMatrices:
    """The fixed operators behind the linear-functional forms of G and F.

    euro is None when the composite dimension n^2 * outcomes exceeds the dense
    materialization limit; the blockwise evaluation never builds it.
    """

    euro: np.ndarray | None
    pound: np.ndarray
    p_rep: np.ndarray
    p_nonrep: np.ndarray
    p_beta: np.ndarray
    beta: np.ndarray


def estimation_fidelity(m: GeneralizedMeasurement) -> tuple[float, GuessTable]:
    """G from the definition: average the best diagonal weight per outcome."""
    n = m.dim
    guesses = np.empty(len(m.kraus), dtype=int)
    weights = np.empty(len(m.kraus))
    for i, op in enumerate(m.ops):
        d = np.einsum("ij,ij->j", op.conj(), op).real
        # lowest index wins among entries within 1e-12 of the max
        guesses[i] = int(np.argmax(d >= d.max() - 1e-12))
        weights[i] = d[guesses[i]]
    return float(weights.sum() / n), GuessTable(guess=guesses, weight=weights)


def estimation_fidelity_functional(m: GeneralizedMeasurement) -> float:
    """G as the trace of € against the attack's state operator.

    € is block-diagonal over the outcome register, so the trace reduces per
    outcome to the squared vec components at input index j_(r).
    """
    n = m.dim
    _, table = estimation_fidelity(m)
    total = 0.0
    for op, j in zip(m.ops, table.guess):
        v = mat_to_vec(op)
        idx = np.arange(n) * n + j
        total += float(np.sum(np.abs(v[idx]) ** 2))
    return total / n


def induced_fidelity(m: GeneralizedMeasurement, e: Ensemble) -> float:
    """F from the definition: sum_i p_i sum_r |<phi_i|A_r|phi_i>|^2."""
    if e.dim != m.dim:
        raise ValueError(f"ensemble dimension {e.dim} != measurement dimension {m.dim}")
    total = 0.0
    for w, ket in e.items:
        bra = ket.conj()
        for op in m.ops:
            total += w * abs(bra @ op @ ket) ** 2
    return float(total)


def beta_vector(n: int) -> np.ndarray:
    """Maximally entangled unit vector (1/sqrt(n)) sum_j |jj>."""
    beta = np.zeros(n * n)
    beta[np.arange(n) * n + np.arange(n)] = 1.0 / np.sqrt(n)
    return beta


@lru_cache(maxsize=None)
def pound_matrix(n: int) -> np.ndarray:
    """The n^2 x n^2 operator L with F = Tr(L $) on the pairing ensemble.

    L = (1/2n) P_rep + (1/2n) P_beta P_rep + (1/n^2) sum_{j<k} singlet
    projectors on the nonrepeated subspace. All entries are real.
    """
    rep = np.arange(n) * n + np.arange(n)
    p_rep = np.zeros((n * n, n * n))
    p_rep[rep, rep] = 1.0
    beta = beta_vector(n)
    p_beta = np.outer(beta, beta)
    pound = (p_rep + p_beta @ p_rep) / (2 * n)
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros(n * n)
            s[j * n + k] = 1.0 / np.sqrt(2)
            s[k * n + j] = -1.0 / np.sqrt(2)
            pound += np.outer(s, s) / (n * n)
    pound.setflags(write=False)
    return pound


def functional_matrices(m: GeneralizedMeasurement) -> FunctionalMatrices:
    """Materialize €, L, and the projector pieces for the attack's dimension."""
    n = m.dim
    k = len(m.kraus)
    rep = np.arange(n) * n + np.arange(n)
    p_rep = np.zeros((n * n, n * n))
    p_rep[rep, rep] = 1.0
    beta = beta_vector(n)
    p_beta = np.outer(beta, beta)
    euro = None
    if n * n * k <= _EURO_DENSE_LIMIT:
        _, table = estimation_fidelity(m)
        euro = np.zeros((n * n * k, n * n * k))
        eye_k = np.eye(k)
        for i, j in enumerate(table.guess):
            guess_proj = np.zeros((n, n))
            guess_proj[j, j] = 1.0
            euro += kron(kron(np.eye(n), guess_proj), np.outer(eye_k[i], eye_k[i]))
        euro /= n
    return FunctionalMatrices(
        euro=euro,
        pound=pound_matrix(n),
        p_rep=p_rep,
        p_nonrep=np.eye(n * n) - p_rep,
        p_beta=p_beta,
        beta=beta,
    )


def induced_fidelity_functional(m: GeneralizedMeasurement) -> float:
    """F = Tr(L $) with $ the attack's state operator."""
    pound = pound_matrix(m.dim)
    choi = choi_of_kraus(m.ops)
    return float(np.einsum("ij,ji->", pound, choi.matrix).real)


def spectral_quantities(m: GeneralizedMeasurement) -> tuple[float, float]:
    """(g, f) for attacks with diagonal Kraus operators.

    g = sum_r |a_{j_(r) j_(r) r}|^2 and f = sum_r |sum_j a_jjr|^2, so that
    G = g/n and D = 1/2 - f/(2 n^2) hold exactly in the diagonal case.
    """
    diags = []
    for r, op in m.kraus:
        off = op - np.diag(np.diag(op))
        if np.max(np.abs(off)) > 1e-10:
            raise ValueError(
                f"outcome {r} is not diagonal; use estimation_fidelity/induced_fidelity instead"
            )
        diags.append(np.diag(op))
    g = sum(float(np.max(np.abs(d) ** 2)) for d in diags)
    f = sum(float(np.abs(d.sum()) ** 2) for d in diags)
    return g, f


def banaszek_bound(g: float, m: int, n: int) -> float:
    """Largest f compatible with spectral weight g: (sqrt(g) + sqrt((m-1)(n-g)))^2.

    Holds for any coefficient vector of norm^2 = n split over m outcomes.
    """
    if m < 1:
        raise ValueError("need at least one outcome")
    if g < 0 or g > n:
        raise ValueError(f"spectral weight {g} outside [0, {n}]")
    return float((np.sqrt(g) + np.sqrt((m - 1) * (n - g))) ** 2)
