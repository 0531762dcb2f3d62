"""Monte Carlo simulation of the decoy protocol.

Each trial the sender transmits either a message word |j> (uniform over the n
basis states) or, with probability decoy_fraction, a decoy drawn uniformly
from the n^2 ordered pairs (j, k). The eavesdropper applies her attack, gets
outcome r with probability <psi|A_r†A_r|psi>, guesses j_(r) on message trials,
and forwards the post-measurement state. The receiver projects decoys onto
{intact, tampered}: conditioned on outcome r the intact probability is
|<phi|A_r|phi>|^2 / p(r).

g_hat estimates the eavesdropper's guess success rate on message trials;
d_hat estimates the receiver's detection rate on decoy trials. By default the
detection score uses the exact conditional probability per trial (half the
variance of sampling the receiver's bit; identical in expectation); pass
sample_bob=True to sample it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attacks import GeneralizedMeasurement
from .metrics import estimation_fidelity

#: conditional probabilities within this of 0 or 1 are physically exact events
#: reported off by float rounding (decoy amplitudes carry 1/sqrt(2) factors)
_SNAP = 1e-12


@dataclass(frozen=True)
class SimReport:
    """Empirical vs analytic (G, D) for one simulated run.

    g_hat/d_hat are None when no trial of that type occurred; the *_within_4se
    flags compare |hat - analytic| against 4 binomial standard errors and are
    advisory (a conforming run can fail one by chance roughly 1 in 16000).
    """

    n: int
    shots: int
    decoy_fraction: float
    seed: int
    attack_descriptor: str
    sample_bob: bool
    message_trials: int
    decoy_trials: int
    g_hat: float | None
    g_se: float | None
    g_analytic: float
    g_within_4se: bool | None
    d_hat: float | None
    d_se: float | None
    d_analytic: float
    d_within_4se: bool | None


@dataclass(frozen=True)
class TrialRecord:
    """Full audit of a single trial: every intermediate probability."""

    kind: str
    sent: tuple
    outcome_probs: tuple
    outcome: int
    guess: int | None
    guess_correct: bool | None
    intact_prob: float | None
    bob_outcome: str | None


def _pair_tables(m: GeneralizedMeasurement) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-state outcome tables: p_msg[j, r], p_decoy[s, r], amp[s, r].

    s runs over ordered pairs (j, k) flattened as j*n + k; amp is the decoy's
    forwarded amplitude <phi_jk|A_r|phi_jk>. Everything is O(K n^2), so the
    simulator never materializes ensembles or n^4 functional matrices.
    """
    n = m.dim
    k = len(m.kraus)
    jj = np.repeat(np.arange(n), n)
    kk = np.tile(np.arange(n), n)
    same = jj == kk
    p_msg = np.empty((n, k))
    p_decoy = np.empty((n * n, k))
    amp = np.empty((n * n, k), dtype=complex)
    for i, op in enumerate(m.ops):
        gram = op.conj().T @ op
        dg = np.diag(gram).real
        p_msg[:, i] = dg
        pd = 0.5 * (dg[jj] + dg[kk]) - gram[jj, kk].imag
        pd[same] = dg[jj[same]]
        p_decoy[:, i] = pd
        da = np.diag(op)
        am = 0.5 * (da[jj] + da[kk] + 1j * op[jj, kk] - 1j * op[kk, jj])
        am[same] = da[jj[same]]
        amp[:, i] = am
    return p_msg, p_decoy, amp


def _check_complete(rows: np.ndarray, what: str) -> None:
    worst = float(np.max(np.abs(rows.sum(axis=1) - 1.0)))
    if worst > 1e-9:
        raise ValueError(
            f"outcome probabilities over {what} sum off by {worst:.3e}; the attack is not complete"
        )


def _snap_unit(q: np.ndarray) -> np.ndarray:
    q = np.where(np.abs(q) < _SNAP, 0.0, q)
    q = np.where(np.abs(q - 1.0) < _SNAP, 1.0, q)
    return np.clip(q, 0.0, 1.0)


def _sample_rows(table: np.ndarray, rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Draw one outcome per trial from the normalized rows of a probability table."""
    probs = table[rows]
    probs = probs / probs.sum(axis=1, keepdims=True)
    cum = np.cumsum(probs, axis=1)
    return np.minimum((u[:, None] > cum).sum(axis=1), table.shape[1] - 1)


def run_protocol(
    n: int,
    attack: GeneralizedMeasurement,
    shots: int,
    decoy_fraction: float = 0.5,
    seed: int = 0,
    sample_bob: bool = False,
) -> SimReport:
    """Simulate `shots` trials; deterministic for fixed arguments and seed."""
    if n < 2:
        raise ValueError(f"need dimension n >= 2, got {n}")
    if attack.dim != n:
        raise ValueError(f"attack dimension {attack.dim} != n = {n}")
    if shots < 1:
        raise ValueError("need at least one shot")
    if not 0.0 <= decoy_fraction <= 1.0:
        raise ValueError(f"decoy fraction {decoy_fraction} outside [0, 1]")

    p_msg, p_decoy, amp = _pair_tables(attack)
    _check_complete(p_msg, "message words")
    _check_complete(p_decoy, "decoys")
    g_analytic, table = estimation_fidelity(attack)
    d_analytic = 1.0 - float(np.sum(np.abs(amp) ** 2)) / (n * n)

    rng = np.random.default_rng(seed)
    u_type = rng.random(shots)
    j_draw = rng.integers(0, n, size=shots)
    pair_draw = rng.integers(0, n * n, size=shots)
    u_out = rng.random(shots)
    u_bob = rng.random(shots)
    is_decoy = u_type < decoy_fraction

    g_hat = g_se = g_flag = None
    d_hat = d_se = d_flag = None

    n_msg = int(np.sum(~is_decoy))
    if n_msg:
        sent = j_draw[~is_decoy]
        r = _sample_rows(p_msg, sent, u_out[~is_decoy])
        hits = table.guess[r] == sent
        g_hat = float(np.mean(hits))
        g_se = float(np.sqrt(g_hat * (1.0 - g_hat) / n_msg))
        g_flag = bool(abs(g_hat - g_analytic) <= 4.0 * g_se)

    n_dec = int(np.sum(is_decoy))
    if n_dec:
        sent = pair_draw[is_decoy]
        r = _sample_rows(p_decoy, sent, u_out[is_decoy])
        p_r = p_decoy[sent, r]
        intact = np.where(p_r > 0, np.abs(amp[sent, r]) ** 2 / np.where(p_r > 0, p_r, 1.0), 1.0)
        detect = _snap_unit(1.0 - intact)
        if sample_bob:
            detect = (u_bob[is_decoy] < detect).astype(float)
        d_hat = float(np.mean(detect))
        d_se = float(np.sqrt(d_hat * (1.0 - d_hat) / n_dec))
        d_flag = bool(abs(d_hat - d_analytic) <= 4.0 * d_se)

    return SimReport(
        n=n,
        shots=shots,
        decoy_fraction=float(decoy_fraction),
        seed=int(seed),
        attack_descriptor=attack.descriptor,
        sample_bob=bool(sample_bob),
        message_trials=n_msg,
        decoy_trials=n_dec,
        g_hat=g_hat,
        g_se=g_se,
        g_analytic=float(g_analytic),
        g_within_4se=g_flag,
        d_hat=d_hat,
        d_se=d_se,
        d_analytic=float(d_analytic),
        d_within_4se=d_flag,
    )


def trial_trace(n: int, attack: GeneralizedMeasurement, trial_spec: tuple, seed: int = 0) -> TrialRecord:
    """Run a single fully audited trial.

    trial_spec is ("message", j) or ("decoy", j, k). The record carries the
    complete outcome distribution for the sent state, the sampled outcome, the
    eavesdropper's guess on message trials, and the receiver's conditional
    intact probability and sampled verdict on decoy trials.
    """
    if attack.dim != n:
        raise ValueError(f"attack dimension {attack.dim} != n = {n}")
    p_msg, p_decoy, amp = _pair_tables(attack)
    _, table = estimation_fidelity(attack)
    rng = np.random.default_rng(seed)

    if trial_spec[0] == "message":
        _, j = trial_spec
        if not 0 <= j < n:
            raise ValueError(f"basis index {j} out of range")
        probs = p_msg[j]
    elif trial_spec[0] == "decoy":
        _, j, k = trial_spec
        if not (0 <= j < n and 0 <= k < n):
            raise ValueError(f"pair index ({j},{k}) out of range")
        probs = p_decoy[j * n + k]
    else:
        raise ValueError(f"unknown trial kind {trial_spec[0]!r}")

    total = float(probs.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {total!r}; the attack is not complete")
    r = int(_sample_rows(probs[None, :], np.array([0]), rng.random(1))[0])

    if trial_spec[0] == "message":
        guess = int(table.guess[r])
        return TrialRecord(
            kind="message",
            sent=(j,),
            outcome_probs=tuple(float(p) for p in probs),
            outcome=r,
            guess=guess,
            guess_correct=bool(guess == j),
            intact_prob=None,
            bob_outcome=None,
        )

    p_r = float(probs[r])
    intact = abs(amp[j * n + k, r]) ** 2 / p_r if p_r > 0 else 1.0
    intact = float(_snap_unit(np.array([intact]))[0])
    verdict = "intact" if rng.random() < intact else "tamper"
    return TrialRecord(
        kind="decoy",
        sent=(j, k),
        outcome_probs=tuple(float(p) for p in probs),
        outcome=r,
        guess=None,
        guess_correct=None,
        intact_prob=intact,
        bob_outcome=verdict,
    )
