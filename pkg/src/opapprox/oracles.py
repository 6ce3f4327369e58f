"""Independent brute-force verifiers.

These certify solver outputs and derived expected values in the test
suite.  They deliberately share no code with the solvers they check: the
only factorization used is an eigendecomposition called directly from
numpy, with explicit nullspace handling.  Minimizers are exact (closed
form), so acceptance tolerances reflect solver error only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Subspace


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """c* q c - 2 Re(l* c) + const, the reduced objective of a weighted fit."""

    q: np.ndarray
    l: np.ndarray
    const: float

    def value(self, c) -> float:
        c = np.asarray(c, dtype=complex).ravel()
        return float(
            np.real(c.conj() @ self.q @ c) - 2.0 * np.real(self.l.conj() @ c) + self.const
        )


def _eigh_solve(H, g, rtol=1e-12):
    # minimal-norm solution of H c = g for Hermitian PSD H, eigendecomposition only
    w, Q = np.linalg.eigh(H)
    wmax = max(float(w.max()), 0.0) if w.size else 0.0
    inv = np.where(w > rtol * wmax, 1.0 / np.where(w > 0, w, 1.0), 0.0)
    return (Q * inv) @ Q.conj().T @ g


def quadratic_min_over_affine(W, A, x, basis: Subspace):
    """Exact minimum of ||A h - x||_W^2 over h in the span of ``basis``.

    Returns (minimum value, a minimizer h).  The reduced Hessian
    B* A* W A B is diagonalized explicitly; directions below the spectral
    cutoff are treated as flat (consistency is automatic since the linear
    term lies in the Hessian's range).
    """
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    x = np.asarray(x, dtype=complex).ravel()
    B = basis.basis
    AB = A @ B
    form = QuadraticForm(
        q=AB.conj().T @ W @ AB,
        l=AB.conj().T @ W @ x,
        const=float(np.real(x.conj() @ W @ x)),
    )
    if B.shape[1] == 0:
        return form.const, np.zeros(B.shape[0], dtype=complex)
    c = _eigh_solve((form.q + form.q.conj().T) / 2.0, form.l)
    return form.value(c), B @ c


def shorted_variational(W, S: Subspace, x) -> float:
    """inf over s in S of <W (x + s), x + s>, computed exactly.

    This is the variational characterization of the largest PSD operator
    below W with range in S-perp, evaluated at x.
    """
    x = np.asarray(x, dtype=complex).ravel()
    n = x.size
    value, _ = quadratic_min_over_affine(W, np.eye(n, dtype=complex), -x, S)
    return value


def sampled_dominance(objective, candidate_value, rng, n, slack_scale=1.0) -> bool:
    """True iff candidate_value <= objective(rng) + 1e-10 * slack_scale for n draws.

    ``objective`` receives the generator and draws its own sample, so the
    check is deterministic given the seed and agnostic to the sample shape.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    slack = 1e-10 * slack_scale
    for _ in range(n):
        if candidate_value > objective(rng) + slack:
            return False
    return True
