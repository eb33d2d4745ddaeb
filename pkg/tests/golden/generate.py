"""Regenerate the golden branch tables from their symbolic closed forms.

Run ``python3 tests/golden/generate.py``.  Nothing here imports the package:
every row is the hand-derived expression for ``(k, pi, tau, lambda)`` with
numbers substituted, so the golden tests compare the engine against algebra
done independently of it.

Row order is the engine's: k candidates descending, and for each k the ``+``
root before the ``-`` root, where the root is written with a non-negative
coefficient of ``s``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

HERE = Path(__file__).parent


def _row(k_index, sign, k, pi, tau_tilde):
    tau = (tau_tilde[0] + 2.0 * pi[0], tau_tilde[1] + 2.0 * pi[1])
    return {"k_index": k_index, "sign": sign, "k": k, "pi": list(pi), "tau": list(tau), "lambda": k + pi[1]}


def coulomb_radial(Z, l, n_total):
    """``sigma = s, tau~ = 2, sigma~ = -kappa^2 s^2 - beta^2 s - l(l+1)``, atomic units.

    ``k = -beta^2 +- (2l+1) kappa``; the roots are ``kappa s +- (l + 1/2)``
    and ``pi = -1/2 +- root``.  The physical row is ``pi = -kappa s + l``.
    """
    E = -Z * Z / (2.0 * n_total**2)
    kappa, beta_sq = math.sqrt(-2.0 * E), -2.0 * Z
    k1, k2 = -beta_sq + (2 * l + 1) * kappa, -beta_sq - (2 * l + 1) * kappa
    rows = [
        _row(1, "+", k1, (l, kappa), (2.0, 0.0)),
        _row(1, "-", k1, (-l - 1.0, -kappa), (2.0, 0.0)),
        _row(2, "+", k2, (-l - 1.0, kappa), (2.0, 0.0)),
        _row(2, "-", k2, (l, -kappa), (2.0, 0.0)),
    ]
    args = ["trace", "--system", "coulomb-ring", "--Z", repr(Z), "--part", "radial", "--l", repr(l), "--E", repr(E)]
    return {"args": args, "k_candidates": [k1, k2], "rows": rows, "selected": [2, "-"]}


def coulomb_angular(m, B, C, l):
    """``sigma = 1 - s^2, tau~ = -2s, sigma~ = L - M - C s - L s^2`` with ``M = m^2 + B``.

    ``k = L - A`` with ``A`` a root of ``A^2 - M A + C^2/4``.  For ``A1``
    the root is ``sqrt(A1) s + sgn(C) sqrt(A2)``, for ``A2`` it is
    ``sqrt(A2) s + sgn(C) sqrt(A1)``.  The physical row is the ``-`` root
    at ``k = L - A2``.
    """
    M, L = m * m + B, l * (l + 1.0)
    A2 = 0.5 * (M + math.sqrt(M * M - C * C))
    A1 = 0.5 * (M - math.sqrt(M * M - C * C))
    r1, r2 = math.sqrt(A1), math.sqrt(A2)
    sg = 1.0 if C >= 0.0 else -1.0
    k1, k2 = L - A1, L - A2
    rows = [
        _row(1, "+", k1, (sg * r2, r1), (0.0, -2.0)),
        _row(1, "-", k1, (-sg * r2, -r1), (0.0, -2.0)),
        _row(2, "+", k2, (sg * r1, r2), (0.0, -2.0)),
        _row(2, "-", k2, (-sg * r1, -r2), (0.0, -2.0)),
    ]
    args = [
        "trace", "--system", "coulomb-ring", "--Z", "1", "--B", repr(B), "--C", repr(C),
        "--m", str(m), "--part", "angular", "--l", repr(l),
    ]
    return {"args": args, "k_candidates": [k1, k2], "rows": rows, "selected": [2, "-"]}


def ab_angular(q, mt, l):
    """``sigma~ = -(q^2 + L) s^2 - 2 q mt s + L - mt^2``.

    ``k = L - a`` with ``a in {0, mt^2 - q^2}``; the roots are
    ``|q| s + sgn(q mt) |mt|`` and ``|mt| s + sgn(q mt) |q|``.  For
    ``|mt| > |q|`` the physical row is the ``-`` root at ``k = L - mt^2 + q^2``.
    """
    L = l * (l + 1.0)
    sg = 1.0 if q * mt > 0.0 else -1.0
    k1, k2 = L, L - mt * mt + q * q
    rows = [
        _row(1, "+", k1, (sg * abs(mt), abs(q)), (0.0, -2.0)),
        _row(1, "-", k1, (-sg * abs(mt), -abs(q)), (0.0, -2.0)),
        _row(2, "+", k2, (sg * abs(q), abs(mt)), (0.0, -2.0)),
        _row(2, "-", k2, (-sg * abs(q), -abs(mt)), (0.0, -2.0)),
    ]
    args = [
        "trace", "--system", "ab-monopole", "--Z", "1", "--q", repr(q), "--m-tilde", repr(mt),
        "--part", "angular", "--l", repr(l),
    ]
    return {"args": args, "k_candidates": [k1, k2], "rows": rows, "selected": [2, "-"]}


def oscillator_radial(A, l, n):
    """``s = r^2``: ``sigma = 2s, tau~ = 1, sigma~ = -alpha^2 s^2 + eps^2 s - l(l+1)``.

    ``k = eps^2/2 +- alpha (l + 1/2)``; the roots are ``alpha s +- (l + 1/2)``
    and ``pi = 1/2 +- root``.  The physical row is ``pi = -alpha s + l + 1``.
    """
    alpha = math.sqrt(2.0) * A
    E = math.sqrt(0.5) * (4 * n + 2 * l + 3) * A
    eps_sq = 2.0 * E
    k1, k2 = 0.5 * eps_sq + alpha * (l + 0.5), 0.5 * eps_sq - alpha * (l + 0.5)
    rows = [
        _row(1, "+", k1, (l + 1.0, alpha), (1.0, 0.0)),
        _row(1, "-", k1, (-l, -alpha), (1.0, 0.0)),
        _row(2, "+", k2, (-l, alpha), (1.0, 0.0)),
        _row(2, "-", k2, (l + 1.0, -alpha), (1.0, 0.0)),
    ]
    args = ["trace", "--system", "oscillator", "--A", repr(A), "--part", "radial", "--l", repr(l), "--E", repr(E)]
    return {"args": args, "k_candidates": [k1, k2], "rows": rows, "selected": [2, "-"]}


CASES = {
    "coulomb_radial": [coulomb_radial(1.0, 0.0, 1), coulomb_radial(1.0, math.sqrt(2.0), 1 + math.sqrt(2.0)), coulomb_radial(2.0, 1.0, 3)],
    "coulomb_angular": [
        coulomb_angular(1, 0.0, 0.0, 1.0),
        coulomb_angular(1, 1.0, 1.0, math.sqrt((2.0 + math.sqrt(3.0)) / 2.0)),
        coulomb_angular(2, 0.5, -3.0, 2.7),
    ],
    "ab_angular": [ab_angular(0.5, 1.0, -0.5 + math.sqrt(2.0)), ab_angular(-0.3, 1.7, 2.2)],
    "oscillator_radial": [oscillator_radial(1.0, 0.0, 0), oscillator_radial(1.0, 1.0, 1), oscillator_radial(2.5, 1.3660254037844386, 2)],
}


def main() -> None:
    for name, cases in CASES.items():
        path = HERE / f"{name}.json"
        path.write_text(json.dumps(cases, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
