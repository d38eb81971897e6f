"""Continuous time-causal kernels: truncated exponentials and their cascades.

A cascade of K truncated exponentials with time constants ``mu_k`` has the
Laplace transform ``prod 1/(1 + mu_k q)``.  In the time domain it is
evaluated in closed form:

* all time constants equal: ``t**(K-1) exp(-t/mu) / (mu**K (K-1)!)``
* all distinct: ``sum_k B_k exp(-t/mu_k)`` with
  ``B_k = mu_k**(K-2) / prod_{j != k} (mu_k - mu_j)``
* otherwise poles are grouped by multiplicity and expanded with the
  repeated-pole partial fraction formula.
"""
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .errors import InvalidParameterError, NumericInstabilityError, PoleEvaluationError

ALL_EQUAL = "all_equal"
ALL_DISTINCT = "all_distinct"
MIXED = "mixed"

# Time constants closer than this (relative) are treated as one repeated pole.
GROUP_RTOL = 1e-6
# Forcing the distinct-pole expansion below this gap is refused outright.
DISTINCT_MIN_RTOL = 1e-9


def _as_mu(mu) -> np.ndarray:
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if mu.ndim != 1 or mu.size == 0:
        raise InvalidParameterError("time constants must be a non-empty 1-D list")
    if not np.all(mu > 0):
        raise InvalidParameterError(f"time constants must be > 0, got {mu}")
    return mu


def eval_trunc_exp(t, mu: float):
    """Truncated exponential ``exp(-t/mu)/mu`` for ``t >= 0``, zero before."""
    if not mu > 0:
        raise InvalidParameterError(f"mu must be > 0, got {mu}")
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 0, np.exp(-np.maximum(t, 0.0) / mu) / mu, 0.0)
    return out if out.ndim else float(out)


def laplace_cascade(q: complex, mu) -> complex:
    mu = _as_mu(mu)
    gain = 1.0 + 0.0j
    for m in mu:
        d = 1.0 + m * q
        if abs(d) < 1e-14:
            raise PoleEvaluationError(f"q={q} is a pole (mu={m})")
        gain /= d
    return gain


def cascade_mean_variance(mu) -> tuple[float, float]:
    mu = _as_mu(mu)
    return float(np.sum(mu)), float(np.sum(mu * mu))


def _group_poles(mu: np.ndarray) -> list[tuple[float, int]]:
    """Cluster sorted time constants into (representative, multiplicity)."""
    srt = np.sort(mu)
    groups = [[srt[0]]]
    for m in srt[1:]:
        if m - groups[-1][-1] <= GROUP_RTOL * m:
            groups[-1].append(m)
        else:
            groups.append([m])
    return [(float(np.mean(g)), len(g)) for g in groups]


def classify(mu) -> str:
    groups = _group_poles(_as_mu(mu))
    if len(groups) == 1:
        return ALL_EQUAL
    if all(n == 1 for _, n in groups):
        return ALL_DISTINCT
    return MIXED


def _distinct_terms(mu: np.ndarray) -> list[tuple[float, list[float]]]:
    srt = np.sort(mu)
    if srt.size > 1 and np.min(np.diff(srt) / srt[1:]) < DISTINCT_MIN_RTOL:
        raise NumericInstabilityError(
            "time constants too close for the distinct-pole expansion; "
            "use the mixed evaluation")
    K = mu.size
    terms = []
    for k, mk in enumerate(mu):
        denom = np.prod([mk - mj for j, mj in enumerate(mu) if j != k])
        terms.append((1.0 / mk, [mk ** (K - 2) / denom]))
    return terms


def _repeated_pole_terms(mu: np.ndarray) -> list[tuple[float, list[float]]]:
    # F(q) = C / prod_g (q + lam_g)**m_g ; the coefficient of 1/(q + lam_g)**j
    # is G_g^(m_g - j)(-lam_g) / (m_g - j)! where G_g drops the g-th factor.
    groups = _group_poles(mu)
    lam = [1.0 / m for m, _ in groups]
    mult = [n for _, n in groups]
    C = float(np.prod([lg ** n for lg, n in zip(lam, mult)]))
    terms = []
    for g, (lg, mg) in enumerate(zip(lam, mult)):
        q = -lg
        others = [(lam[h], mult[h]) for h in range(len(lam)) if h != g]

        def dlog(r, q=q, others=others):
            # r-th derivative of G'/G = -sum m_h/(q + lam_h)
            return sum(-n * (-1) ** r * factorial(r) / (q + lh) ** (r + 1)
                       for lh, n in others)

        derivs = [C / float(np.prod([(q + lh) ** n for lh, n in others]))]
        for n in range(mg - 1):
            derivs.append(sum(comb(n, i) * derivs[i] * dlog(n - i)
                              for i in range(n + 1)))
        coeffs = [derivs[mg - j] / factorial(mg - j) for j in range(1, mg + 1)]
        terms.append((lg, coeffs))
    return terms


def _poly_exp_derivative(t: np.ndarray, a: int, lam: float, order: int) -> np.ndarray:
    """``d^order/dt^order [t**a exp(-lam t)]`` for t >= 0."""
    e = np.exp(-lam * t)
    out = np.zeros_like(t)
    # Leibniz rule: sum_i C(order, i) (t**a)^(i) (e)^(order - i)
    for i in range(order + 1):
        if i > a:
            break
        falling = factorial(a) / factorial(a - i)
        out += comb(order, i) * falling * t ** (a - i) * (-lam) ** (order - i)
    return out * e


@dataclass
class KernelCascade:
    """Composed kernel of K truncated exponentials coupled in cascade.

    ``method`` is ``"auto"`` (route by :func:`classify`) or one of
    ``"all_equal"``, ``"all_distinct"``, ``"mixed"`` to force a branch.
    """

    mu: np.ndarray
    method: str = "auto"
    classification: str = field(init=False)

    def __post_init__(self):
        self.mu = _as_mu(self.mu)
        self.classification = classify(self.mu)
        route = self.classification if self.method == "auto" else self.method
        if route == ALL_EQUAL:
            m = float(np.mean(self.mu))
            K = self.mu.size
            self._terms = [(1.0 / m, [0.0] * (K - 1) + [m ** -K])]
        elif route == ALL_DISTINCT:
            self._terms = _distinct_terms(self.mu)
        elif route == MIXED:
            self._terms = _repeated_pole_terms(self.mu)
        else:
            raise InvalidParameterError(f"unknown evaluation method {self.method!r}")
        self.route = route

    @property
    def K(self) -> int:
        return self.mu.size

    def mean_variance(self) -> tuple[float, float]:
        return cascade_mean_variance(self.mu)

    def derivative(self, t, order: int = 0):
        if order not in (0, 1, 2):
            raise InvalidParameterError(f"derivative order must be 0, 1 or 2, got {order}")
        t = np.asarray(t, dtype=float)
        tc = np.maximum(t, 0.0)
        total = np.zeros_like(tc)
        for lam, coeffs in self._terms:
            for j, cj in enumerate(coeffs, start=1):
                if cj != 0.0:
                    total += cj / factorial(j - 1) * _poly_exp_derivative(tc, j - 1, lam, order)
        out = np.where(t >= 0, total, 0.0)
        return out if out.ndim else float(out)

    def __call__(self, t):
        return self.derivative(t, 0)


def eval_cascade(t, mu, method: str = "auto"):
    return KernelCascade(mu, method)(t)


def eval_cascade_derivative(t, mu, order: int, method: str = "auto"):
    if order not in (1, 2):
        raise InvalidParameterError(f"derivative order must be 1 or 2, got {order}")
    return KernelCascade(mu, method).derivative(t, order)
