"""Derived constants of the PTAS as pure functions of (n, epsilon)."""

from __future__ import annotations

import math
from dataclasses import dataclass

MIN_PTAS_N = 16


@dataclass(frozen=True)
class PtasParams:
    n: int
    epsilon: float
    kappa: float
    sigma: float
    gamma_prime: float
    gamma: float
    delta: float
    delta_eps: float
    beta: float
    M: int
    deltas: tuple[float, ...]  # deltas[k - 1] is the bump applied after iteration k
    cheap_threshold: float
    repetitions: int
    sigma_prime: float
    alpha: float
    degree_floor: float  # n / (delta * lnln n)

    @property
    def kappa_bar(self) -> float:
        """Neighbourhood-mass floor for support agents in B."""
        n = self.n
        return self.kappa * math.sqrt(n) * math.log(2 * n * n)

    @property
    def delta_bar(self) -> float:
        return self.delta * math.log(math.log(self.n)) / self.n

    @property
    def delta_bar_eps(self) -> float:
        return self.delta_bar / self.epsilon

    def delta_k(self, k: int) -> float:
        """Delta_k for 1 <= k <= M; Delta_0 is the cheap threshold."""
        return self.cheap_threshold if k == 0 else self.deltas[k - 1]


def repetition_count(n: int, epsilon: float) -> int:
    """Smallest R with (sqrt(eps) + 1/n)^R <= 1/n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    base = math.sqrt(epsilon) + 1.0 / n
    if base >= 1.0:
        raise ValueError(f"sqrt(epsilon) + 1/n = {base:.4g} >= 1; no repetition count exists")
    R = math.ceil(math.log(n) / -math.log(base))
    # guard against log rounding right at an integer ratio
    while base ** R > 1.0 / n:
        R += 1
    while R > 1 and base ** (R - 1) <= 1.0 / n:
        R -= 1
    return max(R, 1)


def _default_delta(eps: float) -> float:
    return 36 * math.e / ((1 - eps) ** 2 * eps**5 * math.log(2))


def _default_gamma(eps: float) -> float:
    return (1 - eps) * eps**4 / 36


def compute_M(n: int, eps: float, gamma: float) -> int:
    arg = max(math.e**2, gamma * (n + 6 / eps))
    return max(1, math.ceil(math.log2(math.log(arg))))


def compute_deltas(n: int, eps: float, beta: float, M: int) -> tuple[float, ...]:
    out = []
    for k in range(1, M + 1):
        a = 1 - 2.0**-k
        num = eps ** (2 - 2.0**-k) * beta**a
        den = M ** (2 - 2.0 ** -(k - 1)) * n ** (2 - 2.0**-k)
        out.append(num / den)
    return tuple(out)


def derive_params(
    n: int,
    epsilon: float,
    *,
    gamma: float | None = None,
    kappa: float | None = None,
    delta: float | None = None,
    strict: bool = True,
) -> PtasParams:
    """All PTAS constants.  ``gamma``, ``kappa`` and ``delta`` may be overridden.

    ``strict=False`` admits 3 <= n < 16 so that small hand fixtures can drive
    the peeling code; the lnln-based quantities are then meaningless.
    """
    if not 0 < epsilon <= 0.25:
        raise ValueError(f"epsilon must lie in (0, 1/4], got {epsilon}")
    min_n = MIN_PTAS_N if strict else 3
    if n < min_n:
        raise ValueError(f"n must be >= {min_n}, got {n}")
    eps = float(epsilon)
    delta = _default_delta(eps) if delta is None else delta
    gamma = _default_gamma(eps) if gamma is None else gamma
    kappa = 4 / eps**2 if kappa is None else kappa
    beta = gamma * (n * n + (6 / eps) * n)
    M = compute_M(n, eps, gamma)
    try:
        R = repetition_count(n, eps)
    except ValueError:
        if strict:
            raise
        R = 1
    return PtasParams(
        n=n,
        epsilon=eps,
        kappa=kappa,
        sigma=eps**6,
        gamma_prime=eps / 6,
        gamma=gamma,
        delta=delta,
        delta_eps=delta / eps,
        beta=beta,
        M=M,
        deltas=compute_deltas(n, eps, beta, M),
        cheap_threshold=eps / (2 * n),
        repetitions=R,
        sigma_prime=eps * (1 + eps) * eps**6 / 9,
        alpha=36 * math.e / ((1 - eps) ** 2 * eps**6 * math.log(2)),
        degree_floor=n / (delta * math.log(math.log(n))),
    )
