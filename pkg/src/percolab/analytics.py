"""Closed-form predictions and exact combinatorial oracles.

Critical probabilities on Z_m^d x K_n and Z_m x K_n^2, single-plane
probabilities, the run-free probability of a Bernoulli sequence, binomial
tail bounds, and the k-coincidence birthday problem (exact big-integer
coefficient, leading-order asymptotic, and saddle-point estimate).

Every asymptotic formula returns a Prediction whose ``note`` restates the
regime in which it is meant to be used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2

from percolab.errors import BoundaryError, BudgetError, DomainError, ParameterError

# relative tolerance for "exactly on a boundary" tests
BOUNDARY_RTOL = 1e-12


def ell_of(theta: int) -> int:
    """ell = ceil((theta - 1) / 2)."""
    if theta < 2:
        raise ParameterError("theta must be at least 2")
    return theta // 2


@dataclass(frozen=True)
class TheoryParams:
    theta: int
    gamma: Optional[float] = None
    a: Optional[float] = None
    n: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self):
        ell_of(self.theta)
        if self.gamma is not None and self.gamma <= 0:
            raise ParameterError("gamma must be positive")
        if self.a is not None and self.a <= 0:
            raise ParameterError("a must be positive")

    @property
    def ell(self) -> int:
        return ell_of(self.theta)

    def effective_gamma(self) -> float:
        """gamma if given, else log m / log n."""
        if self.gamma is not None:
            return self.gamma
        if self.m is None or self.n is None:
            raise ParameterError("need gamma, or both m and n")
        return math.log(self.m) / math.log(self.n)

    def gamma_consistent(self, tol: float = 0.25) -> bool:
        """Whether a supplied gamma is within ``tol`` of log m / log n."""
        if self.gamma is None or self.m is None or self.n is None:
            return True
        return abs(self.gamma - math.log(self.m) / math.log(self.n)) <= tol


@dataclass(frozen=True)
class Prediction:
    value: float
    regime: str
    note: str
    constant: Optional[float] = None
    transition: Optional[str] = None
    valid: bool = True

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "regime": self.regime,
            "note": self.note,
            "constant": self.constant,
            "transition": self.transition,
            "valid": self.valid,
        }


# ---------------------------------------------------------------------------
# p forms


def p_critical_form(a: float, ell: int, n: int) -> float:
    """p = a (log n)^(1/ell) / n^(1 + 1/ell)."""
    return a * math.log(n) ** (1.0 / ell) / n ** (1.0 + 1.0 / ell)


def p_gradual_form(a: float, ell: int, n: int, m: int) -> float:
    """p = a / (n^(1 + 1/(ell+1)) m^(1/(ell+1)))."""
    e = 1.0 / (ell + 1)
    return a / (n ** (1.0 + e) * m**e)


# ---------------------------------------------------------------------------
# critical probabilities


def iterated_log(x: float, k: int) -> float:
    """log applied k times; every iterate must stay positive."""
    if k < 1:
        raise ParameterError("iteration count must be at least 1")
    y = float(x)
    for i in range(k):
        if y <= 0:
            raise DomainError(f"iterate {i} of log is {y}, not positive")
        y = math.log(y)
        if y <= 0:
            raise DomainError(f"log iterated {i + 1} times at {x} is {y}, not positive")
    return y


def pc_cycle_complete(d: int, theta: int, m: int, n: int, lam: Optional[float] = None) -> Prediction:
    """Critical probability on Z_m^d x K_n."""
    if theta < 2:
        raise ParameterError("theta must be at least 2")
    if d < 1:
        raise ParameterError("d must be at least 1")
    if theta <= d:
        if lam is None:
            raise ParameterError("theta <= d needs the lattice scaling constant lambda")
        if lam <= 0:
            raise ParameterError("lambda must be positive")
        base = lam / iterated_log(m, theta - 1)
        return Prediction(
            base ** (d - theta + 1) / n,
            "lattice-low",
            "asymptotic as m, n grow; lambda is user supplied",
            constant=lam,
            transition="sharp",
        )
    c = d / 2 ** max(2 * d + 1 - theta, 0)
    return Prediction(
        c * math.log(m) / n,
        "lattice-high",
        "asymptotic as m, n grow with theta > d",
        constant=c,
        transition="sharp",
    )


def _on_boundary(x: float, y: float) -> bool:
    return abs(x - y) <= BOUNDARY_RTOL * max(abs(x), abs(y))


def pc_zk2(theta: int, gamma: float, n: int, m: Optional[int] = None) -> Prediction:
    """Critical probability on Z_m x K_n^2 with log m ~ gamma log n.

    The gradual branch uses ``m`` if given, else n**gamma.
    """
    ell = ell_of(theta)
    if gamma <= 0:
        raise ParameterError("gamma must be positive")
    logn = math.log(n)
    if theta == 2:
        c = 0.5 * gamma
        return Prediction(c * logn / n**2, "theta2", "requires log m ~ gamma log n",
                          constant=c, transition="sharp")
    if theta % 2 == 0:
        c = (0.25 * gamma * math.factorial(ell)) ** (1.0 / ell)
        return Prediction(c * logn ** (1.0 / ell) / n ** (1.0 + 1.0 / ell), "even",
                          "requires log m ~ gamma log n", constant=c, transition="sharp")
    if _on_boundary(gamma, 1.0 / ell):
        raise BoundaryError(
            f"gamma = 1/ell = {1.0 / ell} is the sharp/gradual boundary; use mixed_limit instead"
        )
    if gamma > 1.0 / ell:
        c = (0.5 * (gamma + 1.0 / ell) * math.factorial(ell)) ** (1.0 / ell)
        return Prediction(c * logn ** (1.0 / ell) / n ** (1.0 + 1.0 / ell), "sharp-odd",
                          f"requires gamma > 1/ell = {1.0 / ell}", constant=c, transition="sharp")
    c = (0.5 * math.factorial(ell + 1) * math.log(2)) ** (1.0 / (ell + 1))
    mm = n**gamma if m is None else m
    return Prediction(p_gradual_form(c, ell, n, mm), "gradual-odd",
                      f"requires gamma < 1/ell = {1.0 / ell}", constant=c, transition="gradual")


def gradual_limit_phi(a: float, ell: int) -> float:
    """Limiting spanning probability 1 - exp(-2 a^(ell+1) / (ell+1)!)."""
    if a < 0:
        raise ParameterError("a must be nonnegative")
    return -math.expm1(-2.0 * a ** (ell + 1) / math.factorial(ell + 1))


def abundance_threshold(ell: int) -> float:
    """a* = (ell!/ell)^(1/ell): final set scarce below, abundant above."""
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    return (math.factorial(ell) / ell) ** (1.0 / ell)


def mixed_limit(a: float, ell: int) -> float:
    """Limiting spanning probability on the boundary scaling of m."""
    a_star = abundance_threshold(ell)
    if _on_boundary(a, a_star):
        raise BoundaryError(f"a = a* = {a_star}: the limit is not determined there")
    return 0.0 if a < a_star else gradual_limit_phi(a, ell)


def boundary_m(n: float, ell: int) -> int:
    """Nearest integer (at least 1) to n^(1/ell) / (log n)^(1 + 1/ell)."""
    if n < 3:
        raise ParameterError("n must be at least 3")
    return max(1, round(n ** (1.0 / ell) / math.log(n) ** (1.0 + 1.0 / ell)))


PLANE_KINDS = (
    "not_viable",
    "not_odd_IS",
    "not_even_IS",
    "above_IS",
    "gradual_IS",
    "theta2_not_IS",
    "theta3_IS",
)


def plane_probability(kind: str, theta: int, a: float, n: int, m: Optional[int] = None) -> Prediction:
    """Asymptotic probability of a single-plane event.

    ``theta`` is the global threshold and ell = ceil((theta-1)/2); p has the
    critical form a (log n)^(1/ell)/n^(1+1/ell), except for ``gradual_IS``
    which uses the gradual form with m planes.

    kinds:
      not_viable     plane is not ell-viable                   (ell >= 2)
      not_odd_IS     plane is not (2 ell - 1)-IS               (ell >= 2)
      not_even_IS    plane is not (2 ell)-IS                   (ell >= 2)
      above_IS       plane is (2 ell + 1)-IS                   (ell >= 1)
      gradual_IS     plane is (2 ell + 1)-IS, gradual p form   (needs m)
      theta2_not_IS  plane is not 2-IS                         (theta = 2)
      theta3_IS      plane is 3-IS                             (theta = 3)
    """
    ell = ell_of(theta)
    if a <= 0:
        raise ParameterError("a must be positive")
    logn = math.log(n)
    x = a**ell / math.factorial(ell)
    if kind in ("not_viable", "not_odd_IS", "not_even_IS"):
        if ell < 2:
            raise ParameterError(f"{kind} needs ell >= 2 (theta >= 4)")
        if kind == "not_even_IS":
            return Prediction(2.0 * n ** (-x), kind, "critical p form, ell >= 2")
        return Prediction(n ** (-2.0 * x), kind, "critical p form, ell >= 2")
    if kind == "above_IS":
        c = 2.0 * a ** (ell + 1) / math.factorial(ell + 1)
        return Prediction(c * logn ** (1.0 + 1.0 / ell) / n ** (1.0 / ell), kind,
                          "critical p form, ell >= 1", constant=c)
    if kind == "gradual_IS":
        if m is None:
            raise ParameterError("gradual_IS needs m")
        c = 2.0 * a ** (ell + 1) / math.factorial(ell + 1)
        return Prediction(c / m, kind, "gradual p form, gamma < 1/ell", constant=c)
    if kind == "theta2_not_IS":
        if theta != 2:
            raise ParameterError("theta2_not_IS needs theta = 2")
        return Prediction(a * logn / n**a, kind, "p = a log n / n^2")
    if kind == "theta3_IS":
        if theta != 3:
            raise ParameterError("theta3_IS needs theta = 3")
        return Prediction(a**2 * logn**2 / n, kind, "p = a log n / n^2")
    raise ParameterError(f"unknown kind {kind!r}; choose from {PLANE_KINDS}")


# ---------------------------------------------------------------------------
# small probability tools


def no_double_ones_exact(k: int, r: float) -> float:
    """P(no two consecutive 1s among k independent Bernoulli(r) variables)."""
    if k < 0:
        raise ParameterError("k must be nonnegative")
    if not 0.0 <= r <= 1.0:
        raise ParameterError("r must lie in [0,1]")
    if k <= 1:
        return 1.0
    if r == 1.0:
        return 0.0
    s = math.sqrt((1.0 - r) * (1.0 + 3.0 * r))
    v = (1 + r + s) / (2 * s) * ((1 - r + s) / 2) ** k - (1 + r - s) / (2 * s) * ((1 - r - s) / 2) ** k
    return min(1.0, max(0.0, v))


def no_double_ones_approx(k: int, r: float) -> float:
    return math.exp(-k * r * r)


def binomial_tail_bounds(n: int, p: float, eps: float) -> tuple[float, float]:
    """Chernoff bounds on P(X <= (1-eps)np) and P(X >= (1+eps)np) for X ~ Bin(n, p)."""
    if not (0 < p < 1 and 0 < eps < 1):
        raise ParameterError("p and eps must lie in (0,1)")
    mu = n * p
    return math.exp(-mu * eps * eps / 2), math.exp(-mu * eps * eps / 3)


# ---------------------------------------------------------------------------
# birthday problem

# packed big-integer budget (bits) for one operand of the coefficient power
BIRTHDAY_BIT_BUDGET = 1 << 31


def _truncated_power(coeffs: list[int], e: int, deg: int, slot_bytes: int) -> list[int]:
    """Coefficients 0..deg of (sum coeffs[i] z^i)^e by Kronecker-packed squaring."""
    shift = 8 * slot_bytes

    def pack(poly):
        x = gmpy2.mpz(0)
        for c in reversed(poly):
            x = (x << shift) | c
        return x

    def unpack(x):
        raw = int(x).to_bytes(((int(x).bit_length() + 7) // 8) or 1, "little")
        out = []
        for i in range(deg + 1):
            chunk = raw[i * slot_bytes:(i + 1) * slot_bytes]
            if not chunk:
                break
            out.append(int.from_bytes(chunk, "little"))
        return out

    def mul(p, q):
        return unpack(pack(p) * pack(q))

    result = [1]
    base = list(coeffs[: deg + 1])
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result + [0] * (deg + 1 - len(result))


def ek_power_coefficient(k: int, n: int, m: int, bit_budget: int = BIRTHDAY_BIT_BUDGET) -> Fraction:
    """Exact [z^m] e_k(z)^n with e_k(z) = sum_{i<k} z^i / i!."""
    if k < 2:
        raise ParameterError("k must be at least 2")
    if n < 1 or m < 0:
        raise ParameterError("need n >= 1 and m >= 0")
    if m > n * (k - 1):
        return Fraction(0)
    dk = math.factorial(k - 1)
    coeffs = [dk // math.factorial(i) for i in range(k)]
    # every coefficient of a truncated power is at most R(1)^n
    slot_bits = n * math.log2(sum(coeffs)) + 2
    slot_bytes = int(slot_bits) // 8 + 1
    if 8 * slot_bytes * (m + 1) > bit_budget:
        raise BudgetError(
            f"exact coefficient needs about {8 * slot_bytes * (m + 1)} bits per operand, "
            f"budget is {bit_budget}"
        )
    c = _truncated_power(coeffs, n, m, slot_bytes)[m]
    return Fraction(c, dk**n)


def birthday_exact(n_days: int, m_people: int, k: int, bit_budget: int = BIRTHDAY_BIT_BUDGET) -> Fraction:
    """Exact probability that no day receives k or more of m uniform birthdays."""
    if n_days < 1 or m_people < 0:
        raise ParameterError("need n_days >= 1 and m_people >= 0")
    if k < 2:
        raise ParameterError("k must be at least 2")
    if m_people < k:
        return Fraction(1)
    coef = ek_power_coefficient(k, n_days, m_people, bit_budget)
    count = coef * math.factorial(m_people)
    if count.denominator != 1:
        raise ArithmeticError("function count is not an integer")
    return Fraction(count.numerator, n_days**m_people)


def birthday_asymptotic(n_days: int, m_people: int, k: int, regime_tol: float = 0.1) -> Prediction:
    """exp(-m^k / (k! n^(k-1))); ``valid`` is False when m^(k+1)/n^k exceeds ``regime_tol``."""
    if k < 2:
        raise ParameterError("k must be at least 2")
    n, m = float(n_days), float(m_people)
    value = math.exp(-(m**k) / (math.factorial(k) * n ** (k - 1)))
    ratio = m ** (k + 1) / n**k
    ok = ratio <= regime_tol
    note = f"requires m^(k+1) << n^k; here m^(k+1)/n^k = {ratio:.3g}"
    return Prediction(value, "birthday", note, valid=ok)


def _ek(k: int, z: float) -> tuple[float, float]:
    """e_k(z) and z e_k'(z)."""
    term, f, zf = 1.0, 1.0, 0.0
    for i in range(1, k):
        term *= z / i
        f += term
        zf += i * term
    return f, zf


def gardy_rho(k: int, m: int, n: int, tol: float = 1e-13) -> float:
    """Positive root of rho e_k'(rho) / e_k(rho) = m/n."""
    if k < 2:
        raise ParameterError("k must be at least 2")
    if m < 1 or n < 1:
        raise ParameterError("need m, n >= 1")
    t = m / n
    if not t < k - 1:
        raise DomainError(f"m/n = {t} must be below k - 1 = {k - 1}")

    def g(z):
        f, zf = _ek(k, z)
        return zf / f - t

    lo, hi = 0.0, 1.0
    while g(hi) <= 0:
        lo, hi = hi, 2 * hi
        if hi > 1e300:
            raise DomainError("no root found in bracket")
    rho = 0.5 * (lo + hi)
    for _ in range(200):
        f, zf = _ek(k, rho)
        val = zf / f - t
        if abs(val) < tol:
            return rho
        if val > 0:
            hi = rho
        else:
            lo = rho
        # d/dz (z f'/f) = (f' + z f'') / f - z f'^2 / f^2, with z f'' from sum i(i-1) z^i / i!
        term, z2f2 = 1.0, 0.0
        for i in range(1, k):
            term *= rho / i
            z2f2 += i * (i - 1) * term
        deriv = (zf + z2f2) / (rho * f) - zf * zf / (rho * f * f)
        step = rho - val / deriv if deriv > 0 else None
        rho = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    return rho


def gardy_residual(k: int, m: int, n: int, rho: float) -> float:
    f, zf = _ek(k, rho)
    return abs(zf / f - m / n)


def gardy_log_coefficient(k: int, m: int, n: int) -> float:
    """log of the saddle-point estimate f(rho)^n / (rho^m sqrt(2 pi m))."""
    rho = gardy_rho(k, m, n)
    f, _ = _ek(k, rho)
    return n * math.log(f) - m * math.log(rho) - 0.5 * math.log(2 * math.pi * m)


def gardy_coefficient_asymptotic(k: int, m: int, n: int) -> float:
    """Saddle-point estimate of [z^m] e_k(z)^n (may overflow to inf for huge inputs)."""
    lc = gardy_log_coefficient(k, m, n)
    return math.exp(lc) if lc < 709 else math.inf
