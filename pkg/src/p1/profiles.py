"""
Radial profiles of rotation-invariant Green functions on P¹

Every divisor handled here is (c₀C₀ + c∞C∞, g) with g(z) depending on t = log|z| only.
We store G(t) = g + 2c₀t, which is continuous on ℝ, as a finite sum of

    kink terms    w · 2·max(u + p·t, v + q·t)
    smooth terms  w · log(e^{2t} + λ)

G has slope 0 at t → −∞ and slope 2(c₀ + c∞) at t → +∞. Degrees on C₀ / C∞, curvature
measures, monomial sup norms and toric volumes are all read off G.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from src.errors import QuadratureDivergence, UnsupportedFamily

logger = logging.getLogger(__name__)

SLOPE_TOLERANCE = 1e-9
EXPONENT_SLACK = 1e-9


@dataclass(frozen=True)
class Kink:
    u: float
    p: float
    v: float
    q: float
    weight: float = 1.0

    @property
    def breakpoint(self) -> Optional[float]:
        if self.p == self.q:
            return None
        return (self.v - self.u) / (self.p - self.q)

    @property
    def mass(self) -> float:
        return self.weight * abs(self.p - self.q)

    def left_line(self) -> Tuple[float, float]:
        """(intercept, slope) of the branch dominating at t → −∞"""
        if self.p < self.q:
            return self.u, self.p
        if self.q < self.p:
            return self.v, self.q
        return max(self.u, self.v), self.p

    def right_line(self) -> Tuple[float, float]:
        if self.p > self.q:
            return self.u, self.p
        if self.q > self.p:
            return self.v, self.q
        return max(self.u, self.v), self.p


@dataclass(frozen=True)
class SmoothTerm:
    lam: float
    weight: float = 1.0

    def density(self, t):
        """Curvature density in t: w·2λe^{2t}/(e^{2t} + λ)²"""
        log_density = math.log(2 * self.lam) + 2 * t - 2 * np.logaddexp(2 * t, math.log(self.lam))
        return self.weight * np.exp(log_density)


@dataclass(frozen=True)
class RadialProfile:
    c0: float
    cinf: float
    kinks: Tuple[Kink, ...] = ()
    smooth: Tuple[SmoothTerm, ...] = ()

    # ---- algebra ---------------------------------------------------------

    def scaled(self, t: float) -> "RadialProfile":
        return RadialProfile(
            c0=t * self.c0,
            cinf=t * self.cinf,
            kinks=tuple(Kink(k.u, k.p, k.v, k.q, t * k.weight) for k in self.kinks if t * k.weight != 0),
            smooth=tuple(SmoothTerm(s.lam, t * s.weight) for s in self.smooth if t * s.weight != 0),
        )

    def shifted(self, k: float) -> "RadialProfile":
        """Add k·(̂z) = k·(C₀ − C∞, −log|z|²); G is unchanged"""
        return RadialProfile(c0=self.c0 + k, cinf=self.cinf - k, kinks=self.kinks, smooth=self.smooth)

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return RadialProfile(
            c0=self.c0 + other.c0,
            cinf=self.cinf + other.cinf,
            kinks=self.kinks + other.kinks,
            smooth=self.smooth + other.smooth,
        )

    # ---- evaluation ------------------------------------------------------

    def G(self, t):
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for k in self.kinks:
            total = total + k.weight * 2.0 * np.maximum(k.u + k.p * t, k.v + k.q * t)
        for s in self.smooth:
            total = total + s.weight * np.logaddexp(2.0 * t, math.log(s.lam))
        return total if total.ndim else float(total)

    def green(self, t):
        """g(t) = −2c₀t + G(t)"""
        t = np.asarray(t, dtype=float)
        value = -2.0 * self.c0 * t + np.asarray(self.G(t))
        return value if value.ndim else float(value)

    @property
    def left_slope(self) -> float:
        return sum(2.0 * k.weight * k.left_line()[1] for k in self.kinks)

    @property
    def right_slope(self) -> float:
        return (sum(2.0 * k.weight * k.right_line()[1] for k in self.kinks)
                + sum(2.0 * s.weight for s in self.smooth))

    @property
    def left_intercept(self) -> float:
        """lim_{t→−∞} G(t) − left_slope·t"""
        return (sum(2.0 * k.weight * k.left_line()[0] for k in self.kinks)
                + sum(s.weight * math.log(s.lam) for s in self.smooth))

    @property
    def right_intercept(self) -> float:
        """lim_{t→+∞} G(t) − right_slope·t"""
        return sum(2.0 * k.weight * k.right_line()[0] for k in self.kinks)

    def breakpoints(self) -> List[float]:
        points = sorted({k.breakpoint for k in self.kinks if k.breakpoint is not None and k.weight != 0})
        return points

    def is_piecewise_linear(self) -> bool:
        return not self.smooth

    def validate(self, family: str = "divisor"):
        """Slopes at both ends must match the divisor coefficients"""
        scale = 1.0 + abs(self.c0) + abs(self.cinf)
        if abs(self.left_slope) > SLOPE_TOLERANCE * scale:
            raise UnsupportedFamily(family, f"Green function has slope {self.left_slope} at |z| → 0")
        if abs(self.right_slope - 2.0 * (self.c0 + self.cinf)) > SLOPE_TOLERANCE * scale:
            raise UnsupportedFamily(
                family,
                f"Green function slope {self.right_slope} at |z| → ∞ does not match 2(c0 + cinf)",
            )

    # ---- degrees and measures -------------------------------------------

    def degree_c0(self) -> float:
        return 0.5 * self.left_intercept

    def degree_cinf(self) -> float:
        return 0.5 * self.right_intercept

    def degree_point(self, m: int, n: int) -> float:
        """Degree on the closure of (m:n), n > 0, m ≠ 0"""
        t = math.log(abs(m)) - math.log(n)
        return (self.c0 + self.cinf) * math.log(n) + 0.5 * self.G(t)

    def curvature_atoms(self) -> List[Tuple[float, float]]:
        """Circle masses (t*, mass), merged by location"""
        merged = {}
        for k in self.kinks:
            t_star = k.breakpoint
            if t_star is None or k.weight == 0:
                continue
            key = round(t_star, 12)
            merged[key] = merged.get(key, 0.0) + k.mass
        return sorted(merged.items())

    def smooth_weights(self) -> List[Tuple[float, float]]:
        merged = {}
        for s in self.smooth:
            merged[s.lam] = merged.get(s.lam, 0.0) + s.weight
        return sorted(merged.items())

    def is_psh(self) -> bool:
        """Non-negative curvature measure"""
        eps = 1e-12
        return (all(m >= -eps for _, m in self.curvature_atoms())
                and all(w >= -eps for _, w in self.smooth_weights()))

    def inf_green(self) -> float:
        """Infimum of g over ℝ (limits at ±∞ included)"""
        candidates = []
        if abs(self.c0) <= SLOPE_TOLERANCE:
            candidates.append(self.left_intercept)
        elif self.c0 < 0:
            return -math.inf
        if abs(self.cinf) <= SLOPE_TOLERANCE:
            candidates.append(self.right_intercept)
        elif self.cinf < 0:
            return -math.inf
        points = self.breakpoints()
        candidates.extend(float(self.green(t)) for t in points)
        if self.smooth:
            lo, hi = self.search_window()
            res = optimize.minimize_scalar(lambda t: float(self.green(t)), bounds=(lo, hi),
                                           method="bounded", options={"xatol": 1e-10})
            candidates.append(float(res.fun))
            candidates.extend([float(self.green(lo)), float(self.green(hi))])
        if not candidates:
            candidates.append(float(self.green(0.0)))
        return min(candidates)

    def search_window(self, margin: float = 40.0) -> Tuple[float, float]:
        points = self.breakpoints() + [0.5 * math.log(s.lam) for s in self.smooth]
        if not points:
            return -margin, margin
        return min(points) - margin, max(points) + margin

    # ---- monomial norms --------------------------------------------------

    def exponent_range(self, n: int) -> Tuple[int, int]:
        """Integer exponents i of z^{−i} spanning H⁰(nD): −n·c∞ ≤ i ≤ n·c₀"""
        lo = math.ceil(-n * self.cinf - EXPONENT_SLACK)
        hi = math.floor(n * self.c0 + EXPONENT_SLACK)
        return lo, hi

    def monomial_log(self, i: float, n: float, t):
        """ℓ_i(t) = (n·c₀ − i)·t − n·G(t)/2, the log of |z^{−i}|_{ng} on |z| = e^t"""
        t = np.asarray(t, dtype=float)
        value = (n * self.c0 - i) * t - 0.5 * n * np.asarray(self.G(t))
        return value if value.ndim else float(value)

    def monomial_limits(self, i: float, n: float) -> Tuple[Optional[float], Optional[float]]:
        """Limits of ℓ_i at t → −∞ and t → +∞ when the slope there vanishes, else None"""
        left_slope = n * self.c0 - i
        right_slope = -(i + n * self.cinf)
        left = -0.5 * n * self.left_intercept if abs(left_slope) <= EXPONENT_SLACK * max(1.0, n) else None
        right = -0.5 * n * self.right_intercept if abs(right_slope) <= EXPONENT_SLACK * max(1.0, n) else None
        return left, right

    def monomial_argmax(self, i: float, n: float) -> Optional[float]:
        """A maximizer of ℓ_i in ℝ (None if the sup is only approached at infinity)"""
        if self.is_piecewise_linear():
            points = self.breakpoints()
            if not points:
                return None
            values = [self.monomial_log(i, n, t) for t in points]
            return points[int(np.argmax(values))]
        lo, hi = self.search_window()
        res = optimize.minimize_scalar(lambda t: -self.monomial_log(i, n, t), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-12})
        return float(res.x)

    def monomial_log_norm(self, i: float, n: float) -> float:
        """
        log ‖z^{−i}‖_{ng} = sup_t ℓ_i(t)

        Piecewise-linear G: the sup of a concave piecewise-linear function sits at a
        breakpoint or at an end with zero slope. A single smooth term has a closed-form
        stationary point. Mixed profiles use bounded scalar maximization.
        """
        left_slope = n * self.c0 - i
        right_slope = -(i + n * self.cinf)
        slack = EXPONENT_SLACK * max(1.0, n)
        if left_slope < -slack or right_slope > slack:
            return math.inf

        candidates = [v for v in self.monomial_limits(i, n) if v is not None]

        if self.is_piecewise_linear():
            candidates.extend(self.monomial_log(i, n, t) for t in self.breakpoints())
            if not candidates:
                # G linear without breakpoints: ℓ_i is constant
                candidates.append(self.monomial_log(i, n, 0.0))
            return max(candidates)

        if len(self.smooth) == 1 and not self.kinks:
            term = self.smooth[0]
            w = term.weight
            rho = (n * self.c0 - i) / (n * w)
            if 0.0 < rho < 1.0:
                t = 0.5 * math.log(term.lam * rho / (1.0 - rho))
                value = (n * self.c0 - i) * t - 0.5 * n * w * (math.log(term.lam) - math.log1p(-rho))
                candidates.append(value)
            return max(candidates)

        lo, hi = self.search_window()
        res = optimize.minimize_scalar(lambda t: -self.monomial_log(i, n, t), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-12})
        candidates.extend([-float(res.fun), self.monomial_log(i, n, lo), self.monomial_log(i, n, hi)])
        return max(candidates)

    # ---- volume ----------------------------------------------------------

    def legendre_kinks(self) -> List[float]:
        """x-values where the per-unit monomial log norm ψ(x) changes slope or sign"""
        points = self.breakpoints()
        values = [float(self.G(t)) for t in points]
        xs = []
        for a in range(len(points)):
            if points[a] != 0.0:
                xs.append(self.c0 - values[a] / (2.0 * points[a]))
            for b in range(a + 1, len(points)):
                xs.append(self.c0 - (values[a] - values[b]) / (2.0 * (points[a] - points[b])))
        lo, hi = -self.cinf, self.c0
        return sorted({x for x in xs if lo < x < hi})

    def toric_volume(self, tol: float = 1e-10) -> float:
        """
        vol = 2∫ max(0, −ψ(x)) dx over [−c∞, c₀], ψ(x) = log ‖z^{−x}‖_g

        This is the limit of the log box counts over n²/2.
        """
        lo, hi = -self.cinf, self.c0
        if hi - lo <= 0:
            return 0.0

        def psi(x):
            return self.monomial_log_norm(x, 1.0)

        # ψ is convex, so {ψ < 0} is an interval around its minimizer
        kinks = self.legendre_kinks() if self.is_piecewise_linear() else []
        candidates = [lo, hi] + kinks
        if not self.is_piecewise_linear():
            res = optimize.minimize_scalar(psi, bounds=(lo, hi), method="bounded",
                                           options={"xatol": 1e-12})
            candidates.append(float(res.x))
        x_min = min(candidates, key=psi)
        if psi(x_min) >= 0.0:
            return 0.0

        left = lo if psi(lo) <= 0.0 else optimize.brentq(psi, lo, x_min, xtol=1e-14)
        right = hi if psi(hi) <= 0.0 else optimize.brentq(psi, x_min, hi, xtol=1e-14)
        inner = [x for x in kinks if left < x < right]
        kwargs = {"limit": 400, "epsabs": tol, "epsrel": 1e-12}
        if inner:
            kwargs["points"] = inner
        value, err = integrate.quad(lambda x: -psi(x), left, right, **kwargs)
        if err > max(10 * tol, 1e-9 * abs(value)):
            raise QuadratureDivergence("toric volume", err, tol)
        return 2.0 * value


def zero_profile() -> RadialProfile:
    return RadialProfile(c0=0.0, cinf=0.0)


def combine(terms: Sequence[Tuple[float, RadialProfile]]) -> RadialProfile:
    total = zero_profile()
    for coef, profile in terms:
        total = total + profile.scaled(coef)
    return total
