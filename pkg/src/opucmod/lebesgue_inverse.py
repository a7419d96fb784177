"""Closed-form inverse chains for degree-one modifications of the Lebesgue
functional (the u with every Schur parameter zero).

Everything reduces to one real parameter: with tau = conj(alpha)/|alpha| the
states are X_n = z + x_n, Y_n = y_n with x_n = s_n tau, s_n real, and the
whole chain is driven by s_n = 2 omega - 1/s_{n-1}, omega = beta/|alpha|.
Second-kind Chebyshev values in omega give closed forms for every sequence,
so quasi-definiteness, periodicity and asymptotics can be read off without
iterating -- and exactly, in integer arithmetic, when omega is rational.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import DEFAULT_TOL, ComplexPoly, HermitianLaurent

# |omega| this close to 1 is treated as the parabolic boundary case; inputs
# inside the band that are not exactly on it get a warning, since the three
# regimes behave qualitatively differently.
CASE_BAND = 1e-9


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


def cheb_u(n: int, omega):
    """Second-kind Chebyshev value U_n(omega), with U_{-1} = 0, U_{-2} = -1.

    Works in whatever arithmetic omega supports; Fraction in, Fraction out.
    """
    if n < -2:
        raise ValueError("n must be >= -2")
    if n == -2:
        return -1 * omega ** 0
    prev, cur = 0 * omega, omega ** 0          # U_{-1}, U_0 in omega's type
    if n == -1:
        return prev
    for _ in range(n):
        prev, cur = cur, 2 * omega * cur - prev
    return cur


@dataclass(frozen=True)
class LebesgueProblem:
    """Degree-one modification data: P = alpha z + beta, alpha != 0, beta real.

    omega is kept in the arithmetic of beta whenever |alpha| = 1 exactly, so
    rational inputs stay rational all the way into the sigma machinery.
    """

    alpha: complex
    beta: object  # real number: float, int or Fraction

    def __post_init__(self):
        if complex(self.alpha) == 0:
            raise ValueError("alpha must be nonzero")
        if isinstance(self.beta, complex):
            raise ValueError("beta must be real")

    @classmethod
    def from_omega(cls, omega) -> "LebesgueProblem":
        return cls(1.0, omega)

    @property
    def omega(self):
        a = abs(complex(self.alpha))
        if a == 1.0:
            return self.beta
        return self.beta / a

    @property
    def omega_tilde(self) -> complex:
        return complex(self.beta) / complex(self.alpha)

    @property
    def tau(self) -> complex:
        """The unimodular direction conj(alpha)/|alpha| carrying x_n = s_n tau."""
        a = complex(self.alpha)
        return a.conjugate() / abs(a)

    def char_value(self, s):
        """B(s) = s^2 - 2 omega s + 1, in the arithmetic of its arguments."""
        return s * s - 2 * self.omega * s + 1

    def char_poly(self) -> ComplexPoly:
        return ComplexPoly([1.0, -2.0 * float(self.omega), 1.0])

    @property
    def lam(self) -> complex:
        """The root omega + sqrt(omega^2 - 1) of B (principal branch:
        i sqrt(1 - omega^2) inside the oscillatory regime)."""
        w = float(self.omega)
        if abs(w) >= 1.0:
            return complex(w + math.copysign(math.sqrt(w * w - 1.0), w))
        return complex(w, math.sqrt(1.0 - w * w))

    @property
    def case_label(self) -> str:
        """'a' (|omega| > 1, hyperbolic), 'b' (= 1, parabolic), 'c' (< 1,
        oscillatory), with a tolerance band around the boundary."""
        w = abs(float(self.omega))
        if abs(w - 1.0) <= CASE_BAND:
            if w != 1.0:
                warnings.warn("omega is within the boundary-case tolerance "
                              "band; treating it as |omega| = 1",
                              RuntimeWarning, stacklevel=2)
            return "b"
        return "a" if w > 1.0 else "c"

    def a_roots(self):
        """Roots (zeta_1, zeta_2) = (-lam tau, -tau/lam) of the
        self-reciprocal carrier A = alpha z^2 + 2 beta z + conj(alpha)."""
        lam = self.lam
        tau = self.tau
        return (-lam * tau, -tau / lam)

    def laurent(self) -> HermitianLaurent:
        return HermitianLaurent(ComplexPoly([complex(float(self.beta)),
                                             complex(self.alpha)]))

    def a_value(self, z: complex) -> complex:
        a = complex(self.alpha)
        return a * z * z + 2.0 * float(self.beta) * z + a.conjugate()


def sigma_sequence(prob: LebesgueProblem, n_terms: int):
    """Projective pairs (p_k, q_k) with sigma_k = p_k/q_k, sigma_0 = 0 and
    sigma_k = 1/(2 omega - sigma_{k-1}); q_k = 0 encodes sigma_k = infinity.

    Rational omega propagates in exact integer arithmetic.  The pairs equal
    (U_{k-1}, U_k) up to a common factor, which is also how they are checked.
    """
    omega = prob.omega
    if _is_exact(omega):
        omega = Fraction(omega)
        num = omega.numerator
        den = omega.denominator
        pairs = [(0, 1)]
        for _ in range(n_terms):
            p, q = pairs[-1]
            rp, rq = den * q, 2 * num * q - den * p
            g = math.gcd(rp, rq)
            if g > 1:
                rp, rq = rp // g, rq // g
            if rq < 0 or (rq == 0 and rp < 0):
                rp, rq = -rp, -rq
            pairs.append((rp, rq))
        return pairs
    w = float(omega)
    pairs = [(0.0, 1.0)]
    for _ in range(n_terms):
        p, q = pairs[-1]
        rp, rq = q, 2.0 * w * q - p
        scale = max(abs(rp), abs(rq))
        if scale > 0:
            rp, rq = rp / scale, rq / scale
        pairs.append((rp, rq))
    return pairs


def sigma_value(pair, tol: float = 1e-12):
    """Collapse a projective pair to a number; exact pairs give Fraction.

    The point at infinity is unsigned projectively; it is reported as
    +/-inf by the numerator's sign.  Float pairs come max-normalized from
    sigma_sequence, so a denominator below tol is the infinite point.
    """
    p, q = pair
    if _is_exact(p) and _is_exact(q):
        if q == 0:
            return math.inf if p >= 0 else -math.inf
        return Fraction(p, q)
    if abs(q) <= tol * max(abs(p), 1.0):
        return math.inf if p >= 0 else -math.inf
    return p / q


@dataclass(frozen=True)
class ChainClassification:
    """Verdict of the quasi-definiteness test for one (problem, s_0) pair."""

    case_label: str
    stop_index: Optional[int]      # first n with s_0 U_n = U_{n-1}, else None
    mop_count: Optional[int]       # stop_index + 1 when stopped
    bernstein_szego: bool          # degenerate circle |y_0| = 0
    char_at_s0: float              # B(s_0), the squared circle radius


def classify(prob: LebesgueProblem, s0, n_terms: int,
             tol: float = DEFAULT_TOL) -> ChainClassification:
    """Quasi-definiteness of the chains with data (prob, s0) through n_terms.

    The test is the closed-form one -- the first n with s_0 U_n = U_{n-1}
    (exact when both omega and s0 are rational, scaled tolerance otherwise);
    s_n then vanishes and the chain supports exactly n + 1 orthogonal
    polynomials.  A negative B(s_0) (possible only in the hyperbolic case)
    means no chain carries this data.
    """
    b_s0 = prob.char_value(s0)
    label = prob.case_label
    if float(b_s0) < -tol:
        raise ValueError("B(s_0) = %r < 0: no solution carries this data "
                         "(s_0 falls between the characteristic roots)"
                         % b_s0)
    omega = prob.omega
    exact = _is_exact(omega) and _is_exact(s0)
    stop = None
    u_prev2 = cheb_u(-2, omega)    # U_{n-2} rolling window
    u_prev = cheb_u(-1, omega)
    u_cur = cheb_u(0, omega)
    for n in range(n_terms + 1):
        num = s0 * u_cur - u_prev
        if exact:
            dead = num == 0
        else:
            scale = max(abs(float(s0 * u_cur)), abs(float(u_prev)), 1.0)
            dead = abs(float(num)) <= tol * scale
        if dead:
            stop = n
            break
        u_prev2, u_prev = u_prev, u_cur
        u_cur = 2 * omega * u_cur - u_prev2
    return ChainClassification(
        case_label=label,
        stop_index=stop,
        mop_count=None if stop is None else stop + 1,
        bernstein_szego=abs(float(b_s0)) <= tol,
        char_at_s0=b_s0,
    )


@dataclass(frozen=True)
class SSequenceResult:
    values: tuple                  # s_0 .. s_m (recurrence), m = stop or n
    stop_index: Optional[int]      # index where s hit zero, if it did
    closed_values: tuple           # same range, from the Chebyshev form
    max_closed_dev: float          # worst |rec - closed| off tiny denominators


def s_sequence(prob: LebesgueProblem, s0, n_terms: int,
               tol: float = DEFAULT_TOL) -> SSequenceResult:
    """Iterate s_n = 2 omega - 1/s_{n-1} alongside its closed form
    s_n = (s_0 U_n - U_{n-1}) / (s_0 U_{n-1} - U_{n-2}).

    Stops when |s_n| <= tol (exactly 0 in rational arithmetic); the closed
    form is compared wherever its denominator is healthy.
    """
    if float(s0) == 0.0:
        raise ValueError("s_0 must be nonzero (a vanishing s_0 means the "
                         "chain dies before its first step)")
    omega = prob.omega
    exact = _is_exact(omega) and _is_exact(s0)
    values = [s0]
    closed = [s0]
    stop = None
    max_dev = 0.0
    u_prev2 = cheb_u(-1, omega)    # window starts at (U_{-1}, U_0, U_1)
    u_prev = cheb_u(0, omega)
    u_cur = 2 * omega * u_prev - u_prev2
    for n in range(1, n_terms + 1):
        cur = 2 * omega - 1 / values[-1]
        den = s0 * u_prev - u_prev2
        num = s0 * u_cur - u_prev
        if exact:
            closed.append(num / den if den != 0 else math.inf)
        else:
            fden = float(den)
            big = max(abs(float(num)), abs(fden), 1.0)
            if abs(fden) > 1e-6 * big:
                c = num / den
                closed.append(c)
                max_dev = max(max_dev,
                              abs(float(cur) - float(c))
                              / max(1.0, abs(float(c))))
            else:
                closed.append(math.nan)
        values.append(cur)
        dead = cur == 0 if exact else abs(float(cur)) <= tol
        if dead:
            stop = n
            break
        u_prev2, u_prev = u_prev, u_cur
        u_cur = 2 * omega * u_cur - u_prev2
    return SSequenceResult(tuple(values), stop, tuple(closed), max_dev)


def params_from_ab_b1(alpha: complex, beta, b1: complex,
                      tol: float = DEFAULT_TOL):
    """Chain seed (s_0, x_0, y_0) for given modification data and head b_1.

        s_0 = (|alpha|/2) (1 - |b_1|^2) / (beta - Re(alpha b_1))
        x_0 = s_0 conj(alpha)/|alpha|
        y_0 = -A(-b_1) / (2 (beta - Re(alpha b_1)))

    The pole beta = Re(alpha b_1) carries no chain (the head is incompatible
    with a regular start).  Note y_0 = b_1 - x_0, so |y_0|^2 = B(s_0).
    """
    a = complex(alpha)
    b = complex(b1)
    if a == 0:
        raise ValueError("alpha must be nonzero")
    if abs(abs(b) - 1.0) <= tol:
        raise ValueError("|b_1| = 1 is not quasi-definite")
    denom = float(beta) - (a * b).real
    if abs(denom) <= tol * max(abs(float(beta)), abs(a * b), 1.0):
        raise ValueError("beta = Re(alpha b_1): no regular start for this "
                         "head")
    s0 = (abs(a) / 2.0) * (1.0 - abs(b) ** 2) / denom
    x0 = s0 * a.conjugate() / abs(a)
    a_at = a * b * b - 2.0 * float(beta) * b + a.conjugate()   # A(-b_1)
    y0 = -a_at / (2.0 * denom)
    return s0, x0, y0


def params_from_b1_x0(b1: complex, x0: complex, tol: float = DEFAULT_TOL):
    """Modification data (alpha, beta) carrying the seed (b_1, x_0), in the
    canonical scale |alpha| = 1 (the data is only defined up to a positive
    real factor):

        alpha = conj(x_0)/|x_0|,  beta = (1 - |b_1|^2)/(2|x_0|) + Re(alpha b_1)

    Returns (alpha, beta, s_0) with s_0 = |x_0|.
    """
    x = complex(x0)
    b = complex(b1)
    if x == 0:
        raise ValueError("x_0 must be nonzero")
    if abs(abs(b) - 1.0) <= tol:
        raise ValueError("|b_1| = 1 is not quasi-definite")
    kappa = 1.0 / abs(x)
    alpha = kappa * x.conjugate()
    beta = (kappa / 2.0) * (1.0 - abs(b) ** 2 + 2.0 * (x.conjugate() * b).real)
    return alpha, beta, abs(x)


@dataclass(frozen=True)
class LebesgueSolution:
    """One chain: problem data plus the seed (s_0, b_1, x_0, y_0).

    b_1 = x_0 + y_0 always (it is psi_1(0)); |y_0|^2 = B(s_0) puts b_1 on a
    circle of radius sqrt(B(s_0)) around x_0 -- the solution set for fixed
    (problem, s_0) is exactly that circle of heads.
    """

    problem: LebesgueProblem
    s0: float
    b1: complex
    x0: complex
    y0: complex

    def __post_init__(self):
        if abs(self.x0 - self.b1 + self.y0) > 1e-9 * max(1.0, abs(self.b1)):
            raise ValueError("inconsistent seed: b_1 != x_0 + y_0")

    @classmethod
    def from_head(cls, prob: LebesgueProblem, b1: complex,
                  tol: float = DEFAULT_TOL) -> "LebesgueSolution":
        s0, x0, y0 = params_from_ab_b1(prob.alpha, prob.beta, b1, tol)
        return cls(prob, s0, complex(b1), x0, y0)

    @classmethod
    def from_circle(cls, prob: LebesgueProblem, s0, phase: float,
                    tol: float = DEFAULT_TOL) -> "LebesgueSolution":
        """The circle member with y_0 = sqrt(B(s_0)) e^{i phase}."""
        b_s0 = float(prob.char_value(s0))
        if b_s0 < -tol:
            raise ValueError("B(s_0) < 0: empty circle")
        radius = math.sqrt(max(b_s0, 0.0))
        x0 = float(s0) * prob.tau
        y0 = radius * cmath.exp(1j * phase)
        return cls(prob, float(s0), x0 + y0, x0, y0)

    def second_parameter(self) -> complex:
        """b_2 = A(-b_1) / (alpha (1 - |b_1|^2)) -- the first generated
        parameter, available without running the chain."""
        a = complex(self.problem.alpha)
        return self.problem.a_value(-self.b1) / (a * (1.0 - abs(self.b1) ** 2))


@dataclass(frozen=True)
class ChainTrajectory:
    """Recurrence and closed-form views of one chain, plus diagnostics.

    b has length stop+1 when the chain dies at stop (the last parameter is
    the unit-modulus one killing quasi-definiteness), n_terms+1 otherwise.
    psi_coeffs[n] = (x_n, y_n): the (n+1)-st orthogonal polynomial is
    z^{n+1} + x_n z^n + y_n.
    """

    s_rec: tuple
    s_closed: tuple
    x: tuple
    y: tuple
    b: tuple
    stop_index: Optional[int]
    max_closed_dev: float
    limits: dict

    @property
    def psi_coeffs(self):
        return tuple(zip(self.x, self.y))


def solution_trajectory(sol: LebesgueSolution, n_terms: int,
                        tol: float = DEFAULT_TOL) -> ChainTrajectory:
    """Run the chain n_terms steps (truncating at a quasi-definiteness stop).

        x_n = (|x_{n-1}|^2 - |y_{n-1}|^2)/conj(x_{n-1}),
        y_n = -y_{n-1}/conj(x_{n-1}),  b_{n+1} = y_n  (n >= 1)

    cross-checked against the closed forms x_n = s_n tau and
    y_n = (-tau)^n y_0 / (s_0 U_{n-1} - U_{n-2}).  The limits dict holds the
    case diagnostics: attracting fixed point and parameter-decay rate in the
    hyperbolic case, the boundary analogues in the parabolic one, and the
    oscillation angles in the elliptic one.
    """
    prob = sol.problem
    seq = s_sequence(prob, sol.s0, n_terms, tol)
    tau = prob.tau
    xs = [sol.x0]
    ys = [sol.y0]
    bs = [sol.b1]
    max_dev = seq.max_closed_dev
    omega = prob.omega
    u_prev2 = cheb_u(-1, omega)    # window (U_{n-2}, U_{n-1}) starts at n = 1
    u_prev = cheb_u(0, omega)
    last = seq.stop_index if seq.stop_index is not None else n_terms
    for n in range(1, last + 1):
        xp, yp = xs[-1], ys[-1]
        x_n = (abs(xp) ** 2 - abs(yp) ** 2) / xp.conjugate()
        y_n = -yp / xp.conjugate()
        xs.append(x_n)
        ys.append(y_n)
        bs.append(y_n)
        # closed forms
        den = sol.s0 * float(u_prev) - float(u_prev2)
        max_dev = max(max_dev, abs(x_n - seq.values[n] * tau)
                      / max(1.0, abs(x_n)))
        if abs(den) > 1e-6 * max(1.0, abs(float(u_prev)), abs(float(u_prev2))):
            y_closed = ((-tau) ** n) * sol.y0 / den
            max_dev = max(max_dev, abs(y_n - y_closed) / max(1.0, abs(y_n)))
        u_prev2, u_prev = u_prev, 2 * omega * u_prev - u_prev2
    return ChainTrajectory(
        s_rec=seq.values,
        s_closed=seq.closed_values,
        x=tuple(xs),
        y=tuple(ys),
        b=tuple(bs),
        stop_index=seq.stop_index,
        max_closed_dev=max_dev,
        limits=_case_limits(sol),
    )


def _case_limits(sol: LebesgueSolution) -> dict:
    prob = sol.problem
    label = prob.case_label
    lam = prob.lam
    tau = prob.tau
    if label == "a":
        lam_attract = lam if abs(lam) > 1.0 else 1.0 / lam
        zeta_in = -tau / lam_attract           # the carrier root inside T
        return {
            "case": "a",
            "s_limit": lam_attract.real,
            "x_limit": -1.0 / zeta_in.conjugate(),
            "b_ratio_limit": abs(zeta_in),
        }
    if label == "b":
        w = math.copysign(1.0, float(prob.omega))
        return {
            "case": "b",
            "s_limit": w,
            "x_limit": w * tau,                # = -zeta, zeta = -omega tau
        }
    theta = cmath.phase(lam)
    gamma = cmath.phase(complex(float(sol.s0), 0.0) - lam.conjugate())
    return {"case": "c", "theta": theta, "gamma": gamma}


def oscillatory_s(prob: LebesgueProblem, s0: float, n: int) -> float:
    """Elliptic-case angle form s_n = cos t + sin t / tan(n t + g) with
    t = arg lam and g the angle of s_0 - conj(lam); poles map to the chain's
    zeros.  (Expanding s_0 sin((n+1)t) - sin(nt) shows the angle must be
    measured from the lower root, i.e. g = -arg(s_0 - lam).)"""
    if prob.case_label != "c":
        raise ValueError("angle form only applies when |omega| < 1")
    lam = prob.lam
    theta = cmath.phase(lam)
    gamma = cmath.phase(complex(s0, 0.0) - lam.conjugate())
    t = math.tan(n * theta + gamma)
    if t == 0.0:
        return math.inf
    return math.cos(theta) + math.sin(theta) / t


def newton_f(prob: LebesgueProblem, s: float, tol: float = DEFAULT_TOL) -> float:
    """The positive potential with f'/f = s/B(s), which turns the chain map
    into Newton's method: s - f(s)/f'(s) = 2 omega - 1/s.

    Hyperbolic:  f = (|s - l2|^{l2} / |s - l1|^{l1})^{1/(l2 - l1)}, l1 < l2
    Parabolic:   f = |s - omega| exp(omega/(omega - s))
    Elliptic:    f = sqrt(B(s)) exp( omega/sqrt(1-omega^2)
                                     * atan((s - omega)/sqrt(1-omega^2)) )
    """
    w = float(prob.omega)
    label = prob.case_label
    if label == "a":
        d = math.sqrt(w * w - 1.0)
        l1, l2 = w - d, w + d
        if l1 > l2:
            l1, l2 = l2, l1
        if min(abs(s - l1), abs(s - l2)) <= tol:
            raise ValueError("s sits on a characteristic root")
        return (abs(s - l2) ** l2 / abs(s - l1) ** l1) ** (1.0 / (l2 - l1))
    if label == "b":
        if abs(s - w) <= tol:
            raise ValueError("s sits on the double characteristic root")
        return abs(s - w) * math.exp(w / (w - s))
    root = math.sqrt(1.0 - w * w)
    b_s = float(prob.char_value(s))
    return math.sqrt(b_s) * math.exp((w / root) * math.atan((s - w) / root))


def _fmt(v) -> str:
    if isinstance(v, (int,)):
        return str(v)
    return format(float(v), ".17g")


def emit_figure_data(prob: LebesgueProblem, s0, n_terms: int,
                     tol: float = DEFAULT_TOL) -> str:
    """Trajectory table as CSV: n, s_rec, s_closed, sigma_num, sigma_den.

    sigma columns are exact integers for rational omega; s columns carry 17
    significant digits.  A quasi-definiteness stop truncates the table.
    """
    seq = s_sequence(prob, s0, n_terms, tol)
    sigmas = sigma_sequence(prob, len(seq.values) - 1)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "s_rec", "s_closed", "sigma_num", "sigma_den"])
    for n, (s_r, s_c) in enumerate(zip(seq.values, seq.closed_values)):
        p, q = sigmas[n]
        writer.writerow([n, _fmt(s_r), _fmt(s_c), _fmt(p), _fmt(q)])
    return buf.getvalue()


def emit_newton_curve(prob: LebesgueProblem, s_min: float, s_max: float,
                      samples: int, tol: float = DEFAULT_TOL) -> str:
    """Potential samples as CSV (s, f), skipping points too close to poles."""
    if samples < 2 or s_max <= s_min:
        raise ValueError("need s_max > s_min and at least two samples")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", "f"])
    step = (s_max - s_min) / (samples - 1)
    for i in range(samples):
        s = s_min + i * step
        try:
            f = newton_f(prob, s, max(tol, 1e-9))
        except ValueError:
            continue
        writer.writerow([_fmt(s), _fmt(f)])
    return buf.getvalue()
