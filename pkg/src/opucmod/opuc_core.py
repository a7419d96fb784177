"""Szegő recurrence machinery: monic orthogonal polynomial families, their
Schur parameters, moment sequences, and the Christoffel-Darboux kernel.

Conventions: eps_0 = m_0 = 1 unless a different normalization is passed in
explicitly; a functional is quasi-definite in P_n exactly when none of its
first n Schur parameters sits on the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    DEFAULT_TOL,
    ComplexPoly,
    HermitianLaurent,
    Mat2,
    mat2,
)


@dataclass(frozen=True)
class SchurSequence:
    """Schur parameters b_1, b_2, ... of a hermitian moment functional."""

    params: tuple
    eps0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "params",
                           tuple(complex(b) for b in self.params))
        if self.eps0 == 0:
            raise ValueError("eps0 must be nonzero")

    def __len__(self) -> int:
        return len(self.params)

    def b(self, j: int) -> complex:
        """1-based access: b(1) is the first parameter."""
        return self.params[j - 1]

    def eps(self) -> list:
        """eps_j = eps_{j-1} (1 - |b_j|^2), starting from eps_0."""
        out = [float(self.eps0)]
        for b in self.params:
            out.append(out[-1] * (1.0 - abs(b) ** 2))
        return out

    def unit_modulus_indices(self, tol: float = DEFAULT_TOL) -> list:
        return [j + 1 for j, b in enumerate(self.params)
                if abs(abs(b) - 1.0) <= tol]

    def quasi_definite_in(self, n: int, tol: float = DEFAULT_TOL) -> bool:
        """All of b_1..b_n stay off the unit circle (requires n params)."""
        if n > len(self.params):
            raise ValueError("need %d parameters, have %d" % (n,
                                                              len(self.params)))
        return all(abs(abs(self.params[j]) - 1.0) > tol for j in range(n))


@dataclass(frozen=True)
class MopPair:
    """A (psi_n, psi_n*) pair together with its degree index."""

    poly: ComplexPoly
    star: ComplexPoly
    n: int

    def as_column(self) -> tuple:
        return (self.poly, self.star)


@dataclass(frozen=True)
class TransferMatrix:
    """One-step matrix [[z, b], [z conj(b), 1]] advancing (psi, psi*)."""

    b: complex

    def entries(self) -> Mat2:
        z = ComplexPoly.monomial(1)
        return mat2(z, ComplexPoly.const(self.b),
                    ComplexPoly.monomial(1, complex(self.b).conjugate()),
                    ComplexPoly.one())

    def apply(self, pair: MopPair) -> MopPair:
        b = complex(self.b)
        poly = pair.poly.shift(1) + b * pair.star
        star = b.conjugate() * pair.poly.shift(1) + pair.star
        return MopPair(poly, star, pair.n + 1)


@dataclass(frozen=True)
class ForwardFamily:
    """Output of szego_forward: pairs 0..n, the eps ladder, and any indices
    where |b_j| = 1 (the recurrence still runs there, but eps dies)."""

    pairs: tuple
    eps: tuple
    unit_modulus: tuple

    def psi(self, j: int) -> ComplexPoly:
        return self.pairs[j].poly

    def psi_star(self, j: int) -> ComplexPoly:
        return self.pairs[j].star


def szego_forward(b, n: Optional[int] = None,
                  tol: float = DEFAULT_TOL) -> ForwardFamily:
    """Run psi_j = z psi_{j-1} + b_j psi*_{j-1} up to degree n."""
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    if n is None:
        n = len(seq)
    if n > len(seq):
        raise ValueError("need %d Schur parameters, have %d" % (n, len(seq)))
    pairs = [MopPair(ComplexPoly.one(), ComplexPoly.one(), 0)]
    for j in range(1, n + 1):
        pairs.append(TransferMatrix(seq.b(j)).apply(pairs[-1]))
    eps = seq.eps()[:n + 1]
    flags = tuple(j for j in seq.unit_modulus_indices(tol) if j <= n)
    return ForwardFamily(tuple(pairs), tuple(eps), flags)


@dataclass(frozen=True)
class MomentSequence:
    """Moments m_0, m_1, ..., m_N; negative indices are conjugates."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values",
                           tuple(complex(m) for m in self.values))
        if not self.values:
            raise ValueError("need at least m_0")
        if abs(self.values[0].imag) > DEFAULT_TOL * max(
                1.0, abs(self.values[0])):
            raise ValueError("m_0 must be real")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def moment(self, k: int) -> complex:
        if k < 0:
            return self.values[-k].conjugate()
        return self.values[k]

    def act(self, p: ComplexPoly, shift: int = 0) -> complex:
        """Value of the functional on z^shift * p (shift may be negative)."""
        return sum(c * self.moment(k + shift)
                   for k, c in enumerate(p.coeffs))

    def form(self, f: ComplexPoly, g: ComplexPoly) -> complex:
        """Sesquilinear form (f, g) = functional[f_* g]."""
        acc = 0j
        for i, fi in enumerate(f.coeffs):
            for k, gk in enumerate(g.coeffs):
                acc += fi.conjugate() * gk * self.moment(k - i)
        return acc


def schur_to_moments(b, n: Optional[int] = None) -> MomentSequence:
    """Moments m_0..m_n of the functional with Schur parameters b.

    m_0 = eps_0; each next moment is pinned by functional[psi_j] = 0, which
    under the recurrence is equivalent to full orthogonality.
    """
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    if n is None:
        n = len(seq)
    fam = szego_forward(seq, n)
    m = [complex(seq.eps0)]
    for j in range(1, n + 1):
        c = fam.psi(j).coeffs
        m.append(-sum(c[k] * m[k] for k in range(j)))
    return MomentSequence(tuple(m))


@dataclass(frozen=True)
class SchurExtraction:
    """moments_to_schur result: parameters, eps ladder, and the index where
    quasi-definiteness died (None when the whole horizon survived)."""

    schur: SchurSequence
    eps: tuple
    stop_index: Optional[int]


def moments_to_schur(m: MomentSequence,
                     tol: float = DEFAULT_TOL) -> SchurExtraction:
    """Recover Schur parameters by Gram-Schmidt under the moment form.

    Stops at the first j whose eps_j collapses relative to eps_{j-1}
    (quasi-definiteness lost); parameters through that j are still reported
    since psi_j itself exists.
    """
    n = m.horizon
    polys = [ComplexPoly.one()]
    eps = [m.moment(0)]
    params = []
    stop = None
    scale = max((abs(v) for v in m.values), default=0.0)
    if abs(eps[0]) <= tol * max(scale, 1.0):
        # Not even the constant has nonzero norm: zero orthogonal
        # polynomials, no Schur parameters (the sequence below is an empty
        # placeholder; the true, collapsed eps_0 is in the eps tuple).
        return SchurExtraction(SchurSequence(()), (eps[0].real,), 0)
    for j in range(1, n + 1):
        p = ComplexPoly.monomial(j)
        for i in range(j):
            coef = m.form(polys[i], p) / eps[i]
            p = p - coef * polys[i]
        polys.append(p)
        params.append(p.coeff(0))
        ej = m.form(p, p)
        eps.append(ej)
        if abs(ej) <= tol * abs(eps[j - 1]):
            stop = j
            break
    eps_real = tuple(e.real for e in eps)
    return SchurExtraction(SchurSequence(tuple(params), eps0=eps_real[0]),
                           eps_real, stop)


def apply_laurent(m: MomentSequence, laurent: HermitianLaurent) -> MomentSequence:
    """Moments of u = vL: mu_n = sum_j alpha_j m_{n+j}, |j| <= r."""
    r = laurent.r
    if m.horizon < r:
        raise ValueError("need moments through m_%d to apply a degree-%d "
                         "modification" % (r, r))
    out = []
    for n in range(m.horizon - r + 1):
        out.append(sum(laurent.laurent_coeff(j) * m.moment(n + j)
                       for j in range(-r, r + 1)))
    return MomentSequence(tuple(out))


def cd_kernel(b, n: int, z: complex, w: complex) -> complex:
    """Kernel K_n(z, w) = sum_{j<=n} psi_j(z) conj(psi_j(w)) / eps_j."""
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    fam = szego_forward(seq, n)
    for j in range(n + 1):
        if fam.eps[j] == 0:
            raise ValueError("quasi-definiteness lost at index %d" % j)
    return sum(fam.psi(j)(z) * complex(fam.psi(j)(w)).conjugate() / fam.eps[j]
               for j in range(n + 1))


def cd_kernel_quotient(b, n: int, z: complex, w: complex) -> complex:
    """Same kernel via the Christoffel-Darboux quotient (cross-check form):

        K_n(z, w) = [conj(psi*_{n+1}(w)) psi*_{n+1}(z)
                     - conj(psi_{n+1}(w)) psi_{n+1}(z)]
                    / (eps_{n+1} (1 - conj(w) z)).

    Requires eps_{n+1} != 0 and z conj(w) != 1.
    """
    seq = b if isinstance(b, SchurSequence) else SchurSequence(tuple(b))
    fam = szego_forward(seq, n + 1)
    denom = fam.eps[n + 1] * (1.0 - complex(w).conjugate() * z)
    if denom == 0:
        raise ValueError("quotient form undefined (confluent point or "
                         "eps_{n+1} = 0)")
    pair = fam.pairs[n + 1]
    num = (complex(pair.star(w)).conjugate() * pair.star(z)
           - complex(pair.poly(w)).conjugate() * pair.poly(z))
    return num / denom
