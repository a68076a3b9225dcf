"""Compound bi-free Poisson laws, additive convolution, and limit harnesses.

A compound Poisson law with rate lambda and jump law phi_a is the
distribution whose every bi-free cumulant is lambda times the matching
joint moment of the jump family. Convolution adds cumulant tables;
semigroups scale them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapExceededError, ShapeMismatchError
from .cumulants import (
    LEFT,
    Alphabet,
    CumulantTable,
    MomentFunctional,
    Word,
    all_words,
    cumulant_of_word,
    kappa_from_moments,
    moment_of_word,
    moments_from_kappa,
)

PSD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CbpSpec:
    """Rate and jump law of a compound bi-free Poisson distribution."""

    rate: float
    jump_law: MomentFunctional

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError(f"rate must be positive, got {self.rate}")


@dataclass
class Distribution:
    """A moment functional with its (cached, consistent) cumulant table."""

    moments: MomentFunctional
    cumulants: CumulantTable | None = None

    def with_cumulants(self) -> "Distribution":
        if self.cumulants is None:
            self.cumulants = kappa_from_moments(self.moments)
        return self

    @staticmethod
    def from_cumulants(kappa: CumulantTable) -> "Distribution":
        return Distribution(moments_from_kappa(kappa), kappa)

    @staticmethod
    def point_mass_zero(alphabet: Alphabet, degree_cap: int) -> "Distribution":
        zero = CumulantTable.from_function(alphabet, degree_cap, lambda w: 0.0)
        return Distribution.from_cumulants(zero)


def cbp_cumulants(spec: CbpSpec) -> CumulantTable:
    """kappa_chi(word) = lambda * jump_law(word), every word up to cap."""
    jump = spec.jump_law
    return CumulantTable.from_function(
        jump.alphabet, jump.degree_cap, lambda w: spec.rate * jump(w)
    )


def cbp_moments(spec: CbpSpec) -> Distribution:
    return Distribution.from_cumulants(cbp_cumulants(spec))


def convolve(mu: Distribution, nu: Distribution) -> Distribution:
    """Bi-free additive convolution: cumulant tables add entrywise."""
    return Distribution.from_cumulants(
        mu.with_cumulants().cumulants.add(nu.with_cumulants().cumulants)
    )


def semigroup_element(nu: Distribution, t: float) -> Distribution:
    """nu_t with kappa_{chi, nu_t} = t * kappa_{chi, nu}; t = 0 is delta_0."""
    if t < 0:
        raise ValueError(f"semigroup parameter must be >= 0, got {t}")
    return Distribution.from_cumulants(nu.with_cumulants().cumulants.scale(t))


def compress(kappa: CumulantTable, lam: float) -> CumulantTable:
    """Free-projection compression: a length-n entry scales by lam**(n-1)."""
    if not 0 < lam <= 1:
        raise ValueError(f"compression ratio must be in (0, 1], got {lam}")
    return CumulantTable(
        kappa.alphabet,
        kappa.degree_cap,
        {w: lam ** (len(w) - 1) * v for w, v in kappa.values.items()},
    )


def compression_oracle(
    phi_z: MomentFunctional, lam: float, max_deg: int
) -> CumulantTable:
    """Brute-force single-face compression oracle.

    Builds the joint free family {p, z_1..z_K} (p a projection with all
    moments lam, mixed free cumulants zero), evaluates the compressed state
    phi(p z_1 p z_2 ... z_m p)/lam word by word, and inverts back to
    cumulants. Independent of `compress`, which only rescales a table.
    """
    if phi_z.alphabet.right:
        raise ShapeMismatchError("compression oracle is single-face only")
    if not 0 < lam <= 1:
        raise ValueError(f"compression ratio must be in (0, 1], got {lam}")
    if max_deg > phi_z.degree_cap:
        raise CapExceededError(
            f"max_deg {max_deg} exceeds jump table cap {phi_z.degree_cap}"
        )
    joint_deg = 2 * max_deg + 1
    znames = phi_z.alphabet.left
    all_left = lambda n: (LEFT,) * n

    # free cumulants of the projection from its constant moment sequence
    p_moments = MomentFunctional.from_function(
        Alphabet(("p",)), joint_deg, lambda w: lam
    )
    p_kappa = [0.0] + [
        cumulant_of_word(p_moments, all_left(n), ("p",) * n)
        for n in range(1, joint_deg + 1)
    ]
    z_kappa = kappa_from_moments(phi_z)

    def joint_kappa(word: Word) -> float:
        has_p = "p" in word
        if all(x == "p" for x in word):
            return p_kappa[len(word)]
        if has_p:
            return 0.0  # p free from the z family
        return z_kappa(word)

    @lru_cache(maxsize=None)
    def joint_moment(word: Word) -> float:
        return moment_of_word(joint_kappa, all_left(len(word)), word)

    def compressed_moment(zword: Word) -> float:
        interleaved = ("p",) + tuple(
            x for z in zword for x in (z, "p")
        )
        return joint_moment(interleaved) / lam

    phi_compressed = MomentFunctional.from_function(
        phi_z.alphabet, max_deg, compressed_moment
    )
    return kappa_from_moments(phi_compressed)


def limit_theorem_moments(spec: CbpSpec, N: int) -> Distribution:
    """Distribution of the N-fold bi-free sum of the scaled summand whose
    moments are (lambda/N) * jump_law; converges to cbp_moments(spec)."""
    if N < spec.rate:
        raise ValueError(f"N={N} below rate {spec.rate}")
    jump = spec.jump_law
    phi_summand = MomentFunctional.from_function(
        jump.alphabet, jump.degree_cap, lambda w: spec.rate / N * jump(w)
    )
    kappa_sum = kappa_from_moments(phi_summand).scale(N)
    return Distribution.from_cumulants(kappa_sum)


def poisson_approximation(nu: Distribution, n: int) -> Distribution:
    """The compound Poisson law P(n, nu_{1/n}); its cumulants converge to
    those of nu as n grows."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    nu = nu.with_cumulants()
    nu_frac = semigroup_element(nu, 1.0 / n)
    kappa = CumulantTable.from_function(
        nu.moments.alphabet,
        nu.moments.degree_cap,
        lambda w: n * nu_frac.moments(w),
    )
    return Distribution.from_cumulants(kappa)


def gram_basis(alphabet: Alphabet, deg: int) -> list[Word]:
    """Words of length <= deg including the empty word, by (length, lex)."""
    out: list[Word] = [()]
    for n in range(1, deg + 1):
        out.extend(sorted(itertools.product(alphabet.names, repeat=n)))
    return out


def psd_check(nu: Distribution, deg: int) -> tuple[bool, float]:
    """Min eigenvalue of the Gram matrix M[w1, w2] = phi(reverse(w1) w2).

    Letters are self-adjoint, so the involution just reverses words.
    """
    phi = nu.moments
    if 2 * deg > phi.degree_cap:
        raise CapExceededError(
            f"need moments to degree {2 * deg}, cap is {phi.degree_cap}"
        )
    basis = gram_basis(phi.alphabet, deg)
    m = len(basis)
    gram = np.empty((m, m))
    for i, w1 in enumerate(basis):
        for j, w2 in enumerate(basis):
            gram[i, j] = phi(tuple(reversed(w1)) + w2)
    min_eig = float(np.linalg.eigvalsh(gram)[0])
    return min_eig >= -PSD_TOLERANCE, min_eig
