"""
Parametric copula families with closed-form psi images and measure values.

Four families are supported:

    gauss:r=<r>,d=<d>      equicorrelated Gaussian copula in dimension d+1
    mo:a=<alpha>,b=<beta>  bivariate Marshall-Olkin copula
    frechet:a=<a>,b=<b>    Frechet mixture a M + (1-a-b) Pi + b W
    efgm:a=<alpha>,d=<d>   EFGM copula with the single top-order interaction

Covariates come first, the response is the last coordinate.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import numpy as np
from scipy.special import ndtr

from .bivariate_normal import gaussian_copula_cdf
from .exceptions import InvalidFamilyError, NoClosedFormError
from .models import Dataset, FamilyKind, SeedSpec, Stream

logger = logging.getLogger(__name__)

_PARAMETER_ALIASES = {
    'r': 'r',
    'rho': 'r',
    'd': 'd',
    'a': 'alpha',
    'alpha': 'alpha',
    'b': 'beta',
    'beta': 'beta',
}

_REQUIRED = {
    FamilyKind.GAUSSIAN: ('r',),
    FamilyKind.MARSHALL_OLKIN: ('alpha', 'beta'),
    FamilyKind.FRECHET: ('alpha', 'beta'),
    FamilyKind.EFGM: ('alpha',),
}

_ALLOWED = {
    FamilyKind.GAUSSIAN: {'r', 'd'},
    FamilyKind.MARSHALL_OLKIN: {'alpha', 'beta', 'd'},
    FamilyKind.FRECHET: {'alpha', 'beta', 'd'},
    FamilyKind.EFGM: {'alpha', 'd'},
}


@dataclass(frozen=True)
class FamilySpec:
    """
    Parametric family descriptor.

    Usage:
        FamilySpec.parse('gauss:r=0.6,d=1')
        FamilySpec.marshall_olkin(1, 0.4)
    """
    kind: str
    r: float = None
    alpha: float = None
    beta: float = None
    d: int = 1

    def __post_init__(self):
        try:
            kind = FamilyKind(self.kind)
        except ValueError:
            raise InvalidFamilyError(
                f"Unknown family '{self.kind}'; choose one of {', '.join(FamilyKind.values)}."
            ) from None
        object.__setattr__(self, 'kind', kind)
        for name in _REQUIRED[kind]:
            if getattr(self, name) is None:
                raise InvalidFamilyError(f"{kind.value}: parameter '{name}' is required.")
        for name in ('r', 'alpha', 'beta'):
            value = getattr(self, name)
            if value is not None:
                value = float(value)
                if not math.isfinite(value):
                    raise InvalidFamilyError(f"{kind.value}: parameter '{name}' must be finite.")
                object.__setattr__(self, name, value)
        if int(self.d) != self.d or self.d < 1:
            raise InvalidFamilyError(f"{kind.value}: dimension d must be a positive integer, got {self.d}.")
        object.__setattr__(self, 'd', int(self.d))
        self._validate()

    def _validate(self):
        kind, d = self.kind, self.d
        if kind == FamilyKind.GAUSSIAN:
            # eigenvalues of the (d+1) equicorrelation matrix are 1 - r and 1 + d r
            if not (1.0 - self.r > 0.0 and 1.0 + d * self.r > 0.0):
                raise InvalidFamilyError(
                    f"gauss: r must lie in (-1/d, 1) = ({-1.0 / d:.6g}, 1) for d={d}, got {self.r}."
                )
        elif kind in (FamilyKind.MARSHALL_OLKIN, FamilyKind.FRECHET):
            if d != 1:
                raise InvalidFamilyError(f"{kind.value}: only d=1 is supported, got d={d}.")
            for name in ('alpha', 'beta'):
                value = getattr(self, name)
                if not 0.0 <= value <= 1.0:
                    raise InvalidFamilyError(f"{kind.value}: {name} must lie in [0, 1], got {value}.")
            if kind == FamilyKind.FRECHET and self.alpha + self.beta > 1.0:
                raise InvalidFamilyError(
                    f"frechet: alpha + beta must not exceed 1, got {self.alpha + self.beta}."
                )
        elif kind == FamilyKind.EFGM:
            if not -1.0 <= self.alpha <= 1.0:
                raise InvalidFamilyError(f"efgm: alpha must lie in [-1, 1], got {self.alpha}.")

    @classmethod
    def gaussian(cls, r, d=1):
        return cls(FamilyKind.GAUSSIAN, r=r, d=d)

    @classmethod
    def marshall_olkin(cls, alpha, beta):
        return cls(FamilyKind.MARSHALL_OLKIN, alpha=alpha, beta=beta)

    @classmethod
    def frechet(cls, alpha, beta):
        return cls(FamilyKind.FRECHET, alpha=alpha, beta=beta)

    @classmethod
    def efgm(cls, alpha, d=1):
        return cls(FamilyKind.EFGM, alpha=alpha, d=d)

    @classmethod
    def parse(cls, text):
        """Parse the compact form ``kind:key=value,key=value``."""
        if isinstance(text, cls):
            return text
        kind, _, body = str(text).strip().partition(':')
        params = {}
        for item in filter(None, (part.strip() for part in body.split(','))):
            key, sep, value = item.partition('=')
            key = key.strip().lower()
            if not sep or key not in _PARAMETER_ALIASES:
                raise InvalidFamilyError(f"Cannot parse family parameter '{item}' in '{text}'.")
            name = _PARAMETER_ALIASES[key]
            try:
                params[name] = int(value) if name == 'd' else float(value)
            except ValueError:
                raise InvalidFamilyError(f"Parameter '{key}' in '{text}' is not a number: '{value}'.") from None
        kind = kind.strip().lower()
        if kind in FamilyKind.values:
            unexpected = set(params) - _ALLOWED[FamilyKind(kind)]
            if unexpected:
                raise InvalidFamilyError(
                    f"{kind}: unexpected parameter(s) {', '.join(sorted(unexpected))}."
                )
        return cls(kind, **params)

    def __str__(self):
        if self.kind == FamilyKind.GAUSSIAN:
            return f'gauss:r={self.r!r},d={self.d}'
        if self.kind == FamilyKind.EFGM:
            return f'efgm:a={self.alpha!r},d={self.d}'
        return f'{self.kind.value}:a={self.alpha!r},b={self.beta!r}'


@dataclass(frozen=True)
class FamilyMeasures:
    t: float
    r2: float
    q: float

    def to_dict(self):
        return {'t': self.t, 'r2': self.r2, 'q': self.q}


# Analytic bivariate copulas; all accept broadcastable arrays

def comonotone(s, t):
    return np.minimum(s, t)


def independence(s, t):
    return np.multiply(s, t)


def countermonotone(s, t):
    return np.maximum(np.add(s, t) - 1.0, 0.0)


def _frechet(s, t, alpha, beta):
    return alpha * comonotone(s, t) + (1.0 - alpha - beta) * independence(s, t) + beta * countermonotone(s, t)


def _marshall_olkin(s, t, alpha, beta):
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    return np.minimum(np.power(s, 1.0 - alpha) * t, s * np.power(t, 1.0 - beta))


def _efgm(s, t, alpha):
    return s * t * (1.0 + alpha * (1.0 - s) * (1.0 - t))


def _gaussian(s, t, rho):
    return gaussian_copula_cdf(s, t, rho)


def frechet_copula(alpha, beta):
    return partial(_frechet, alpha=alpha, beta=beta)


def marshall_olkin_copula(alpha, beta):
    return partial(_marshall_olkin, alpha=alpha, beta=beta)


def efgm_copula(alpha):
    return partial(_efgm, alpha=alpha)


def gaussian_copula(rho):
    return partial(_gaussian, rho=rho)


def bertino_bound(s, t):
    """Smallest copula whose diagonal is t^2; lower bound of every psi image."""
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    low, high = np.minimum(s, t), np.maximum(s, t)
    result = np.where(s + t <= 1.0, low * low, low - high + high * high)
    return float(result) if result.ndim == 0 else result


def r_star(r, d=1):
    """Correlation of the Gaussian psi image: d r^2 / (1 + (d-1) r)."""
    # rational arithmetic on the shortest decimal form of r, so 0.8 gives 0.64
    r = Fraction(repr(float(r)))
    return float(d * r * r / (1 + (d - 1) * r))


def _mo_psi_half(s, t, beta):
    # Pi + (beta/2) Pi (log M - log Pi) = Pi (1 - (beta/2) log max(s, t))
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    product = s * t
    high = np.maximum(s, t)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = product * (1.0 - 0.5 * beta * np.log(high))
    return np.where(product > 0.0, value, 0.0)


def _mo_psi_general(s, t, alpha, beta):
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    product = s * t
    high = np.maximum(s, t)
    factor = alpha * alpha / (1.0 - 2.0 * alpha)
    exponent = beta * (1.0 - 2.0 * alpha) / alpha
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        value = product + factor * product * (1.0 - np.power(high, exponent))
    return np.where(product > 0.0, value, 0.0)


def psi_parameters(fam):
    """Parameters of psi(A) inside a named family, where the image stays in one."""
    fam = FamilySpec.parse(fam)
    if fam.kind == FamilyKind.GAUSSIAN:
        return {'family': 'gauss', 'r_star': r_star(fam.r, fam.d)}
    if fam.kind == FamilyKind.FRECHET:
        return {
            'family': 'frechet',
            'alpha_star': fam.alpha ** 2 + fam.beta ** 2,
            'beta_star': 2.0 * fam.alpha * fam.beta,
        }
    if fam.kind == FamilyKind.EFGM:
        return {'family': 'efgm', 'alpha_star': fam.alpha ** 2 / 3 ** fam.d}
    if min(fam.alpha, fam.beta) == 0.0:
        return {'family': 'mo', 'alpha_star': 0.0, 'beta_star': 0.0}
    if fam.alpha == 1.0:
        return {'family': 'mo', 'alpha_star': fam.beta, 'beta_star': fam.beta}
    # exchangeable but outside the Marshall-Olkin class
    branch = 'half' if fam.alpha == 0.5 else 'general'
    return {'family': 'mo-image', 'branch': branch}


def psi_closed_form(fam):
    """Exact psi(A) of the family as a vectorized bivariate function."""
    fam = FamilySpec.parse(fam)
    if fam.kind == FamilyKind.GAUSSIAN:
        return gaussian_copula(r_star(fam.r, fam.d))
    if fam.kind == FamilyKind.FRECHET:
        params = psi_parameters(fam)
        return frechet_copula(params['alpha_star'], params['beta_star'])
    if fam.kind == FamilyKind.EFGM:
        return efgm_copula(fam.alpha ** 2 / 3 ** fam.d)

    alpha, beta = fam.alpha, fam.beta
    if min(alpha, beta) == 0.0:
        return independence
    if alpha == 1.0:
        return marshall_olkin_copula(beta, beta)
    if alpha == 0.5:
        return partial(_mo_psi_half, beta=beta)
    return partial(_mo_psi_general, alpha=alpha, beta=beta)


def closed_form_measures(fam):
    """(T, R^2, Q) of the family from the closed-form psi image."""
    fam = FamilySpec.parse(fam)
    if fam.kind == FamilyKind.GAUSSIAN:
        rs = r_star(fam.r, fam.d)
        return FamilyMeasures(
            t=3.0 / math.pi * math.asin((1.0 + rs) / 2.0) - 0.5,
            r2=6.0 / math.pi * math.asin(rs / 2.0),
            q=2.0 / math.pi * (math.asin((1.0 + rs) / 2.0) - math.asin((1.0 - rs) / 2.0)),
        )
    if fam.kind == FamilyKind.FRECHET:
        a, b = fam.alpha, fam.beta
        return FamilyMeasures(t=(a - b) ** 2 + a * b, r2=(a - b) ** 2, q=(a - b) ** 2)
    if fam.kind == FamilyKind.EFGM:
        a2, d = fam.alpha ** 2, fam.d
        return FamilyMeasures(
            t=a2 / (3 ** d * 5),
            r2=a2 / 3 ** (d + 1),
            q=4.0 * a2 / (3 ** (d + 1) * 5),
        )

    alpha, beta = fam.alpha, fam.beta
    if min(alpha, beta) == 0.0:
        return FamilyMeasures(t=0.0, r2=0.0, q=0.0)
    if alpha == 1.0:
        return FamilyMeasures(
            t=2.0 * beta / (3.0 - beta),
            r2=3.0 * beta / (4.0 - beta),
            q=(4.0 - beta) / ((2.0 - beta) * (3.0 - beta)) * (4.0 - 2.0 ** beta) - 2.0,
        )
    raise NoClosedFormError(
        f"No closed-form measures for {fam}: Marshall-Olkin values are only known "
        "for alpha = 1 or min(alpha, beta) = 0."
    )


def family_copula(fam):
    """CDF of the source copula A itself (bivariate families only)."""
    fam = FamilySpec.parse(fam)
    if fam.d != 1:
        raise NoClosedFormError(f"The source copula of {fam} is not bivariate.")
    if fam.kind == FamilyKind.GAUSSIAN:
        return gaussian_copula(fam.r)
    if fam.kind == FamilyKind.MARSHALL_OLKIN:
        return marshall_olkin_copula(fam.alpha, fam.beta)
    if fam.kind == FamilyKind.FRECHET:
        return frechet_copula(fam.alpha, fam.beta)
    return efgm_copula(fam.alpha)


# Sampling

def equicorrelation(r, size):
    return (1.0 - r) * np.eye(size) + r * np.ones((size, size))


def _root(w, exponent):
    """w ** (1 / exponent) on (0, 1], with the exponent-zero limit 0."""
    with np.errstate(divide='ignore'):
        return np.exp(np.log(w) / exponent)


def _draw_covariates(fam, n, rng):
    """Copula-scale covariates plus whatever latent state the response needs."""
    if fam.kind == FamilyKind.GAUSSIAN:
        factor = np.linalg.cholesky(equicorrelation(fam.r, fam.d + 1))
        latent = rng.standard_normal((n, fam.d))
        return ndtr(latent @ factor[:fam.d, :fam.d].T), (factor, latent)
    if fam.kind == FamilyKind.MARSHALL_OLKIN:
        # uniform-scale exponential shocks: own shock W1, common shock W3
        own, common = rng.random(n), rng.random(n)
        u = np.maximum(_root(own, 1.0 - fam.alpha), _root(common, fam.alpha))
        return u[:, None], common
    return rng.random((n, fam.d)), None


def _draw_response(fam, x, latent, rng):
    n = x.shape[0]
    if fam.kind == FamilyKind.GAUSSIAN:
        factor, normals = latent
        d = fam.d
        z = normals @ factor[d, :d] + factor[d, d] * rng.standard_normal(n)
        return ndtr(z)
    if fam.kind == FamilyKind.MARSHALL_OLKIN:
        return np.maximum(_root(rng.random(n), 1.0 - fam.beta), _root(latent, fam.beta))
    if fam.kind == FamilyKind.FRECHET:
        u = x[:, 0]
        choice, w = rng.random(n), rng.random(n)
        middle = fam.alpha + (1.0 - fam.alpha - fam.beta)
        return np.where(choice < fam.alpha, u, np.where(choice < middle, w, 1.0 - u))
    # EFGM: invert v + a v (1 - v) = w, rationalized root
    a = fam.alpha * np.prod(1.0 - 2.0 * x, axis=1)
    w = rng.random(n)
    return 2.0 * w / ((1.0 + a) + np.sqrt((1.0 + a) ** 2 - 4.0 * a * w))


def _conditional_response(fam, x, latent, rng):
    """Response drawn from the conditional law given the covariates only."""
    if fam.kind != FamilyKind.MARSHALL_OLKIN:
        return _draw_response(fam, x, latent, rng)
    # Given U = u the common shock is u**alpha with probability alpha,
    # otherwise u**alpha times an independent uniform.
    u = x[:, 0]
    n = u.shape[0]
    with np.errstate(divide='ignore', invalid='ignore'):
        scale = np.power(u, fam.alpha)
    common = np.where(rng.random(n) < fam.alpha, scale, scale * rng.random(n))
    return _draw_response(fam, x, common, rng)


def sample(fam, n, seed=None):
    """n i.i.d. copula-scale draws of (X_1..X_d, Y) from the family."""
    fam = FamilySpec.parse(fam)
    seed = SeedSpec.from_value(seed)
    if n < 2:
        raise InvalidFamilyError(f"Sample size must be at least 2, got {n}.")
    x, latent = _draw_covariates(fam, n, seed.generator(Stream.SAMPLING, 0))
    y = _draw_response(fam, x, latent, seed.generator(Stream.SAMPLING, 1))
    logger.debug("Sampled %d draws from %s", n, fam)
    return Dataset(x, y)


def sample_psi(fam, n, seed=None):
    """
    n draws from psi(A): two responses conditionally independent given
    shared covariates. Returns an (n, 2) array of (G(Y), G(Y')).
    """
    fam = FamilySpec.parse(fam)
    seed = SeedSpec.from_value(seed)
    if n < 1:
        raise InvalidFamilyError(f"Sample size must be positive, got {n}.")
    x, latent = _draw_covariates(fam, n, seed.generator(Stream.SAMPLING, 0))
    first = _conditional_response(fam, x, latent, seed.generator(Stream.SAMPLING, 1))
    second = _conditional_response(fam, x, latent, seed.generator(Stream.SAMPLING, 2))
    return np.column_stack((first, second))
