"""One-dimensional correlation functions and their multivariate compositions.

The one-dimensional families are the Matérn correlation

    k(t) = s^nu K_nu(s) / (Gamma(nu) 2^(nu-1)),   s = 2 sqrt(nu) phi |t|,

with smoothness ``nu`` and scale ``phi`` (``K_nu`` is the modified Bessel
function of the second kind), and the Gaussian correlation
``exp(-t^2 / (2 phi^2))``.  Half-integer Matérn smoothness uses the exact
exponential-times-polynomial closed forms; other ``nu`` fall back to the
Bessel evaluation.

Multivariate structures compose a single 1-d base correlation over the
coordinates of the lag ``x - y``:

* ``isotropic`` applies the base to the Euclidean norm of the lag,
* ``product`` multiplies the per-coordinate values,
* ``additive`` averages the per-coordinate values.

Additive and product reductions sort their per-coordinate values before
reducing, so permuting input coordinates reproduces bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, kv

from .errors import DomainError

__all__ = [
    "Kernel1d",
    "MultivariateKernel",
    "matern",
    "gaussian",
    "kernel1d_from_config",
    "multivariate_from_config",
    "STRUCTURES",
]

STRUCTURES = ("isotropic", "product", "additive")

# exp(-s) * polynomial(s) coefficients for half-integer smoothness,
# lowest order first; s = 2 sqrt(nu) phi |t|
_HALF_INTEGER_POLY = {
    0.5: (1.0,),
    1.5: (1.0, 1.0),
    2.5: (1.0, 1.0, 1.0 / 3.0),
    3.5: (1.0, 1.0, 2.0 / 5.0, 1.0 / 15.0),
}


@dataclass(frozen=True)
class Kernel1d:
    """A one-dimensional correlation function.

    Parameters
    ----------
    family : str
        ``"matern"`` or ``"gaussian"``.
    nu : float, optional
        Smoothness of the Matérn family; must be positive.  Unused for
        the Gaussian family.
    phi : float
        Scale parameter; must be positive.  Defaults to 1.
    """

    family: str
    nu: float | None = None
    phi: float = 1.0

    def __post_init__(self):
        if self.family not in ("matern", "gaussian"):
            raise DomainError(f"unknown kernel family {self.family!r}")
        if self.family == "matern":
            if self.nu is None or self.nu <= 0:
                raise DomainError("matern smoothness nu must be positive")
        if self.phi <= 0:
            raise DomainError("scale phi must be positive")

    @property
    def differentiable(self) -> bool:
        """Whether :meth:`derivative` is available for this kernel."""
        return self.family == "gaussian" or (self.nu is not None and self.nu > 1)

    def __call__(self, t):
        """Evaluate the correlation at lag(s) ``t``.

        Accepts scalars or arrays; returns the same shape.  Values lie in
        ``[0, 1]`` with ``k(0) = 1`` exactly.
        """
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise DomainError("kernel lag must be finite")
        if self.family == "gaussian":
            # t*t overflows for astronomically large lags; exp of the
            # resulting -inf is the correct limit 0, so only the warning
            # is suppressed.
            with np.errstate(over="ignore"):
                out = np.exp(-(t * t) / (2.0 * self.phi * self.phi))
        else:
            out = self._matern(np.abs(t))
        return out if out.ndim else float(out)

    def _matern(self, r):
        nu = self.nu
        s = 2.0 * np.sqrt(nu) * self.phi * r
        coeffs = _HALF_INTEGER_POLY.get(nu)
        if coeffs is not None:
            # For astronomically large s the polynomial overflows while the
            # exponential underflows; the product is left as produced (nan)
            # and treated as a numeric failure downstream, so only the
            # warnings are suppressed here.
            with np.errstate(invalid="ignore", over="ignore"):
                poly = np.zeros_like(s)
                for c in reversed(coeffs):
                    poly = poly * s + c
                return poly * np.exp(-s)
        # general smoothness via the Bessel form; the s -> 0 limit is 1
        with np.errstate(invalid="ignore", over="ignore"):
            val = s**nu * kv(nu, s) / (gamma(nu) * 2.0 ** (nu - 1.0))
        val = np.where(s == 0.0, 1.0, val)
        # kv underflows to 0 for large s, giving the correct limit, but the
        # ratio can round a hair above 1 near s = 0
        return np.minimum(val, 1.0)

    def derivative(self, t):
        """Derivative of :meth:`__call__` with respect to the lag.

        Odd function of ``t``: zero at the origin, negative for ``t > 0``.
        The Matérn form shifts smoothness to ``nu - 1`` and therefore
        requires ``nu > 1``.
        """
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise DomainError("kernel lag must be finite")
        if self.family == "gaussian":
            with np.errstate(over="ignore", invalid="ignore"):
                out = -(t / (self.phi * self.phi)) * np.exp(
                    -(t * t) / (2.0 * self.phi * self.phi)
                )
        else:
            nu = self.nu
            if nu <= 1:
                raise DomainError(
                    f"matern derivative requires nu > 1 (got nu={nu})"
                )
            inner = Kernel1d("matern", nu=nu - 1.0, phi=self.phi)
            scale = np.sqrt(nu / (nu - 1.0))
            out = -(2.0 * nu * self.phi**2 * t / (nu - 1.0)) * inner(scale * t)
        return out if out.ndim else float(out)

    def as_config(self) -> dict:
        """Serializable description, mirrored by :func:`kernel1d_from_config`."""
        cfg = {"family": self.family, "phi": self.phi}
        if self.family == "matern":
            cfg["nu"] = self.nu
        return cfg


def matern(nu: float, phi: float = 1.0) -> Kernel1d:
    """Matérn correlation with smoothness ``nu`` and scale ``phi``."""
    return Kernel1d("matern", nu=nu, phi=phi)


def gaussian(phi: float = 1.0) -> Kernel1d:
    """Gaussian correlation with scale ``phi``."""
    return Kernel1d("gaussian", phi=phi)


def kernel1d_from_config(cfg: dict) -> Kernel1d:
    """Inverse of :meth:`Kernel1d.as_config`."""
    family = cfg["family"]
    if family == "matern":
        return matern(float(cfg["nu"]), float(cfg.get("phi", 1.0)))
    return gaussian(float(cfg.get("phi", 1.0)))


@dataclass(frozen=True)
class MultivariateKernel:
    """A 1-d correlation composed over ``dim`` input coordinates.

    ``structure`` is one of ``"isotropic"``, ``"product"``, ``"additive"``.
    All structures return exactly 1 at zero lag.
    """

    base: Kernel1d
    structure: str
    dim: int

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise DomainError(f"unknown kernel structure {self.structure!r}")
        if self.dim < 1:
            raise DomainError("dim must be a positive integer")

    def __call__(self, x, y) -> float:
        """Correlation between points ``x`` and ``y`` (length-``dim`` vectors)."""
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise DomainError(
                f"expected two vectors of length {self.dim}, "
                f"got {x.shape} and {y.shape}"
            )
        return float(self.cross(x[None, :], y[None, :])[0, 0])

    def gram(self, X: np.ndarray) -> np.ndarray:
        """Correlation matrix over the rows of ``X`` (shape n x dim)."""
        return self.cross(X, X)

    def cross(self, X: np.ndarray, Z: np.ndarray) -> np.ndarray:
        """Cross-correlation matrix: entry (i, j) is k(X[i], Z[j])."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if X.shape[1] != self.dim or Z.shape[1] != self.dim:
            raise DomainError(
                f"points must have {self.dim} columns, "
                f"got {X.shape[1]} and {Z.shape[1]}"
            )
        diffs = X[:, None, :] - Z[None, :, :]
        if self.structure == "isotropic":
            return self.base(np.sqrt(np.sum(diffs * diffs, axis=-1)))
        vals = np.sort(self.base(diffs), axis=-1)
        if self.structure == "product":
            return np.prod(vals, axis=-1)
        return np.sum(vals, axis=-1) / self.dim

    def as_config(self) -> dict:
        cfg = self.base.as_config()
        cfg["structure"] = self.structure
        return cfg


def multivariate_from_config(cfg: dict, dim: int) -> MultivariateKernel:
    """Build a :class:`MultivariateKernel` from a config mapping plus dim."""
    return MultivariateKernel(kernel1d_from_config(cfg), cfg["structure"], dim)
