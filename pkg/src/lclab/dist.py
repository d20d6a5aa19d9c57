"""Densities, CDFs and grid discretizations of the three laws under study.

The laws are the standard normal, the product of two independent standard
normals (density ``K0(|x|)/pi``, logarithmically singular at 0), and
Laplace(0,1).  ``GridDensity`` is the shared numeric carrier: a density
sampled on a uniform midpoint grid, which never places a node at the
origin and therefore tolerates the product law's singularity.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import specfun
from .errors import DomainError, SingularityError
from .quadrature import adaptive_quad

_LN_SQRT_2PI = 0.918938533204672741780329736406  # ln sqrt(2 pi)
_LN_PI = math.log(math.pi)


@dataclass(frozen=True)
class AnalyticDensity:
    """A probability density known in closed form.

    ``pdf`` and ``log_pdf`` must accept float ndarrays.  ``tail_rate`` is
    the exponential decay rate of the tails (``inf`` for Gaussian-type
    decay); it bounds the arguments for which exp-tilted integrals of the
    density converge.
    """

    name: str
    pdf: Callable[[np.ndarray], np.ndarray]
    log_pdf: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float] = (-math.inf, math.inf)
    singular_points: tuple[float, ...] = ()
    tail_rate: float = math.inf


def _normal_pdf(x: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * x * x - _LN_SQRT_2PI)


def _normal_log_pdf(x: np.ndarray) -> np.ndarray:
    return -0.5 * x * x - _LN_SQRT_2PI


def _laplace_pdf(x: np.ndarray) -> np.ndarray:
    return 0.5 * np.exp(-np.abs(x))


def _laplace_log_pdf(x: np.ndarray) -> np.ndarray:
    return -np.abs(x) - math.log(2.0)


def _product_pdf(x: np.ndarray) -> np.ndarray:
    return specfun.k0_values(np.abs(x)) / math.pi


def _product_log_pdf(x: np.ndarray) -> np.ndarray:
    return specfun.log_k0_values(np.abs(x)) - _LN_PI


def standard_normal() -> AnalyticDensity:
    """The standard normal law N(0, 1)."""
    return AnalyticDensity("normal", _normal_pdf, _normal_log_pdf)


def laplace() -> AnalyticDensity:
    """Laplace(0, 1): density exp(-|x|)/2, variance 2."""
    return AnalyticDensity("laplace", _laplace_pdf, _laplace_log_pdf, tail_rate=1.0)


def normal_product() -> AnalyticDensity:
    """The law of X1*X2 for independent standard normals: K0(|x|)/pi."""
    return AnalyticDensity(
        "normal-product",
        _product_pdf,
        _product_log_pdf,
        singular_points=(0.0,),
        tail_rate=1.0,
    )


_BUILTIN = {
    "normal": standard_normal,
    "laplace": laplace,
    "normal-product": normal_product,
}


def builtin_density(name: str) -> AnalyticDensity:
    """Look up one of the built-in laws by name."""
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise ValueError(
            f"unknown density {name!r}; available: {', '.join(sorted(_BUILTIN))}"
        ) from None


def builtin_density_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTIN))


def normal_product_density(x):
    """Density of X1*X2 at x != 0; raises at the logarithmic singularity."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr == 0.0):
        raise SingularityError("normal-product density diverges at x = 0")
    out = _product_pdf(arr)
    return out if arr.ndim else float(out)


def laplace_density(x):
    """Laplace(0,1) density exp(-|x|)/2."""
    arr = np.asarray(x, dtype=float)
    out = _laplace_pdf(arr)
    return out if arr.ndim else float(out)


def laplace_cdf(x):
    """Laplace(0,1) CDF: exp(x)/2 for x <= 0, 1 - exp(-x)/2 otherwise."""
    arr = np.asarray(x, dtype=float)
    out = np.where(arr <= 0.0, 0.5 * np.exp(np.minimum(arr, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(arr, 0.0)))
    return out if arr.ndim else float(out)


def normal_product_cdf(x: float, tol: float = 1e-10) -> float:
    """CDF of X1*X2: 1/2 + sign(x) (1/pi) int_0^|x| K0, absolute error <= tol."""
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    x = float(x)
    if x == 0.0:
        return 0.5
    # K0 vanishes (underflows) past ~745; the remaining tail is below any tol
    upper = min(abs(x), 746.0)
    res = adaptive_quad(
        specfun.k0_values,
        0.0,
        upper,
        tol_abs=0.45 * math.pi * tol,
        tol_rel=1e-13,
        max_panels=4096,
    )
    value = 0.5 + math.copysign(res.value / math.pi, x)
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class GridDensity:
    """A density sampled on a uniform midpoint grid of even size.

    Nodes are ``x_k = -L + (k + 1/2) h`` with ``h = 2L/n``; for even ``n``
    no node is 0.  ``raw_mass`` records the mass a normalizing step saw
    before rescaling, when applicable.

    Two metadata fields describe where values are pointwise-faithful
    samples of the underlying density (all values are always
    mass-faithful):

    * ``singular_points``: positions where the source density is
      singular; cells touching them hold cell averages rather than point
      values, and correlation images of those cells inherit an O(h)
      log-level bias.
    * ``trusted_half_width``: set on correlation outputs: beyond the
      input window the correlation is a pure tail-window product,
      qualitatively unlike the underlying law.

    Shape checks skip nodes outside these regions; plain integrals (mass,
    moments, CDF distances) use every node.
    """

    half_width: float
    values: np.ndarray
    raw_mass: float | None = field(default=None, compare=False)
    singular_points: tuple[float, ...] = ()
    trusted_half_width: float | None = None

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "singular_points", tuple(float(s) for s in self.singular_points))
        if values.ndim != 1 or values.size < 2 or values.size % 2:
            raise ValueError("values must be a 1-D array of even length >= 2")
        if not self.half_width > 0.0:
            raise ValueError("half_width must be positive")
        if self.trusted_half_width is not None and not 0.0 < self.trusted_half_width <= self.half_width:
            raise ValueError("trusted_half_width must lie in (0, half_width]")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise ValueError("grid values must be finite and nonnegative")

    @property
    def n_cells(self) -> int:
        return self.values.size

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.n_cells

    @property
    def nodes(self) -> np.ndarray:
        h = self.step
        return -self.half_width + (np.arange(self.n_cells) + 0.5) * h

    @property
    def mass(self) -> float:
        return self.step * float(np.sum(self.values))

    @property
    def mass_defect(self) -> float:
        """|1 - raw_mass| if this grid went through normalization, else 0."""
        return abs(1.0 - self.raw_mass) if self.raw_mass is not None else 0.0

    def normalized(self) -> "GridDensity":
        """Rescale to unit mass, recording the mass seen beforehand."""
        m = self.mass
        if m <= 0.0:
            raise ValueError("cannot normalize a zero-mass grid")
        return GridDensity(
            self.half_width,
            self.values / m,
            raw_mass=m,
            singular_points=self.singular_points,
            trusted_half_width=self.trusted_half_width,
        )

    def to_csv(self) -> str:
        """Serialize as ``x,density`` rows with 17 significant digits.

        Metadata travels in ``#``-prefixed comment lines ahead of the
        header so the file stays a plain two-column CSV for other tools.
        """
        buf = io.StringIO()
        if self.trusted_half_width is not None:
            buf.write(f"# trusted-half-width: {self.trusted_half_width:.17g}\n")
        if self.singular_points:
            pts = " ".join(f"{s:.17g}" for s in self.singular_points)
            buf.write(f"# singular-points: {pts}\n")
        buf.write("x,density\n")
        for x, v in zip(self.nodes, self.values):
            buf.write(f"{x:.17g},{v:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GridDensity":
        """Parse the ``to_csv`` format back into a grid."""
        trusted: float | None = None
        singular: tuple[float, ...] = ()
        lines = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln:
                continue
            if ln.startswith("#"):
                body = ln.lstrip("#").strip()
                if body.lower().startswith("trusted-half-width:"):
                    trusted = float(body.split(":", 1)[1])
                elif body.lower().startswith("singular-points:"):
                    singular = tuple(float(tok) for tok in body.split(":", 1)[1].split())
                continue
            lines.append(ln)
        if not lines or lines[0].lower() != "x,density":
            raise ValueError("expected header 'x,density'")
        try:
            rows = [tuple(float(tok) for tok in ln.split(",")) for ln in lines[1:]]
        except ValueError as exc:
            raise ValueError(f"malformed grid CSV: {exc}") from None
        if any(len(r) != 2 for r in rows) or len(rows) < 2:
            raise ValueError("grid CSV needs >= 2 rows of 'x,density'")
        x = np.array([r[0] for r in rows])
        v = np.array([r[1] for r in rows])
        h = x[1] - x[0]
        if h <= 0 or not np.allclose(np.diff(x), h, rtol=1e-9, atol=1e-12 * abs(h)):
            raise ValueError("grid CSV nodes must be uniformly increasing")
        half_width = 0.5 * (x[-1] - x[0]) + 0.5 * h
        n = len(rows)
        if n % 2:
            raise ValueError("grid CSV must have an even number of rows")
        expected_first = -half_width + 0.5 * h
        if abs(x[0] - expected_first) > 1e-9 * max(1.0, half_width):
            raise ValueError("grid CSV nodes are not a midpoint grid")
        return cls(half_width, v, singular_points=singular, trusted_half_width=trusted)


def _cell_average(density: AnalyticDensity, lo: float, hi: float) -> float:
    inner = [s for s in density.singular_points if lo < s < hi]
    res = adaptive_quad(
        density.pdf, lo, hi, tol_abs=1e-15, tol_rel=1e-11, max_panels=4096, points=inner
    )
    return res.value / (hi - lo)


def discretize(density: AnalyticDensity, half_width: float, n_cells: int) -> GridDensity:
    """Sample a density on the midpoint grid and normalize to unit mass.

    Cells whose closure contains a singular point get the cell average
    (by adaptive quadrature) instead of the midpoint value.
    """
    if not half_width > 0.0:
        raise ValueError("half_width must be positive")
    if n_cells < 64 or n_cells % 2:
        raise ValueError("n_cells must be even and >= 64")
    h = 2.0 * half_width / n_cells
    edges = -half_width + h * np.arange(n_cells + 1)
    nodes = -half_width + (np.arange(n_cells) + 0.5) * h

    singular_cells: set[int] = set()
    for s in density.singular_points:
        if not -half_width <= s <= half_width:
            continue
        k0 = int(np.floor((s + half_width) / h))
        for k in (k0 - 1, k0, k0 + 1):
            if 0 <= k < n_cells and edges[k] <= s <= edges[k + 1]:
                singular_cells.add(k)

    values = np.zeros(n_cells)
    regular = np.ones(n_cells, dtype=bool)
    for k in singular_cells:
        regular[k] = False
    values[regular] = density.pdf(nodes[regular])
    for k in sorted(singular_cells):
        values[k] = _cell_average(density, float(edges[k]), float(edges[k + 1]))

    on_grid = tuple(s for s in density.singular_points if -half_width <= s <= half_width)
    return GridDensity(half_width, values, singular_points=on_grid).normalized()


def moment(grid: GridDensity, p: int) -> float:
    """p-th raw moment of the gridded density, h * sum x_k^p v_k."""
    if not isinstance(p, (int, np.integer)) or p < 0 or p > 8:
        raise DomainError("moment order must be an integer in [0, 8]")
    return grid.step * float(np.sum(grid.nodes**p * grid.values))


def density_mass(density: AnalyticDensity, tol: float = 1e-8) -> float:
    """Total mass of an analytic density by adaptive quadrature.

    Splits at singular points; the integration window is chosen from the
    tail decay rate so the omitted tail is far below ``tol``.
    """
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    rate = density.tail_rate
    extent = 40.0 if not math.isfinite(rate) else max(40.0, 50.0 / rate)
    lo = max(density.support[0], -extent)
    hi = min(density.support[1], extent)
    pts = [s for s in density.singular_points if lo < s < hi]
    if lo < 0.0 < hi:
        pts.append(0.0)
    res = adaptive_quad(
        density.pdf, lo, hi, tol_abs=0.5 * tol, tol_rel=0.0, max_panels=4096, points=pts
    )
    return res.value
