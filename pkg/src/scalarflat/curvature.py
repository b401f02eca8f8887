"""Chern curvature engines.

Covers curvature of Hermitian bundle metrics over a curve chart, induced
curvature of tautological bundles on split projective bundles, the
canonical-bundle curvature of P(L + trivial^(n-1)) via the projection
formula, and Chern-Ricci / scalar / total-scalar curvature of honest
Hermitian metrics on a discretized complex 2-torus.

On the 2-torus the volume normalization follows the package degree
convention: with omega = sqrt(-1) sum g_ij dz^i ^ dzbar^j on the periodic
unit 4-cube, omega^2 = 8 det(g) dx1 dy1 dx2 dy2, so the total scalar
curvature integral(s omega^2) is computed as 8 * mean(s * det g).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fourier
from .errors import DegreeError, DescriptorError, NumericalInconsistencyError
from .geom_core import (
    FiberSimplexPoint,
    LineBundleModel,
    OneOneForm,
    SplitBundle,
    _freeze,
)

#: relative imaginary residue above which a "real" quantity is rejected
IMAG_RESIDUE_TOL = 1e-8
#: agreement demanded between the two defining expressions of total scalar curvature
TOTAL_SCALAR_CROSS_TOL = 1e-6
#: input Hermitian-asymmetry tolerance for metric fields
HERMITIAN_INPUT_TOL = 1e-10


def require_real(values: np.ndarray, context: str) -> np.ndarray:
    """Drop an imaginary part only if it is negligible; raise otherwise."""
    if np.isrealobj(values):
        return values
    scale = max(1.0, float(np.max(np.abs(values.real))) if values.size else 1.0)
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > IMAG_RESIDUE_TOL * scale:
        raise NumericalInconsistencyError(
            f"{context}: imaginary residue {residue:.3e} exceeds "
            f"{IMAG_RESIDUE_TOL:.0e} * {scale:.3e}")
    return values.real


# ---------------------------------------------------------------------------
# bundle curvature over a curve chart

def chern_curvature_matrix(h: np.ndarray, backend: str = fourier.SPECTRAL) -> np.ndarray:
    """Full Chern curvature of a Hermitian bundle metric over the curve chart.

    h is an (n, n, r, r) field of positive Hermitian matrices; the output
    R[..., a, b] holds the components R_{z zbar a bbar}, i.e.

        R = -d^2 h / (dz dzbar) + (dh/dz) h^{-1} (dh/dzbar),

    which includes the first-derivative correction term.  The result is
    Hermitian in (a, b) at every grid point.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 4 or h.shape[2] != h.shape[3]:
        raise ValueError(f"expected an (n, n, r, r) matrix field, got shape {h.shape}")
    asym = float(np.max(np.abs(h - np.conj(np.swapaxes(h, 2, 3)))))
    if asym > HERMITIAN_INPUT_TOL * max(1.0, float(np.max(np.abs(h)))):
        raise DescriptorError(f"metric field is not Hermitian (asymmetry {asym:.3e})")
    eigenvalues = np.linalg.eigvalsh(h)
    if float(eigenvalues.min()) <= 0.0:
        raise DescriptorError(
            f"metric field is not positive definite (min eigenvalue {eigenvalues.min():.3e})")

    r = h.shape[2]
    hz = np.empty_like(h)
    hzbar = np.empty_like(h)
    hzzbar = np.empty_like(h)
    for a in range(r):
        for b in range(r):
            hz[..., a, b] = fourier.dz(h[..., a, b], backend)
            hzbar[..., a, b] = fourier.dzbar(h[..., a, b], backend)
            hzzbar[..., a, b] = fourier.ddbar(h[..., a, b], backend)
    correction = np.einsum("...ab,...bc,...cd->...ad", hz, np.linalg.inv(h), hzbar)
    curv = -hzzbar + correction
    # exact Hermitian symmetrization; the asymmetry is pure roundoff
    return 0.5 * (curv + np.conj(np.swapaxes(curv, 2, 3)))


def tautological_base_curvature(bundle: SplitBundle, point: FiberSimplexPoint) -> np.ndarray:
    """Base-base part of the tautological-bundle curvature at one fiber point.

    For a diagonal bundle the induced curvature along the base at fiber
    weights s is sum_alpha kappa_alpha(z) * s_alpha; the full form is this
    field plus one copy of the Fubini-Study form on the fiber, which the
    caller assembles into a OneOneForm.
    """
    if point.rank != bundle.rank:
        raise DescriptorError(
            f"fiber point rank {point.rank} does not match bundle rank {bundle.rank}")
    stack = np.stack([s.kappa for s in bundle.summands])
    return np.tensordot(point.weights, stack, axes=(0, 0))


def canonical_curvature_split(bundle: SplitBundle, canonical: LineBundleModel,
                              s1) -> OneOneForm:
    """Canonical-bundle curvature of P((L + trivial^(n-1))^*) over the curve.

    The projection formula expresses the canonical bundle as the -n twist of
    the tautological bundle times the pullback of (canonical of the curve)
    tensor det E, so with kappa the density of L and gamma the density of the
    curve's canonical model the curvature is

        base:  (kappa + gamma) - n * kappa * s1      (s1 = weight on L)
        fiber: -n * omega_FS.

    s1 may be a scalar or a vector of fiber samples in [0, 1].
    """
    n = bundle.rank
    if n < 2:
        raise DescriptorError("projective-bundle model needs rank at least 2")
    lead = bundle.summands[0]
    for trivial in bundle.summands[1:]:
        if trivial.degree != 0 or float(np.max(np.abs(trivial.kappa))) > 1e-12:
            raise DescriptorError(
                "expected one nontrivial leading summand and trivial remaining summands")
    curve = bundle.curve
    if not canonical.curve.matches(curve):
        raise DescriptorError("canonical-bundle model lives on a different curve grid")
    if canonical.degree != 2 * curve.genus - 2:
        raise DegreeError(
            f"canonical degree {canonical.degree} inconsistent with genus {curve.genus} "
            f"(expected {2 * curve.genus - 2})")
    samples = np.atleast_1d(np.asarray(s1, dtype=float))
    if samples.ndim != 1 or np.any(samples < 0.0) or np.any(samples > 1.0):
        raise DescriptorError("fiber weight s1 must lie in [0, 1]")
    kappa = lead.kappa
    gamma = canonical.kappa
    base = (kappa + gamma)[None, :, :] - n * kappa[None, :, :] * samples[:, None, None]
    return OneOneForm(base_component=base, s1=samples, fs_multiple=float(-n))


# ---------------------------------------------------------------------------
# honest Hermitian metrics on the discretized complex 2-torus

@dataclass(frozen=True, eq=False)
class MetricModel4T:
    """Hermitian metric on the periodic 4-grid: a positive 2x2 Hermitian
    matrix at every point, with cached determinant and inverse fields.

    g has shape (n, n, n, n, 2, 2) over axes (x1, y1, x2, y2).  Instances are
    immutable; a private memo stores derived curvature fields (recomputing
    one concurrently is harmless, results are identical)."""

    g: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        if g.ndim != 6 or g.shape[4:] != (2, 2):
            raise DescriptorError(f"expected shape (n, n, n, n, 2, 2), got {g.shape}")
        n = g.shape[0]
        if g.shape[:4] != (n, n, n, n):
            raise DescriptorError(f"expected an equal-resolution grid, got {g.shape[:4]}")
        if not np.all(np.isfinite(g)):
            raise DescriptorError("metric entries must be finite")
        adjoint = np.conj(np.swapaxes(g, 4, 5))
        asym = float(np.max(np.abs(g - adjoint)))
        if asym > HERMITIAN_INPUT_TOL * max(1.0, float(np.max(np.abs(g)))):
            raise DescriptorError(f"metric is not Hermitian (asymmetry {asym:.3e})")
        g = 0.5 * (g + adjoint)
        g11 = g[..., 0, 0].real
        g22 = g[..., 1, 1].real
        det = g11 * g22 - np.abs(g[..., 0, 1]) ** 2
        if float(g11.min()) <= 0.0 or float(det.min()) <= 0.0:
            raise DescriptorError(
                "metric is not positive definite "
                f"(min leading entry {g11.min():.3e}, min determinant {det.min():.3e})")
        inverse = np.empty_like(g)
        inverse[..., 0, 0] = g22 / det
        inverse[..., 1, 1] = g11 / det
        inverse[..., 0, 1] = -g[..., 0, 1] / det
        inverse[..., 1, 0] = -g[..., 1, 0] / det
        object.__setattr__(self, "g", _freeze(g))
        object.__setattr__(self, "det", _freeze(det))
        object.__setattr__(self, "inverse", _freeze(inverse))
        object.__setattr__(self, "_derived", {})

    @property
    def resolution(self) -> int:
        return int(self.g.shape[0])

    @classmethod
    def flat(cls, resolution: int) -> "MetricModel4T":
        g = np.zeros((resolution,) * 4 + (2, 2), dtype=complex)
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = 1.0
        return cls(g)

    @classmethod
    def conformal(cls, exponent: np.ndarray) -> "MetricModel4T":
        """Metric e^u * (flat) for a real exponent field u."""
        u = np.asarray(exponent, dtype=float)
        factor = np.exp(u)
        g = np.zeros(u.shape + (2, 2), dtype=complex)
        g[..., 0, 0] = factor
        g[..., 1, 1] = factor
        return cls(g)

    @classmethod
    def from_kahler_potential(cls, phi: np.ndarray,
                              backend: str = fourier.SPECTRAL) -> "MetricModel4T":
        """Perturbation of the flat metric by the complex Hessian of a potential."""
        phi = np.asarray(phi, dtype=float)
        d11, d22, d12 = fourier.ddbar4_components(phi, backend)
        g = np.zeros(phi.shape + (2, 2), dtype=complex)
        g[..., 0, 0] = 1.0 + d11
        g[..., 1, 1] = 1.0 + d22
        g[..., 0, 1] = d12
        g[..., 1, 0] = np.conj(d12)
        return cls(g)

    def rescaled(self, exponent: np.ndarray) -> "MetricModel4T":
        """Conformally rescaled metric e^w * g for a real field w."""
        w = np.asarray(exponent, dtype=float)
        if w.shape != self.g.shape[:4]:
            raise ValueError(f"exponent shape {w.shape} does not match grid {self.g.shape[:4]}")
        return MetricModel4T(self.g * np.exp(w)[..., None, None])


@dataclass(frozen=True, eq=False)
class RicciField:
    """Components of the Chern-Ricci form in the dz^i ^ dzbar^j basis."""

    ric: np.ndarray

    def __post_init__(self):
        ric = np.asarray(self.ric, dtype=complex)
        if ric.ndim != 6 or ric.shape[4:] != (2, 2):
            raise DescriptorError(f"expected shape (n, n, n, n, 2, 2), got {ric.shape}")
        if not np.all(np.isfinite(ric)):
            raise DescriptorError("Ricci components must be finite")
        adjoint = np.conj(np.swapaxes(ric, 4, 5))
        asym = float(np.max(np.abs(ric - adjoint)))
        if asym > HERMITIAN_INPUT_TOL * max(1.0, float(np.max(np.abs(ric)))):
            raise DescriptorError(f"Ricci field is not Hermitian (asymmetry {asym:.3e})")
        object.__setattr__(self, "ric", _freeze(0.5 * (ric + adjoint)))


def _ricci_components(metric: MetricModel4T, backend: str):
    """(R11, R22, R12) of -ddbar log det g, memoized on the metric."""
    key = ("ricci-components", backend)
    cached = metric._derived.get(key)
    if cached is None:
        log_det = np.log(metric.det)
        d11, d22, d12 = fourier.ddbar4_components(log_det, backend)
        cached = (-d11, -d22, -d12)
        metric._derived[key] = cached
    return cached


def chern_ricci(metric: MetricModel4T, backend: str = fourier.SPECTRAL) -> RicciField:
    """Chern-Ricci curvature: ric_ij = -d^2 log det(g) / (dz^i dzbar^j)."""
    r11, r22, r12 = _ricci_components(metric, backend)
    ric = np.zeros(metric.g.shape, dtype=complex)
    ric[..., 0, 0] = r11
    ric[..., 1, 1] = r22
    ric[..., 0, 1] = r12
    ric[..., 1, 0] = np.conj(r12)
    return RicciField(ric)


def chern_scalar(metric: MetricModel4T, backend: str = fourier.SPECTRAL) -> np.ndarray:
    """Chern scalar curvature s = g^{i jbar} ric_{i jbar} (real field)."""
    key = ("scalar", backend)
    cached = metric._derived.get(key)
    if cached is not None:
        return cached
    r11, r22, r12 = _ricci_components(metric, backend)
    inv = metric.inverse
    w11 = inv[..., 0, 0].real
    w22 = inv[..., 1, 1].real
    # g^{1 2bar} = conj(inverse_01); its pairing with r12 contributes twice the real part
    cross = inv[..., 0, 1]
    s = w11 * r11 + w22 * r22 + 2.0 * (cross.real * r12.real + cross.imag * r12.imag)
    s = require_real(s, "chern_scalar")
    metric._derived[key] = _freeze(s)
    return metric._derived[key]


def total_scalar(metric: MetricModel4T, backend: str = fourier.SPECTRAL) -> float:
    """Total Chern scalar curvature integral(s omega^2) over the 4-torus.

    Also evaluates the wedge expression 2 integral(Ric ^ omega) and raises
    NumericalInconsistencyError if the two disagree beyond tolerance.
    """
    trace_route, wedge_route = total_scalar_routes(metric, backend)
    if abs(trace_route - wedge_route) > TOTAL_SCALAR_CROSS_TOL:
        raise NumericalInconsistencyError(
            f"total scalar cross-check failed: trace route {trace_route!r} vs "
            f"wedge route {wedge_route!r}")
    return trace_route


def total_scalar_routes(metric: MetricModel4T,
                        backend: str = fourier.SPECTRAL) -> tuple[float, float]:
    """Both defining expressions of the total scalar curvature."""
    s = chern_scalar(metric, backend)
    trace_route = 8.0 * float(np.mean(s * metric.det))
    r11, r22, r12 = _ricci_components(metric, backend)
    g = metric.g
    wedge = (r11 * g[..., 1, 1].real + r22 * g[..., 0, 0].real
             - 2.0 * (r12 * np.conj(g[..., 0, 1])).real)
    wedge_route = 8.0 * float(np.mean(wedge))
    return trace_route, wedge_route


def conformal_ricci(ric: RicciField, f: np.ndarray, n: int,
                    backend: str = fourier.SPECTRAL) -> RicciField:
    """Ricci curvature after the conformal change omega -> e^f omega in
    complex dimension n: returns ric - n * ddbar f componentwise."""
    f = np.asarray(f, dtype=float)
    if f.shape != ric.ric.shape[:4]:
        raise ValueError(f"conformal factor shape {f.shape} does not match {ric.ric.shape[:4]}")
    d11, d22, d12 = fourier.ddbar4_components(f, backend)
    out = np.array(ric.ric)
    out[..., 0, 0] -= n * d11
    out[..., 1, 1] -= n * d22
    out[..., 0, 1] -= n * d12
    out[..., 1, 0] -= n * np.conj(d12)
    return RicciField(out)


def curvature_report(metric: MetricModel4T, backend: str = fourier.SPECTRAL) -> dict:
    """Machine-readable scalar-curvature report for a metric."""
    s = chern_scalar(metric, backend)
    trace_route, wedge_route = total_scalar_routes(metric, backend)
    return {
        "min": float(s.min()),
        "max": float(s.max()),
        "integral": trace_route,
        "cross_check_residual": abs(trace_route - wedge_route),
    }


# ---------------------------------------------------------------------------
# CSV persistence for metrics and 4-d scalar fields

# the Hermitian 2x2 metric is stored as four real grids: both diagonal
# entries plus the real and imaginary parts of the upper off-diagonal entry
_COMPONENT_FILES = {
    "11": "g11.csv",
    "22": "g22.csv",
    "12re": "g12_re.csv",
    "12im": "g12_im.csv",
}


def _write_grid_csv(path: Path, values: np.ndarray, component: str) -> None:
    n = values.shape[0]
    flat = values.reshape(n ** 3, n)
    header = f"N={n} component={component}"
    np.savetxt(path, flat, delimiter=",", header=header)


def _read_grid_csv(path: Path, component: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as handle:
        first = handle.readline()
    if f"component={component}" not in first:
        raise DescriptorError(f"{path}: expected component={component}, header was {first!r}")
    flat = np.loadtxt(path, delimiter=",", comments="#")
    n = flat.shape[1]
    if flat.shape != (n ** 3, n):
        raise DescriptorError(f"{path}: grid shape {flat.shape} is not a flattened 4-cube")
    return flat.reshape(n, n, n, n)


def save_metric(metric: MetricModel4T, directory) -> Path:
    """Write metric components as CSV grids plus a JSON manifest; returns the
    manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    g = metric.g
    fields = {
        "11": g[..., 0, 0].real,
        "22": g[..., 1, 1].real,
        "12re": g[..., 0, 1].real,
        "12im": g[..., 0, 1].imag,
    }
    manifest = {"resolution": metric.resolution, "components": {}}
    for component, fname in _COMPONENT_FILES.items():
        _write_grid_csv(directory / fname, fields[component], component)
        manifest["components"][component] = fname
    manifest_path = directory / "metric.json"
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")
    return manifest_path


def load_metric(manifest_path) -> MetricModel4T:
    manifest_path = Path(manifest_path)
    with open(manifest_path, "r", encoding="utf-8") as handle:
        manifest = json.load(handle)
    directory = manifest_path.parent
    parts = {}
    for component in _COMPONENT_FILES:
        fname = manifest["components"][component]
        parts[component] = _read_grid_csv(directory / fname, component)
    n = manifest["resolution"]
    g = np.zeros((n, n, n, n, 2, 2), dtype=complex)
    g[..., 0, 0] = parts["11"]
    g[..., 1, 1] = parts["22"]
    g[..., 0, 1] = parts["12re"] + 1j * parts["12im"]
    g[..., 1, 0] = np.conj(g[..., 0, 1])
    return MetricModel4T(g)


def save_field4(path, values: np.ndarray, label: str = "f") -> None:
    """Write a real 4-d grid field as CSV (same layout as metric components)."""
    _write_grid_csv(Path(path), np.asarray(values, dtype=float), label)


def load_field4(path, label: str = "f") -> np.ndarray:
    return _read_grid_csv(Path(path), label)
