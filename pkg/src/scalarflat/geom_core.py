"""Domain types for curve models, bundle models and fibered total spaces.

Numerical conventions
---------------------
The computational chart for a base curve is *always* the periodic unit square
[0, 1)^2 with complex coordinate z = x + iy, regardless of the declared genus.
Genus is bookkeeping: it never constrains the area density, and it enters the
mathematics only through required integrals such as the canonical-bundle
degree 2g - 2.  This decoupling of topology from analysis is deliberate and is
the central modeling decision of the package: every curvature formula consumed
downstream depends only on scalar densities and their integrals, never on an
embedding of a genus-g surface.  Verdicts about genus-g geometry are therefore
exactly as trustworthy as the density bookkeeping, no more.

Degree convention: a line bundle stores its curvature density kappa, meaning
the curvature form is R = kappa * sqrt(-1) dz^dzbar.  Since
sqrt(-1) dz^dzbar = 2 dx^dy and deg = (1/2pi) * integral(R),

    deg = (1/pi) * integral over the unit square of kappa dx dy,

so a constant density kappa = pi carries degree one.  Every constructed
bundle satisfies this quantization exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegreeError, DescriptorError

#: integral-versus-degree agreement demanded of user-supplied densities
DEGREE_INPUT_TOL = 1e-6
#: quantization tolerance guaranteed for constructed bundles
DEGREE_QUANTIZATION_TOL = 1e-8
#: simplex-weight normalization tolerance
SIMPLEX_TOL = 1e-12

MIN_RESOLUTION = 8
DEFAULT_RESOLUTION = 64


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr)
    out = out.copy()
    out.setflags(write=False)
    return out


def grid_coordinates(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Open (x, y) coordinate arrays of the n x n periodic unit square.

    Shapes (n, 1) and (1, n); broadcasting them against each other yields
    full grids.  field[i, j] sits at x = i/n, y = j/n.
    """
    t = np.arange(n) / n
    return t[:, None], t[None, :]


@dataclass(frozen=True, eq=False)
class CurveModel:
    """Computational chart for a base curve.

    genus       -- degree bookkeeping only (see module docstring)
    resolution  -- grid is resolution x resolution over the periodic unit square
    lam         -- fiducial area density: reference form is lam * sqrt(-1) dz^dzbar
    """

    genus: int
    resolution: int
    lam: np.ndarray

    def __post_init__(self):
        if self.genus < 0:
            raise DescriptorError(f"genus must be nonnegative, got {self.genus}")
        if self.resolution < MIN_RESOLUTION:
            raise DescriptorError(
                f"resolution must be at least {MIN_RESOLUTION}, got {self.resolution}")
        lam = np.asarray(self.lam, dtype=float)
        if lam.shape != (self.resolution, self.resolution):
            raise DescriptorError(
                f"area density shape {lam.shape} does not match resolution {self.resolution}")
        if not np.all(np.isfinite(lam)) or np.any(lam <= 0.0):
            raise DescriptorError("area density must be finite and positive everywhere")
        object.__setattr__(self, "lam", _freeze(lam))

    @classmethod
    def flat(cls, genus: int, resolution: int = DEFAULT_RESOLUTION,
             density: float = 1.0) -> "CurveModel":
        """Chart with a constant area density."""
        lam = np.full((resolution, resolution), float(density))
        return cls(genus=genus, resolution=resolution, lam=lam)

    @property
    def cell_area(self) -> float:
        return 1.0 / float(self.resolution) ** 2

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        return grid_coordinates(self.resolution)

    def matches(self, other: "CurveModel") -> bool:
        """Same grid and same fiducial density (genus must agree too)."""
        return (self.genus == other.genus
                and self.resolution == other.resolution
                and np.array_equal(self.lam, other.lam))


def integrate(field_values: np.ndarray, curve: CurveModel, weighted: bool = False) -> float:
    """Integral of a density over the unit square: sum * cell area.

    With weighted=True the field is integrated against the fiducial density
    lam (i.e. against the reference area form up to the fixed factor 2).
    """
    values = np.asarray(field_values)
    n = curve.resolution
    if values.shape != (n, n):
        raise ValueError(f"field shape {values.shape} does not match curve grid {(n, n)}")
    if weighted:
        values = values * curve.lam
    return float(np.sum(values) * curve.cell_area)


@dataclass(frozen=True, eq=False)
class LineBundleModel:
    """A degree integer plus a curvature density on the curve grid.

    Invariant: (1/pi) * integrate(kappa) equals the degree to within
    DEGREE_QUANTIZATION_TOL.  Use make_line_bundle to construct instances;
    it projects user input onto the invariant exactly.
    """

    degree: int
    kappa: np.ndarray
    curve: CurveModel

    def __post_init__(self):
        kappa = np.asarray(self.kappa, dtype=float)
        n = self.curve.resolution
        if kappa.shape != (n, n):
            raise DescriptorError(
                f"curvature density shape {kappa.shape} does not match curve grid {(n, n)}")
        if not np.all(np.isfinite(kappa)):
            raise DescriptorError("curvature density must be finite")
        measured = integrate(kappa, self.curve) / np.pi
        if abs(measured - self.degree) > DEGREE_QUANTIZATION_TOL:
            raise DegreeError(
                f"density integrates to degree {measured!r}, declared {self.degree}")
        object.__setattr__(self, "kappa", _freeze(kappa))

    def measured_degree(self) -> float:
        return integrate(self.kappa, self.curve) / np.pi


def make_line_bundle(degree: int, profile, curve: CurveModel) -> LineBundleModel:
    """Build a line bundle model of the given degree.

    profile is either the string "constant" (density kappa = pi * degree) or a
    supplied (n, n) density field whose integral must match pi * degree to
    within DEGREE_INPUT_TOL; the field is then shifted by a constant so the
    quantization invariant holds exactly.  A larger mismatch signals an
    inconsistent input and is rejected rather than silently renormalized.
    """
    n = curve.resolution
    if isinstance(profile, str):
        if profile != "constant":
            raise DescriptorError(f"unknown profile {profile!r}")
        kappa = np.full((n, n), np.pi * degree)
    else:
        supplied = np.asarray(profile, dtype=float)
        if supplied.shape != (n, n):
            raise DescriptorError(
                f"supplied density shape {supplied.shape} does not match curve grid {(n, n)}")
        raw = integrate(supplied, curve)
        if abs(raw - np.pi * degree) > DEGREE_INPUT_TOL:
            raise DegreeError(
                f"supplied density integrates to {raw!r}, expected {np.pi * degree!r} "
                f"for degree {degree} (tolerance {DEGREE_INPUT_TOL})")
        kappa = supplied + (np.pi * degree - raw)
    return LineBundleModel(degree=degree, kappa=kappa, curve=curve)


def tensor_product(a: LineBundleModel, b: LineBundleModel) -> LineBundleModel:
    """Tensor product model: degrees add, curvature densities add."""
    if not a.curve.matches(b.curve):
        raise DescriptorError("tensor factors live on different curve models")
    return LineBundleModel(degree=a.degree + b.degree, kappa=a.kappa + b.kappa, curve=a.curve)


@dataclass(frozen=True, eq=False)
class SplitBundle:
    """Ordered direct sum of line bundle models with a diagonal Hermitian structure."""

    summands: tuple[LineBundleModel, ...]

    def __post_init__(self):
        summands = tuple(self.summands)
        if len(summands) < 1:
            raise DescriptorError("a split bundle needs at least one summand")
        base = summands[0].curve
        for s in summands[1:]:
            if not s.curve.matches(base):
                raise DescriptorError("all summands must share one curve model grid")
        object.__setattr__(self, "summands", summands)

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def total_degree(self) -> int:
        return sum(s.degree for s in self.summands)

    @property
    def curve(self) -> CurveModel:
        return self.summands[0].curve


@dataclass(frozen=True, eq=False)
class FiberSimplexPoint:
    """Normalized fiber weights s_alpha = |a_alpha|^2 / |a|^2 of a point on the
    projectivized fiber; nonnegative and summing to one."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise DescriptorError("weights must be a nonempty vector")
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise DescriptorError("weights must be finite and nonnegative")
        if abs(float(np.sum(w)) - 1.0) > SIMPLEX_TOL:
            raise DescriptorError(
                f"weights sum to {float(np.sum(w))!r}, not 1 within {SIMPLEX_TOL}")
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def rank(self) -> int:
        return int(self.weights.size)


@dataclass(frozen=True, eq=False)
class OneOneForm:
    """Sampled block-diagonal (1,1)-form on a fibered total space.

    base_component[k] is the base-base scalar density at fiber sample k;
    s1[k] records the weight on the distinguished first summand at that
    sample (the remaining weight sits on the trivial directions, which the
    base component never depends on for split bundles).  The fiber block is
    fs_multiple * omega_FS.  Cross terms are identically zero by
    construction, which is what restricts this representation to diagonal
    bundle data.
    """

    base_component: np.ndarray
    s1: np.ndarray
    fs_multiple: float

    def __post_init__(self):
        base = np.asarray(self.base_component, dtype=float)
        s1 = np.atleast_1d(np.asarray(self.s1, dtype=float))
        if base.ndim != 3:
            raise DescriptorError(
                f"base component must be (samples, n, n), got shape {base.shape}")
        if s1.shape != (base.shape[0],):
            raise DescriptorError(
                f"fiber sample count {s1.shape} does not match base component {base.shape}")
        if np.any(s1 < 0.0) or np.any(s1 > 1.0):
            raise DescriptorError("fiber weights must lie in [0, 1]")
        if not np.all(np.isfinite(base)):
            raise DescriptorError("base component must be finite everywhere")
        if not np.isfinite(self.fs_multiple):
            raise DescriptorError("fiber multiple must be finite")
        object.__setattr__(self, "base_component", _freeze(base))
        object.__setattr__(self, "s1", _freeze(s1))
        object.__setattr__(self, "fs_multiple", float(self.fs_multiple))

    @property
    def sample_count(self) -> int:
        return int(self.s1.size)


VERDICTS = ("yes", "no", "unknown")
KAHLER_VERDICTS = ("yes", "no", "unknown", "not-applicable")
IMAGES = ("AllReals", "PositiveReals", "NegativeReals", "ZeroOnly", "unknown")


@dataclass(frozen=True)
class ClassificationReport:
    """Existence verdicts plus the decision branch and certificate that produced them.

    Invariant: the scalar-flat Hermitian verdict is "yes" exactly when the
    total-scalar image is AllReals or ZeroOnly, and a "yes" Kahler verdict
    requires a "yes" Hermitian verdict.
    """

    scalar_flat_hermitian: str
    scalar_flat_kahler: str
    total_scalar_image: str
    fired_case: str
    certificate: dict | None = field(default=None)

    def __post_init__(self):
        if self.scalar_flat_hermitian not in VERDICTS:
            raise DescriptorError(f"bad Hermitian verdict {self.scalar_flat_hermitian!r}")
        if self.scalar_flat_kahler not in KAHLER_VERDICTS:
            raise DescriptorError(f"bad Kahler verdict {self.scalar_flat_kahler!r}")
        if self.total_scalar_image not in IMAGES:
            raise DescriptorError(f"bad total-scalar image {self.total_scalar_image!r}")
        flat_image = self.total_scalar_image in ("AllReals", "ZeroOnly")
        if (self.scalar_flat_hermitian == "yes") != flat_image:
            if not (self.scalar_flat_hermitian != "yes" and self.total_scalar_image == "unknown"):
                raise DescriptorError(
                    f"verdict {self.scalar_flat_hermitian!r} inconsistent with "
                    f"total-scalar image {self.total_scalar_image!r}")
        if self.scalar_flat_kahler == "yes" and self.scalar_flat_hermitian != "yes":
            raise DescriptorError("a scalar-flat Kahler metric is in particular Hermitian")

    def to_dict(self) -> dict:
        return {
            "scalar_flat_hermitian": self.scalar_flat_hermitian,
            "scalar_flat_kahler": self.scalar_flat_kahler,
            "total_scalar_image": self.total_scalar_image,
            "fired_case": self.fired_case,
            "certificate": self.certificate,
        }


# ---------------------------------------------------------------------------
# external interfaces: JSON bundle descriptors and CSV density grids

def load_field_csv(path) -> np.ndarray:
    """Read an n x n density grid from CSV (row-major, decimal floats)."""
    values = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    if values.shape[0] != values.shape[1]:
        raise DescriptorError(f"field file {path} is {values.shape}, expected square")
    return values


def save_field_csv(path, field_values: np.ndarray) -> None:
    np.savetxt(path, np.asarray(field_values, dtype=float), delimiter=",")


def load_bundle_descriptor(source) -> tuple[CurveModel, SplitBundle]:
    """Build (CurveModel, SplitBundle) from a JSON descriptor.

    Schema: {"genus": int, "resolution": int,
             "summands": [{"degree": int, "profile": "constant" | {"file": path}}]}
    Relative profile paths resolve against the descriptor's directory.  The
    fiducial density is constant one.
    """
    base_dir = Path(".")
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        base_dir = path.parent
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    try:
        genus = int(doc["genus"])
        resolution = int(doc["resolution"])
        raw_summands = doc["summands"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DescriptorError(f"malformed bundle descriptor: {exc}") from exc
    if not isinstance(raw_summands, list) or not raw_summands:
        raise DescriptorError("descriptor must list at least one summand")
    curve = CurveModel.flat(genus=genus, resolution=resolution)
    summands = []
    for entry in raw_summands:
        try:
            degree = int(entry["degree"])
            profile = entry.get("profile", "constant")
        except (KeyError, TypeError, ValueError) as exc:
            raise DescriptorError(f"malformed summand entry {entry!r}: {exc}") from exc
        if isinstance(profile, dict):
            profile = load_field_csv(base_dir / profile["file"])
        summands.append(make_line_bundle(degree, profile, curve))
    return curve, SplitBundle(tuple(summands))
