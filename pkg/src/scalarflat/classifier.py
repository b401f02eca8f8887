"""Decision procedures for scalar-flat Hermitian existence.

Implements the ruled-surface criterion (genus g and the intrinsic twist
invariant m decide everything), the split-bundle corollaries, the
total-scalar-image trichotomy, the Hirzebruch anti-canonical section count,
and the minimal-surface gate.  All inequalities are implemented exactly as
strict or non-strict as the theorems state them:

    m <= g                       (realizability of the descriptor)
    stable  <=>  m > 0           (rank two)
    scalar-flat Hermitian  <=>  g >= 2  and  m > 2 - 2g.

The invariant m is an input or is derived from split data as -|deg L|; no
attempt is made to compute it for indecomposable bundles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DescriptorError, NagataViolation
from .geom_core import ClassificationReport
from .positivity import kx_certificate_split

# fired-case identifiers, one per proof branch of the ruled-surface theorem
CASE_HIRZEBRUCH = "Hirzebruch"
CASE_ELLIPTIC = "elliptic base"
CASE_1 = "case (1)"   # m <= 2 - 2g: tautological bundle effective, no metric
CASE_2 = "case (2)"   # 2 - 2g < m <= 0: dual bundle nef of degree < 2g - 2
CASE_3 = "case (3)"   # 0 < m < 2g - 2: bundle nef of degree < 2g - 2
CASE_4 = "case (4)"   # m >= 2g - 2: forces g = 2, m = 2, stable ample bundle


def m_split_rank2(deg_l: int) -> int:
    """Twist invariant of the split model P(L + trivial): m = -|deg L|."""
    return -abs(int(deg_l))


def validate_m(m: int, g: int) -> None:
    """Reject descriptors with m > g, which no rank-two bundle realizes."""
    if g < 0:
        raise DescriptorError(f"genus must be nonnegative, got {g}")
    if m > g:
        raise NagataViolation(f"m = {m} exceeds the genus bound m <= g = {g}")


def is_stable_rank2(m: int) -> bool:
    """Rank-two stability in terms of the twist invariant: stable iff m > 0."""
    return m > 0


def total_scalar_image(kx_rc: bool, anti_kx_rc: bool, ricci_flat: bool) -> str:
    """Image of the total scalar curvature over all Gauduchon metrics.

    Four cases: the whole real line when the canonical and anti-canonical
    bundles are both RC-positive, a half line when exactly one is, and {0}
    when neither is (equivalently, when the manifold is Chern Ricci-flat).
    """
    if ricci_flat and (kx_rc or anti_kx_rc):
        raise DescriptorError(
            "inconsistent flags: a Ricci-flat manifold has neither the canonical "
            "nor the anti-canonical bundle RC-positive")
    if kx_rc and anti_kx_rc:
        return "AllReals"
    if anti_kx_rc:
        return "PositiveReals"
    if kx_rc:
        return "NegativeReals"
    return "ZeroOnly"


def classify_ruled(g: int, m: int, certificate: dict | None = None) -> ClassificationReport:
    """Scalar-flat Hermitian verdict for a ruled surface with invariants (g, m).

    Verdict is "yes" exactly when g >= 2 and m > 2 - 2g.  Exactly one proof
    case fires per input; it is recorded in the report.  The optional
    certificate attachment is passed through when the caller (e.g. the split
    classifier) has constructive data.
    """
    validate_m(m, g)
    if g == 0:
        # every such surface is a Hirzebruch model with twist k = -m >= 0
        attach = certificate or {
            "obstruction": "anti-canonical bundle is effective, so the canonical "
                           "bundle is not RC-positive",
            "anticanonical_sections": hirzebruch_anticanonical_h0(-m),
        }
        return ClassificationReport("no", "no", "PositiveReals", CASE_HIRZEBRUCH, attach)
    if g == 1:
        attach = certificate or {
            "obstruction": "over an elliptic base the anti-canonical bundle is "
                           "pseudo-effective in all three bundle types "
                           "(indecomposable of degree zero or not, decomposable), "
                           "so the canonical bundle is not RC-positive",
        }
        return ClassificationReport("no", "no", "PositiveReals", CASE_ELLIPTIC, attach)
    if m <= 2 - 2 * g:
        attach = certificate or {
            "obstruction": "tautological bundle effective and anti-canonical "
                           "bundle pseudo-effective, so the canonical bundle is "
                           "not RC-positive",
        }
        return ClassificationReport("no", "no", "PositiveReals", CASE_1, attach)
    if m <= 0:
        fired = CASE_2
        attach = certificate or {
            "construction": "dual bundle is nef of degree -m in [0, 2g-2); both "
                            "canonical and anti-canonical bundles are RC-positive",
        }
    elif m < 2 * g - 2:
        fired = CASE_3
        attach = certificate or {
            "construction": "bundle is nef of degree m in (0, 2g-2); both "
                            "canonical and anti-canonical bundles are RC-positive",
        }
    else:
        fired = CASE_4
        attach = certificate or {
            "construction": "stable ample bundle; the canonical twist is unitary "
                            "flat and the tautological contribution is negative, "
                            "so both canonical and anti-canonical bundles are "
                            "RC-positive",
        }
    return ClassificationReport("yes", "unknown", "AllReals", fired, attach)


def classify_split(g: int, deg_l: int, n: int) -> ClassificationReport:
    """Verdicts for the split projective-bundle model P((L + trivial^(n-1))^*).

    For n = 2 this delegates to the ruled-surface criterion with m = -|deg L|
    and adds the Kahler verdict: scalar-flat Kahler metrics exist exactly in
    the polystable case deg L = 0 (with g >= 2); for 0 < |deg L| < 2g - 2 the
    surface has scalar-flat Hermitian but no scalar-flat Kahler metrics.

    For n > 2 the constructive certificate covers |deg L| < (2g-2)/(n-1)
    strictly; the verdict is "no" outside that range with the total-scalar
    image left unknown.
    """
    if n < 2:
        raise DescriptorError(f"fiber rank n must be at least 2, got {n}")
    d = abs(int(deg_l))
    if n == 2:
        base = classify_ruled(g, m_split_rank2(deg_l))
        if base.scalar_flat_hermitian == "yes":
            cert = kx_certificate_split(g, d, 2, resolution=16)
            kahler = "yes" if d == 0 else "no"
            attach = {"margin": cert.margin, "strategy": cert.strategy}
            if d == 0:
                attach["polystable"] = True
            return ClassificationReport("yes", kahler, "AllReals", base.fired_case, attach)
        return base
    positive_range = g >= 2 and d * (n - 1) < 2 * g - 2
    if positive_range:
        cert = kx_certificate_split(g, d, n, resolution=16)
        kahler = "yes" if d == 0 else "no"
        attach = {"margin": cert.margin, "strategy": cert.strategy}
        if d == 0:
            attach["polystable"] = True
        return ClassificationReport("yes", kahler, "AllReals", "higher-rank split", attach)
    return ClassificationReport(
        "no", "no", "unknown", "higher-rank split (outside certified range)",
        {"obstruction": f"|deg L| = {d} is not strictly below "
                        f"(2g-2)/(n-1) = {(2 * g - 2) / (n - 1):g}"})


def hirzebruch_anticanonical_h0(k: int) -> int:
    """Anti-canonical section count of the Hirzebruch surface with twist k >= 0.

    Projecting to the rational base turns the sections into sections of a sum
    of three line bundles of degrees k+2, 2 and 2-k, each contributing
    max(0, degree + 1); the total (k+3) + 3 + max(0, 3-k) is always positive,
    which is the effectivity obstruction used by the classifier.
    """
    if k < 0:
        raise DescriptorError(f"Hirzebruch twist must be nonnegative, got {k}")
    return (k + 3) + 3 + max(0, 3 - k)


# ---------------------------------------------------------------------------
# descriptors

@dataclass(frozen=True)
class RuledSurfaceDescriptor:
    """Ruled surface given by base genus and either the invariant m or split
    degree data (in which case m = -|split_deg|)."""

    genus: int
    m: int | None = None
    split_deg: int | None = None
    n: int = 2

    def __post_init__(self):
        if self.genus < 0:
            raise DescriptorError(f"genus must be nonnegative, got {self.genus}")
        if self.n < 2:
            raise DescriptorError(f"fiber rank n must be at least 2, got {self.n}")
        if self.m is None and self.split_deg is None:
            raise DescriptorError("descriptor needs m or split_deg")
        if (self.m is not None and self.split_deg is not None
                and self.m != -abs(self.split_deg)):
            raise DescriptorError(
                f"m = {self.m} inconsistent with split degree {self.split_deg} "
                f"(split models have m = -|deg L|)")
        validate_m(self.effective_m, self.genus)

    @property
    def effective_m(self) -> int:
        return self.m if self.m is not None else m_split_rank2(self.split_deg)


SURFACE_CLASSES = ("Enriques", "BiElliptic", "K3", "Torus", "Kodaira",
                   "RationalMinimal", "Hirzebruch", "Ruled", "Inoue", "Hopf",
                   "VII0_b2_positive")

_KODAIRA_OF_CLASS = {
    "Enriques": 0.0, "BiElliptic": 0.0, "K3": 0.0, "Torus": 0.0, "Kodaira": 0.0,
    "RationalMinimal": -math.inf, "Hirzebruch": -math.inf, "Ruled": -math.inf,
    "Inoue": -math.inf, "Hopf": -math.inf, "VII0_b2_positive": -math.inf,
}

_TORSION_CANONICAL = ("Enriques", "BiElliptic", "K3", "Torus", "Kodaira")


@dataclass(frozen=True)
class MinimalSurfaceDescriptor:
    """Minimal surface described by Kodaira dimension and class.

    Classes with Kodaira dimension 1 or 2 are not enumerated (they are
    rejected wholesale); for those pass surface_class=None.
    """

    kodaira_dim: float
    surface_class: str | None = None
    genus: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kodaira_dim not in (-math.inf, 0.0, 1.0, 2.0):
            raise DescriptorError(f"Kodaira dimension must be -inf, 0, 1 or 2, "
                                  f"got {self.kodaira_dim!r}")
        if self.kodaira_dim in (1.0, 2.0):
            if self.surface_class is not None:
                raise DescriptorError(
                    "no enumerated class has positive Kodaira dimension")
            return
        if self.surface_class is None:
            raise DescriptorError("a class is required when the Kodaira dimension "
                                  "is 0 or -inf")
        if self.surface_class not in SURFACE_CLASSES:
            raise DescriptorError(f"unknown surface class {self.surface_class!r}")
        if _KODAIRA_OF_CLASS[self.surface_class] != self.kodaira_dim:
            raise DescriptorError(
                f"class {self.surface_class} has Kodaira dimension "
                f"{_KODAIRA_OF_CLASS[self.surface_class]}, not {self.kodaira_dim}")
        if self.surface_class == "Ruled":
            if self.genus is None or self.m is None:
                raise DescriptorError("Ruled descriptors need genus and m")
            validate_m(self.m, self.genus)

    @classmethod
    def of_class(cls, surface_class: str, genus: int | None = None,
                 m: int | None = None) -> "MinimalSurfaceDescriptor":
        if surface_class not in SURFACE_CLASSES:
            raise DescriptorError(f"unknown surface class {surface_class!r}")
        return cls(kodaira_dim=_KODAIRA_OF_CLASS[surface_class],
                   surface_class=surface_class, genus=genus, m=m)


@dataclass(frozen=True)
class GateResult:
    verdict: str          # "admits" | "rejected" | "possible_unknown"
    reason: str
    report: ClassificationReport | None = None

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "reason": self.reason}
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out


def minimal_surface_gate(descriptor: MinimalSurfaceDescriptor) -> GateResult:
    """Scalar-flat Hermitian gate over the minimal-surface classes.

    Kodaira dimension 1 or 2 is rejected outright.  The five Kodaira-zero
    classes admit (torsion canonical bundle).  Rational minimal and
    Hirzebruch surfaces are rejected (effective anti-canonical bundle), as
    are Inoue surfaces (canonical bundle semi-positive but not unitary flat)
    and Hopf surfaces (anti-canonical bundle semi-positive).  Ruled surfaces
    delegate to the (g, m) criterion, and class VII_0 with positive second
    Betti number is left open.
    """
    if descriptor.kodaira_dim in (1.0, 2.0):
        return GateResult("rejected",
                          "positive Kodaira dimension forbids a zero-total-scalar "
                          "Gauduchon metric")
    cls_name = descriptor.surface_class
    if cls_name in _TORSION_CANONICAL:
        return GateResult("admits",
                          f"{cls_name} surfaces have torsion canonical bundle "
                          "(a power of the canonical bundle is trivial), hence "
                          "Chern Ricci-flat metrics")
    if cls_name in ("RationalMinimal", "Hirzebruch"):
        return GateResult("rejected",
                          f"{cls_name} surfaces have effective anti-canonical "
                          "bundle, so the canonical bundle is not RC-positive")
    if cls_name == "Inoue":
        return GateResult("rejected",
                          "Inoue surfaces have semi-positive but not unitary-flat "
                          "canonical bundle")
    if cls_name == "Hopf":
        return GateResult("rejected",
                          "Hopf surfaces have semi-positive anti-canonical bundle")
    if cls_name == "VII0_b2_positive":
        return GateResult("possible_unknown",
                          "class VII_0 surfaces with positive second Betti number "
                          "are not completely classified; existence is open")
    # Ruled
    report = classify_ruled(descriptor.genus, descriptor.m)
    verdict = "admits" if report.scalar_flat_hermitian == "yes" else "rejected"
    return GateResult(verdict,
                      f"ruled surface criterion (g = {descriptor.genus}, "
                      f"m = {descriptor.m}) fired {report.fired_case}", report)
