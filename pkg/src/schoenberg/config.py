"""Library-wide numerical tolerances and the default RNG seed.

All tolerances are relative to the scale factors documented at their point
of use.  They can be overridden per call; these module constants are only
the defaults.
"""

from __future__ import annotations

from dataclasses import dataclass

# Residual tolerance for accepting a computed polynomial root, relative to
# max(1, root bound)^degree times the leading coefficient.
TOL_ROOT = 1e-9

# Centroid residual |sum z| / max(1, max |z|) below which a configuration
# counts as centered.
TOL_CENTER = 1e-10

# Relative tolerance for the holds/equality flags of inequality reports.
TOL_EQ = 1e-8

# Slack allowed on |z| <= 1 membership for Sendov instances.
TOL_DISK = 1e-12

# Fixed default seed: reproducibility by default, never wall-clock entropy.
DEFAULT_SEED = 1729


@dataclass(frozen=True)
class Tolerances:
    """Bundle of the tunable tolerances, mainly for CLI plumbing."""

    tol_root: float = TOL_ROOT
    tol_center: float = TOL_CENTER
    tol_eq: float = TOL_EQ
    tol_disk: float = TOL_DISK

    def __post_init__(self):
        for name in ("tol_root", "tol_center", "tol_eq", "tol_disk"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
