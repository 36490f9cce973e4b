"""Ball & point qutrit chains: classification, atlases and simulation."""

from ._qcl import (
    NotUnitary,
    OutsideRange,
    QclError,
    atlas_csv,
    classify,
    classify_by_range,
    commensurability,
    conjugator,
    cw_checks,
    cw_unitary,
    eig2,
    eig_unitary3,
    musselman,
    numerical_range,
    render_atlas,
    simulate,
    subsystem,
    z_from_omega,
)

__all__ = [
    "NotUnitary",
    "OutsideRange",
    "QclError",
    "atlas_csv",
    "classify",
    "classify_by_range",
    "commensurability",
    "conjugator",
    "cw_checks",
    "cw_unitary",
    "eig2",
    "eig_unitary3",
    "musselman",
    "numerical_range",
    "render_atlas",
    "simulate",
    "subsystem",
    "z_from_omega",
]
