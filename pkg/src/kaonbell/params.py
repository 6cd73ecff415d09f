"""Physical constants for neutral-meson systems.

All rates are expressed in units of the short-lived decay width, i.e.
``gamma_s == 1`` for every preset, and all times elsewhere in the package
are in units of the short-lived lifetime tau_S.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .exceptions import ConfigurationError

#: Gamma_S / Gamma_L ratio that reproduces the reference purity minimum
#: (ln2 * 579.8 = 401.886 tau_S, minimum 0.375) and the mixed-state
#: minimum 0.333068.  The often-quoted nominal ratio is 600.
KAON_WIDTH_RATIO = 579.8


@dataclass(frozen=True)
class MesonParameters:
    """Decay widths and mass difference of a neutral meson pair.

    gamma_s, gamma_l: decay widths of the short-/long-lived mass
    eigenstate [1/time].  delta_m: mass difference m_L - m_S [1/time,
    hbar = 1].
    """

    gamma_s: float
    gamma_l: float
    delta_m: float
    label: str = "custom"

    def __post_init__(self) -> None:
        if self.gamma_s <= 0 or self.gamma_l <= 0:
            raise ConfigurationError("decay widths must be positive")
        if self.gamma_s < self.gamma_l:
            raise ConfigurationError(
                "gamma_s must be >= gamma_l (short-lived state decays faster)"
            )
        if self.delta_m < 0:
            raise ConfigurationError("delta_m must be nonnegative")

    @property
    def gamma_mean(self) -> float:
        """Mean width (gamma_s + gamma_l) / 2, the coherence damping rate."""
        return 0.5 * (self.gamma_s + self.gamma_l)

    @property
    def tau_s(self) -> float:
        return 1.0 / self.gamma_s

    @property
    def x(self) -> float:
        """Oscillation-to-decay ratio delta_m / gamma_mean."""
        return self.delta_m / self.gamma_mean

    def rescaled(self, scale: float) -> "MesonParameters":
        """Same physics in different time units: all rates multiplied by ``scale``."""
        if scale <= 0:
            raise ConfigurationError("unit scale must be positive")
        return replace(
            self,
            gamma_s=self.gamma_s * scale,
            gamma_l=self.gamma_l * scale,
            delta_m=self.delta_m * scale,
        )


_PRESETS = {
    "kaon-paper": dict(gamma_s=1.0, gamma_l=1.0 / KAON_WIDTH_RATIO, delta_m=0.5),
    "kaon-pdg": dict(gamma_s=1.0, gamma_l=1.0 / 571.3, delta_m=0.4739),
    "b-meson": dict(gamma_s=1.0, gamma_l=1.0, delta_m=0.77),
}


def preset(
    name: str,
    gamma_s: float | None = None,
    gamma_l: float | None = None,
    delta_m: float | None = None,
) -> MesonParameters:
    """Return a named parameter set.

    ``custom`` requires all three constants; for the named presets the
    keyword arguments override individual fields.
    """
    if name == "custom":
        if gamma_s is None or gamma_l is None or delta_m is None:
            raise ConfigurationError(
                "custom preset requires gamma_s, gamma_l and delta_m"
            )
        return MesonParameters(gamma_s, gamma_l, delta_m, label="custom")
    try:
        base = dict(_PRESETS[name])
    except KeyError:
        raise ConfigurationError(
            f"unknown preset {name!r}; choose from "
            f"{sorted(_PRESETS)} or 'custom'"
        ) from None
    if gamma_s is not None:
        base["gamma_s"] = gamma_s
    if gamma_l is not None:
        base["gamma_l"] = gamma_l
    if delta_m is not None:
        base["delta_m"] = delta_m
    return MesonParameters(label=name, **base)


def preset_names() -> list[str]:
    return sorted(_PRESETS) + ["custom"]
