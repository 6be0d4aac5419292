"""Disk-gate electrostatics at the donor site and the quadratic Stark shift
of the hyperfine constant and nuclear resonance frequency.

The gate is a charged disk of radius a on the surface of a semi-infinite
dielectric; the donor sits on the axis at depth c.  The second-order Stark
coefficient is used in its collapsed numeric form dA/A = -3.1e-12 * E_c^2
(E_c in V/cm); the underlying polarizability estimate is kept as a
documented constant.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .constants import NM_PER_CM
from .errors import PotentialDomainError, StarkValidityWarning

#: fractional change of the contact hyperfine constant per (V/cm)^2
STARK_COEFF_PER_VCM2 = -3.1e-12
#: fractional change of the envelope amplitude per (V/cm)^2 (A scales as
#: the amplitude squared, hence the factor 2 between the two coefficients)
ENVELOPE_COEFF_PER_VCM2 = -1.55e-12
#: donor polarizability estimate behind the collapsed coefficient, F*cm^2
POLARIZABILITY_F_CM2 = 4e-32
#: field above which the quadratic formula loses its smallness condition
STARK_FIELD_LIMIT_V_PER_CM = 8e5
#: |dA/A| above which third-order field corrections would matter
STARK_FRACTION_LIMIT = 0.3


@dataclass(frozen=True)
class GateGeometry:
    """Disk gate of radius a_nm, donor depth c_nm, applied voltage v_gate and
    built-in flat-band offset v_flat_band (both volts)."""

    a_nm: float = 5.0
    c_nm: float = 10.0
    v_gate: float = 0.0
    v_flat_band: float = 0.0

    def __post_init__(self):
        if self.a_nm <= 0 or self.c_nm <= 0:
            raise ValueError("gate radius and donor depth must be positive")

    @property
    def effective_voltage(self) -> float:
        return self.v_flat_band + self.v_gate


class FieldAtDonor(NamedTuple):
    phi_v: float
    e_c_v_per_cm: float
    e_c_prime_v_per_cm2: float


def gate_potential(rho_nm: float, z_nm: float, geom: GateGeometry,
                   voltage: float | None = None) -> float:
    """Electrostatic potential (V) of the charged disk at (rho, z), z >= 0:

        phi = (2V/pi) * arctan sqrt(2a^2 / (s + sqrt(s^2 + 4a^2 z^2))),
        s = rho^2 + z^2 - a^2.

    On the disk itself (z = 0, rho <= a) the argument diverges and phi = V.
    Points with z < 0 are outside the validity half-space.
    """
    if z_nm < 0:
        raise PotentialDomainError("potential is defined on the half-space z >= 0")
    v = geom.v_gate if voltage is None else voltage
    a, rho, z = geom.a_nm, rho_nm, z_nm
    s = rho * rho + z * z - a * a
    denom = s + math.hypot(s, 2.0 * a * z)
    if denom <= 0.0:
        # conductor surface: z = 0, rho <= a
        return v
    radicand = 2.0 * a * a / denom
    if radicand < 0.0:
        raise PotentialDomainError(
            f"negative radicand at (rho={rho_nm}, z={z_nm})")
    return (2.0 * v / math.pi) * math.atan(math.sqrt(radicand))


def field_at_donor(geom: GateGeometry, voltage: float | None = None) -> FieldAtDonor:
    """Potential (V), field (V/cm) and field gradient (V/cm^2) on the axis at
    the donor depth:

        phi  = (2V/pi) * arctan(a/c)
        E_c  = (2V/pi) * a/(a^2 + c^2)          (= -dphi/dz)
        E_c' = (4V/pi) * a*c/(a^2 + c^2)^2      (= +d2phi/dz2)
    """
    v = geom.v_gate if voltage is None else voltage
    a_cm = geom.a_nm / NM_PER_CM
    c_cm = geom.c_nm / NM_PER_CM
    r2 = a_cm * a_cm + c_cm * c_cm
    phi = (2.0 * v / math.pi) * math.atan2(a_cm, c_cm)
    e_c = (2.0 * v / math.pi) * a_cm / r2
    e_c_prime = (4.0 * v / math.pi) * a_cm * c_cm / (r2 * r2)
    return FieldAtDonor(phi, e_c, e_c_prime)


def stark_fraction(e_c_v_per_cm: float, warn: bool = True) -> float:
    """Fractional hyperfine shift dA/A = -3.1e-12 * E_c^2 (dimensionless).

    Quadratic, hence independent of the field direction and always <= 0.
    Warns when the field exceeds the smallness condition or the resulting
    fraction is large enough that higher-order terms would matter.
    """
    frac = STARK_COEFF_PER_VCM2 * e_c_v_per_cm * e_c_v_per_cm
    if warn and (abs(e_c_v_per_cm) >= STARK_FIELD_LIMIT_V_PER_CM
                 or abs(frac) > STARK_FRACTION_LIMIT):
        warnings.warn(
            f"quadratic Stark formula stretched: E_c = {e_c_v_per_cm:.3g} V/cm, "
            f"dA/A = {frac:.3g}", StarkValidityWarning, stacklevel=2)
    return frac


def resonance_detuning(geom: GateGeometry, nu_a_mhz: float,
                       warn: bool = True) -> float:
    """Gate-voltage detuning of the nuclear resonance (MHz):
    dnu_A = (dA/A at the effective voltage V_FB + V) * nu_A."""
    e_c = field_at_donor(geom, voltage=geom.effective_voltage).e_c_v_per_cm
    return stark_fraction(e_c, warn=warn) * nu_a_mhz


def placement_sensitivity(delta_rho_sq_nm2: float, geom: GateGeometry) -> float:
    """Relative hyperfine error from lateral placement spread <drho^2>.

    Asymptotic ratios: 2*<drho^2>/a^2 for a shallow donor (c/a < 0.2),
    2*<drho^2>/c^2 for c comparable to a (0.5 <= c/a <= 2), and the
    interpolation 2*<drho^2>/max(a,c)^2 in between.
    """
    if delta_rho_sq_nm2 < 0:
        raise ValueError("placement spread must be >= 0")
    ratio = geom.c_nm / geom.a_nm
    if ratio < 0.2:
        scale = geom.a_nm
    elif 0.5 <= ratio <= 2.0:
        scale = geom.c_nm
    else:
        scale = max(geom.a_nm, geom.c_nm)
    return 2.0 * delta_rho_sq_nm2 / (scale * scale)
