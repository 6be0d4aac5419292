"""Coupled electron-nuclear spin system of a single donor in a magnetic field.

The Hamiltonian (in frequency units, MHz) is

    H = 2*mu_B*B*Sz - g_N*mu_N*B*Iz + A*I.S

for electron spin 1/2 and nuclear spin 1/2.  Its four levels follow the
closed Breit-Rabi form; both the closed form and the 4x4 matrix are exposed
so each can check the other.

Product basis |M, m> is ordered (-1/2,-1/2), (-1/2,+1/2), (+1/2,-1/2),
(+1/2,+1/2); the two-donor module builds its tensor products on the same
single-spin ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PAPER, DonorParams, PhysicalConstants, donor_params

BASIS_MM = ((-0.5, -0.5), (-0.5, +0.5), (+0.5, -0.5), (+0.5, +0.5))

#: level order of BreitRabiLevels.levels as (F, m_F) pairs
LEVEL_ORDER = ((1, +1), (1, 0), (1, -1), (0, 0))


@dataclass(frozen=True)
class BreitRabiLevel:
    f: int
    m_f: int
    energy_mhz: float


@dataclass(frozen=True)
class BreitRabiLevels:
    levels: tuple[BreitRabiLevel, ...]
    x: float

    def energy(self, f: int, m_f: int) -> float:
        for lev in self.levels:
            if lev.f == f and lev.m_f == m_f:
                return lev.energy_mhz
        raise ValueError(f"no level with F={f}, m_F={m_f}")


def _check_field(b_tesla: float) -> None:
    if b_tesla < 0:
        raise ValueError("magnetic induction must be >= 0")


def x_parameter(b_tesla: float, donor="P31-in-Si",
                constants: PhysicalConstants = PAPER) -> float:
    """Dimensionless field parameter X = (2*mu_B + g_N*mu_N)*B / A."""
    _check_field(b_tesla)
    d = donor_params(donor)
    return ((2.0 * constants.mu_B + d.g_n * constants.mu_N) * b_tesla
            / constants.to_joule(d.A_mhz))


def field_from_x(x: float, donor="P31-in-Si",
                 constants: PhysicalConstants = PAPER) -> float:
    """Inverse of x_parameter: magnetic induction (T) for a given X."""
    if x < 0:
        raise ValueError("X must be >= 0")
    d = donor_params(donor)
    return (x * constants.to_joule(d.A_mhz)
            / (2.0 * constants.mu_B + d.g_n * constants.mu_N))


def single_donor_hamiltonian(b_tesla: float, donor="P31-in-Si",
                             constants: PhysicalConstants = PAPER) -> np.ndarray:
    """4x4 spin Hamiltonian in the |M, m> product basis, entries in MHz.

    Zeeman terms are diagonal; the contact term contributes A*M*m on the
    diagonal and a flip-flop A/2 between |-1/2,+1/2> and |+1/2,-1/2>.
    """
    _check_field(b_tesla)
    d = donor_params(donor)
    ze = constants.electron_zeeman_mhz(b_tesla)
    zn = constants.nuclear_zeeman_mhz(d.g_n, b_tesla)
    a = d.A_mhz

    h = np.zeros((4, 4))
    for i, (big_m, m) in enumerate(BASIS_MM):
        h[i, i] = ze * big_m - zn * m + a * big_m * m
    h[1, 2] = h[2, 1] = a / 2.0
    return h


def breit_rabi_levels(b_tesla: float, donor="P31-in-Si",
                      constants: PhysicalConstants = PAPER) -> BreitRabiLevels:
    """Closed-form level energies E(F, m_F) in MHz.

    For m_F = +-1 the square root collapses to |1 + m_F*X| and the physical
    branch is the analytic continuation A/2*(1 + m_F*X), linear in field;
    for m_F = 0 the plus branch belongs to F = 1 and the minus branch to
    F = 0.
    """
    _check_field(b_tesla)
    d = donor_params(donor)
    a = d.A_mhz
    zn = constants.nuclear_zeeman_mhz(d.g_n, b_tesla)
    x = x_parameter(b_tesla, d, constants)

    root = math.sqrt(1.0 + x * x)
    energies = {
        (1, +1): -a / 4.0 - zn + (a / 2.0) * (1.0 + x),
        (1, 0): -a / 4.0 + (a / 2.0) * root,
        (1, -1): -a / 4.0 + zn + (a / 2.0) * (1.0 - x),
        (0, 0): -a / 4.0 - (a / 2.0) * root,
    }
    levels = tuple(BreitRabiLevel(f, m_f, energies[(f, m_f)])
                   for f, m_f in LEVEL_ORDER)
    return BreitRabiLevels(levels=levels, x=x)


def nuclear_resonance_frequency(b_tesla: float, donor="P31-in-Si",
                                constants: PhysicalConstants = PAPER,
                                variant: str = "exact") -> float:
    """Nuclear resonance frequency nu_A = E(1,-1) - E(0,0) in MHz.

    variant="exact" evaluates the closed-form level difference at any field;
    variant="asymptotic" uses the large-field expansion
    A/2 + g_N*mu_N*B + A^2/(8*mu_B*B) and requires B > 0.
    """
    _check_field(b_tesla)
    d = donor_params(donor)
    if variant == "exact":
        lv = breit_rabi_levels(b_tesla, d, constants)
        return lv.energy(1, -1) - lv.energy(0, 0)
    if variant == "asymptotic":
        if b_tesla <= 0:
            raise ValueError("asymptotic variant requires B > 0")
        a_j = constants.to_joule(d.A_mhz)
        correction = constants.to_mhz(a_j * a_j / (8.0 * constants.mu_B * b_tesla))
        return (d.A_mhz / 2.0
                + constants.nuclear_zeeman_mhz(d.g_n, b_tesla)
                + correction)
    raise ValueError(f"unknown variant {variant!r}; use 'exact' or 'asymptotic'")


def sublattice_frequencies(b_tesla: float, donor="P31-in-Si",
                           constants: PhysicalConstants = PAPER) -> tuple[float, float]:
    """Resonance frequencies |g_N*mu_N*B +- A/2| of the two antiferromagnetic
    sublattices (MHz), returned as (nu_plus, nu_minus)."""
    _check_field(b_tesla)
    d = donor_params(donor)
    zn = constants.nuclear_zeeman_mhz(d.g_n, b_tesla)
    return abs(zn + d.A_mhz / 2.0), abs(zn - d.A_mhz / 2.0)


def rf_enhancement_factor(b_tesla: float, donor="P31-in-Si",
                          constants: PhysicalConstants = PAPER,
                          s_parallel: float = 0.5) -> float:
    """Hyperfine gain factor A*S_par/(g_N*mu_N*B) of the transverse RF drive.

    Ratio of the electron-mediated local field to the applied field; B must
    be positive.
    """
    if b_tesla <= 0:
        raise ValueError("enhancement factor requires B > 0")
    d = donor_params(donor)
    return (constants.to_joule(d.A_mhz) * s_parallel
            / (d.g_n * constants.mu_N * b_tesla))


def max_initialization_temperature(b_tesla: float,
                                   constants: PhysicalConstants = PAPER) -> float:
    """Electron-polarization temperature scale 2*mu_B*B/k_B in kelvin."""
    _check_field(b_tesla)
    return 2.0 * constants.mu_B * b_tesla / constants.k_B
