"""Physical constants, unit bridges and donor/host parameter registries.

Internal energy unit is frequency (MHz, i.e. E/h).  SI Joules appear only at
this boundary.  Lengths are nanometers, electric fields V/cm, magnetic
induction tesla.  Two constant sets are provided: ``paper-1`` keeps the
rounded textbook figures used by the regression suite, ``codata-2018`` holds
the CODATA 2018 recommended values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RegistryLookupError

NM_PER_CM = 1e7


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable constant set.

    mu_B, mu_N in J/T; k_B in J/K; h in J*s; q in C; eps0 in F/cm;
    mu0_over_4pi in T^2*cm^3/J.
    """

    name: str
    mu_B: float
    mu_N: float
    k_B: float
    h: float
    q: float
    eps0: float
    mu0_over_4pi: float

    def to_mhz(self, energy_joule: float) -> float:
        """Energy in Joules -> frequency in MHz (E/h)."""
        return energy_joule / self.h / 1e6

    def to_joule(self, frequency_mhz: float) -> float:
        """Frequency in MHz -> energy in Joules."""
        return frequency_mhz * 1e6 * self.h

    def electron_zeeman_mhz(self, b_tesla: float) -> float:
        """Electron Zeeman splitting 2*mu_B*B as a frequency (MHz)."""
        return self.to_mhz(2.0 * self.mu_B * b_tesla)

    def nuclear_zeeman_mhz(self, g_n: float, b_tesla: float) -> float:
        """Nuclear Zeeman splitting g_N*mu_N*B as a frequency (MHz)."""
        return self.to_mhz(g_n * self.mu_N * b_tesla)


PAPER = PhysicalConstants(
    name="paper-1",
    mu_B=9.27e-24,
    mu_N=5.05e-27,
    k_B=1.38e-23,
    h=6.626e-34,
    q=1.602e-19,
    eps0=8.85e-14,
    mu0_over_4pi=1e-1,
)

CODATA = PhysicalConstants(
    name="codata-2018",
    mu_B=9.2740100783e-24,
    mu_N=5.0507837461e-27,
    k_B=1.380649e-23,
    h=6.62607015e-34,
    q=1.602176634e-19,
    eps0=8.8541878128e-14,
    mu0_over_4pi=1.00000000055e-1,
)

CONSTANT_SETS = {
    "paper-1": PAPER,
    "paper": PAPER,
    "codata-2018": CODATA,
    "codata": CODATA,
}


def get_constants(name: str) -> PhysicalConstants:
    try:
        return CONSTANT_SETS[name.lower()]
    except KeyError:
        raise RegistryLookupError(f"unknown constant set {name!r}; "
                                  f"registered: paper-1, codata-2018") from None


@dataclass(frozen=True)
class DonorParams:
    """One donor species in one host.

    A_mhz is the hyperfine contact constant as a frequency (A/h).
    quoted_a_joule keeps the separately tabulated Joule figure where one
    exists; it differs from A_mhz*h by ~1% for P in Si and is recorded
    for traceability, never used in spectra.
    """

    species: str
    A_mhz: float
    g_n: float
    contact_density_cm3: float
    quoted_a_joule: float | None = None

    def __post_init__(self):
        if self.A_mhz <= 0 or self.g_n <= 0:
            raise ValueError("hyperfine constant and g-factor must be positive")

    def hyperfine_joule(self, constants: PhysicalConstants = PAPER) -> float:
        return constants.to_joule(self.A_mhz)


P31_SI = DonorParams(
    species="P31-in-Si",
    A_mhz=116.0,
    g_n=2.26,
    contact_density_cm3=0.43e24,
    quoted_a_joule=7.76e-26,
)

P31_GE = DonorParams(
    species="P31-in-Ge",
    A_mhz=45.0,
    g_n=1.56,
    contact_density_cm3=0.22e24,
)

DONORS = {
    "p31-in-si": P31_SI,
    "p31-si": P31_SI,
    "p31-in-ge": P31_GE,
    "p31-ge": P31_GE,
}


def donor_params(species) -> DonorParams:
    """Registry lookup; accepts a DonorParams passthrough or a species tag."""
    if isinstance(species, DonorParams):
        return species
    try:
        return DONORS[str(species).lower()]
    except KeyError:
        raise RegistryLookupError(
            f"unknown donor species {species!r}; registered: "
            "P31-in-Si, P31-in-Ge") from None


@dataclass(frozen=True)
class MaterialParams:
    """Host-crystal parameters of the effective-mass donor model.

    bloch_factor is |psi(k_j, 0)|^2; it is tabulated only for silicon, so the
    germanium entry carries None and the operations that need it refuse to
    guess.  eps_s for germanium is the standard static dielectric constant
    (15.8), not a tabulated figure of this parameter set.
    """

    host: str
    eps_s: float
    valley_count: int
    a_t_nm: float
    a_l_nm: float
    bloch_factor: float | None
    e_ground_variational_ev: float
    e_ionization_ev: float
    e_2p_ev: float | None = None
    e_3p_ev: float | None = None

    def __post_init__(self):
        if not (self.a_t_nm > self.a_l_nm > 0):
            raise ValueError("variational radii must satisfy a_t > a_l > 0")


SILICON = MaterialParams(
    host="Si",
    eps_s=11.9,
    valley_count=6,
    a_t_nm=2.50,
    a_l_nm=1.42,
    bloch_factor=186.0,
    e_ground_variational_ev=-0.029,
    e_ionization_ev=-0.045,
    e_2p_ev=-0.0109,
    e_3p_ev=-0.0057,
)

GERMANIUM = MaterialParams(
    host="Ge",
    eps_s=15.8,
    valley_count=4,
    a_t_nm=6.45,
    a_l_nm=2.27,
    bloch_factor=None,
    e_ground_variational_ev=-0.009,
    e_ionization_ev=-0.012,
)

MATERIALS = {"si": SILICON, "ge": GERMANIUM}


def material_params(host) -> MaterialParams:
    """Registry lookup; accepts a MaterialParams passthrough or a host tag."""
    if isinstance(host, MaterialParams):
        return host
    try:
        return MATERIALS[str(host).lower()]
    except KeyError:
        raise RegistryLookupError(
            f"unknown host material {host!r}; registered: Si, Ge") from None


def nm_to_cm(x_nm: float) -> float:
    return x_nm / NM_PER_CM


def cm_to_nm(x_cm: float) -> float:
    return x_cm * NM_PER_CM
