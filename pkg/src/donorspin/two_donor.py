"""Two exchange-coupled donors: full 16-dimensional electron-nuclear spin
Hamiltonian, its block structure, the reduced anticrossing matrix, closed-form
eigenvalues, the indirect nuclear coupling nu_J and adiabatic state tracking.

Conventions
-----------
Product basis |M_a, M_b, m_a, m_b> is lexicographic with -1/2 before +1/2
(tensor slot order: electron a, electron b, nucleus a, nucleus b).  Coupled
pair states use the standard Clebsch-Gordan combinations for two spins 1/2,
singlet (ud - du)/sqrt(2) on both the electron and the nuclear pair.  With
these signs the reduced four-state matrix is exactly the orthogonal
projection of the 16x16 Hamiltonian onto |1,-1;0,0>, |1,-1;1,0>,
|1,0;1,-1>, |0,0;1,-1> (the m+M = -1 sector).

All energies in MHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np

from .constants import PAPER, PhysicalConstants
from .errors import SectorCouplingError, TrackingResolutionError
from .linalg import eig_sym

_SZ = np.diag([-0.5, 0.5])
_SP = np.array([[0.0, 0.0], [1.0, 0.0]])  # raises -1/2 -> +1/2
_SM = _SP.T
_ID = np.eye(2)

#: product basis as (M_a, M_b, m_a, m_b), index = binary with -1/2 = 0
PRODUCT_BASIS = tuple(
    (ma_e, mb_e, ma_n, mb_n)
    for ma_e in (-0.5, 0.5) for mb_e in (-0.5, 0.5)
    for ma_n in (-0.5, 0.5) for mb_n in (-0.5, 0.5))

SECTOR_DIMS = {-2: 1, -1: 4, 0: 6, 1: 4, 2: 1}


@dataclass(frozen=True)
class TwoDonorConfig:
    """Field B (T), exchange J and hyperfine constants A_a, A_b (MHz).

    J > 0 is the antiferromagnetic sign convention (singlet ground state at
    B = 0); negative J is accepted and merely labels the opposite regime.
    """

    B: float
    J: float
    A_a: float
    A_b: float
    g_n: float = 2.26

    def __post_init__(self):
        if self.B < 0:
            raise ValueError("magnetic induction must be >= 0")
        if self.A_a < 0 or self.A_b < 0:
            raise ValueError("hyperfine constants must be >= 0")

    def regime(self, constants: PhysicalConstants = PAPER) -> str:
        ze = constants.electron_zeeman_mhz(self.B)
        if self.J < ze:
            return "triplet-ground"
        if self.J > ze:
            return "singlet-ground"
        return "crossing"


def _site_op(site: int, mat: np.ndarray) -> np.ndarray:
    ops = [_ID, _ID, _ID, _ID]
    ops[site] = mat
    return reduce(np.kron, ops)


def _dot(site_i: int, site_j: int) -> np.ndarray:
    """S_i . S_j on two distinct tensor slots, real form via ladder operators."""
    flip = _site_op(site_i, _SP) @ _site_op(site_j, _SM)
    return (_site_op(site_i, _SZ) @ _site_op(site_j, _SZ)
            + 0.5 * (flip + flip.T))


_SZ_EA, _SZ_EB, _SZ_NA, _SZ_NB = (_site_op(k, _SZ) for k in range(4))
_DOT_EE = _dot(0, 1)
_DOT_A = _dot(0, 2)
_DOT_B = _dot(1, 3)


def two_donor_hamiltonian(cfg: TwoDonorConfig,
                          constants: PhysicalConstants = PAPER) -> np.ndarray:
    """16x16 matrix of

        H = 2*mu_B*B*(S_za + S_zb) + J*S_a.S_b
            - g_N*mu_N*B*(I_za + I_zb) + A_a*I_a.S_a + A_b*I_b.S_b

    in the product basis; symmetric, traceless, exactly block diagonal in the
    total projection m + M.
    """
    ze = constants.electron_zeeman_mhz(cfg.B)
    zn = constants.nuclear_zeeman_mhz(cfg.g_n, cfg.B)
    return (ze * (_SZ_EA + _SZ_EB) + cfg.J * _DOT_EE
            - zn * (_SZ_NA + _SZ_NB)
            + cfg.A_a * _DOT_A + cfg.A_b * _DOT_B)


def sector_of(index: int) -> int:
    return round(sum(PRODUCT_BASIS[index]))


@dataclass(frozen=True)
class SectorBlock:
    sector: int
    indices: tuple[int, ...]
    matrix: np.ndarray


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: dict[int, SectorBlock]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(self.blocks[s].indices) for s in sorted(self.blocks))

    def eigenvalues(self) -> np.ndarray:
        """Union of the block spectra, ascending."""
        vals = np.concatenate([eig_sym(b.matrix).values
                               for b in self.blocks.values()])
        return np.sort(vals)


def block_decompose(h: np.ndarray, atol: float = 1e-12) -> BlockDecomposition:
    """Split a 16x16 spin matrix into its five total-projection blocks.

    Any cross-sector element above atol raises SectorCouplingError: the
    builder guarantees exact zeros there, so a violation is a bug upstream.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (16, 16):
        raise ValueError("expected a 16x16 matrix")
    sectors = [sector_of(i) for i in range(16)]
    for i in range(16):
        for j in range(16):
            if sectors[i] != sectors[j] and abs(h[i, j]) > atol:
                raise SectorCouplingError(
                    f"element ({i},{j}) = {h[i, j]!r} couples sectors "
                    f"{sectors[i]} and {sectors[j]}")
    blocks = {}
    for s in SECTOR_DIMS:
        idx = tuple(i for i in range(16) if sectors[i] == s)
        blocks[s] = SectorBlock(s, idx, h[np.ix_(idx, idx)])
    return BlockDecomposition(blocks)


@dataclass(frozen=True)
class CoupledBasisState:
    """|S,M;I,m>: total electron spin/projection and total nuclear
    spin/projection of the donor pair."""

    S: int
    M: int
    I: int
    m: int

    def __post_init__(self):
        if abs(self.M) > self.S or abs(self.m) > self.I:
            raise ValueError("projection exceeds total spin")

    @property
    def label(self) -> str:
        return f"|{self.S},{self.M};{self.I},{self.m}>"

    @property
    def projection(self) -> int:
        return self.M + self.m


def _pair_vector(total: int, proj: int) -> np.ndarray:
    v = np.zeros(4)
    if total == 1 and proj == 1:
        v[3] = 1.0
    elif total == 1 and proj == -1:
        v[0] = 1.0
    elif total == 1 and proj == 0:
        v[1] = v[2] = 1.0 / math.sqrt(2.0)
    elif total == 0 and proj == 0:
        v[2] = 1.0 / math.sqrt(2.0)   # up(a) down(b)
        v[1] = -1.0 / math.sqrt(2.0)  # down(a) up(b)
    else:
        raise ValueError(f"no spin-pair state ({total}, {proj})")
    return v


def coupled_state_vector(state: CoupledBasisState) -> np.ndarray:
    """16-component product-basis vector of |S,M;I,m>."""
    return np.kron(_pair_vector(state.S, state.M),
                   _pair_vector(state.I, state.m))


_PAIR_LABELS = ((1, 1), (1, 0), (1, -1), (0, 0))

COUPLED_BASIS = tuple(CoupledBasisState(s, m_e, i, m_n)
                      for s, m_e in _PAIR_LABELS for i, m_n in _PAIR_LABELS)

#: basis of the reduced anticrossing matrix, in row order
REDUCED_BASIS = (
    CoupledBasisState(1, -1, 0, 0),
    CoupledBasisState(1, -1, 1, 0),
    CoupledBasisState(1, 0, 1, -1),
    CoupledBasisState(0, 0, 1, -1),
)


def unperturbed_levels(b_tesla: float, j_mhz: float,
                       constants: PhysicalConstants = PAPER) -> dict:
    """Electron-pair energies without hyperfine coupling, keyed by (S, M):

        E0(S, M) = J*(S(S+1)/2 - 3/4) + 2*mu_B*B*M

    The singlet crosses the M = -1 triplet exactly at J = 2*mu_B*B.
    """
    ze = constants.electron_zeeman_mhz(b_tesla)
    return {
        (0, 0): -0.75 * j_mhz,
        (1, -1): 0.25 * j_mhz - ze,
        (1, 0): 0.25 * j_mhz,
        (1, 1): 0.25 * j_mhz + ze,
    }


def first_order_splittings(cfg: TwoDonorConfig, regime: str,
                           constants: PhysicalConstants = PAPER) -> dict:
    """Secular hyperfine corrections to the ground electronic level, keyed by
    the nuclear pair state (I, m).

    Triplet ground state (J < 2*mu_B*B): +-(g_N*mu_N*B + (A_a+A_b)/4) for the
    stretched nuclear states, zero for (1,0) and (0,0).  Singlet ground state
    (J > 2*mu_B*B): the bare nuclear Zeeman +-g_N*mu_N*B.
    """
    actual = cfg.regime(constants)
    if regime not in ("triplet-ground", "singlet-ground"):
        raise ValueError(f"unknown regime {regime!r}")
    if regime != actual:
        raise ValueError(f"regime {regime!r} inconsistent with configuration "
                         f"({actual}: J = {cfg.J} MHz, "
                         f"2*mu_B*B = {constants.electron_zeeman_mhz(cfg.B)} MHz)")
    zn = constants.nuclear_zeeman_mhz(cfg.g_n, cfg.B)
    shift = zn + (cfg.A_a + cfg.A_b) / 4.0 if regime == "triplet-ground" else zn
    return {(1, -1): shift, (1, 0): 0.0, (0, 0): 0.0, (1, 1): -shift}


def nonsecular_elements(cfg: TwoDonorConfig) -> dict:
    """The four nonzero elements of the nonsecular hyperfine part between
    coupled states of equal m + M, keyed by (bra, ket)."""
    s = (cfg.A_a + cfg.A_b) / 4.0
    d = (cfg.A_a - cfg.A_b) / 4.0
    st = CoupledBasisState
    return {
        (st(0, 0, 0, 0), st(1, -1, 1, 1)): -s,
        (st(0, 0, 1, -1), st(1, -1, 1, 0)): d,
        (st(0, 0, 1, -1), st(1, -1, 0, 0)): s,
        (st(0, 0, 1, 0), st(1, -1, 1, 1)): d,
    }


def reduced_hamiltonian(cfg: TwoDonorConfig,
                        constants: PhysicalConstants = PAPER) -> np.ndarray:
    """4x4 Hamiltonian on REDUCED_BASIS (the m+M = -1 sector in the coupled
    basis); equals the projection of the full 16x16 matrix onto those states.
    """
    ze = constants.electron_zeeman_mhz(cfg.B)
    zn = constants.nuclear_zeeman_mhz(cfg.g_n, cfg.B)
    j = cfg.J
    s = (cfg.A_a + cfg.A_b) / 4.0
    d = (cfg.A_a - cfg.A_b) / 4.0
    return np.array([
        [j / 4.0 - ze, -d,            d,             s],
        [-d,           j / 4.0 - ze,  s,             d],
        [d,            s,             zn + j / 4.0,  -d],
        [s,            d,             -d,            zn - 0.75 * j],
    ])


class ClosedFormEigs(NamedTuple):
    e_s_plus: float
    e_s_minus: float
    e_a_plus: float
    e_a_minus: float


def _require_equal_hyperfine(cfg: TwoDonorConfig) -> float:
    if cfg.A_a != cfg.A_b:
        raise ValueError("closed forms require A_a == A_b")
    return cfg.A_a


def closed_form_eigs(cfg: TwoDonorConfig,
                     constants: PhysicalConstants = PAPER) -> ClosedFormEigs:
    """Eigenvalues of the reduced matrix for equal hyperfine constants.

    The matrix splits into a symmetric pair (|1,-1;1,0>, |1,0;1,-1>) and an
    antisymmetric pair (|1,-1;0,0>, |0,0;1,-1>) under donor interchange:

        E+-(s) = g*B/2 + J/4 - mu_B*B +- sqrt((mu_B*B + g*B/2)^2 + (A/2)^2)
        E+-(a) = g*B/2 - J/4 - mu_B*B +- sqrt((mu_B*B + g*B/2 - J/2)^2 + (A/2)^2)

    with g*B shorthand for the nuclear Zeeman energy.
    """
    a = _require_equal_hyperfine(cfg)
    ze = constants.electron_zeeman_mhz(cfg.B)
    zn = constants.nuclear_zeeman_mhz(cfg.g_n, cfg.B)
    base = zn / 2.0 - ze / 2.0
    root_s = math.hypot(ze / 2.0 + zn / 2.0, a / 2.0)
    root_a = math.hypot(ze / 2.0 + zn / 2.0 - cfg.J / 2.0, a / 2.0)
    return ClosedFormEigs(
        e_s_plus=base + cfg.J / 4.0 + root_s,
        e_s_minus=base + cfg.J / 4.0 - root_s,
        e_a_plus=base - cfg.J / 4.0 + root_a,
        e_a_minus=base - cfg.J / 4.0 - root_a,
    )


def quartic_residual(energy_mhz: float, cfg: TwoDonorConfig,
                     constants: PhysicalConstants = PAPER) -> float:
    """Relative residual of the eigenvalue quartic

        [(J/4 - 2muB*B - E)(g*B - J/4 - E) - A^2/4]^2
            - [(J/4 - 2muB*B - E) * J/2]^2 = 0

    normalized by its largest squared term."""
    a = _require_equal_hyperfine(cfg)
    ze = constants.electron_zeeman_mhz(cfg.B)
    zn = constants.nuclear_zeeman_mhz(cfg.g_n, cfg.B)
    t1 = ((cfg.J / 4.0 - ze - energy_mhz) * (zn - cfg.J / 4.0 - energy_mhz)
          - a * a / 4.0)
    t2 = (cfg.J / 4.0 - ze - energy_mhz) * cfg.J / 2.0
    scale = max(t1 * t1, t2 * t2, 1.0)
    return abs(t1 * t1 - t2 * t2) / scale


def antisym_gap(cfg: TwoDonorConfig,
                constants: PhysicalConstants = PAPER) -> float:
    """Splitting of the two antisymmetric branches (MHz)."""
    eig = closed_form_eigs(cfg, constants)
    return eig.e_a_plus - eig.e_a_minus


def min_anticrossing_gap(cfg: TwoDonorConfig,
                         constants: PhysicalConstants = PAPER) -> tuple[float, float]:
    """(J, gap) at which the antisymmetric branches come closest.

    Analytic: the gap 2*sqrt((mu_B*B + g*B/2 - J/2)^2 + (A/2)^2) bottoms out
    at J = 2*mu_B*B + g_N*mu_N*B with minimum exactly A.
    """
    a = _require_equal_hyperfine(cfg)
    ze = constants.electron_zeeman_mhz(cfg.B)
    zn = constants.nuclear_zeeman_mhz(cfg.g_n, cfg.B)
    return ze + zn, a


def nu_J(cfg: TwoDonorConfig, constants: PhysicalConstants = PAPER,
         variant: str = "exact") -> float:
    """Indirect nuclear coupling nu_J = E-(s) - E-(a) in MHz.

    variant="exact" evaluates the closed forms (exact for A_a == A_b and any
    J; zero at J = 0).  Asymptotic variants: "weak" is the second-order
    perturbative form (A/2)^2/(2muB*B - J) - (A/2)^2/(2muB*B), "crossing" is
    the scale estimate A/2 at the crossing point, "strong" is J - 2*mu_B*B.
    """
    a = _require_equal_hyperfine(cfg)
    ze = constants.electron_zeeman_mhz(cfg.B)
    if variant == "exact":
        eig = closed_form_eigs(cfg, constants)
        return eig.e_s_minus - eig.e_a_minus
    if variant == "weak":
        if cfg.J >= ze:
            raise ValueError("weak-exchange variant requires J < 2*mu_B*B")
        half_a_sq = (a / 2.0) ** 2
        return half_a_sq / (ze - cfg.J) - half_a_sq / ze
    if variant == "crossing":
        return a / 2.0
    if variant == "strong":
        return cfg.J - ze
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class TrackedState:
    initial: CoupledBasisState
    final: CoupledBasisState
    start_overlap: float
    end_overlap: float
    start_energy_mhz: float
    end_energy_mhz: float


@dataclass(frozen=True)
class TrackingResult:
    states: tuple[TrackedState, ...]
    grid: np.ndarray

    @property
    def mapping(self) -> dict:
        return {t.initial.label: t.final.label for t in self.states}

    def state(self, initial: CoupledBasisState) -> TrackedState:
        for t in self.states:
            if t.initial == initial:
                return t
        raise ValueError(f"no tracked state started as {initial.label}")


def _tracking_grid(j_start: float, j_stop: float, points: int,
                   j_crossing: float, gap_mhz: float) -> np.ndarray:
    coarse = np.linspace(j_start, j_stop, max(points // 3, 2))
    if not (j_start < j_crossing < j_stop):
        return coarse
    window = 0.05 * j_crossing
    per_side = max((points - coarse.size) // 2, 8)
    offsets = np.geomspace(max(gap_mhz / 50.0, 1e-6), window, per_side)
    refine = np.concatenate([j_crossing - offsets, [j_crossing],
                             j_crossing + offsets])
    refine = refine[(refine > j_start) & (refine < j_stop)]
    return np.unique(np.concatenate([coarse, refine]))


def _greedy_match(overlap: np.ndarray) -> list[int]:
    """Column assignment maximizing overlaps greedily; overlap[i, j] is
    |<previous state i | new eigenvector j>|."""
    n = overlap.shape[0]
    pairs = sorted(((overlap[i, j], i, j) for i in range(n) for j in range(n)),
                   reverse=True)
    match: list[int] = [-1] * n
    used = set()
    for _, i, j in pairs:
        if match[i] == -1 and j not in used:
            match[i] = j
            used.add(j)
    return match


def adiabatic_track(b_tesla: float, j_start_mhz: float, j_stop_mhz: float,
                    a_a_mhz: float = 116.0, a_b_mhz: float = 116.0,
                    g_n: float = 2.26, points: int = 2001,
                    constants: PhysicalConstants = PAPER,
                    grid: np.ndarray | None = None,
                    overlap_floor: float = 0.6) -> TrackingResult:
    """Follow the four reduced-basis eigenstates through an exchange sweep.

    Each eigenvector is continued from one grid point to the next by maximal
    overlap; with a grid dense near the anticrossing this reproduces the
    adiabatic passage, under which the antisymmetric nuclear-singlet state
    |1,-1;0,0> exchanges with the electronic-singlet state |0,0;1,-1>, while
    the symmetric state keeps its nuclear label.

    Raises TrackingResolutionError when a continuation step is ambiguous
    (best overlap below overlap_floor) or the supplied grid cannot resolve
    the anticrossing gap.
    """
    if j_start_mhz >= j_stop_mhz:
        raise ValueError("sweep requires j_start < j_stop")
    if points < 2:
        raise ValueError("need at least 2 grid points")

    ze = constants.electron_zeeman_mhz(b_tesla)
    gap = max(a_a_mhz, a_b_mhz, 1e-3)
    if grid is None:
        jgrid = _tracking_grid(j_start_mhz, j_stop_mhz, points, ze, gap)
    else:
        jgrid = np.unique(np.asarray(grid, dtype=float))
        if jgrid.size < 2:
            raise ValueError("explicit grid needs at least 2 points")
        if j_start_mhz < ze < j_stop_mhz:
            step = np.min(np.abs(jgrid - (ze + constants.nuclear_zeeman_mhz(g_n, b_tesla))))
            near = np.diff(jgrid)[np.argmin(np.abs(jgrid[:-1] - ze))]
            if min(step, near) > gap / 2.0:
                raise TrackingResolutionError(
                    "grid spacing near the anticrossing exceeds half the gap; "
                    "refine the sweep grid")

    def reduced(j):
        return reduced_hamiltonian(
            TwoDonorConfig(B=b_tesla, J=j, A_a=a_a_mhz, A_b=a_b_mhz, g_n=g_n),
            constants)

    eig = eig_sym(reduced(jgrid[0]))
    vectors = eig.vectors.copy()
    energies = eig.values.copy()

    initial_idx = [int(np.argmax(np.abs(vectors[:, k]))) for k in range(4)]
    if len(set(initial_idx)) != 4:
        raise TrackingResolutionError(
            "start point lies inside the anticrossing; initial labels ambiguous")
    start_overlap = [abs(vectors[initial_idx[k], k]) for k in range(4)]
    start_energy = energies.copy()

    for j in jgrid[1:]:
        eig = eig_sym(reduced(j))
        overlap = np.abs(vectors.T @ eig.vectors)
        match = _greedy_match(overlap)
        worst = min(overlap[i, match[i]] for i in range(4))
        if worst < overlap_floor:
            raise TrackingResolutionError(
                f"continuation ambiguous at J = {j:.6g} MHz "
                f"(best overlap {worst:.3f} < {overlap_floor}); grid too coarse")
        vectors = eig.vectors[:, match]
        energies = eig.values[match]

    states = []
    for k in range(4):
        final_idx = int(np.argmax(np.abs(vectors[:, k])))
        states.append(TrackedState(
            initial=REDUCED_BASIS[initial_idx[k]],
            final=REDUCED_BASIS[final_idx],
            start_overlap=start_overlap[k],
            end_overlap=abs(vectors[final_idx, k]),
            start_energy_mhz=float(start_energy[k]),
            end_energy_mhz=float(energies[k]),
        ))
    states.sort(key=lambda t: REDUCED_BASIS.index(t.initial))
    return TrackingResult(states=tuple(states), grid=jgrid)
