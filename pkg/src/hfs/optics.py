"""Optical observables: susceptibility, refractive and group index,
dispersion/line classification and population-transfer measures.

Sign convention: the dipole sign is absorbed into chi = -(3 eps / 2 Omega) *
rho_ij, which makes the imaginary part positive for a resonantly driven
two-level reduction; chi_im > 0 is therefore labelled absorption and
chi_im < 0 gain.  Normal dispersion means dn/domega > 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Drive, SystemParams

NORMAL = "normal"
ANOMALOUS = "anomalous"
GAIN = "gain"
ABSORPTION = "absorption"

#: optical transition id -> (0-based coherence index, epsilon pair key)
TRANSITIONS = {
    "31": ((2, 0), "13"),
    "41": ((3, 0), "14"),
    "32": ((2, 1), "23"),
    "42": ((3, 1), "24"),
}


class ZeroField(Exception):
    pass


class InsufficientPoints(Exception):
    pass


@dataclass(frozen=True)
class Susceptibility:
    transition: str
    chi_re: float
    chi_im: float

    @property
    def chi(self) -> complex:
        return self.chi_re + 1j * self.chi_im


def susceptibility(params: SystemParams, drive: Drive, rho: np.ndarray,
                   transition: str) -> Susceptibility:
    """Dimensionless chi for one optical coherence at the given drive."""
    if transition not in TRANSITIONS:
        raise ValueError(f"unknown transition {transition!r}")
    if drive.omega == 0.0:
        raise ZeroField("susceptibility undefined at zero field")
    (i, j), pair = TRANSITIONS[transition]
    eps = drive.epsilon_for(params)[pair]
    chi = -(3.0 * eps / (2.0 * drive.omega)) * rho[i, j]
    return Susceptibility(transition=transition,
                          chi_re=float(chi.real), chi_im=float(chi.imag))


def refractive_index(chi: complex) -> float:
    """Principal-branch n = Re sqrt(1 + chi)."""
    return float(np.sqrt(1.0 + complex(chi)).real)


def group_index_profile(delta_c: np.ndarray, n: np.ndarray,
                        params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Group index n_g = n + omega0 * dn/domega along a detuning grid.

    ``delta_c`` is in gamma units; the derivative is taken against absolute
    angular frequency via ``gamma_ref``.  Central differences at interior
    points, one-sided at the ends.  Returns (n_g, nonuniform_mask) where the
    mask flags interior points with unequal neighbour spacing.
    """
    delta_c = np.asarray(delta_c, dtype=float)
    n = np.asarray(n, dtype=float)
    if delta_c.ndim != 1 or delta_c.size < 3:
        raise InsufficientPoints("need at least 3 grid points")
    if np.any(np.diff(delta_c) <= 0):
        raise ValueError("grid must be strictly increasing")
    omega_abs = delta_c * params.gamma_ref     # offset from carrier, rad/s
    dn_domega = np.gradient(n, omega_abs)
    ng = n + params.omega0 * dn_domega
    h = np.diff(delta_c)
    nonuniform = np.zeros(delta_c.size, dtype=bool)
    nonuniform[1:-1] = ~np.isclose(h[:-1], h[1:], rtol=1e-9, atol=0.0)
    return ng, nonuniform


def dispersion_classes(delta_c: np.ndarray, n: np.ndarray) -> list[str]:
    """Per-point normal/anomalous labels from the finite-difference slope."""
    slope = np.gradient(np.asarray(n, dtype=float),
                        np.asarray(delta_c, dtype=float))
    return [NORMAL if s > 0 else ANOMALOUS for s in slope]


def line_classes(chi_im: np.ndarray) -> list[str]:
    return [ABSORPTION if v >= 0 else GAIN for v in np.asarray(chi_im)]


@dataclass(frozen=True)
class DispersionPoint:
    delta_c: float
    n: float
    ng: float
    dispersion_class: str
    line_class: str


def classify(delta_c: np.ndarray, n: np.ndarray, ng: np.ndarray,
             chi_im: np.ndarray) -> list[DispersionPoint]:
    disp = dispersion_classes(delta_c, n)
    line = line_classes(chi_im)
    return [DispersionPoint(delta_c=float(d), n=float(nv), ng=float(g),
                            dispersion_class=dc, line_class=lc)
            for d, nv, g, dc, lc in zip(delta_c, n, ng, disp, line)]


def population_transfer(rho: np.ndarray) -> tuple[float, float]:
    """Ground and excited hyperfine imbalances (rho22-rho11, rho44-rho33)."""
    return (float(rho[1, 1].real - rho[0, 0].real),
            float(rho[3, 3].real - rho[2, 2].real))
