"""Scattering amplitudes, current budgets, and limits for the step problem.

Closed forms for the four amplitudes (same-spin and spin-flip, reflected
and transmitted), an independent 4x4 boundary-matching solver used as a
numerical oracle, group-velocity-weighted current fractions, the
infinite-step limits of the transmitted probabilities, and the H = 0
reduction.

Notation (all mc^2 units): eps = E + 1, eps_bar = E + 1 - V0,
ebar = E - V0, C = 2 b n, cp/cq the longitudinal momenta, and the
kinematic factor kappa = cq*eps/(cp*eps_bar).  The transmitted
amplitudes carry the normalization prefactor
w = sqrt(|eps_bar * ebar| / (eps * E)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ClosedChannel, SingularMatrix, SingularStep
from .landau import momentum_left, momentum_right
from .states import ChannelParams, Regime, Spin, classify, make_channel

#: Relative half-width of the excluded slice around V0 = E + 1, where
#: kappa diverges and the transmitted normalization degenerates.
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class KinematicFactor:
    """kappa = cq * eps / (cp * eps_bar) together with its ingredients.

    Real and >= 0 in the propagating regimes under the branch rule of
    momentum_right; purely imaginary in the evanescent regime.
    """

    kappa: complex
    cq: complex
    cp: float
    eps: float
    eps_bar: float


@dataclass(frozen=True)
class ScatterAmplitudes:
    """Complex amplitudes of the four outgoing waves.

    R, T are the same-spin reflected/transmitted amplitudes, Rp, Tp the
    spin-flip ones.  T and Tp include the prefactor
    sqrt(|eps_bar*ebar|)/sqrt(eps*E), so |T|^2, |Tp|^2 are the
    transmitted probability densities; the conserved current fractions
    are reported separately by current_budget.
    """

    R: complex
    Rp: complex
    T: complex
    Tp: complex
    regime: Regime


@dataclass(frozen=True)
class CurrentBudget:
    """Current fractions of the four outgoing channels.

    Reflected fractions are |R|^2 and |Rp|^2; transmitted fractions are
    the group-velocity-weighted fluxes kappa*|1+R|^2 and kappa*|Rp|^2 in
    the propagating regimes and exactly 0 in the evanescent one.  The
    four fractions sum to 1 (current conservation).
    """

    refl_same: float
    refl_flip: float
    trans_same: float
    trans_flip: float

    @property
    def sum(self) -> float:
        return self.refl_same + self.refl_flip + self.trans_same + self.trans_flip


def _check_singular(E: float, V0: float) -> None:
    if abs(E + 1.0 - V0) < SINGULAR_TOL * (1.0 + V0):
        raise SingularStep(
            f"V0 = {V0:.17g} within tolerance of E + 1 = {E + 1.0:.17g}: "
            "kinematic factor diverges"
        )


def kinematic_factor(params: ChannelParams) -> KinematicFactor:
    """Kinematic factor kappa = cq*eps/(cp*eps_bar) of the channel."""
    _check_singular(params.E, params.V0)
    cp = momentum_left(params)
    cq = momentum_right(params)
    eps = params.E + 1.0
    eps_bar = eps - params.V0
    return KinematicFactor(kappa=cq * eps / (cp * eps_bar), cq=cq, cp=cp, eps=eps, eps_bar=eps_bar)


#: Inside |eps_bar| < NEAR_SINGULAR_FRACTION * (1 + V0) the amplitudes are
#: evaluated with the common factor eps_bar cancelled analytically.
NEAR_SINGULAR_FRACTION = 1e-2


def _core_amplitudes(E, V0, c, cp, cq):
    """Closed-form amplitudes for the incoming spin-up convention.

    Product form of the amplitude formulas, with kappa eliminated
    through cp*eps_bar*kappa = cq*eps: numerator and denominator of each
    amplitude contain eps_bar only in products.  One complex code path
    covers all three regimes; the regime enters only through the branch
    of cq.

    Near V0 = E + 1 the products themselves suffer cancellation (both
    numerator and denominator vanish linearly in eps_bar), so there the
    common factor is removed analytically: with eps_bar = 1 + (E - V0)
    and cq^2 = (E - V0)^2 - 1 - c,

        numerator(R)   = eps_bar * s,  s = cp^2 eps_bar + eps^2 (2 - eps_bar) + c (eps + V0)
        denominator    = eps_bar * k,  k = cp^2 eps_bar + 2 cp cq eps - eps^2 (2 - eps_bar) - c (eps + V0)

    which keeps R and Rp (and the current budget) accurate to rounding
    arbitrarily close to the singular slice.  T and Tp genuinely diverge
    there like |eps_bar|^(-1/2); they stay relatively accurate.
    """
    eps = E + 1.0
    eps_bar = eps - V0
    ebar = E - V0
    a = cp * eps_bar
    g = cq * eps
    rc = math.sqrt(c)
    w = math.sqrt(abs(eps_bar * ebar) / (eps * E))
    if abs(eps_bar) >= NEAR_SINGULAR_FRACTION * (1.0 + V0):
        cv2 = c * V0 * V0
        d = (a + g) ** 2 + cv2
        R = (a * a - g * g - cv2) / d
        Rp = 2.0 * a * rc * V0 / d
        T = w * 2.0 * cp * eps * (a + g) / d
        Tp = w * 2.0 * cp * eps * rc * V0 / d
        return R, Rp, T, Tp
    s = cp * cp * eps_bar + eps * eps * (2.0 - eps_bar) + c * (eps + V0)
    k = cp * cp * eps_bar + 2.0 * cp * cq * eps - eps * eps * (2.0 - eps_bar) - c * (eps + V0)
    d = eps_bar * k
    R = s / k
    Rp = 2.0 * cp * rc * V0 / k
    T = w * 2.0 * cp * eps * (a + g) / d
    Tp = w * 2.0 * cp * eps * rc * V0 / d
    return R, Rp, T, Tp


def amplitudes(params: ChannelParams) -> ScatterAmplitudes:
    """Scattering amplitudes (R, Rp, T, Tp) of the channel.

    For incoming spin-down the flip amplitudes have reversed sign
    relative to spin-up with equal magnitudes; the flip channel vanishes
    identically (exact zeros) when C = 2 b n = 0, i.e. for b = 0 or for
    the lowest state (down, n = 0), where there is no transverse motion
    to activate the spin-orbit coupling.
    """
    _check_singular(params.E, params.V0)
    cp = momentum_left(params)
    cq = momentum_right(params)
    R, Rp, T, Tp = _core_amplitudes(params.E, params.V0, params.C, cp, cq)
    if params.spin is Spin.DOWN:
        Rp, Tp = -Rp, -Tp
    return ScatterAmplitudes(R=R, Rp=complex(Rp), T=T, Tp=complex(Tp), regime=classify(params))


def boundary_spinors(params: ChannelParams):
    """Boundary values at z = 0 of the five wave pieces.

    Returns (incident, refl_same, refl_flip, trans_same, trans_flip),
    each a length-4 complex vector holding the spinor coefficients that
    multiply the transverse factors (Phi_{n-1}, Phi_n, Phi_{n-1}, Phi_n)
    component-wise.  Normalization prefactors are included; the
    transmitted vectors are unit amplitude, i.e. not yet scaled by T or
    Tp.
    """
    E, V0 = params.E, params.V0
    cp = momentum_left(params)
    cq = momentum_right(params)
    rc = math.sqrt(params.C)
    eps = E + 1.0
    eps_bar = eps - V0
    ebar = E - V0
    nl = 1.0 / math.sqrt(2.0 * eps * E)
    norm2 = abs(eps_bar * ebar)
    if norm2 == 0.0:
        raise SingularMatrix(
            "transmitted-spinor normalization degenerates at E = V0 or V0 = E + 1"
        )
    nr = 1.0 / math.sqrt(2.0 * norm2)
    if params.spin is Spin.UP:
        inc = nl * np.array([eps, 0.0, cp, rc], dtype=complex)
        r_same = nl * np.array([eps, 0.0, -cp, rc], dtype=complex)
        r_flip = nl * np.array([0.0, eps, rc, cp], dtype=complex)
        t_same = nr * np.array([eps_bar, 0.0, cq, rc], dtype=complex)
        t_flip = nr * np.array([0.0, eps_bar, rc, -cq], dtype=complex)
    else:
        inc = nl * np.array([0.0, eps, rc, -cp], dtype=complex)
        r_same = nl * np.array([0.0, eps, rc, cp], dtype=complex)
        r_flip = nl * np.array([eps, 0.0, -cp, rc], dtype=complex)
        t_same = nr * np.array([0.0, eps_bar, rc, -cq], dtype=complex)
        t_flip = nr * np.array([eps_bar, 0.0, cq, rc], dtype=complex)
    return inc, r_same, r_flip, t_same, t_flip


def solve_boundary_system(params: ChannelParams) -> ScatterAmplitudes:
    """Amplitudes from the 4x4 boundary-condition system, solved directly.

    Equates the four spinor components of the assembled wave across
    z = 0 and solves the resulting linear system in (R, Rp, T, Tp) by
    generic linear algebra.  Entirely independent of the closed forms in
    amplitudes(); used as the numerical oracle.  Raises SingularMatrix
    at the measure-zero parameter boundaries where the system
    degenerates (E = V0 exactly, V0 = E + 1 exactly).
    """
    inc, r_same, r_flip, t_same, t_flip = boundary_spinors(params)
    a = np.column_stack([r_same, r_flip, -t_same, -t_flip])
    # unit-column scaling keeps the solve well conditioned for tall steps
    colnorm = np.linalg.norm(a, axis=0)
    if not np.all(np.isfinite(colnorm)) or np.any(colnorm == 0.0):
        raise SingularMatrix("boundary system has a degenerate column")
    try:
        x = np.linalg.solve(a / colnorm, -inc) / colnorm
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"boundary system is singular: {exc}") from exc
    if not np.all(np.isfinite(x.view(float))):
        raise SingularMatrix("boundary solve produced non-finite amplitudes")
    return ScatterAmplitudes(
        R=complex(x[0]), Rp=complex(x[1]), T=complex(x[2]), Tp=complex(x[3]),
        regime=classify(params),
    )


def current_budget(params: ChannelParams, amps: ScatterAmplitudes | None = None) -> CurrentBudget:
    """Current fractions of the four outgoing channels (they sum to 1).

    Transmitted fractions are the group-velocity-weighted fluxes
    kappa*|1+R|^2 and kappa*|Rp|^2, not |T|^2 and |Tp|^2: only the
    weighted fluxes obey the conservation sum.  In the evanescent regime
    the transmitted fractions are exactly 0 and |R|^2 + |Rp|^2 = 1.
    """
    if amps is None:
        amps = amplitudes(params)
    refl_same = abs(amps.R) ** 2
    refl_flip = abs(amps.Rp) ** 2
    if amps.regime is Regime.CASE_III:
        trans_same = 0.0
        trans_flip = 0.0
    else:
        kappa = kinematic_factor(params).kappa.real
        trans_same = kappa * abs(1.0 + amps.R) ** 2
        trans_flip = kappa * abs(amps.Rp) ** 2
    return CurrentBudget(refl_same, refl_flip, trans_same, trans_flip)


def klein_limit(spin: Spin | str, n: int, E: float, b: float) -> tuple[float, float]:
    """V0 -> infinity limits of the transmitted probabilities.

    Returns (|T|^2_inf, |Tp|^2_inf):

        |T|^2_inf  = eps * 4 cp^2 (cp + eps)^2 / (E [(cp + eps)^2 + C]^2)
        |Tp|^2_inf = eps * 4 cp^2 C            / (E [(cp + eps)^2 + C]^2)

    with eps = E + 1, C = 2 b n and cp the left momentum.  Both limits
    are independent of V0 and of the incoming spin, and nonzero for any
    open channel: the step transmits even as its height diverges.
    """
    params = make_channel(E, 0.0, b, spin, n)  # validates spin/index/channel
    c = params.C
    cp = momentum_left(params)
    eps = E + 1.0
    s = cp + eps
    den = E * (s * s + c) ** 2
    return eps * 4.0 * cp * cp * s * s / den, eps * 4.0 * cp * cp * c / den


def h0_amplitudes(E: float, V0: float) -> ScatterAmplitudes:
    """Field-free amplitudes, C = 0 path.

    Equivalent to amplitudes() for the lowest spin-down channel at
    b = 0 (bit-for-bit: it is the same code path), where the closed
    forms collapse to R = (1 - kappa)/(1 + kappa) and
    T = w * 2 eps / (eps_bar (1 + kappa)) with real kappa in the
    propagating regimes and imaginary kappa in the evanescent one.  The
    flip amplitudes vanish identically.
    """
    if not (math.isfinite(E) and E > 1.0):
        raise ClosedChannel(f"field-free channel needs E > 1, got {E}")
    return amplitudes(make_channel(E, V0, 0.0, Spin.DOWN, 0))
