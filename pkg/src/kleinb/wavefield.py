"""Assembled spinor fields on a (y, z) grid and boundary diagnostics.

The full wave is incident + two reflected pieces for z < 0 and two
transmitted pieces for z >= 0.  Component i of every piece carries the
transverse factor Phi_{n-1}, Phi_n, Phi_{n-1}, Phi_n for i = 1..4, with
the convention Phi_{-1} = 0, so the boundary conditions at z = 0 reduce
to component-wise matching of the coefficient 4-vectors.

The transmitted pieces are accumulated through the scaled amplitudes
tau = T/w (w the transmitted normalization prefactor), which keeps the
field finite and continuous also at E = V0, where T itself vanishes
while its normalization diverges.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import GridTooLarge
from .landau import eval_oscillator, momentum_left, momentum_right
from .scattering import ScatterAmplitudes, amplitudes
from .states import ChannelParams, Spin

#: Resource guard: ny * nz may not exceed this.
MAX_GRID_POINTS = 4_000_000

_MAGIC = b"KLBFIELD"
_HEADER = struct.Struct("<8sII II ddddd")  # magic, version, kind, ny, nz, dy, dz, y0, ystart, zstart
GRID_KIND_DENSITY = 0
GRID_KIND_COMPONENTS = 1


@dataclass
class SpinorField:
    """Four complex components sampled on a rectangular (y, z) grid.

    values has shape (4, ny, nz); y, z are the sample coordinates in
    Compton units; y0 is the guiding center of the transverse functions.
    """

    y: np.ndarray
    z: np.ndarray
    values: np.ndarray
    y0: float
    params: ChannelParams
    amps: ScatterAmplitudes

    def density(self) -> np.ndarray:
        """Probability density sum_i |psi_i|^2, shape (ny, nz)."""
        return np.sum(np.abs(self.values) ** 2, axis=0)


def _pieces(params: ChannelParams, amps: ScatterAmplitudes):
    """Wave pieces as (coefficient 4-vector, k_z, side) with side -1/+1.

    Coefficient vectors are the raw spinor coefficients times the left
    normalization 1/sqrt(2*eps*E); the transmitted ones are rescaled by
    tau = T/w so both sides share the left normalization.
    """
    E, V0 = params.E, params.V0
    cp = momentum_left(params)
    cq = momentum_right(params)
    rc = math.sqrt(params.C)
    eps = E + 1.0
    eps_bar = eps - V0
    ebar = E - V0
    nl = 1.0 / math.sqrt(2.0 * eps * E)
    w = math.sqrt(abs(eps_bar * ebar) / (eps * E))
    if w > 0.0:
        tau, tau_p = amps.T / w, amps.Tp / w
    else:
        # degenerate normalization at E = V0: continue the transmitted
        # coefficients through the first two boundary conditions
        tau, tau_p = eps / eps_bar * (1.0 + amps.R), eps / eps_bar * amps.Rp
    if params.spin is Spin.UP:
        vec_in = np.array([eps, 0.0, cp, rc], dtype=complex)
        vec_r = np.array([eps, 0.0, -cp, rc], dtype=complex)
        vec_rp = np.array([0.0, eps, rc, cp], dtype=complex)
        vec_t = np.array([eps_bar, 0.0, cq, rc], dtype=complex)
        vec_tp = np.array([0.0, eps_bar, rc, -cq], dtype=complex)
    else:
        vec_in = np.array([0.0, eps, rc, -cp], dtype=complex)
        vec_r = np.array([0.0, eps, rc, cp], dtype=complex)
        vec_rp = np.array([eps, 0.0, -cp, rc], dtype=complex)
        vec_t = np.array([0.0, eps_bar, rc, -cq], dtype=complex)
        vec_tp = np.array([eps_bar, 0.0, cq, rc], dtype=complex)
    return [
        (nl * vec_in, complex(cp), -1),
        (amps.R * nl * vec_r, complex(-cp), -1),
        (amps.Rp * nl * vec_rp, complex(-cp), -1),
        (tau * nl * vec_t, cq, +1),
        (tau_p * nl * vec_tp, cq, +1),
    ]


def _transverse(params: ChannelParams, y: np.ndarray, y0: float):
    """Phi_{n-1} and Phi_n over the y grid (constant 1 when b = 0)."""
    n = params.n
    if params.field.b == 0.0:
        ones = np.ones_like(y)
        return (np.zeros_like(y) if n - 1 < 0 else ones), ones
    length = params.field.magnetic_length
    xi = (y - y0) / length
    return eval_oscillator(n - 1, xi), eval_oscillator(n, xi)


def assemble_field(
    params: ChannelParams,
    amps: ScatterAmplitudes | None = None,
    y: np.ndarray | None = None,
    z: np.ndarray | None = None,
    ny: int = 512,
    nz: int = 512,
    k_x: float = 0.0,
    y_halfwidth: float | None = None,
    z_halfwidth: float | None = None,
) -> SpinorField:
    """Evaluate the full four-component wave on a (y, z) grid.

    Defaults: y spans y0 +- 6 L (6 Compton lengths at b = 0), z spans
    +- 10 de Broglie wavelengths of the incident wave, 512 x 512 points.
    Explicit y, z arrays override the spans.  The guiding center is
    y0 = k_x L^2 (0 at b = 0).  Raises GridTooLarge beyond the
    MAX_GRID_POINTS guard.
    """
    if amps is None:
        amps = amplitudes(params)
    b = params.field.b
    length = params.field.magnetic_length if b > 0.0 else 1.0
    y0 = k_x * length * length if b > 0.0 else 0.0
    if y is None:
        half = y_halfwidth if y_halfwidth is not None else 6.0 * length
        if not (math.isfinite(half) and half > 0.0):
            raise ValueError(f"y halfwidth must be finite and > 0, got {half}")
        y = np.linspace(y0 - half, y0 + half, int(ny))
    else:
        y = np.asarray(y, dtype=float)
    if z is None:
        lam = 2.0 * math.pi / momentum_left(params)
        half = z_halfwidth if z_halfwidth is not None else 10.0 * lam
        if not (math.isfinite(half) and half > 0.0):
            raise ValueError(f"z halfwidth must be finite and > 0, got {half}")
        z = np.linspace(-half, half, int(nz))
    else:
        z = np.asarray(z, dtype=float)
    if y.size * z.size > MAX_GRID_POINTS:
        raise GridTooLarge(
            f"grid of {y.size} x {z.size} points exceeds guard of {MAX_GRID_POINTS}"
        )

    phi_lo, phi_hi = _transverse(params, y, y0)
    trans = (phi_lo, phi_hi, phi_lo, phi_hi)
    values = np.zeros((4, y.size, z.size), dtype=complex)
    left = z < 0.0
    for coeff, kz, side in _pieces(params, amps):
        mask = left if side < 0 else ~left
        if not np.any(mask):
            continue
        phase = np.exp(1j * kz * z[mask])
        for i in range(4):
            if coeff[i] == 0.0:
                continue
            values[i][:, mask] += coeff[i] * trans[i][:, None] * phase[None, :]
    return SpinorField(y=y, z=z, values=values, y0=y0, params=params, amps=amps)


def boundary_values(field: SpinorField) -> tuple[np.ndarray, np.ndarray]:
    """One-sided limits psi(z -> 0-) and psi(z -> 0+) over the y grid.

    Recomputed from the stored parameters and amplitudes (plane-wave
    phases are 1 at z = 0), shape (4, ny) each.
    """
    phi_lo, phi_hi = _transverse(field.params, field.y, field.y0)
    trans = (phi_lo, phi_hi, phi_lo, phi_hi)
    out = []
    for want in (-1, +1):
        vals = np.zeros((4, field.y.size), dtype=complex)
        for coeff, _kz, side in _pieces(field.params, field.amps):
            if side != want:
                continue
            for i in range(4):
                vals[i] += coeff[i] * trans[i]
        out.append(vals)
    return out[0], out[1]


def continuity_residual(field: SpinorField) -> float:
    """Mismatch of the wave across z = 0, relative to the field scale.

    max over the y grid and the four components of
    |psi(0-) - psi(0+)|, divided by the largest boundary amplitude.
    Amplitudes that solve the boundary conditions give residuals at the
    rounding level; a perturbation of 1e-3 in any amplitude lifts the
    residual above 1e-4.
    """
    lo, hi = boundary_values(field)
    scale = max(np.abs(lo).max(), np.abs(hi).max())
    if scale == 0.0:
        return 0.0
    return float(np.abs(lo - hi).max() / scale)


def integrated_current(field: SpinorField) -> np.ndarray:
    """Longitudinal current integrated over y, one value per z sample.

    j_z(y, z) = 2 Re(psi_1* psi_3) - 2 Re(psi_2* psi_4) integrated by
    the trapezoid rule over the y grid.  Conserved: z-independent on
    each side of the step, equal to the incident current times
    (1 - refl_same - refl_flip) on the left and (trans_same +
    trans_flip) on the right.
    """
    v = field.values
    jz = 2.0 * np.real(np.conj(v[0]) * v[2]) - 2.0 * np.real(np.conj(v[1]) * v[3])
    return np.trapezoid(jz, field.y, axis=0)


def save_grid(path, field: SpinorField, what: str = "density") -> None:
    """Write the field's density or components in the binary grid format.

    Layout: a 64-byte little-endian header (magic "KLBFIELD", format
    version, payload kind, ny, nz, dy, dz, y0, y_start, z_start)
    followed by the payload in C order: ny*nz float64 densities, or
    4*ny*nz complex128 components (component index slowest).  Requires a
    uniformly spaced grid.
    """
    if what == "density":
        kind, payload = GRID_KIND_DENSITY, field.density().astype(np.float64)
    elif what == "components":
        kind, payload = GRID_KIND_COMPONENTS, field.values.astype(np.complex128)
    else:
        raise ValueError(f"unknown grid payload {what!r}")
    dy = float(field.y[1] - field.y[0]) if field.y.size > 1 else 0.0
    dz = float(field.z[1] - field.z[0]) if field.z.size > 1 else 0.0
    header = _HEADER.pack(
        _MAGIC, 1, kind, field.y.size, field.z.size,
        dy, dz, field.y0, float(field.y[0]), float(field.z[0]),
    )
    assert len(header) == 64
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(payload).tobytes())


def load_grid(path):
    """Read a file written by save_grid.

    Returns (info, array) where info is a dict of the header fields and
    array has shape (ny, nz) for a density payload or (4, ny, nz) for a
    components payload.
    """
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        magic, version, kind, ny, nz, dy, dz, y0, ystart, zstart = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"not a kleinb grid file: bad magic {magic!r}")
        info = {
            "version": version, "kind": kind, "ny": ny, "nz": nz,
            "dy": dy, "dz": dz, "y0": y0, "y_start": ystart, "z_start": zstart,
        }
        if kind == GRID_KIND_DENSITY:
            data = np.frombuffer(fh.read(), dtype=np.float64).reshape(ny, nz)
        elif kind == GRID_KIND_COMPONENTS:
            data = np.frombuffer(fh.read(), dtype=np.complex128).reshape(4, ny, nz)
        else:
            raise ValueError(f"unknown payload kind {kind}")
    return info, data
