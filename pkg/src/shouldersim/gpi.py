"""Robust GPI controller: gain synthesis, discrete control law, analysis helpers.

Gains k0..k3 are found by matching the closed-loop characteristic polynomial

    s^4 + (k3+g1)s^3 + (k2+k3*g1+g2)s^2 + (k3*g2+k1)s + k0

against the target Hurwitz polynomial (s^2 + 2*xi*wn*s + wn^2)^2, which places
two double poles at -xi*wn +/- wn*sqrt(1-xi^2)i.

The discrete law reconstructs the joint velocity from the integral of the
applied input (no velocity sensing) and applies iterated integrals of the
tracking error, all updated by the trapezoidal rule:

    u = u_d - k3*(theta_dot_int - theta_dot_d)
          + (1/gamma0) * (-k2*(e - e0) - k1*int(e) - k0*iint(e))

with theta_dot_int = int(u) - theta_dot0. Because the trapezoidal update of
int(u) at the current tick contains the not-yet-known u itself, the law is
solved implicitly: the u*dt/2 contribution is moved to the left-hand side,
dividing the explicit part by (1 + k3*dt/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .plant import SecondOrderTf
from .trajectory import RefSample


@dataclass(frozen=True)
class GpiDesign:
    """Closed-loop design point: damping ratio xi and natural frequency wn."""

    xi: float
    wn: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi > 0.0):
            raise ValueError(f"xi must be > 0, got {self.xi!r}")
        if not (math.isfinite(self.wn) and self.wn > 0.0):
            raise ValueError(f"wn must be > 0, got {self.wn!r}")


@dataclass(frozen=True)
class GpiGains:
    """Controller gains k0..k3. Finite by construction; compute_gains
    additionally guarantees k0 > 0 and k3 > 0 for valid designs."""

    k0: float
    k1: float
    k2: float
    k3: float

    def __post_init__(self):
        for name in ("k0", "k1", "k2", "k3"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SaturationLimits:
    """Actuator command bounds in PWM-%."""

    u_min: float
    u_max: float

    def __post_init__(self):
        if not (math.isfinite(self.u_min) and math.isfinite(self.u_max)):
            raise ValueError("saturation limits must be finite")
        if not self.u_min < self.u_max:
            raise ValueError(f"u_min must be < u_max, got [{self.u_min!r}, {self.u_max!r}]")

    def clamp(self, u: float) -> float:
        return min(max(u, self.u_min), self.u_max)


@dataclass(frozen=True)
class ControllerState:
    """Running state of one control loop.

    int_e and dint_e are the trapezoidal estimates of the single and double
    integrals of the tracking error; theta_int is the trapezoidal integral of
    the applied input (the velocity reconstruction source). e0 is the initial
    tracking error offset used by the proportional term; None means "capture
    the first measured error". theta_dot0 is the initial velocity estimate
    subtracted in the reconstruction. u_prev/e_prev hold the previous tick's
    values for the trapezoidal updates; t is the timestamp of the next sample.
    """

    int_e: float = 0.0
    dint_e: float = 0.0
    theta_int: float = 0.0
    e0: Optional[float] = None
    theta_dot0: float = 0.0
    u_prev: Optional[float] = None
    e_prev: Optional[float] = None
    t: float = 0.0


@dataclass(frozen=True)
class RationalTf:
    """Ratio of real polynomials, coefficients in descending degree."""

    num: tuple
    den: tuple

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(float(c) for c in self.num))
        object.__setattr__(self, "den", tuple(float(c) for c in self.den))
        if len(self.den) == 0 or self.den[0] == 0.0:
            raise ValueError("leading denominator coefficient must be nonzero")
        if not all(math.isfinite(c) for c in self.num + self.den):
            raise ValueError("polynomial coefficients must be finite")


def hurwitz_poly(design: GpiDesign) -> np.ndarray:
    """Expansion of the target polynomial (s^2 + 2*xi*wn*s + wn^2)^2."""
    xi, wn = design.xi, design.wn
    return np.array([
        1.0,
        4.0 * xi * wn,
        2.0 * wn * wn + 4.0 * xi * xi * wn * wn,
        4.0 * xi * wn ** 3,
        wn ** 4,
    ])


def compute_gains(design: GpiDesign, tf: SecondOrderTf) -> GpiGains:
    """Pole-placement gains matching the closed loop to hurwitz_poly(design).

    Raises ValueError("unstable compensator denominator") when 4*xi*wn <= gamma1,
    since the compensator pole -k3 would not be strictly stable.
    """
    xi, wn = design.xi, design.wn
    g1, g2 = tf.gamma1, tf.gamma2
    k3 = 4.0 * xi * wn - g1
    if k3 <= 0.0:
        raise ValueError("unstable compensator denominator")
    k2 = 2.0 * wn * wn + 4.0 * xi * xi * wn * wn - g1 * k3 - g2
    k1 = 4.0 * wn ** 3 * xi - g2 * k3
    k0 = wn ** 4
    return GpiGains(k0=k0, k1=k1, k2=k2, k3=k3)


def closed_loop_char_poly(gains: GpiGains, tf: SecondOrderTf) -> np.ndarray:
    """Degree-4 characteristic polynomial of the closed loop (descending)."""
    g1, g2 = tf.gamma1, tf.gamma2
    return np.array([
        1.0,
        gains.k3 + g1,
        gains.k2 + gains.k3 * g1 + g2,
        gains.k3 * g2 + gains.k1,
        gains.k0,
    ])


def feedforward(tf: SecondOrderTf, ref: RefSample) -> float:
    """Nominal input u_d = (theta_ddot_d + gamma1*theta_dot_d + gamma2*theta_d) / gamma0."""
    return (ref.theta_ddot_d + tf.gamma1 * ref.theta_dot_d + tf.gamma2 * ref.theta_d) / tf.gamma0


def control_step(
    cs: ControllerState,
    gains: GpiGains,
    tf: SecondOrderTf,
    theta_meas: float,
    ref: RefSample,
    dt: float,
    sat: SaturationLimits,
):
    """One tick of the discrete GPI law. Returns (u, successor state).

    All integrals advance by the trapezoidal rule. On the first tick there is
    no preceding interval, so the integrals keep their initial values and no
    implicit correction is needed. When the raw command exceeds the saturation
    limits, the error integrals are frozen for that tick (conditional
    integration anti-windup) while theta_int keeps integrating the actually
    applied, clamped input.
    """
    if not math.isfinite(theta_meas):
        raise ValueError("non-finite measurement rejected")
    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError(f"dt must be > 0, got {dt!r}")

    e = theta_meas - ref.theta_d
    e0 = cs.e0 if cs.e0 is not None else e
    u_d = feedforward(tf, ref)
    k0, k1, k2, k3 = gains.k0, gains.k1, gains.k2, gains.k3

    if cs.u_prev is None:
        int_e = cs.int_e
        dint_e = cs.dint_e
        u_raw = (
            u_d
            - k3 * (cs.theta_int - cs.theta_dot0 - ref.theta_dot_d)
            + (-k2 * (e - e0) - k1 * int_e - k0 * dint_e) / tf.gamma0
        )
    else:
        int_e = cs.int_e + 0.5 * dt * (cs.e_prev + e)
        dint_e = cs.dint_e + 0.5 * dt * (cs.int_e + int_e)
        theta_int_known = cs.theta_int + 0.5 * dt * cs.u_prev
        explicit = (
            u_d
            - k3 * (theta_int_known - cs.theta_dot0 - ref.theta_dot_d)
            + (-k2 * (e - e0) - k1 * int_e - k0 * dint_e) / tf.gamma0
        )
        u_raw = explicit / (1.0 + 0.5 * k3 * dt)

    u = sat.clamp(u_raw)
    if u != u_raw:
        int_e = cs.int_e
        dint_e = cs.dint_e

    if cs.u_prev is None:
        theta_int = cs.theta_int
    else:
        theta_int = cs.theta_int + 0.5 * dt * (cs.u_prev + u)

    nxt = replace(
        cs,
        int_e=int_e,
        dint_e=dint_e,
        theta_int=theta_int,
        e0=e0,
        u_prev=u,
        e_prev=e,
        t=cs.t + dt,
    )
    return u, nxt


def compensator_tf(r: int, gains: Sequence[float]) -> RationalTf:
    """Lead-compensator form of the general-r GPI law.

    For gains (k0 .. k_{r+3}) returns
    (k_{r+2} s^{r+2} + ... + k1 s + k0) / (s^{r+1} (s + k_{r+3})).
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r!r}")
    gains = [float(k) for k in gains]
    if len(gains) != r + 4:
        raise ValueError(f"expected {r + 4} gains for r={r}, got {len(gains)}")
    num = tuple(reversed(gains[: r + 3]))
    den = (1.0, gains[r + 3]) + (0.0,) * (r + 1)
    return RationalTf(num=num, den=den)


def closed_loop_poles_analysis(
    tf: SecondOrderTf, comp: RationalTf, scaled_by_inv_gamma0: bool
) -> np.ndarray:
    """Roots of the closed-loop characteristic polynomial, sorted.

    The loop is den_plant*den_comp + num_plant*num_comp, with the compensator
    numerator divided by gamma0 when scaled_by_inv_gamma0 is set (the law
    applies its k2/k1/k0 terms through a 1/gamma0 factor, which cancels the
    plant gain).
    """
    den_plant = np.array([1.0, tf.gamma1, tf.gamma2])
    num_plant = np.array([tf.gamma0])
    num_comp = np.array(comp.num)
    if scaled_by_inv_gamma0:
        num_comp = num_comp / tf.gamma0
    char = np.polyadd(np.polymul(den_plant, np.array(comp.den)), np.polymul(num_plant, num_comp))
    return np.sort_complex(np.roots(char))
