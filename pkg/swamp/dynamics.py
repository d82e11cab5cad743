# Copyright (C) 2026 swamp Development Team.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Discrete-time dynamics for the planning scenarios.

Steps are written with the tape-aware scalar operations, so a rollout from
controls held as tape inputs records the whole trajectory and tape_grad
reaches every control.
"""

import bisect
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from swamp.automaton.automaton import Trace
from swamp.core.algebra import tape as ad
from swamp.core.errors import ControlBoundsError, ShapeError


class ModelKind(str, Enum):
    single_integrator = "single_integrator"
    unicycle = "unicycle"
    acc = "acc"


class BoundsMode(str, Enum):
    project = "project"
    reject = "reject"
    none = "none"


# kind: (state_dim, control_dim, dt, control bounds)
_MODEL_DEFAULTS = {
    ModelKind.single_integrator: (2, 2, 0.1, ((-2.0, 2.0), (-2.0, 2.0))),
    ModelKind.unicycle: (5, 2, 0.1, ((-2.0, 2.0), (-2.0, 2.0))),
    ModelKind.acc: (4, 1, 0.01, ((-3.0, 3.0),)),
}


@dataclass(frozen=True)
class DynamicsModel(object):
    kind: ModelKind
    dt: Optional[float] = None
    control_bounds: Optional[Tuple[Tuple[float, float], ...]] = None
    bounds_mode: BoundsMode = BoundsMode.project

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        object.__setattr__(self, "bounds_mode", BoundsMode(self.bounds_mode))
        _, m, dt, bounds = _MODEL_DEFAULTS[self.kind]
        if self.dt is None:
            object.__setattr__(self, "dt", dt)
        if self.control_bounds is None:
            object.__setattr__(self, "control_bounds", bounds)
        else:
            object.__setattr__(
                self, "control_bounds", tuple((float(lo), float(hi)) for lo, hi in self.control_bounds)
            )
        assert self.dt > 0, "dt must be positive, got %s" % self.dt
        if len(self.control_bounds) != m:
            raise ShapeError(
                "%s takes %d controls, got %d bounds."
                % (self.kind.value, m, len(self.control_bounds))
            )
        for lo, hi in self.control_bounds:
            if not lo <= hi:
                raise ValueError("Empty control interval [%s, %s]." % (lo, hi))

    @property
    def state_dim(self) -> int:
        return _MODEL_DEFAULTS[self.kind][0]

    @property
    def control_dim(self) -> int:
        return _MODEL_DEFAULTS[self.kind][1]

    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.control_bounds])

    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.control_bounds])

    def project(self, us: np.ndarray) -> np.ndarray:
        """Clip controls of shape (..., m) into the box when the mode projects."""
        if self.bounds_mode is not BoundsMode.project:
            return us
        return np.clip(us, self.lower(), self.upper())

    def check_control(self, u: Sequence):
        if len(u) != self.control_dim:
            raise ShapeError(
                "%s takes %d controls, got %d." % (self.kind.value, self.control_dim, len(u))
            )
        if self.bounds_mode is not BoundsMode.reject:
            return
        for d, (u_d, (lo, hi)) in enumerate(zip(u, self.control_bounds)):
            value = ad.value_of(u_d)
            if not lo <= value <= hi:
                raise ControlBoundsError(
                    "Control %d = %s is outside [%s, %s]." % (d, value, lo, hi)
                )

    def check_controls(self, us: np.ndarray):
        """check_control for every row of an (H, m) array of floats."""
        if us.ndim != 2 or us.shape[1] != self.control_dim:
            raise ShapeError(
                "%s takes controls of shape (H, %d), got %s."
                % (self.kind.value, self.control_dim, us.shape)
            )
        if self.bounds_mode is not BoundsMode.reject:
            return
        outside = (us < self.lower()) | (us > self.upper())
        if outside.any():
            t, d = np.argwhere(outside)[0]
            lo, hi = self.control_bounds[d]
            raise ControlBoundsError(
                "Control %d = %s is outside [%s, %s]." % (d, us[t, d], lo, hi)
            )


class ControlSequence(object):
    """Controls u_0 .. u_{H-1} held as an (H, m) array."""

    def __init__(self, controls, control_dim: Optional[int] = None):
        arr = np.asarray(controls, dtype=np.float64)
        if arr.ndim == 1 and control_dim is not None:
            arr = arr.reshape(-1, control_dim)
        if arr.size == 0:
            arr = arr.reshape(0, control_dim or 0)
        if arr.ndim != 2:
            raise ShapeError("Controls must be a (H, m) array, got shape %s." % (arr.shape,))
        self.controls: np.ndarray = arr

    @classmethod
    def zeros(cls, horizon: int, control_dim: int) -> "ControlSequence":
        return cls(np.zeros((horizon, control_dim)))

    @property
    def horizon(self) -> int:
        return self.controls.shape[0]

    def __len__(self):
        return self.horizon

    def __getitem__(self, t):
        return self.controls[t]

    def __repr__(self):
        return "ControlSequence(H=%d, m=%d)" % self.controls.shape

    def shifted(self) -> "ControlSequence":
        """Drop u_0 and pad with a zero control: the warm start for the next step."""
        if self.horizon == 0:
            return ControlSequence(self.controls.copy())
        pad = np.zeros((1, self.controls.shape[1]))
        return ControlSequence(np.concatenate([self.controls[1:], pad]))

    def to_numpy(self) -> np.ndarray:
        return self.controls.copy()


def step(model: DynamicsModel, x: Sequence, u: Sequence) -> List:
    """x_{t+1} = f(x_t, u_t)."""
    if len(x) != model.state_dim:
        raise ShapeError(
            "%s has %d states, got %d." % (model.kind.value, model.state_dim, len(x))
        )
    model.check_control(u)
    dt = model.dt
    if model.kind is ModelKind.single_integrator:
        return [x[0] + u[0] * dt, x[1] + u[1] * dt]
    if model.kind is ModelKind.unicycle:
        px, py, theta, v, omega = x
        return [
            px + v * ad.cos(theta) * dt,
            py + v * ad.sin(theta) * dt,
            theta + omega * dt,
            v + u[0] * dt,
            omega + u[1] * dt,
        ]
    # acc: (p_ego, v_ego, d_lead, v_rel), the lead assumed at constant speed.
    p_ego, v_ego, d_lead, v_rel = x
    half = 0.5 * dt * dt
    return [
        p_ego + v_ego * dt + half * u[0],
        v_ego + u[0] * dt,
        d_lead + v_rel * dt - half * u[0],
        v_rel - u[0] * dt,
    ]


def rollout(model: DynamicsModel, x0: Sequence, us) -> Trace:
    """The trace (x_0, ..., x_H) driven by us, of H + 1 states.

    us may be a ControlSequence or any sequence of per-step controls,
    including lists of tape Vars.
    """
    controls = us.controls if isinstance(us, ControlSequence) else us
    states = [list(x0)]
    for u in controls:
        states.append(step(model, states[-1], u))
    return Trace(states)


def _revcumsum(a: np.ndarray) -> np.ndarray:
    return np.cumsum(a[::-1], axis=0)[::-1]


def simulate(model: DynamicsModel, x0: Sequence[float], us: np.ndarray) -> np.ndarray:
    """rollout on plain floats: the (H + 1, n) array of states."""
    us = np.asarray(us, dtype=np.float64)
    model.check_controls(us)
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (model.state_dim,):
        raise ShapeError(
            "%s has %d states, got %d." % (model.kind.value, model.state_dim, x0.size)
        )
    dt = model.dt
    H = us.shape[0]
    X = np.empty((H + 1, model.state_dim))
    X[0] = x0
    if model.kind is ModelKind.single_integrator:
        X[1:] = x0 + np.cumsum(us * dt, axis=0)
    elif model.kind is ModelKind.acc:
        a = us[:, 0]
        half = 0.5 * dt * dt
        v = np.empty(H + 1)
        v[0] = x0[1]
        v[1:] = x0[1] + np.cumsum(a * dt)
        vr = np.empty(H + 1)
        vr[0] = x0[3]
        vr[1:] = x0[3] - np.cumsum(a * dt)
        X[:, 1] = v
        X[:, 3] = vr
        X[1:, 0] = x0[0] + np.cumsum(v[:-1] * dt + half * a)
        X[1:, 2] = x0[2] + np.cumsum(vr[:-1] * dt - half * a)
    else:
        for t in range(H):
            px, py, theta, v, omega = X[t]
            X[t + 1] = (
                px + v * np.cos(theta) * dt,
                py + v * np.sin(theta) * dt,
                theta + omega * dt,
                v + us[t, 0] * dt,
                omega + us[t, 1] * dt,
            )
    return X


def simulate_vjp(model: DynamicsModel, X: np.ndarray, gX: np.ndarray) -> np.ndarray:
    """Pull the state adjoint gX = dJ/dX of shape (H + 1, n) back to dJ/du.

    X is the simulated trajectory. x_0 is not a function of the controls, so
    gX[0] is ignored.
    """
    dt = model.dt
    H = X.shape[0] - 1
    gu = np.zeros((H, model.control_dim))
    if H == 0:
        return gu
    if model.kind is ModelKind.single_integrator:
        return dt * _revcumsum(gX[1:])
    if model.kind is ModelKind.acc:
        half = 0.5 * dt * dt
        # lam[t] = dJ/dx_t through x_t and every later state.
        lam_p = _revcumsum(gX[1:, 0])
        lam_d = _revcumsum(gX[1:, 2])
        shifted_p = np.append(lam_p[1:], 0.0)
        shifted_d = np.append(lam_d[1:], 0.0)
        lam_v = _revcumsum(gX[1:, 1] + dt * shifted_p)
        lam_vr = _revcumsum(gX[1:, 3] + dt * shifted_d)
        gu[:, 0] = half * lam_p + dt * lam_v - half * lam_d - dt * lam_vr
        return gu
    lam = gX[H].copy()
    for t in range(H - 1, -1, -1):
        gu[t] = (dt * lam[3], dt * lam[4])
        _, _, theta, v, _ = X[t]
        c, s = np.cos(theta), np.sin(theta)
        lam = gX[t] + np.array(
            [
                lam[0],
                lam[1],
                lam[2] + dt * v * (c * lam[1] - s * lam[0]),
                lam[3] + dt * (c * lam[0] + s * lam[1]),
                lam[4] + dt * lam[2],
            ]
        )
    return gu


class Environment(object):
    """Supplies the true next state in closed loop."""

    def next_state(self, t: int, x: Sequence[float], u: Sequence[float]) -> np.ndarray:
        raise NotImplementedError()


class ModelEnvironment(Environment):
    """The predictive model is the truth."""

    def __init__(self, model: DynamicsModel):
        self.model = model

    def next_state(self, t, x, u):
        return np.array([float(v) for v in step(self.model, list(x), list(u))])


DEFAULT_LEAD_PROFILE: Tuple[Tuple[float, float], ...] = ((0.0, 12.0), (10.0, 6.0), (20.0, 14.0))


@dataclass
class LeadProfileEnvironment(Environment):
    """ACC closed loop: the lead car follows a piecewise-constant speed profile.

    profile holds (start time in seconds, lead speed) pairs sorted by start
    time. The lead position is integrated here; the ego integrates exactly
    as the predictive model.
    """

    model: DynamicsModel
    profile: Tuple[Tuple[float, float], ...] = DEFAULT_LEAD_PROFILE
    _starts: List[float] = field(init=False, repr=False)

    def __post_init__(self):
        assert self.model.kind is ModelKind.acc, "Lead profiles drive the acc model only."
        self.profile = tuple((float(t0), float(v)) for t0, v in self.profile)
        if not self.profile or self.profile[0][0] > 0.0:
            raise ValueError("A lead profile must start at time 0, got %s." % (self.profile,))
        self._starts = [t0 for t0, _ in self.profile]
        if self._starts != sorted(self._starts):
            raise ValueError("Lead profile start times must be sorted.")

    def lead_speed(self, t: int) -> float:
        seconds = t * self.model.dt
        # Tolerate rounding of t * dt just below a breakpoint.
        k = bisect.bisect_right(self._starts, seconds + 1e-9) - 1
        return self.profile[k][1]

    def initial_state(self, p_ego: float, v_ego: float, d_lead: float) -> np.ndarray:
        return np.array([p_ego, v_ego, d_lead, self.lead_speed(0) - v_ego])

    def next_state(self, t, x, u):
        p_ego, v_ego, d_lead, _ = (float(v) for v in x)
        dt = self.model.dt
        self.model.check_control(u)
        a = float(u[0])
        p_next = p_ego + v_ego * dt + 0.5 * a * dt * dt
        v_next = v_ego + a * dt
        p_lead = p_ego + d_lead + self.lead_speed(t) * dt
        return np.array([p_next, v_next, p_lead - p_next, self.lead_speed(t + 1) - v_next])

