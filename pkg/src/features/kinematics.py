from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from actions.base import Action

EPS = 1e-12
# Turning angles this close to -pi are reversals and count as +pi.
REVERSAL_TOL = 1e-9


@dataclass(frozen=True)
class KinematicSeries:
    """Finite-difference series of one action.

    Step series (dt, dx, dy, ds, vx, vy, v, theta) have n-1 entries for n
    points, turning series (dtheta, omega, curv) and `a` have n-2, jerk n-3.
    """

    dt: np.ndarray
    dx: np.ndarray
    dy: np.ndarray
    ds: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    v: np.ndarray
    theta: np.ndarray
    dtheta: np.ndarray
    omega: np.ndarray
    curv: np.ndarray
    a: np.ndarray
    jerk: np.ndarray


def wrap_angle(angle: np.ndarray | float) -> np.ndarray:
    """Wrap to (-pi, pi]."""
    return math.pi - np.mod(math.pi - np.asarray(angle, dtype=float), 2.0 * math.pi)


def step_directions(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """atan2 of each step; a zero-length step repeats the previous direction.

    Leading zero-length steps take the first non-zero direction (0 if the
    action never moves).
    """
    theta = np.arctan2(dy, dx)
    moving = np.hypot(dx, dy) > 0.0
    if not np.any(moving):
        return np.zeros_like(theta)
    idx = np.where(moving, np.arange(theta.size), 0)
    np.maximum.accumulate(idx, out=idx)
    first = int(np.argmax(moving))
    idx[:first] = first
    return theta[idx]


def kinematics(action: Action) -> KinematicSeries:
    t, x, y = action.t, action.x, action.y
    dt = np.diff(t)
    dx = np.diff(x)
    dy = np.diff(y)
    ds = np.hypot(dx, dy)
    vx = dx / dt
    vy = dy / dt
    v = np.hypot(vx, vy)

    theta = step_directions(dx, dy)
    dtheta = wrap_angle(np.diff(theta))
    dtheta = np.where(dtheta <= -math.pi + REVERSAL_TOL, math.pi, dtheta)
    omega = dtheta / dt[1:]
    step_len = ds[1:]
    curv = np.where(step_len > 0.0, dtheta / np.maximum(step_len, EPS), 0.0)

    a = np.diff(v) / dt[1:]
    jerk = np.diff(a) / dt[2:]
    return KinematicSeries(
        dt=dt, dx=dx, dy=dy, ds=ds, vx=vx, vy=vy, v=v, theta=theta, dtheta=dtheta, omega=omega, curv=curv, a=a, jerk=jerk
    )
