# invlabel/integrate.py

"""
Adaptive Dormand-Prince 5(4) integration of batches of trajectories.

All rows of a batch are advanced together, each with its own time, step size
and accept/reject decision, so every trajectory sees exactly the arithmetic
it would see when integrated alone. Fields are vectorized callables
`f(t, y) -> dy` with `t` of shape (m,) and `y`, `dy` of shape (m, d).
"""

import logging
from typing import Callable, Optional, Tuple

import numpy as np

from .constants import STEP_SAFETY, STEP_MIN_FACTOR, STEP_MAX_FACTOR
from .error import IntegrationError, ConfigError
from .models import IntegratorConfig

logger = logging.getLogger(__name__)

FieldType = Callable[[np.ndarray, np.ndarray], np.ndarray]

# --- Butcher Tableau ---
# Dormand & Prince (1980); the error row is b5 - b4.

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

# Step sizes below this fraction of |t| cannot make progress in float64.
_STEP_UNDERFLOW = 1e-14


def rk45_step(field: FieldType, t: np.ndarray, y: np.ndarray, h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    One Dormand-Prince step for every row of a batch.

    Args:
        field: Vectorized right-hand side.
        t: Times, shape (m,).
        y: States, shape (m, d).
        h: Step sizes, shape (m,).

    Returns:
        The fifth-order solution at t + h and the embedded local error estimate,
        both of shape (m, d).
    """
    hc = h[:, None]
    k = np.empty((7,) + y.shape, dtype=float)
    k[0] = field(t, y)
    for i in range(1, 7):
        incr = sum(a * k[j] for j, a in enumerate(_A[i]) if a != 0.0)
        k[i] = field(t + _C[i] * h, y + hc * incr)
    # explicit stage sums keep each row independent of the batch size
    y_new = y + hc * sum(b * k[j] for j, b in enumerate(_B) if b != 0.0)
    err = hc * sum(e * k[j] for j, e in enumerate(_E) if e != 0.0)
    return y_new, err


def rk45_integrate(
    field: FieldType,
    y0: np.ndarray,
    t0: float,
    t1: float,
    cfg: Optional[IntegratorConfig] = None,
) -> np.ndarray:
    """
    Integrates y' = f(t, y) from t0 to t1 with proportional step control.

    A step is accepted when max_j |err_j| / (atol + rtol * max(|y_j|, |y_new_j|)) <= 1.
    The last step of every trajectory is shortened to land exactly on t1.

    Args:
        field: Vectorized right-hand side.
        y0: Initial state, shape (d,) or a batch (m, d).
        t0: Start time.
        t1: End time, t1 >= t0.
        cfg: Tolerances and limits; defaults from `IntegratorConfig()`.

    Returns:
        The state(s) at t1, same shape as y0.

    Raises:
        ConfigError: If t1 < t0.
        IntegrationError: If a trajectory exceeds `max_steps` or its step size
                          underflows (for example because the field blew up).
                          `sample_index` names the batch row.
    """
    cfg = cfg or IntegratorConfig()
    if t1 < t0:
        raise ConfigError(f"Integration needs t1 >= t0, got t0={t0}, t1={t1}")

    y = np.array(y0, dtype=float, copy=True)
    single = y.ndim == 1
    if single:
        y = y[None, :]
    if t1 == t0 or y.shape[0] == 0:
        return y[0] if single else y

    m = y.shape[0]
    t = np.full(m, float(t0))
    h = np.full(m, min(cfg.initial_step, t1 - t0))
    steps = np.zeros(m, dtype=np.int64)
    active = np.ones(m, dtype=bool)

    while active.any():
        idx = np.flatnonzero(active)
        ti, yi = t[idx], y[idx]
        remaining = t1 - ti
        last = h[idx] >= remaining
        hi = np.where(last, remaining, h[idx])

        y_new, err = rk45_step(field, ti, yi, hi)
        scale = cfg.atol + cfg.rtol * np.maximum(np.abs(yi), np.abs(y_new))
        with np.errstate(invalid="ignore", over="ignore"):
            ratio = np.max(np.abs(err) / scale, axis=1)
        ratio = np.where(np.isfinite(ratio) & np.all(np.isfinite(y_new), axis=1), ratio, np.inf)
        ok = ratio <= 1.0

        acc = idx[ok]
        y[acc] = y_new[ok]
        t[acc] = np.where(last[ok], t1, ti[ok] + hi[ok])
        active[acc[last[ok]]] = False

        with np.errstate(divide="ignore"):
            factor = np.where(ratio == 0.0, STEP_MAX_FACTOR, STEP_SAFETY * ratio ** -0.2)
        factor = np.clip(factor, STEP_MIN_FACTOR, np.where(ok, STEP_MAX_FACTOR, 1.0))
        h[idx] = hi * factor
        steps[idx] += 1

        running = np.flatnonzero(active)
        if running.size:
            over = running[steps[running] >= cfg.max_steps]
            if over.size:
                bad = int(over[0])
                raise IntegrationError(
                    f"Integration exceeded max_steps={cfg.max_steps} at t={t[bad]:.6g} "
                    f"(target {t1:.6g}) for trajectory {bad}",
                    sample_index=bad, steps=int(steps[bad]),
                )
            tiny = running[h[running] <= _STEP_UNDERFLOW * np.maximum(1.0, np.abs(t[running]))]
            if tiny.size:
                bad = int(tiny[0])
                raise IntegrationError(
                    f"Step size underflow at t={t[bad]:.6g} for trajectory {bad}",
                    sample_index=bad, steps=int(steps[bad]),
                )

    logger.debug(f"Integrated {m} trajectories over [{t0}, {t1}]: max steps {int(steps.max())}")
    return y[0] if single else y
