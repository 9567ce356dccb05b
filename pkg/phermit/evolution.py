"""Schrödinger evolution module.

This module integrates ``i d/dt |psi> = H(t) |psi>`` with the classical fixed-step fourth-order Runge-Kutta
scheme, and measures the conservation of the indefinite inner product ``<<psi1(t)|psi2(t)>>_eta``, which
holds for every pair of states if and only if the generator is eta-pseudo-Hermitian.
"""

import logging
from typing import TYPE_CHECKING

import numpy as np

import phermit.typedefs  # noqa: F401
from phermit.algebra.operators import as_metric, check_op, check_state

if TYPE_CHECKING:
    from typing import Callable, Optional, Tuple  # noqa: F401

logger = logging.getLogger(__name__)

STEP_GUIDANCE = 0.1
"""Step size guidance factor, the step should not exceed ``STEP_GUIDANCE / ||H||_2``."""


class Trajectory:
    """Recorded states of an integrated Schrödinger equation.

    Attributes:
        times: increasing array of recorded times (starting at zero).
        states: recorded states, one row per time.
        generator: the (possibly constant) Hamiltonian provider ``t -> H(t)``.
    """

    def __init__(self, times, states, generator=None):
        # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, Optional[Callable]) -> None
        times = np.asarray(times, dtype=np.float64).reshape(-1)
        states = np.asarray(states, dtype=np.complex128)
        assert states.ndim == 2 and states.shape[0] == times.size, "one state per recorded time is expected"
        assert times.size > 0 and np.all(np.diff(times) > 0), "recorded times should be strictly increasing"
        self.times = times
        self.states = states
        self.generator = generator

    @property
    def dim(self):
        # type: () -> int
        return int(self.states.shape[1])

    @property
    def final_state(self):
        # type: () -> phermit.typedefs.StateVecType
        return self.states[-1]

    def inner_products(self, other, eta):
        # type: (Trajectory, phermit.typedefs.OpOrMetricType) -> np.ndarray
        """Returns ``<<self(t)|other(t)>>_eta`` at every recorded time."""
        eta = as_metric(eta)
        if self.times.shape != other.times.shape or not np.allclose(self.times, other.times, rtol=0, atol=1e-12):
            raise AssertionError("trajectories are not recorded at matching times")
        if eta.dim != self.dim or eta.dim != other.dim:
            raise AssertionError(f"dimension mismatch (metric={eta.dim}, states={self.dim}/{other.dim})")
        return np.einsum("ti,ij,tj->t", self.states.conj(), eta.op, other.states)

    def __len__(self):
        return self.times.size

    def __repr__(self):
        return f"{self.__class__.__module__}.{self.__class__.__qualname__}" + \
               f"(dim={self.dim}, steps={len(self)}, t_final={self.times[-1]})"


def max_stable_step(hamiltonian):
    # type: (phermit.typedefs.ArrayType) -> float
    """Returns the step size guidance ``0.1 / ||H||_2`` (infinite for the zero operator)."""
    norm = float(np.linalg.norm(check_op(hamiltonian, "hamiltonian"), 2))
    return STEP_GUIDANCE / norm if norm > 0 else np.inf


def _as_generator(hamiltonian):
    if callable(hamiltonian):
        return hamiltonian, False
    hamiltonian = check_op(hamiltonian, "hamiltonian")
    return (lambda t: hamiltonian), True


def evolve(hamiltonian, psi0, t_final, dt, record_every=1):
    # type: (phermit.typedefs.GeneratorType, phermit.typedefs.ArrayType, float, float, int) -> Trajectory
    """Integrates the Schrödinger equation with fixed-step RK4.

    A time-dependent generator is sampled at the stage times ``t``, ``t + dt/2`` and ``t + dt``. The last
    step is shortened so that the trajectory ends exactly at ``t_final``.

    Args:
        hamiltonian: constant Hamiltonian matrix, or callable returning ``H(t)``.
        psi0: initial state.
        t_final: final time (non-negative).
        dt: step size (strictly positive).
        record_every: records one state every ``record_every`` steps (the final state is always recorded).

    Raises:
        FloatingPointError: if the state becomes non-finite (instability).
    """
    if not dt > 0:
        raise AssertionError(f"time step should be strictly positive (got {dt})")
    if not t_final >= 0:
        raise AssertionError(f"final time should be non-negative (got {t_final})")
    assert isinstance(record_every, int) and record_every >= 1, "record interval should be a positive integer"
    generator, constant = _as_generator(hamiltonian)
    h_start = check_op(generator(0.0), "hamiltonian")
    psi = check_state(psi0, h_start.shape[0], "initial state")
    guidance = max_stable_step(h_start)
    if dt > guidance:
        logger.warning("time step %.3e exceeds the stability guidance %.3e (0.1 / ||H||)" % (dt, guidance))
    n_steps = int(np.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    times, states = [0.0], [psi.copy()]
    t_curr, h_curr = 0.0, h_start
    for step_idx in range(n_steps):
        t_next = min((step_idx + 1) * dt, t_final) if step_idx < n_steps - 1 else t_final
        step = t_next - t_curr
        if constant:
            h_mid = h_next = h_curr
        else:
            h_mid, h_next = generator(t_curr + 0.5 * step), generator(t_next)
        k1 = -1j * (h_curr @ psi)
        k2 = -1j * (h_mid @ (psi + 0.5 * step * k1))
        k3 = -1j * (h_mid @ (psi + 0.5 * step * k2))
        k4 = -1j * (h_next @ (psi + step * k3))
        psi = psi + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(psi)):
            raise FloatingPointError(f"non-finite state at step {step_idx} (t={t_next:.6g}); "
                                     f"reduce the time step (guidance: {guidance:.3e})")
        t_curr, h_curr = t_next, h_next
        if (step_idx + 1) % record_every == 0 or step_idx == n_steps - 1:
            times.append(t_curr)
            states.append(psi.copy())
    logger.debug("integrated %d steps up to t=%.6g" % (n_steps, t_curr))
    return Trajectory(times, np.stack(states), generator)


def inner_product_drift(traj1, traj2, eta):
    # type: (Trajectory, Trajectory, phermit.typedefs.OpOrMetricType) -> float
    """Returns ``max_t |<<psi1(t)|psi2(t)>>_eta - <<psi1(0)|psi2(0)>>_eta|``, relative to the initial value.

    The drift is absolute when the initial inner product vanishes.
    """
    values = traj1.inner_products(traj2, eta)
    deviation = float(np.max(np.abs(values - values[0])))
    initial = abs(values[0])
    return deviation / initial if initial > 0 else deviation


def inner_product_rate(hamiltonian, psi1, psi2, eta):
    # type: (phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, phermit.typedefs.ArrayType, phermit.typedefs.OpOrMetricType) -> complex  # noqa: E501
    """Returns the instantaneous rate ``d/dt <<psi1|psi2>>_eta = -i <psi1|(eta H - H^H eta)|psi2>``."""
    hamiltonian = check_op(hamiltonian, "hamiltonian")
    eta = as_metric(eta)
    psi1 = check_state(psi1, eta.dim, "first state")
    psi2 = check_state(psi2, eta.dim, "second state")
    generator_defect = eta.op @ hamiltonian - hamiltonian.conj().T @ eta.op
    return complex(-1j * np.vdot(psi1, generator_defect @ psi2))
