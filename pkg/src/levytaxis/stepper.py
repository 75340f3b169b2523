"""Time integration of the density equation with an integrating-factor RK4.

The density evolves by d(rho)/dt = (dispersal) rho - d/dx(rho * c_x).  In
Fourier space the dispersal term is diagonal, so each step applies its exact
exponential and runs a classical RK4 on the exponentially transformed
nonlinearity.  With the flux disabled the scheme propagates the linear part
exactly; with it enabled the scheme is fourth order in time.

The chemotactic flux is computed pseudospectrally with 2/3-rule dealiasing
applied to both factors and to the product, and carries an exactly zero mean
mode, so the discrete mass (mode-0 coefficient) is conserved to the bit.

Step-size control: the step is rejected and dt halved whenever the updated
density dips below -undershoot_tol * ||rho||_inf or turns non-finite;
otherwise dt may grow by at most 1.2x per step up to the advective CFL bound
cfl * dx / max|c_x|.  Positivity rejection applies only while the flux is
active (a pure dispersal run may legitimately be signed).  Repeated
rejections that push dt below dt_min terminate the run; together with the
sup-growth threshold this is the finite-precision collapse declaration, and
both report the bracketing interval [t_last_accepted, t_rejected].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .chemo import ELLIPTIC, PARABOLIC, ChemoParams, solve_elliptic, step_parabolic_c
from .grid import Grid, RealField, SpectralField, backward, forward
from .operators import DispersalOperator, symbol

DT_GROWTH = 1.2
CFL_VELOCITY_FLOOR = 1e-12


class Status(enum.Enum):
    RUNNING = "running"
    COMPLETED = "completed"
    BLOWUP = "blowup"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class StepControl:
    """Adaptive step-size and collapse-detection knobs."""

    cfl: float = 0.4
    dt_min: float = 1e-12
    dt_max: float = 10.0
    blowup_factor: float = 1e4
    undershoot_tol: float = 1e-8
    adaptive: bool = True
    dt_init: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.cfl < 1.0:
            raise ValueError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not self.dt_min < self.dt_max:
            raise ValueError(
                f"dt_min must be below dt_max, got {self.dt_min} >= {self.dt_max}"
            )
        if not self.blowup_factor > 1.0:
            raise ValueError(
                f"blowup_factor must exceed 1, got {self.blowup_factor}"
            )
        if self.dt_init is not None and not self.dt_init > 0:
            raise ValueError(f"dt_init must be positive, got {self.dt_init}")
        if not self.adaptive and self.dt_init is None:
            raise ValueError("fixed-step mode requires dt_init")


@dataclass
class SimState:
    """The evolving pair (rho, c) plus step bookkeeping."""

    rho: RealField
    c: RealField
    t: float
    dt: float
    step_count: int = 0
    status: Status = Status.RUNNING
    initial_linf: float = 0.0
    rejections: int = 0
    t_star_bracket: tuple[float, float] | None = None
    x_star: float | None = None
    rho_hat: np.ndarray | None = field(default=None, repr=False, compare=False)

    def spectral(self) -> np.ndarray:
        if self.rho_hat is None:
            self.rho_hat = np.fft.rfft(self.rho.values)
        return self.rho_hat


class _Workspace:
    """Immutable per-(grid, operator) spectral tables for the hot loop.

    The half-spectrum (rfft) layout is used throughout; all tables are pure
    functions of the grid and operator.  The exponential cache maps a step
    size to the pair (exp(s*dt/2), exp(s*dt)); entries are only ever added
    (atomically under the GIL), so sharing across threads is safe.
    """

    def __init__(self, grid: Grid, op: DispersalOperator):
        self.grid = grid
        self.k = 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.dx)
        self.sym = np.asarray(symbol(op, self.k))
        ik = 1j * self.k
        ik[-1] = 0.0  # Nyquist zeroed for the odd-order derivative
        self.ik = ik
        j = np.arange(self.k.size)
        self.dealias = j <= grid.n // 3
        for arr in (self.k, self.sym, self.ik, self.dealias):
            arr.setflags(write=False)
        self._exp_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def exponentials(self, dt: float) -> tuple[np.ndarray, np.ndarray]:
        cached = self._exp_cache.get(dt)
        if cached is None:
            half = np.exp(self.sym * (0.5 * dt))
            cached = (half, half * half)
            if len(self._exp_cache) > 256:
                self._exp_cache.clear()
            self._exp_cache[dt] = cached
        return cached


@lru_cache(maxsize=32)
def _workspace(grid: Grid, op: DispersalOperator) -> _Workspace:
    return _Workspace(grid, op)


def chemotactic_flux_divergence(rho: RealField, c: RealField) -> RealField:
    """The drift term -d/dx(rho * c_x), dealiased by the 2/3 rule.

    c_x is formed spectrally, the product rho * c_x in physical space with
    both factors and the product dealiased, and the outer derivative applied
    spectrally.  The mean mode of the result is exactly zero.
    """
    if c.grid != rho.grid:
        raise ValueError("rho and c must live on the same grid")
    grid = rho.grid
    # Only the wavenumber tables are used; the operator choice is immaterial.
    ws = _workspace(grid, DispersalOperator("laplacian"))
    rho_hat = np.fft.rfft(rho.values)
    c_hat = np.fft.rfft(c.values)
    out = _flux_divergence_hat(rho_hat, ws.ik * c_hat, ws)
    return RealField(np.fft.irfft(out, n=grid.n), grid)


def _flux_divergence_hat(
    rho_hat: np.ndarray, cx_hat: np.ndarray, ws: _Workspace
) -> np.ndarray:
    rho_phys = np.fft.irfft(ws.dealias * rho_hat, n=ws.grid.n)
    cx_phys = np.fft.irfft(ws.dealias * cx_hat, n=ws.grid.n)
    product_hat = np.fft.rfft(rho_phys * cx_phys)
    return -ws.ik * (ws.dealias * product_hat)


def _rhs_elliptic(rho_hat: np.ndarray, delta: float, ws: _Workspace) -> np.ndarray:
    """Nonlinear term with the attractant re-solved from this stage's rho."""
    c_hat = rho_hat / (ws.k * ws.k + delta)
    return _flux_divergence_hat(rho_hat, ws.ik * c_hat, ws)


def _rhs_frozen_c(rho_hat: np.ndarray, cx_hat: np.ndarray, ws: _Workspace) -> np.ndarray:
    return _flux_divergence_hat(rho_hat, cx_hat, ws)


def initial_state(
    rho0: RealField,
    chemo: ChemoParams,
    ctrl: StepControl = StepControl(),
    *,
    chemotaxis: bool = True,
) -> SimState:
    """Assemble the t=0 state: the attractant starts on the elliptic balance."""
    c0 = solve_elliptic(rho0, chemo.delta)
    state = SimState(
        rho=rho0,
        c=c0,
        t=0.0,
        dt=0.0,
        initial_linf=float(np.abs(rho0.values).max()),
    )
    state.dt = _first_dt(state, ctrl, chemotaxis)
    return state


def _first_dt(state: SimState, ctrl: StepControl, chemotaxis: bool) -> float:
    if ctrl.dt_init is not None:
        return ctrl.dt_init
    return min(_cfl_bound(state, ctrl, chemotaxis), ctrl.dt_max)


def _cfl_bound(state: SimState, ctrl: StepControl, chemotaxis: bool) -> float:
    if not chemotaxis:
        return ctrl.dt_max
    ws = _workspace(state.rho.grid, DispersalOperator("laplacian"))
    cx = np.fft.irfft(ws.ik * np.fft.rfft(state.c.values), n=state.rho.grid.n)
    vmax = float(np.abs(cx).max())
    return ctrl.cfl * state.rho.grid.dx / max(vmax, CFL_VELOCITY_FLOOR)


def step(
    state: SimState,
    op: DispersalOperator,
    chemo: ChemoParams,
    ctrl: StepControl,
    *,
    chemotaxis: bool = True,
    dt_cap: float | None = None,
) -> SimState:
    """Advance one accepted integrating-factor RK4 step (or fail by underflow).

    ``dt_cap`` additionally bounds the attempted step (used by :func:`run` to
    land exactly on the end time).  The returned state carries the accepted
    step size; on rejection down to dt_min the status is STEP_UNDERFLOW and
    the state is the last accepted one with the failure bracket recorded.
    """
    if state.status is not Status.RUNNING:
        raise ValueError(f"cannot step a state with status {state.status}")
    grid = state.rho.grid
    ws = _workspace(grid, op)
    rho_hat = state.spectral()

    if ctrl.adaptive:
        dt_try = min(state.dt * DT_GROWTH, ctrl.dt_max)
        if chemotaxis:
            dt_try = min(dt_try, _cfl_bound(state, ctrl, chemotaxis))
    else:
        dt_try = ctrl.dt_init
    if dt_cap is not None:
        dt_try = min(dt_try, dt_cap)

    rejections = state.rejections
    while True:
        new_hat, new_c = _attempt(rho_hat, state, op, chemo, ctrl, ws, dt_try, chemotaxis)
        rho_new = np.fft.irfft(new_hat, n=grid.n)
        sup = float(np.abs(rho_new).max())
        bad = not math.isfinite(sup)
        if not bad and chemotaxis and ctrl.adaptive:
            # Undershoot rejection belongs to adaptive control; fixed-step
            # runs tolerate signed excursions and report them in diagnostics.
            bad = float(rho_new.min()) < -ctrl.undershoot_tol * sup
        if not bad:
            break
        rejections += 1
        if not ctrl.adaptive:
            # Fixed-step mode cannot retry; report where it died.
            return replace(
                state,
                status=Status.STEP_UNDERFLOW,
                rejections=rejections,
                t_star_bracket=(state.t, state.t + dt_try),
            )
        dt_try *= 0.5
        if dt_try < ctrl.dt_min:
            return replace(
                state,
                status=Status.STEP_UNDERFLOW,
                rejections=rejections,
                t_star_bracket=(state.t, state.t + dt_try * 2.0),
            )

    return SimState(
        rho=RealField(rho_new, grid),
        c=new_c,
        t=state.t + dt_try,
        dt=dt_try,
        step_count=state.step_count + 1,
        status=Status.RUNNING,
        initial_linf=state.initial_linf,
        rejections=rejections,
        rho_hat=new_hat,
    )


def _attempt(
    rho_hat: np.ndarray,
    state: SimState,
    op: DispersalOperator,
    chemo: ChemoParams,
    ctrl: StepControl,
    ws: _Workspace,
    dt: float,
    chemotaxis: bool,
) -> tuple[np.ndarray, RealField]:
    """One trial step of size dt; returns (new rho_hat, new c)."""
    grid = state.rho.grid
    e_half, e_full = ws.exponentials(dt)

    if not chemotaxis:
        new_hat = e_full * rho_hat
        if chemo.mode == ELLIPTIC:
            new_c = RealField(
                np.fft.irfft(new_hat / (ws.k * ws.k + chemo.delta), n=grid.n), grid
            )
        else:
            new_c = step_parabolic_c(state.c, state.rho, chemo, dt)
        return new_hat, new_c

    if chemo.mode == ELLIPTIC:
        rhs = lambda u: _rhs_elliptic(u, chemo.delta, ws)
    else:
        # One attractant substep per density step, with rho frozen.
        new_c = step_parabolic_c(state.c, state.rho, chemo, dt)
        cx_hat = ws.ik * np.fft.rfft(new_c.values)
        rhs = lambda u: _rhs_frozen_c(u, cx_hat, ws)

    a = rhs(rho_hat)
    b = rhs(e_half * (rho_hat + (0.5 * dt) * a))
    c_stage = rhs(e_half * rho_hat + (0.5 * dt) * b)
    d = rhs(e_full * rho_hat + dt * (e_half * c_stage))
    new_hat = e_full * rho_hat + (dt / 6.0) * (
        e_full * a + 2.0 * (e_half * (b + c_stage)) + d
    )

    if chemo.mode == ELLIPTIC:
        new_c = RealField(
            np.fft.irfft(new_hat / (ws.k * ws.k + chemo.delta), n=grid.n), grid
        )
    return new_hat, new_c


def detect_blowup(state: SimState, ctrl: StepControl) -> Status:
    """Classify a state: sup-growth threshold, step-size floor, or running."""
    if state.initial_linf > 0:
        sup = float(np.abs(state.rho.values).max())
        if sup > ctrl.blowup_factor * state.initial_linf:
            return Status.BLOWUP
    if state.dt < ctrl.dt_min:
        return Status.STEP_UNDERFLOW
    return Status.RUNNING


def mark_blowup(state: SimState, t_previous: float) -> SimState:
    """Annotate a threshold-crossing state with the collapse site and bracket."""
    idx = int(np.argmax(state.rho.values))
    return replace(
        state,
        status=Status.BLOWUP,
        t_star_bracket=(t_previous, state.t),
        x_star=float(state.rho.grid.x[idx]),
    )


def run(config, snapshot_hook=None):
    """Integrate a validated config from t=0 to t_end or failure.

    Emits a diagnostics record at t=0, whenever the integration crosses a
    multiple of the output interval, and at the final state.  When given,
    ``snapshot_hook(index, state)`` is called at the same instants.  Returns
    the final state and the list of records.  Deterministic: identical
    configs produce identical outputs.
    """
    from .diagnostics import check_invariants, norms
    from .initial_conditions import build

    rho0 = build(config.ic, config.grid)
    state = initial_state(rho0, config.chemo, config.control, chemotaxis=config.chemotaxis)

    op = config.operator
    records: list = []
    initial_record = None
    emitted = 0
    last_emit_step = -1

    def emit(st: SimState) -> None:
        nonlocal initial_record, emitted, last_emit_step
        if st.step_count == last_emit_step:
            return
        last_emit_step = st.step_count
        record = norms(st.rho, st.c, op, t=st.t, dt=st.dt)
        if initial_record is None:
            initial_record = record
        record = check_invariants(
            record, initial_record, config.chemo.delta, config.tolerances
        )
        records.append(record)
        if snapshot_hook is not None:
            snapshot_hook(emitted, st)
        emitted += 1

    emit(state)
    interval = config.output_interval
    next_emit = interval

    while state.status is Status.RUNNING and state.t < config.t_end:
        t_prev = state.t
        state = step(
            state,
            op,
            config.chemo,
            config.control,
            chemotaxis=config.chemotaxis,
            dt_cap=config.t_end - state.t,
        )
        if state.status is Status.RUNNING:
            # Only the sup-growth clause applies here; a dt below the floor is
            # signalled by step() itself (a capped final step may legitimately
            # be tiny without any rejection having occurred).
            if detect_blowup(state, config.control) is Status.BLOWUP:
                state = mark_blowup(state, t_prev)
        if state.status is Status.RUNNING and state.t >= next_emit - 1e-12 * config.t_end:
            emit(state)
            while next_emit <= state.t + 1e-12 * config.t_end:
                next_emit += interval

    if state.status is Status.RUNNING:
        state = replace(state, status=Status.COMPLETED)
    emit(state)
    return state, records
