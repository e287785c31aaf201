"""Scenario configuration, execution, persistence, and report emission.

Everything the command-line tool does lives here as plain functions so the
test suite can drive it without a subprocess: config parsing with exhaustive
violation reporting, the named initial-data library, bit-exact checkpoints,
full-precision CSV output, plot-data emission with fitted slopes, and the
operator / inequality verification batteries.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .dyadic import bernstein_check, build_partition, decompose
from .errors import (
    BlowUpError,
    CheckpointError,
    ConfigError,
    CourantError,
    GsqgError,
    OverflowGuardError,
    PicardConvergenceError,
)
from .inequalities import EnsembleSpec, bony_split, random_test_field, trilinear_form
from .norms import check_gevrey_interpolation, sobolev_norm
from .solver import (
    DEFAULT_CFL,
    SimState,
    Trajectory,
    decay_study,
    default_delta,
    gevrey_tracking,
    linear_heat_propagator,
    picard_solve,
    scaling_equivariance_check,
    simulate,
)
from .spectral import (
    GridSpec,
    ModelParams,
    SpectralField,
    VectorField,
    advect,
    field_from_modes,
    fractional_laplacian,
    from_physical,
    gevrey_avg_operator,
    gevrey_operator,
    log_multiplier,
    perp_gradient,
    velocity_from_scalar,
)
from .spectral import _dealias_mask, _wrap

SCENARIO_KINDS = (
    "simulate",
    "picard",
    "verify-operators",
    "verify-inequalities",
    "scaling-check",
    "decay-study",
    "gevrey-track",
)

INITIAL_PROFILES = ("single_mode", "two_mode", "ensemble", "vortex_pair", "checkpoint")

CHECKPOINT_MAGIC = b"GSQG1\x00"
CHECKPOINT_VERSION = 1
_LAW_CODES = {"power": 0, "log": 1}
_LAW_NAMES = {v: k for k, v in _LAW_CODES.items()}


def _fmt(x) -> str:
    """Full-precision decimal for CSV cells: 17 significant digits round-trip."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class GevreyTrackSpec:
    """Analyticity-tracking knobs; None means derive from the model params."""

    alpha: float | None = None
    eps_rate: float = 0.0
    delta: float | None = None

    def resolved(self, params: ModelParams) -> tuple[float, float, float]:
        alpha = self.alpha if self.alpha is not None else 0.5 * params.kappa
        delta = self.delta if self.delta is not None else default_delta(params)
        return alpha, self.eps_rate, delta


@dataclass(frozen=True)
class InitialSpec:
    """Named initial-data profile, reproducible from config text alone."""

    profile: str
    amplitude: float = 1.0
    mode: tuple[int, int] = (1, 0)
    mode2: tuple[int, int] = (1, 1)
    amplitude2: float = 0.5
    decay: float = 3.0
    member: int = 0
    width: float | None = None
    separation: float | None = None
    path: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated description of one study run."""

    kind: str
    grid: GridSpec | None
    params: ModelParams | None
    initial: InitialSpec | None
    T: float = 1.0
    dt: float = 1e-3
    snapshot_stride: int = 1
    seed: int = 0
    out_dir: str = "gsqg-out"
    checkpoint_path: str | None = None
    resume_path: str | None = None
    c_cfl: float = DEFAULT_CFL
    gevrey: GevreyTrackSpec = dc_field(default_factory=GevreyTrackSpec)
    scaling_lam: int = 2
    scaling_tol: float = 1e-8
    decay_delta: float | None = None
    decay_k_list: tuple[int, ...] = (0,)
    picard_tol: float = 1e-10
    picard_max_iter: int = 20
    verify_triples: int = 100
    verify_fields: int = 100
    verify_draws: int = 500


_SECTION_KEYS = {
    "scenario": {
        "kind", "T", "dt", "snapshot_stride", "seed", "out", "checkpoint",
        "resume", "cfl",
    },
    "grid": {"n", "period", "dealias_fraction"},
    "model": {"beta", "kappa", "gamma", "mu", "eps_visc", "velocity_law"},
    "initial": {
        "profile", "amplitude", "m1", "m2", "m1_2", "m2_2", "amplitude2",
        "decay", "member", "width", "separation", "path",
    },
    "gevrey": {"alpha", "eps_rate", "delta"},
    "scaling": {"lam", "tol"},
    "decay": {"delta", "k_list"},
    "picard": {"tol", "max_iter"},
    "verify": {"triples", "fields", "draws"},
}

# scenario kinds that integrate in time and therefore need grid + model + data
_COMPUTE_KINDS = {"simulate", "picard", "scaling-check", "decay-study", "gevrey-track"}


def _parse_sections(text: str, violations: list[str]) -> dict[str, dict[str, str]]:
    sections: dict[str, dict[str, str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTION_KEYS:
                violations.append(f"line {lineno}: unknown section [{name}]")
                current = None
            else:
                current = sections.setdefault(name, {})
            continue
        if "=" not in line:
            violations.append(f"line {lineno}: expected key=value, got {line!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if current is None:
            violations.append(f"line {lineno}: key {key!r} outside any known section")
            continue
        section_name = next(s for s, d in sections.items() if d is current)
        if key not in _SECTION_KEYS[section_name]:
            violations.append(
                f"line {lineno}: unknown key {key!r} in section [{section_name}]"
            )
            continue
        if key in current:
            violations.append(f"line {lineno}: duplicate key {key!r}")
            continue
        current[key] = value
    return sections


def _get(section: dict, key: str, conv, default, violations: list[str], label: str):
    if key not in section:
        return default
    try:
        return conv(section[key])
    except (TypeError, ValueError):
        violations.append(f"{label}.{key}: cannot parse {section[key]!r}")
        return default


def _int(text: str) -> int:
    if text.strip().lower().startswith("0x"):
        return int(text, 16)
    return int(text)


def parse_config(text: str, default_kind: str | None = None) -> ScenarioConfig:
    """Parse and validate the plain-text key=value scenario description.

    Every violation found is collected and reported at once; nothing is
    computed from a config that failed validation.
    """
    violations: list[str] = []
    sections = _parse_sections(text, violations)

    sc = sections.get("scenario", {})
    kind = sc.get("kind", default_kind)
    if kind is None:
        violations.append("scenario.kind: required (or select a subcommand)")
    elif kind not in SCENARIO_KINDS:
        violations.append(
            f"scenario.kind: {kind!r} is not one of {', '.join(SCENARIO_KINDS)}"
        )
    if default_kind is not None and kind is not None and kind != default_kind:
        violations.append(
            f"scenario.kind: config says {kind!r} but the subcommand is {default_kind!r}"
        )

    T = _get(sc, "T", float, 1.0, violations, "scenario")
    dt = _get(sc, "dt", float, 1e-3, violations, "scenario")
    stride = _get(sc, "snapshot_stride", _int, 1, violations, "scenario")
    seed = _get(sc, "seed", _int, 0, violations, "scenario")
    c_cfl = _get(sc, "cfl", float, DEFAULT_CFL, violations, "scenario")
    out_dir = sc.get("out", "gsqg-out")
    checkpoint_path = sc.get("checkpoint")
    resume_path = sc.get("resume")

    if not T > 0:
        violations.append("scenario.T: horizon must be positive")
    if not dt > 0:
        violations.append("scenario.dt: step must be positive")
    elif T > 0 and abs(round(T / dt) * dt - T) > 1e-8 * T:
        violations.append("scenario.dt: dt must divide the horizon T")
    if stride < 1:
        violations.append("scenario.snapshot_stride: must be a positive integer")
    if seed < 0:
        violations.append("scenario.seed: must be nonnegative")
    if not c_cfl > 0:
        violations.append("scenario.cfl: Courant bound must be positive")

    grid = None
    if "grid" in sections:
        gs = sections["grid"]
        n = _get(gs, "n", _int, None, violations, "grid")
        period = _get(gs, "period", float, 2.0 * math.pi, violations, "grid")
        frac = _get(gs, "dealias_fraction", float, 2.0 / 3.0, violations, "grid")
        if n is None:
            violations.append("grid.n: required when a [grid] section is present")
        elif n < 16 or (n & (n - 1)) != 0:
            violations.append("grid.n: must be a power of two >= 16")
        elif not period > 0:
            violations.append("grid.period: must be positive")
        elif not (0 < frac <= 1):
            violations.append("grid.dealias_fraction: must lie in (0, 1]")
        else:
            grid = GridSpec(n, period, frac)

    params = None
    if "model" in sections:
        ms = sections["model"]
        beta = _get(ms, "beta", float, None, violations, "model")
        kappa = _get(ms, "kappa", float, None, violations, "model")
        gamma = _get(ms, "gamma", float, 0.0, violations, "model")
        eps_visc = _get(ms, "eps_visc", float, 0.0, violations, "model")
        law = ms.get("velocity_law")
        mu_text = ms.get("mu")
        mu = _get(ms, "mu", float, None, violations, "model")

        ok = True
        if beta is None:
            violations.append("model.beta: required")
            ok = False
        elif not (0 < beta <= 2):
            violations.append("model.beta: constitutive exponent must lie in (0, 2]")
            ok = False
        if kappa is None:
            violations.append("model.kappa: required")
            ok = False
        elif not (0 < kappa < 1):
            violations.append("model.kappa: dissipation order must lie in (0, 1)")
            ok = False
        if gamma < 0:
            violations.append("model.gamma: dissipation strength must be nonnegative")
            ok = False
        if eps_visc < 0:
            violations.append("model.eps_visc: viscosity must be nonnegative")
            ok = False
        if law is not None and law not in ("power", "log"):
            violations.append("model.velocity_law: must be 'power' or 'log'")
            ok = False
        if ok:
            resolved_law = law if law is not None else ("log" if beta == 2.0 else "power")
            if resolved_law == "log":
                if mu_text is None:
                    violations.append(
                        "model.mu: the beta=2 endpoint uses the logarithmic "
                        "velocity law, which requires an explicit mu > 0"
                    )
                    ok = False
                elif not (mu is not None and mu > 0):
                    violations.append("model.mu: must be positive")
                    ok = False
                if beta != 2.0:
                    violations.append("model.velocity_law: 'log' requires beta = 2")
                    ok = False
            elif mu is not None and not mu > 0:
                violations.append("model.mu: must be positive")
                ok = False
        if ok:
            params = ModelParams(
                beta=beta,
                kappa=kappa,
                gamma=gamma,
                mu=mu if mu is not None else 1.0,
                eps_visc=eps_visc,
                velocity_law=resolved_law,
            )

    initial = None
    if "initial" in sections:
        isec = sections["initial"]
        profile = isec.get("profile")
        if profile is None:
            violations.append("initial.profile: required when [initial] is present")
        elif profile not in INITIAL_PROFILES:
            violations.append(
                f"initial.profile: {profile!r} is not one of {', '.join(INITIAL_PROFILES)}"
            )
        amplitude = _get(isec, "amplitude", float, 1.0, violations, "initial")
        m1 = _get(isec, "m1", _int, 1, violations, "initial")
        m2 = _get(isec, "m2", _int, 0, violations, "initial")
        m1_2 = _get(isec, "m1_2", _int, 1, violations, "initial")
        m2_2 = _get(isec, "m2_2", _int, 1, violations, "initial")
        amplitude2 = _get(isec, "amplitude2", float, 0.5, violations, "initial")
        decay = _get(isec, "decay", float, 3.0, violations, "initial")
        member = _get(isec, "member", _int, 0, violations, "initial")
        width = _get(isec, "width", float, None, violations, "initial")
        separation = _get(isec, "separation", float, None, violations, "initial")
        path = isec.get("path")
        if profile == "checkpoint" and path is None:
            violations.append("initial.path: required for the checkpoint profile")
        if profile == "ensemble" and decay <= 1.0:
            violations.append("initial.decay: ensemble spectra need decay > 1")
        if profile in ("single_mode", "two_mode") and (m1, m2) == (0, 0):
            violations.append("initial.m1/m2: the mode must not be the mean")
        if member < 0:
            violations.append("initial.member: must be nonnegative")
        if not math.isfinite(amplitude):
            violations.append("initial.amplitude: must be finite")
        if profile in INITIAL_PROFILES:
            initial = InitialSpec(
                profile=profile,
                amplitude=amplitude,
                mode=(m1, m2),
                mode2=(m1_2, m2_2),
                amplitude2=amplitude2,
                decay=decay,
                member=member,
                width=width,
                separation=separation,
                path=path,
            )

    gv = sections.get("gevrey", {})
    g_alpha = _get(gv, "alpha", float, None, violations, "gevrey")
    g_rate = _get(gv, "eps_rate", float, 0.0, violations, "gevrey")
    g_delta = _get(gv, "delta", float, None, violations, "gevrey")
    if g_alpha is not None and params is not None and not (0 < g_alpha < params.kappa):
        violations.append("gevrey.alpha: must lie in (0, kappa)")
    if g_rate < 0:
        violations.append("gevrey.eps_rate: must be nonnegative")
    if g_delta is not None and g_delta < 0:
        violations.append("gevrey.delta: must be nonnegative")

    ss = sections.get("scaling", {})
    lam = _get(ss, "lam", _int, 2, violations, "scaling")
    scaling_tol = _get(ss, "tol", float, 1e-8, violations, "scaling")
    if lam < 2:
        violations.append("scaling.lam: scaling factor must be an integer >= 2")
    if not scaling_tol > 0:
        violations.append("scaling.tol: must be positive")

    ds = sections.get("decay", {})
    d_delta = _get(ds, "delta", float, None, violations, "decay")
    k_text = ds.get("k_list", "0")
    try:
        k_list = tuple(int(part) for part in k_text.split(",") if part.strip() != "")
        if not k_list or any(k < 0 for k in k_list):
            raise ValueError
    except ValueError:
        violations.append("decay.k_list: comma-separated nonnegative integers")
        k_list = (0,)
    if d_delta is not None and d_delta < 0:
        violations.append("decay.delta: must be nonnegative")

    ps = sections.get("picard", {})
    p_tol = _get(ps, "tol", float, 1e-10, violations, "picard")
    p_max = _get(ps, "max_iter", _int, 20, violations, "picard")
    if not p_tol > 0:
        violations.append("picard.tol: must be positive")
    if p_max < 1:
        violations.append("picard.max_iter: must be a positive integer")

    vs = sections.get("verify", {})
    v_triples = _get(vs, "triples", _int, 100, violations, "verify")
    v_fields = _get(vs, "fields", _int, 100, violations, "verify")
    v_draws = _get(vs, "draws", _int, 500, violations, "verify")
    if min(v_triples, v_fields, v_draws) < 1:
        violations.append("verify.triples/fields/draws: must be positive integers")

    if kind in _COMPUTE_KINDS:
        if grid is None and "grid" not in sections and resume_path is None and not (
            initial is not None and initial.profile == "checkpoint"
        ):
            violations.append(f"grid: section required for scenario kind {kind!r}")
        if params is None and "model" not in sections:
            violations.append(f"model: section required for scenario kind {kind!r}")
        if (
            initial is None
            and "initial" not in sections
            and resume_path is None
        ):
            violations.append(f"initial: section required for scenario kind {kind!r}")

    if violations:
        raise ConfigError(violations)

    return ScenarioConfig(
        kind=kind,
        grid=grid,
        params=params,
        initial=initial,
        T=T,
        dt=dt,
        snapshot_stride=stride,
        seed=seed,
        out_dir=out_dir,
        checkpoint_path=checkpoint_path,
        resume_path=resume_path,
        c_cfl=c_cfl,
        gevrey=GevreyTrackSpec(alpha=g_alpha, eps_rate=g_rate, delta=g_delta),
        scaling_lam=lam,
        scaling_tol=scaling_tol,
        decay_delta=d_delta,
        decay_k_list=k_list,
        picard_tol=p_tol,
        picard_max_iter=p_max,
        verify_triples=v_triples,
        verify_fields=v_fields,
        verify_draws=v_draws,
    )


# ---------------------------------------------------------------------------
# initial-data library


def _gaussian_pair(grid: GridSpec, amplitude: float, width: float, separation: float):
    """Opposite-signed smoothed vortex pair, periodized over adjacent images."""
    x1, x2 = grid.sample_points()
    L = grid.period
    c1 = (0.5 * L - 0.5 * separation, 0.5 * L)
    c2 = (0.5 * L + 0.5 * separation, 0.5 * L)
    total = np.zeros((grid.n, grid.n))
    for sx in (-1, 0, 1):
        for sy in (-1, 0, 1):
            for center, sign in ((c1, 1.0), (c2, -1.0)):
                d1 = x1 - center[0] + sx * L
                d2 = x2 - center[1] + sy * L
                total += sign * np.exp(-(d1 * d1 + d2 * d2) / (2.0 * width * width))
    return amplitude * total


def build_initial_data(
    spec: InitialSpec, grid: GridSpec, params: ModelParams, seed: int = 0
) -> SpectralField:
    """Materialize a named profile on the grid.

    The ensemble profile is dealias-masked, de-meaned, and scaled so its
    critical Sobolev norm equals the requested amplitude, making configured
    amplitudes comparable across resolutions.
    """
    if spec.profile == "single_mode":
        return field_from_modes(grid, {spec.mode: spec.amplitude})
    if spec.profile == "two_mode":
        return field_from_modes(
            grid, {spec.mode: spec.amplitude, spec.mode2: spec.amplitude2}
        )
    if spec.profile == "ensemble":
        member = random_test_field(
            EnsembleSpec(grid, spec.decay, spec.member + 1, seed=seed), spec.member
        )
        coeffs = member.coeffs * _dealias_mask(grid)
        coeffs[0, 0] = 0.0
        f = _wrap(grid, coeffs)
        norm = sobolev_norm(f, params.sigma_c)
        if norm == 0.0:
            raise ValueError("ensemble member vanished after masking")
        return _wrap(grid, coeffs * (spec.amplitude / norm))
    if spec.profile == "vortex_pair":
        width = spec.width if spec.width is not None else grid.period / 12.0
        sep = spec.separation if spec.separation is not None else grid.period / 4.0
        samples = _gaussian_pair(grid, spec.amplitude, width, sep)
        f = from_physical(samples, grid)
        coeffs = f.coeffs * _dealias_mask(grid)
        coeffs[0, 0] = 0.0
        return _wrap(grid, coeffs)
    if spec.profile == "checkpoint":
        if spec.path is None:
            raise ValueError("checkpoint profile needs a path")
        ckpt = read_checkpoint(spec.path)
        if ckpt.grid.n != grid.n or ckpt.grid.period != grid.period:
            raise CheckpointError(
                f"checkpoint grid {ckpt.grid.n} x period {ckpt.grid.period:g} does "
                f"not match configured grid {grid.n} x period {grid.period:g}; "
                "no silent resampling"
            )
        return ckpt.field
    raise ValueError(f"unknown initial profile {spec.profile!r}")


# ---------------------------------------------------------------------------
# checkpoints


@dataclass(frozen=True)
class Checkpoint:
    """Self-describing snapshot of a run: parameters, time, coefficients."""

    version: int
    grid: GridSpec
    params: ModelParams
    t: float
    field: SpectralField


def write_checkpoint(state: SimState, path: str) -> None:
    """Serialize a state: fixed little-endian header, half-spectrum payload."""
    grid = state.field.grid
    p = state.params
    n = grid.n
    half = np.ascontiguousarray(state.field.coeffs[:, : n // 2 + 1]).astype("<c16")
    header = CHECKPOINT_MAGIC + struct.pack(
        "<IId5dBd",
        CHECKPOINT_VERSION,
        n,
        grid.period,
        p.beta,
        p.kappa,
        p.gamma,
        p.mu,
        p.eps_visc,
        _LAW_CODES[p.velocity_law],
        state.t,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(half.tobytes())


def read_checkpoint(path: str) -> Checkpoint:
    """Load and validate a checkpoint; the round trip is bit-exact."""
    with open(path, "rb") as fh:
        buf = fh.read()
    if len(buf) < len(CHECKPOINT_MAGIC):
        raise CheckpointError(f"{path}: truncated before the magic bytes")
    if buf[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: bad magic bytes, not a checkpoint file")
    head = struct.Struct("<IId5dBd")
    offset = len(CHECKPOINT_MAGIC)
    if len(buf) < offset + head.size:
        raise CheckpointError(f"{path}: truncated header")
    version, n, period, beta, kappa, gamma, mu, eps_visc, law_code, t = head.unpack_from(
        buf, offset
    )
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: format version {version} unsupported (expected {CHECKPOINT_VERSION})"
        )
    if law_code not in _LAW_NAMES:
        raise CheckpointError(f"{path}: unknown velocity-law code {law_code}")
    payload = buf[offset + head.size :]
    expected = n * (n // 2 + 1) * 16
    if len(payload) != expected:
        raise CheckpointError(
            f"{path}: payload holds {len(payload)} bytes, expected {expected}"
        )
    try:
        grid = GridSpec(n, period)
        params = ModelParams(
            beta=beta,
            kappa=kappa,
            gamma=gamma,
            mu=mu,
            eps_visc=eps_visc,
            velocity_law=_LAW_NAMES[law_code],
        )
    except ValueError as exc:
        raise CheckpointError(f"{path}: invalid header values: {exc}") from exc
    half = np.frombuffer(payload, dtype="<c16").reshape(n, n // 2 + 1)
    full = np.zeros((n, n), dtype=complex)
    full[:, : n // 2 + 1] = half
    rows = (-np.arange(n)) % n
    cols = np.arange(n // 2 + 1, n)
    full[:, cols] = np.conj(full[np.ix_(rows, (n - cols) % n)])
    # the stored redundancy must already be consistent
    col0 = half[:, 0]
    if not np.array_equal(col0, np.conj(col0[rows])):
        raise CheckpointError(f"{path}: stored coefficients break Hermitian symmetry")
    try:
        field = SpectralField(grid, full)
    except ValueError as exc:
        raise CheckpointError(f"{path}: stored coefficients rejected: {exc}") from exc
    if not np.array_equal(field.coeffs, full):
        raise CheckpointError(f"{path}: stored coefficients are not in canonical form")
    if not (t >= 0 and math.isfinite(t)):
        raise CheckpointError(f"{path}: invalid time {t}")
    return Checkpoint(version=version, grid=grid, params=params, t=t, field=field)


# ---------------------------------------------------------------------------
# CSV and plot-data emission


def _csv_rows_for_trajectory(traj: Trajectory, gevrey: GevreyTrackSpec, t0: float = 0.0):
    header = (
        "t,l2,hs_crit,hs_crit_delta,gevrey_tracked,energy_residual,max_u,courant"
    )
    if not traj.times:
        return [header]
    params = traj.params
    alpha, eps_rate, delta = gevrey.resolved(params)
    tracked = gevrey_tracking(traj, alpha, eps_rate, delta).series
    rows = [header]
    sigma_hi = params.sigma_c + delta
    for (t, f), row, g in zip(traj.snapshots(), traj.rows, tracked):
        cells = (
            t0 + t,
            row.l2,
            row.hs_crit,
            sobolev_norm(f, sigma_hi),
            g,
            row.energy_residual,
            row.max_u,
            row.courant,
        )
        rows.append(",".join(_fmt(c) for c in cells))
    return rows


def _csv_rows_for_picard(iterates):
    rows = ["iterate,diff_sup_l2,diff_contraction,contraction_ratio,converged"]
    for it in iterates:
        cells = (
            it.index,
            it.diff_sup_l2 if it.diff_sup_l2 is not None else math.nan,
            it.diff_contraction if it.diff_contraction is not None else math.nan,
            it.contraction_ratio if it.contraction_ratio is not None else math.nan,
            it.converged,
        )
        rows.append(",".join(_fmt(c) for c in cells))
    return rows


def _csv_rows_for_decay(report):
    ks = sorted(report.series)
    rows = ["t," + ",".join(f"d{k}" for k in ks)]
    for i, t in enumerate(report.times):
        rows.append(",".join([_fmt(t)] + [_fmt(report.series[k][i]) for k in ks]))
    return rows


def _csv_rows_for_gevrey(report):
    rows = ["t,gevrey_tracked"]
    for t, v in zip(report.times, report.series):
        rows.append(f"{_fmt(t)},{_fmt(v)}")
    return rows


def _csv_rows_for_scaling(report):
    rows = ["lam,gap,horizon,rescaled_horizon,norm_final_coarse,norm_final_fine"]
    rows.append(
        ",".join(
            _fmt(c)
            for c in (
                report.lam,
                report.gap,
                report.horizon,
                report.rescaled_horizon,
                report.norm_final_coarse,
                report.norm_final_fine,
            )
        )
    )
    return rows


def _csv_rows_for_checks(checks):
    rows = ["name,measured,limit,passed"]
    for c in checks:
        rows.append(f"{c.name},{_fmt(c.measured)},{_fmt(c.limit)},{_fmt(c.passed)}")
    return rows


def write_csv(obj, path: str, *, gevrey: GevreyTrackSpec | None = None, t0: float = 0.0):
    """Write a diagnostics table for any report the scenarios produce.

    Numbers are printed with 17 significant digits, so re-parsing recovers
    the in-memory doubles exactly. Row order is deterministic.
    """
    if isinstance(obj, Trajectory):
        rows = _csv_rows_for_trajectory(obj, gevrey or GevreyTrackSpec(), t0)
    elif isinstance(obj, (list, tuple)) and obj and hasattr(obj[0], "diff_sup_l2"):
        rows = _csv_rows_for_picard(obj)
    elif isinstance(obj, (list, tuple)) and (
        not obj or hasattr(obj[0], "passed")
    ):
        rows = _csv_rows_for_checks(obj)
    elif hasattr(obj, "slopes"):
        rows = _csv_rows_for_decay(obj)
    elif hasattr(obj, "eps_rate"):
        rows = _csv_rows_for_gevrey(obj)
    elif hasattr(obj, "rescaled_horizon"):
        rows = _csv_rows_for_scaling(obj)
    else:
        raise TypeError(f"no CSV layout for {type(obj).__name__}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(rows) + "\n")


def read_csv_columns(path: str) -> dict[str, list]:
    """Read back a CSV written by write_csv, column by column.

    Numeric cells parse to float (booleans to 1.0/0.0); anything else, like
    the name column of a check table, stays a string.
    """
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    header = lines[0].split(",")
    cols: dict[str, list] = {name: [] for name in header}
    for line in lines[1:]:
        for name, cell in zip(header, line.split(",")):
            if cell == "true":
                value = 1.0
            elif cell == "false":
                value = 0.0
            else:
                try:
                    value = float(cell)
                except ValueError:
                    value = cell
            cols[name].append(value)
    return cols


def emit_plot_data(
    csv_path: str,
    path: str,
    x: str,
    y: str,
    transform: str = "loglog",
    x_min: float | None = None,
) -> float:
    """Emit a whitespace-separated two-column series from a diagnostics CSV.

    transform picks the axes: 'loglog' (log x, log y), 'semilogy'
    (x, log y), or 'none'. A least-squares slope over the emitted points is
    appended as a '# slope=' comment and returned. Points where a log is
    undefined (and points left of x_min) are dropped.
    """
    if transform not in ("loglog", "semilogy", "none"):
        raise ValueError(f"unknown transform {transform!r}")
    cols = read_csv_columns(csv_path)
    for name in (x, y):
        if name not in cols:
            raise ValueError(f"unknown column {name!r}; have {', '.join(cols)}")
        if any(isinstance(v, str) for v in cols[name]):
            raise ValueError(f"column {name!r} is not numeric")
    xs, ys = [], []
    for xv, yv in zip(cols[x], cols[y]):
        if x_min is not None and xv < x_min:
            continue
        if transform == "loglog" and (xv <= 0 or yv <= 0):
            continue
        if transform == "semilogy" and yv <= 0:
            continue
        xs.append(math.log(xv) if transform == "loglog" else xv)
        ys.append(math.log(yv) if transform in ("loglog", "semilogy") else yv)
    if len(xs) >= 2 and max(xs) > min(xs) and max(ys) > min(ys):
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = 0.0
    lines = [f"# x={x} y={y} transform={transform}"]
    lines += [f"{_fmt(a)} {_fmt(b)}" for a, b in zip(xs, ys)]
    lines.append(f"# slope={_fmt(slope)}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return slope


# ---------------------------------------------------------------------------
# verification batteries


@dataclass(frozen=True)
class CheckRow:
    """One verification measurement against its tolerance."""

    name: str
    measured: float
    limit: float
    passed: bool


def _direct_multiplier(field: SpectralField, symbol) -> np.ndarray:
    """Apply a scalar symbol mode by mode with an explicit Python loop.

    symbol receives the integer mode pair; any wavevector scaling is its
    own job, so each check spells out the complete per-mode formula.
    """
    grid = field.grid
    n = grid.n
    m = np.fft.fftfreq(n, 1.0 / n).astype(int)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = symbol(int(m[i]), int(m[j])) * field.coeffs[i, j]
    return out


def _direct_advect(u: VectorField, theta: SpectralField) -> np.ndarray:
    """O(N^4) direct convolution reference for the advection term."""
    grid = theta.grid
    n = grid.n
    half = n // 2
    m = np.fft.fftfreq(n, 1.0 / n).astype(int)
    k0 = grid.k_fundamental
    out = np.zeros((n, n), dtype=complex)
    u1, u2, tc = u.u1.coeffs, u.u2.coeffs, theta.coeffs
    for i1 in range(n):
        for i2 in range(n):
            if u1[i1, i2] == 0 and u2[i1, i2] == 0:
                continue
            for j1 in range(n):
                for j2 in range(n):
                    c = tc[j1, j2]
                    if c == 0:
                        continue
                    q1, q2 = m[j1], m[j2]
                    s1, s2 = m[i1] + q1, m[i2] + q2
                    if -half < s1 < half and -half < s2 < half:
                        out[s1 % n, s2 % n] += (
                            u1[i1, i2] * (1j * k0 * q1)
                            + u2[i1, i2] * (1j * k0 * q2)
                        ) * c
    out *= _dealias_mask(grid)
    out[0, 0] = 0.0
    return out


def _avg_symbol_scalar(c: float, alpha: float) -> float:
    """Scalar 64-node Gauss-Legendre value of integral_0^1 exp(c t^alpha) dt.

    Uses the same node set and the same endpoint-power branch choice as the
    vectorized operator, evaluated one mode at a time.
    """
    x, w = np.polynomial.legendre.leggauss(64)
    tau = 0.5 * (x + 1.0)
    wt = 0.5 * w
    if 1.0 / alpha - 1.0 >= alpha:
        vals = (1.0 / alpha) * tau ** (1.0 / alpha - 1.0) * np.exp(c * tau)
    else:
        vals = np.exp(c * tau**alpha)
    return float(vals @ wt)


def verify_operators(seed: int = 0, grid: GridSpec | None = None) -> list[CheckRow]:
    """Check every Fourier-multiplier operation against a per-mode loop, and
    the advection product against a direct O(N^4) convolution."""
    grid = grid or GridSpec(16)
    rng = np.random.default_rng(seed)
    n = grid.n
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    idx = (-np.arange(n)) % n
    c = 0.5 * (c + np.conj(c[np.ix_(idx, idx)]))
    c[0, 0] = 0.0
    f = SpectralField(grid, c * _dealias_mask(grid))
    k0 = grid.k_fundamental
    tol = 1e-12

    def r_of(m1: int, m2: int) -> float:
        return k0 * math.sqrt(m1 * m1 + m2 * m2)

    rows = []

    def add(name, got, ref):
        scale = max(float(np.max(np.abs(ref))), 1e-300)
        err = float(np.max(np.abs(got - ref))) / scale
        rows.append(CheckRow(name, err, tol, err <= tol))

    add(
        "fractional_laplacian s=0.8",
        fractional_laplacian(f, 0.8).coeffs,
        _direct_multiplier(
            f, lambda m1, m2: r_of(m1, m2) ** 0.8 if (m1, m2) != (0, 0) else 0.0
        ),
    )
    add(
        "fractional_laplacian s=-0.6",
        fractional_laplacian(f, -0.6).coeffs,
        _direct_multiplier(
            f, lambda m1, m2: r_of(m1, m2) ** -0.6 if (m1, m2) != (0, 0) else 0.0
        ),
    )
    add(
        "gevrey_operator a=0.5 lam=0.3",
        gevrey_operator(f, 0.5, 0.3).coeffs,
        _direct_multiplier(f, lambda m1, m2: math.exp(0.3 * r_of(m1, m2) ** 0.5)),
    )
    add(
        "gevrey_avg_operator a=0.5 lam=0.3",
        gevrey_avg_operator(f, 0.5, 0.3).coeffs,
        _direct_multiplier(
            f, lambda m1, m2: _avg_symbol_scalar(0.3 * r_of(m1, m2) ** 0.5, 0.5)
        ),
    )
    add(
        "log_multiplier mu=1.3",
        log_multiplier(f, 1.3).coeffs,
        _direct_multiplier(
            f, lambda m1, m2: math.log1p(r_of(m1, m2) ** 2) ** 1.3
        ),
    )
    pg = perp_gradient(f)
    add(
        "perp_gradient u1",
        pg.u1.coeffs,
        _direct_multiplier(f, lambda m1, m2: -1j * (k0 * m2)),
    )
    add(
        "perp_gradient u2",
        pg.u2.coeffs,
        _direct_multiplier(f, lambda m1, m2: 1j * (k0 * m1)),
    )

    params_pow = ModelParams(beta=1.3, kappa=0.5)
    vel = velocity_from_scalar(f, params_pow)
    add(
        "velocity power beta=1.3 u1",
        vel.u1.coeffs,
        _direct_multiplier(
            f,
            lambda m1, m2: 1j * (k0 * m2) * r_of(m1, m2) ** -0.7
            if (m1, m2) != (0, 0)
            else 0.0,
        ),
    )
    add(
        "velocity power beta=1.3 u2",
        vel.u2.coeffs,
        _direct_multiplier(
            f,
            lambda m1, m2: -1j * (k0 * m1) * r_of(m1, m2) ** -0.7
            if (m1, m2) != (0, 0)
            else 0.0,
        ),
    )
    params_log = ModelParams(beta=2.0, kappa=0.5, mu=1.0, velocity_law="log")
    vel_log = velocity_from_scalar(f, params_log)
    add(
        "velocity log mu=1 u1",
        vel_log.u1.coeffs,
        _direct_multiplier(
            f, lambda m1, m2: 1j * (k0 * m2) * math.log1p(r_of(m1, m2) ** 2)
        ),
    )
    add(
        "velocity log mu=1 u2",
        vel_log.u2.coeffs,
        _direct_multiplier(
            f, lambda m1, m2: -1j * (k0 * m1) * math.log1p(r_of(m1, m2) ** 2)
        ),
    )
    add(
        "heat multiplier t=0.37",
        linear_heat_propagator(f, 0.37, 0.8, 0.6, 0.05).coeffs,
        _direct_multiplier(
            f,
            lambda m1, m2: math.exp(
                -0.37 * (0.8 * r_of(m1, m2) ** 0.6 + 0.05 * r_of(m1, m2) ** 2)
            ),
        ),
    )

    theta = f
    u = velocity_from_scalar(theta, params_pow)
    got = advect(u, theta).coeffs
    ref = _direct_advect(u, theta)
    err = float(np.max(np.abs(got - ref))) / max(float(np.max(np.abs(ref))), 1e-300)
    rows.append(CheckRow("advect vs direct convolution", err, tol, err <= tol))
    return rows


def _workers_from_env() -> int:
    try:
        return max(1, int(os.environ.get("GSQG_THREADS", "1")))
    except ValueError:
        return 1


def verify_inequalities(
    n_triples: int = 100,
    n_fields: int = 100,
    n_draws: int = 500,
    seed: int = 2026,
    workers: int | None = None,
) -> list[CheckRow]:
    """Run the three random-ensemble inequality batteries.

    Trilinear three-way splits must reassemble to the full form; every
    dyadic block must obey the two-sided shell bound; the Gevrey
    interpolation bound must hold on every draw. Work is mapped over a
    thread pool in deterministic order (GSQG_THREADS caps the width).
    """
    workers = workers if workers is not None else _workers_from_env()
    grid = GridSpec(32)
    part = build_partition(grid)
    sigmas_split = (-0.5, 0.0, 0.3, 0.9)
    sigmas_shell = (-1.5, 0.0, 1.0, 1.5)
    ens = EnsembleSpec(grid, 2.5, 3 * n_triples + n_fields, seed=seed)

    def split_task(t: int) -> list[CheckRow]:
        f = random_test_field(ens, 3 * t)
        g = random_test_field(ens, 3 * t + 1)
        h = random_test_field(ens, 3 * t + 2)
        out = []
        for sigma in sigmas_split:
            full = trilinear_form(f, g, h, sigma)
            low, high, diag = bony_split(f, g, h, sigma, part)
            gap = abs(full - (low + high + diag)) / abs(full)
            out.append(
                CheckRow(f"bony triple={t} sigma={sigma:g}", gap, 1e-10, gap <= 1e-10)
            )
        return out

    def shell_task(i: int) -> list[CheckRow]:
        f = random_test_field(ens, 3 * n_triples + i)
        out = []
        for j, block in decompose(f).items():
            if float(np.max(np.abs(block.coeffs))) == 0.0:
                continue
            for sigma in sigmas_shell:
                rep = bernstein_check(f, j, sigma)
                margin = max(rep.lower - rep.ratio, rep.ratio - rep.upper)
                out.append(
                    CheckRow(
                        f"shell field={i} j={j} sigma={sigma:g}",
                        margin,
                        0.0,
                        rep.within,
                    )
                )
        return out

    rows: list[CheckRow] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(split_task, range(n_triples)):
                rows.extend(chunk)
            for chunk in pool.map(shell_task, range(n_fields)):
                rows.extend(chunk)
    else:
        for t in range(n_triples):
            rows.extend(split_task(t))
        for i in range(n_fields):
            rows.extend(shell_task(i))

    rng = np.random.default_rng(seed + 1)
    gev_ens = EnsembleSpec(grid, 2.5, n_draws, seed=seed + 2)
    for d in range(n_draws):
        f = random_test_field(gev_ens, d)
        alpha = float(rng.uniform(0.3, 0.9))
        lam = float(rng.uniform(0.05, 0.5))
        rho = float(rng.uniform(0.05, 1.0))
        s1 = float(rng.uniform(-1.0, 1.5))
        s2 = s1 + float(rng.uniform(0.1, 1.2))
        rep = check_gevrey_interpolation(f, alpha, lam, rho, s1, s2)
        rows.append(
            CheckRow(
                f"gevrey-interp draw={d}",
                rep.ratio,
                1.0,
                rep.holds,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# the amplitude sweep used to place fixed-point runs below threshold


@dataclass(frozen=True)
class ThresholdSweep:
    """Outcome of the contraction amplitude search."""

    rows: tuple
    largest_good: float | None
    smallest_bad: float | None


def amplitude_threshold_sweep(
    base: SpectralField,
    params: ModelParams,
    T: float,
    dt: float,
    *,
    start: float = 1.0,
    factor: float = 2.0,
    bisection_steps: int = 5,
    amp_cap: float = 1e4,
    max_iter: int = 25,
    c_cfl: float = DEFAULT_CFL,
) -> ThresholdSweep:
    """Locate the largest initial amplitude at which the fixed-point
    iteration still contracts, by doubling then bisection.

    Amplitude means the critical Sobolev norm the (normalized) base field is
    scaled to. Failure is any of: non-contraction, exhaustion of max_iter,
    CFL violation at the fixed dt, or blow-up.
    """
    norm = sobolev_norm(base, params.sigma_c)
    if norm == 0.0:
        raise ValueError("base field must be nonzero")

    rows = []

    def attempt(amp: float) -> bool:
        theta0 = _wrap(base.grid, base.coeffs * (amp / norm))
        try:
            its = picard_solve(
                theta0, params, T, dt, tol=1e-12, max_iter=max_iter, c_cfl=c_cfl
            )
        except (BlowUpError, CourantError, PicardConvergenceError) as exc:
            rows.append((amp, type(exc).__name__, math.nan))
            return False
        ratios = [it.contraction_ratio for it in its if it.contraction_ratio is not None]
        worst = max(ratios) if ratios else 0.0
        ok = worst <= 0.999
        rows.append((amp, "contracting" if ok else "non-contracting", worst))
        return ok

    amp = start
    last_good: float | None = None
    first_bad: float | None = None
    while amp <= amp_cap:
        if attempt(amp):
            last_good = amp
            amp *= factor
        else:
            first_bad = amp
            break
    if last_good is not None and first_bad is not None:
        lo, hi = last_good, first_bad
        for _ in range(bisection_steps):
            mid = math.sqrt(lo * hi)
            if attempt(mid):
                lo = mid
            else:
                hi = mid
        last_good, first_bad = lo, hi
    return ThresholdSweep(
        rows=tuple(rows), largest_good=last_good, smallest_bad=first_bad
    )


# ---------------------------------------------------------------------------
# scenario execution

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_BLOWUP = 4
EXIT_CFL = 5
EXIT_OVERFLOW = 6
EXIT_VERIFY = 7
EXIT_CHECKPOINT = 8


def _summary(path: str, lines: list[str]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _initial_for(config: ScenarioConfig) -> SpectralField:
    if config.initial is None:
        raise ConfigError(["initial: section required for this scenario"])
    grid = config.grid
    if grid is None and config.initial.profile == "checkpoint":
        ckpt = read_checkpoint(config.initial.path)
        grid = ckpt.grid
    if grid is None:
        raise ConfigError(["grid: section required for this scenario"])
    return build_initial_data(config.initial, grid, config.params, config.seed)


def _final_state(traj: Trajectory, params: ModelParams, t0: float, dt: float) -> SimState:
    n_final = int(round((t0 + traj.times[-1]) / dt))
    return SimState(
        field=traj.final,
        t=n_final * dt,
        step_index=n_final,
        params=params,
        dt=dt,
    )


def run_scenario(config: ScenarioConfig) -> int:
    """Execute one scenario, writing CSV, summary, and optional checkpoints.

    Returns the process exit code; every scientific failure mode keeps its
    own code so batch drivers can triage without parsing logs.
    """
    try:
        os.makedirs(config.out_dir, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}")
        return EXIT_IO

    out = lambda name: os.path.join(config.out_dir, name)
    try:
        if config.kind == "simulate":
            params = config.params
            t0 = 0.0
            if config.resume_path is not None:
                ckpt = read_checkpoint(config.resume_path)
                if config.grid is not None and (
                    ckpt.grid.n != config.grid.n
                    or ckpt.grid.period != config.grid.period
                ):
                    raise CheckpointError(
                        "resume checkpoint grid does not match the configured grid; "
                        "no silent resampling"
                    )
                theta0, params, t0 = ckpt.field, ckpt.params, ckpt.t
                remaining = config.T - t0
                if remaining <= 0:
                    raise ConfigError(
                        [f"scenario.T: horizon {config.T:g} not past checkpoint t={t0:g}"]
                    )
            else:
                theta0 = _initial_for(config)
                remaining = config.T
            traj = simulate(
                theta0,
                params,
                remaining,
                config.dt,
                config.snapshot_stride,
                c_cfl=config.c_cfl,
            )
            write_csv(traj, out("simulate.csv"), gevrey=config.gevrey, t0=t0)
            if config.checkpoint_path is not None:
                write_checkpoint(
                    _final_state(traj, params, t0, config.dt), config.checkpoint_path
                )
            last = traj.rows[-1]
            _summary(
                out("summary.txt"),
                [
                    "scenario: simulate",
                    f"steps: {int(round(remaining / config.dt))}  dt: {_fmt(config.dt)}",
                    f"final t: {_fmt(t0 + traj.times[-1])}",
                    f"final l2: {_fmt(last.l2)}",
                    f"final critical norm: {_fmt(last.hs_crit)}",
                    f"max l2 step increase: {_fmt(traj.max_l2_step_increase)}",
                    f"max energy residual: {_fmt(max(r.energy_residual for r in traj.rows))}",
                    f"max courant: {_fmt(max(r.courant for r in traj.rows))}",
                ],
            )
            return EXIT_OK

        if config.kind == "picard":
            theta0 = _initial_for(config)
            failed = None
            try:
                iterates = picard_solve(
                    theta0,
                    config.params,
                    config.T,
                    config.dt,
                    tol=config.picard_tol,
                    max_iter=config.picard_max_iter,
                    snapshot_stride=config.snapshot_stride,
                    c_cfl=config.c_cfl,
                )
            except PicardConvergenceError as exc:
                iterates = exc.iterates
                failed = exc
            write_csv(iterates, out("picard.csv"))
            ratios = [
                it.contraction_ratio
                for it in iterates
                if it.contraction_ratio is not None
            ]
            lines = [
                "scenario: picard",
                f"iterates: {len(iterates) - 1}",
                f"converged: {_fmt(failed is None)}",
                f"final residual: {_fmt(iterates[-1].diff_sup_l2 or 0.0)}",
            ]
            if ratios:
                lines.append(f"worst contraction ratio: {_fmt(max(ratios))}")
            if failed is not None:
                lines.append(f"failure: {failed}")
            _summary(out("summary.txt"), lines)
            return EXIT_OK if failed is None else EXIT_VERIFY

        if config.kind == "verify-operators":
            checks = verify_operators(config.seed, config.grid)
            write_csv(checks, out("verify-operators.csv"))
            bad = [c for c in checks if not c.passed]
            _summary(
                out("summary.txt"),
                [
                    "scenario: verify-operators",
                    f"checks: {len(checks)}",
                    f"failures: {len(bad)}",
                ]
                + [f"FAIL {c.name}: {_fmt(c.measured)} > {_fmt(c.limit)}" for c in bad],
            )
            return EXIT_OK if not bad else EXIT_VERIFY

        if config.kind == "verify-inequalities":
            checks = verify_inequalities(
                config.verify_triples,
                config.verify_fields,
                config.verify_draws,
                seed=config.seed,
            )
            write_csv(checks, out("verify-inequalities.csv"))
            bad = [c for c in checks if not c.passed]
            _summary(
                out("summary.txt"),
                [
                    "scenario: verify-inequalities",
                    f"checks: {len(checks)}",
                    f"failures: {len(bad)}",
                ]
                + [f"FAIL {c.name}" for c in bad[:50]],
            )
            return EXIT_OK if not bad else EXIT_VERIFY

        if config.kind == "scaling-check":
            theta0 = _initial_for(config)
            report = scaling_equivariance_check(
                theta0,
                config.params,
                config.scaling_lam,
                config.T,
                config.dt,
                c_cfl=config.c_cfl,
            )
            write_csv(report, out("scaling-check.csv"))
            ok = report.gap <= config.scaling_tol
            _summary(
                out("summary.txt"),
                [
                    "scenario: scaling-check",
                    f"lam: {report.lam}",
                    f"gap: {_fmt(report.gap)}",
                    f"tolerance: {_fmt(config.scaling_tol)}",
                    f"passed: {_fmt(ok)}",
                ],
            )
            return EXIT_OK if ok else EXIT_VERIFY

        if config.kind == "decay-study":
            theta0 = _initial_for(config)
            delta = (
                config.decay_delta
                if config.decay_delta is not None
                else default_delta(config.params)
            )
            report = decay_study(
                theta0,
                config.params,
                delta,
                config.decay_k_list,
                config.T,
                config.dt,
                snapshot_stride=config.snapshot_stride,
                c_cfl=config.c_cfl,
            )
            write_csv(report, out("decay-study.csv"))
            lines = ["scenario: decay-study", f"delta: {_fmt(delta)}"]
            for k in sorted(report.slopes):
                slope = emit_plot_data(
                    out("decay-study.csv"),
                    out(f"decay-k{k}.dat"),
                    "t",
                    f"d{k}",
                    transform="loglog",
                    x_min=report.window[0],
                )
                lines.append(
                    f"k={k}: fitted slope {_fmt(slope)} expected {_fmt(report.expected[k])}"
                )
            _summary(out("summary.txt"), lines)
            return EXIT_OK

        if config.kind == "gevrey-track":
            theta0 = _initial_for(config)
            traj = simulate(
                theta0,
                config.params,
                config.T,
                config.dt,
                config.snapshot_stride,
                c_cfl=config.c_cfl,
            )
            alpha, eps_rate, delta = config.gevrey.resolved(config.params)
            report = gevrey_tracking(traj, alpha, eps_rate, delta)
            write_csv(report, out("gevrey-track.csv"))
            _summary(
                out("summary.txt"),
                [
                    "scenario: gevrey-track",
                    f"alpha: {_fmt(alpha)}  eps_rate: {_fmt(eps_rate)}  delta: {_fmt(delta)}",
                    f"sup: {_fmt(report.sup)}",
                ],
            )
            return EXIT_OK

        print(f"unknown scenario kind {config.kind!r}")
        return EXIT_USAGE

    except ConfigError as exc:
        print(exc)
        return EXIT_CONFIG
    except CheckpointError as exc:
        print(exc)
        return EXIT_CHECKPOINT
    except BlowUpError as exc:
        print(exc)
        return EXIT_BLOWUP
    except CourantError as exc:
        print(exc)
        return EXIT_CFL
    except OverflowGuardError as exc:
        print(exc)
        return EXIT_OVERFLOW
    except (PicardConvergenceError,) as exc:
        print(exc)
        return EXIT_VERIFY
    except GsqgError as exc:
        print(exc)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"invalid scenario parameters: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O failure: {exc}")
        return EXIT_IO
