# volflow/services/fig8.py
"""
Oráculo numérico do complemento do nó figura-oito: duas tetraedros ideais
com parâmetros de forma (z, w), equação de aresta e holonomia do meridiano
em forma logarítmica, volume D(z) + D(w) e o experimento de deformação que
compara a taxa calculada pelos jatos periféricos com a lei quadrática
vol(u) ≈ vol(0) + ¼·Im(ū·v).

Convenções (ramos rastreados a partir da estrutura completa z = w = e^{iπ/3}):
  aresta:    log z + log(1−z) + log w + log(1−w) = 0
  meridiano: u = log w + log(1−z)
  longitude: v = 2·(log z + log(1−z))
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, simpson
from scipy.interpolate import interp1d
from scipy.special import spence

from volflow.config import TOL_ORACLE, TOL_SOLVER
from volflow.errors import SingularPointError, SolverError, UsageError, VolflowError
from volflow.models import (
    MAX_PATH_MODULUS,
    PATH_FD_STEP,
    CheckResult,
    DeformationReport,
    DeformationRow,
    PathSpec,
    complex_to_pair,
    pair_to_complex,
)
from volflow.services.variation import PeripheralPathSample, check_sign_consistency, peripheral_jet, volume_rate
from volflow.utils.numerics import loglog_slope

logger = logging.getLogger(__name__)

COMPLETE_SHAPE = complex(0.5, np.sqrt(3) / 2)  # e^{iπ/3}
COMPLETE_VOLUME = 2.029883212819307
LOG_REF_Z = 1j * np.pi / 3
LOG_REF_ONE_MINUS_Z = -1j * np.pi / 3

# ∫taxa ao longo de caminhos radiais = +¼·Im(ū₀·v(u₀)) (a = longitude, b = meridiano)
NZ_SIGN = 1

MAX_NEWTON_ITER = 50
FD_STEP = PATH_FD_STEP
QUARTIC_RADII = (0.05, 0.1, 0.2)
NONDIFF_RADII = (0.01, 0.02, 0.03, 0.04)
NONDIFF_DIRECTIONS = 8
ODD_GRID_RADIUS = 0.3
ODD_GRID_POINTS = 16
QUARTIC_SAMPLES = 33


# =========================
# Tipos
# =========================
@dataclass(frozen=True)
class ShapePair:
    z: complex
    w: complex

    def __post_init__(self):
        for name in ("z", "w"):
            value = complex(getattr(self, name))
            if not np.isfinite(value):
                raise SingularPointError(f"forma {name} não finita")
            if abs(value) < 1e-14 or abs(value - 1) < 1e-14:
                raise SingularPointError(f"forma {name}={value:.6g} em {{0, 1}}")
            object.__setattr__(self, name, value)

    @property
    def geometric(self) -> bool:
        return self.z.imag > 0 and self.w.imag > 0

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.w], dtype=complex)

    @classmethod
    def complete(cls) -> "ShapePair":
        return cls(COMPLETE_SHAPE, COMPLETE_SHAPE)


@dataclass(frozen=True)
class HolonomyPair:
    u: complex
    v: complex


# =========================
# Dilogaritmo de Bloch–Wigner
# =========================
def _orbit(z: complex) -> List[Tuple[complex, int]]:
    """Os seis pontos da órbita com o sinal de D em cada um."""
    return [
        (z, 1),
        (1 - 1 / z, 1),
        (1 / (1 - z), 1),
        (1 / z, -1),
        (1 - z, -1),
        (z / (z - 1), -1),
    ]


def bloch_wigner(z: complex) -> float:
    """D(z) = Im Li₂(z) + arg(1−z)·log|z|, avaliado no ponto da órbita de menor módulo."""
    z = complex(z)
    if not np.isfinite(z) or abs(z) < 1e-300 or abs(z - 1) < 1e-300:
        raise SingularPointError(f"D indefinida em z={z}")
    if z.imag == 0.0:
        return 0.0
    point, sign = min(_orbit(z), key=lambda item: abs(item[0]))
    li2 = spence(1 - point)  # Li₂(x) = spence(1 − x)
    value = li2.imag + np.angle(1 - point) * np.log(abs(point))
    return float(sign * value)


def five_term_residual(x: complex, y: complex) -> float:
    """D(x) + D(y) + D((1−x)/(1−xy)) + D(1−xy) + D((1−y)/(1−xy))."""
    xy = 1 - x * y
    return (
        bloch_wigner(x)
        + bloch_wigner(y)
        + bloch_wigner((1 - x) / xy)
        + bloch_wigner(xy)
        + bloch_wigner((1 - y) / xy)
    )


# =========================
# Equações de colagem
# =========================
def _tracked_log(value: complex, reference: complex) -> complex:
    principal = complex(np.log(complex(value)))
    k = np.round((reference.imag - principal.imag) / (2 * np.pi))
    return principal + 2j * np.pi * k


def _shape_logs(s: ShapePair) -> Tuple[complex, complex, complex, complex]:
    return (
        _tracked_log(s.z, LOG_REF_Z),
        _tracked_log(1 - s.z, LOG_REF_ONE_MINUS_Z),
        _tracked_log(s.w, LOG_REF_Z),
        _tracked_log(1 - s.w, LOG_REF_ONE_MINUS_Z),
    )


def gluing_residual(s: ShapePair, u_target: complex) -> Tuple[complex, complex]:
    log_z, log_1z, log_w, log_1w = _shape_logs(s)
    r1 = log_z + log_1z + log_w + log_1w
    r2 = log_w + log_1z - u_target
    return r1, r2


def gluing_jacobian(s: ShapePair) -> np.ndarray:
    z, w = s.z, s.w
    return np.array(
        [
            [1 / z - 1 / (1 - z), 1 / w - 1 / (1 - w)],
            [-1 / (1 - z), 1 / w],
        ],
        dtype=complex,
    )


class ShapeNewtonSolver:
    """
    Newton nas formas (z, w) para um alvo de holonomia do meridiano.

    Guarda a norma do resíduo em cada iteração (`rnorms`) para diagnóstico.
    """

    def __init__(self, u_target: complex, x0: ShapePair):
        self.u_target = complex(u_target)
        self.x = x0.as_array()
        self.i = 0
        self.rnorms: List[float] = []

    def _residual(self) -> np.ndarray:
        return np.array(gluing_residual(ShapePair(*self.x), self.u_target), dtype=complex)

    def step(self) -> None:
        shapes = ShapePair(*self.x)
        rvec = self._residual()
        self.rnorms.append(float(np.abs(rvec).max()))
        dx = np.linalg.solve(gluing_jacobian(shapes), -rvec)
        self.x = self.x + dx
        self.i += 1

    def solve(self, maxiter: int = MAX_NEWTON_ITER, tol: float = TOL_SOLVER) -> ShapePair:
        try:
            for _ in range(maxiter):
                rnorm = float(np.abs(self._residual()).max())
                if rnorm < tol:
                    logger.debug("Newton convergiu em %d iterações (resíduo %.2e)", self.i, rnorm)
                    return ShapePair(*self.x)
                self.step()
            rnorm = float(np.abs(self._residual()).max())
        except SingularPointError as exc:
            raise SolverError(f"Newton atingiu forma singular: {exc.detail}") from exc
        except np.linalg.LinAlgError as exc:
            raise SolverError("jacobiano singular no Newton") from exc
        if rnorm < tol:
            return ShapePair(*self.x)
        raise SolverError(f"Newton não convergiu em {maxiter} iterações (resíduo {rnorm:.2e})")


def solve_shapes(u_target: complex, seed_solution: Optional[ShapePair] = None, tol: float = TOL_SOLVER) -> ShapePair:
    u_target = complex(u_target)
    if abs(u_target) >= MAX_PATH_MODULUS:
        raise UsageError(f"|u|={abs(u_target):.3f} fora da vizinhança de Dehn (< {MAX_PATH_MODULUS})")
    seed_solution = seed_solution or ShapePair.complete()
    shapes = ShapeNewtonSolver(u_target, seed_solution).solve(tol=tol)
    if min(abs(shapes.z.imag), abs(shapes.w.imag)) < 1e-12:
        raise SolverError(f"formas degeneradas (reais) para u={u_target}")
    if not shapes.geometric:
        logger.warning("solução não geométrica para u=%s: z=%s, w=%s", u_target, shapes.z, shapes.w)
    return shapes


# =========================
# Holonomias e volume
# =========================
def holonomy_u(s: ShapePair) -> complex:
    _, log_1z, log_w, _ = _shape_logs(s)
    return log_w + log_1z


def holonomy_v(s: ShapePair) -> complex:
    log_z, log_1z, _, _ = _shape_logs(s)
    return 2 * (log_z + log_1z)


def holonomies(s: ShapePair) -> HolonomyPair:
    return HolonomyPair(holonomy_u(s), holonomy_v(s))


def volume_of(s: ShapePair) -> float:
    return bloch_wigner(s.z) + bloch_wigner(s.w)


def cusp_shape(h: float = 1e-3) -> complex:
    """τ por diferença simétrica (v(h) − v(−h))/2h."""
    plus = solve_shapes(h)
    minus = solve_shapes(-h)
    return (holonomy_v(plus) - holonomy_v(minus)) / (2 * h)


def random_frame(seed: int = 0) -> np.ndarray:
    """Referencial fixo em SL_2(C), bem condicionado, para conjugar as holonomias."""
    rng = np.random.default_rng(seed)
    g = np.eye(2) + 0.3 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    return g / np.sqrt(np.linalg.det(g))


def peripheral_matrices(u: complex, v: complex, frame: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """(ρ(l), ρ(m)) = g·diag(e^{±v/2})·g⁻¹, g·diag(e^{±u/2})·g⁻¹."""
    g = np.eye(2, dtype=complex) if frame is None else np.asarray(frame, dtype=complex)
    g_inv = np.linalg.inv(g)
    rho_l = g @ np.diag([np.exp(v / 2), np.exp(-v / 2)]) @ g_inv
    rho_m = g @ np.diag([np.exp(u / 2), np.exp(-u / 2)]) @ g_inv
    return rho_l, rho_m


# =========================
# Caminhos e taxa
# =========================
def path_function(spec: PathSpec) -> Callable[[float], complex]:
    u0 = pair_to_complex(spec.u0)
    if spec.kind == "radial":
        return lambda t: t * u0
    if spec.kind == "circle":
        return lambda t: u0 * np.exp(2j * np.pi * t)
    points = np.array([pair_to_complex(p) for p in spec.points])
    ts = np.linspace(0.0, 1.0, len(points))
    interp = interp1d(ts, np.vstack([points.real, points.imag]), kind="linear", fill_value="extrapolate")

    def along(t: float) -> complex:
        re, im = interp(t)
        return complex(re, im)

    return along


def sample_times(spec: PathSpec) -> np.ndarray:
    count = len(spec.points) if spec.kind == "list" else spec.samples
    return np.linspace(0.0, 1.0, count)


@dataclass
class _PathState:
    """Última solução do caminho (semente do próximo Newton)."""
    shapes: ShapePair = field(default_factory=ShapePair.complete)


def _solve_at(u: complex, state: _PathState, index: int) -> ShapePair:
    try:
        return solve_shapes(u, state.shapes)
    except SolverError as exc:
        raise SolverError(exc.detail, sample_index=index) from exc


def _rate_at(
    path: Callable[[float], complex], t: float, state: _PathState, frame: np.ndarray, index: int, richardson: bool
) -> Tuple[ShapePair, float, float]:
    """(formas em t, taxa pelos jatos periféricos, derivada numérica do volume)."""
    shapes = _solve_at(path(t), state, index)
    state.shapes = shapes
    offsets = (-2, -1, 0, 1, 2) if richardson else (-1, 0, 1)
    samples, vols = [], {}
    for k in offsets:
        local = shapes if k == 0 else _solve_at(path(t + k * FD_STEP), state, index)
        hol = holonomies(local)
        rho_l, rho_m = peripheral_matrices(hol.u, hol.v, frame)
        samples.append(PeripheralPathSample(t + k * FD_STEP, rho_l, rho_m))
        vols[k] = volume_of(local)
    jet = peripheral_jet(samples, at=offsets.index(0), richardson=richardson)
    rate = volume_rate([jet])
    rate_fd = (vols[1] - vols[-1]) / (2 * FD_STEP)
    return shapes, rate, rate_fd


def path_rows(spec: PathSpec, frame: np.ndarray, richardson: bool = False) -> List[DeformationRow]:
    path = path_function(spec)
    ts = sample_times(spec)
    state = _PathState()
    rows, rates = [], []
    for idx, t in enumerate(ts):
        shapes, rate, rate_fd = _rate_at(path, float(t), state, frame, idx, richardson)
        hol = holonomies(shapes)
        rates.append(rate)
        rows.append(
            dict(
                t=float(t), u_re=hol.u.real, u_im=hol.u.imag, v_re=hol.v.real, v_im=hol.v.imag,
                vol=volume_of(shapes), rate=rate, rate_fd=rate_fd,
            )
        )
    integral = cumulative_trapezoid(rates, ts, initial=0.0)
    return [DeformationRow(**row, int_rate=float(acc)) for row, acc in zip(rows, integral)]


def nz_prediction(u0: complex, v0: complex) -> float:
    """¼·Im(ū₀·v₀)."""
    return 0.25 * float((np.conj(u0) * v0).imag)


def radial_integral(u0: complex, frame: np.ndarray, samples: int = QUARTIC_SAMPLES) -> Tuple[float, float]:
    """(∫₀¹ taxa dt ao longo de u = t·u₀ por Simpson, previsão ¼·Im(ū₀·v(u₀)))."""
    spec = PathSpec(u0=complex_to_pair(u0), kind="radial", samples=samples)
    rows = path_rows(spec, frame)
    integral = simpson([r.rate for r in rows], x=[r.t for r in rows])
    last = rows[-1]
    return float(integral), nz_prediction(u0, complex(last.v_re, last.v_im))


def quartic_decay(direction: complex, radii: Sequence[float] = QUARTIC_RADII, frame: Optional[np.ndarray] = None) -> Dict:
    """Discrepância |∫taxa − s·¼Im(ū₀v₀)| por raio e a inclinação log-log (esperado ≈ 4)."""
    if abs(direction) == 0:
        raise UsageError("direção nula para o diagnóstico quártico")
    frame = random_frame() if frame is None else frame
    unit = direction / abs(direction)
    integrals, predictions, discrepancies = [], [], []
    for r in radii:
        integral, prediction = radial_integral(r * unit, frame)
        integrals.append(integral)
        predictions.append(prediction)
        discrepancies.append(abs(integral - NZ_SIGN * prediction))
    slope = loglog_slope(radii, discrepancies)
    logger.info("decaimento quártico: inclinação %.3f em raios %s", slope, list(radii))
    return {
        "radii": list(radii),
        "integrals": integrals,
        "predictions": predictions,
        "discrepancies": discrepancies,
        "slope": slope,
    }


def nondifferentiability_fit(
    radii: Sequence[float] = NONDIFF_RADII, directions: int = NONDIFF_DIRECTIONS
) -> float:
    """c no ajuste vol(u) − vol(0) = c·|2cosh(u/2) − 2| por mínimos quadrados."""
    xs, ys = [], []
    for k in range(directions):
        unit = np.exp(2j * np.pi * (k + 0.5) / directions)
        seed = ShapePair.complete()
        for r in radii:
            u = r * unit
            seed = solve_shapes(u, seed)
            xs.append(abs(2 * np.cosh(u / 2) - 2))
            ys.append(volume_of(seed) - COMPLETE_VOLUME)
    xs, ys = np.array(xs), np.array(ys)
    return float(xs @ ys / (xs @ xs))


def v_oddness_residual(radius: float = ODD_GRID_RADIUS, points: int = ODD_GRID_POINTS) -> float:
    """max |v(u) + v(−u)| numa malha polar de 16 pontos com |u| ≤ radius."""
    worst = 0.0
    rings = (radius / 2, radius)
    per_ring = points // len(rings)
    for r in rings:
        for k in range(per_ring):
            u = r * np.exp(2j * np.pi * k / per_ring)
            plus, minus = _continue_radially(u), _continue_radially(-u)
            worst = max(worst, abs(holonomy_v(plus) + holonomy_v(minus)))
    return worst


def _continue_radially(u: complex, steps: int = 4) -> ShapePair:
    shapes = ShapePair.complete()
    for frac in np.linspace(0.0, 1.0, steps + 1)[1:]:
        shapes = solve_shapes(frac * u, shapes)
    return shapes


# =========================
# Experimento
# =========================
def _flag_check(name: str, ok: bool, started: float) -> CheckResult:
    return CheckResult(
        name=name, trials=1, max_residual=0.0 if ok else 1.0, tolerance=0.5, wall_time=time.perf_counter() - started
    )


def anchor_checks(tau: complex) -> List[CheckResult]:
    checks = []
    started = time.perf_counter()
    complete = solve_shapes(0.0, ShapePair(complex(0.45, 0.8), complex(0.55, 0.9)))
    checks.append(
        CheckResult(
            name="fig8_complete_solution", trials=1,
            max_residual=max(abs(complete.z - COMPLETE_SHAPE), abs(complete.w - COMPLETE_SHAPE)),
            tolerance=TOL_ORACLE, wall_time=time.perf_counter() - started,
        )
    )
    started = time.perf_counter()
    checks.append(
        CheckResult(
            name="fig8_complete_volume", trials=1, max_residual=abs(volume_of(complete) - COMPLETE_VOLUME),
            tolerance=1e-6, wall_time=time.perf_counter() - started,
        )
    )
    checks.append(_flag_check("fig8_cusp_shape_upper_half_plane", tau.imag > 0, time.perf_counter()))
    started = time.perf_counter()
    checks.append(
        CheckResult(
            name="fig8_v_odd", trials=ODD_GRID_POINTS, max_residual=v_oddness_residual(),
            tolerance=1e-9, wall_time=time.perf_counter() - started,
        )
    )
    return checks


def deformation_experiment(path: PathSpec, seed: int = 0, richardson: bool = False) -> DeformationReport:
    """
    Resolve as formas ao longo do caminho, calcula a taxa pelos jatos
    periféricos e a derivada numérica do volume, e agrega os diagnósticos
    (τ, decaimento quártico, sinal NZ, ajuste de não diferenciabilidade).
    """
    frame = random_frame(seed)
    logger.info("experimento figura-oito: caminho %s com %d amostras", path.kind, len(sample_times(path)))
    rows = path_rows(path, frame, richardson=richardson)

    tau = cusp_shape()
    diagnostics: Dict = {"tau": complex_to_pair(tau), "volume_complete": volume_of(ShapePair.complete())}
    ts = [r.t for r in rows]
    rates = [r.rate for r in rows]
    diagnostics["integral_rate"] = float(simpson(rates, x=ts))
    diagnostics["integral_rate_fd"] = float(simpson([r.rate_fd for r in rows], x=ts))
    checks = anchor_checks(tau)

    u0 = pair_to_complex(path.u0)
    if path.kind == "radial" and abs(u0) > 0:
        last = rows[-1]
        diagnostics["nz_prediction"] = nz_prediction(u0, complex(last.v_re, last.v_im))

    if abs(u0) > 0:
        started = time.perf_counter()
        decay = quartic_decay(u0, frame=frame)
        diagnostics["quartic"] = decay
        checks.append(
            CheckResult(
                name="fig8_quartic_slope", trials=len(decay["radii"]), max_residual=abs(decay["slope"] - 4.0),
                tolerance=0.5, wall_time=time.perf_counter() - started,
            )
        )
        started = time.perf_counter()
        try:
            sign = check_sign_consistency("NZ", list(zip(decay["predictions"], decay["integrals"])), NZ_SIGN)
            ok = sign == NZ_SIGN
        except VolflowError as exc:
            logger.warning("%s", exc.detail)
            ok = False
        diagnostics["nz_sign"] = NZ_SIGN
        checks.append(_flag_check("fig8_nz_sign", ok, started))

        started = time.perf_counter()
        c = nondifferentiability_fit()
        diagnostics["nondiff_c"] = c
        checks.append(
            CheckResult(
                name="fig8_nondifferentiability_fit", trials=len(NONDIFF_RADII) * NONDIFF_DIRECTIONS,
                max_residual=abs(c + NZ_SIGN * tau.imag) / abs(tau.imag), tolerance=1e-2,
                wall_time=time.perf_counter() - started,
            )
        )
    return DeformationReport(path=path, rows=rows, diagnostics=diagnostics, checks=checks)
