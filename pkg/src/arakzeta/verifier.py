from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Mapping, Optional, Set, Tuple

import numpy as np
from rich.progress import Progress

from . import ffzeta, oscint, regprod
from .arakelov import (
    ArakelovDivisor,
    invariants_abnu,
    riemann_roch_residual,
    sample_divisors,
    theta_doubling_gap,
    theta_k0,
)
from .classspace import ClassSpaceGrid, ClassSpacePoint, build_grid, integrate, torus_displacement
from .config import RunSettings
from .fielddata import NumberFieldData, make_quadratic
from .models import ArakZetaError, CapabilityError, CheckResult, TwoVarZetaValue, VerificationStats
from .quadratic import analytic_class_data, is_squarefree
from .zeta_nf import (
    ZetaEvalParams,
    L_H1,
    dedekind_zeta_completed,
    f_w_ratio,
    zeta_Xk,
    zeta_Xk_direct,
    zeta_normalized,
)

LOGGER = logging.getLogger(__name__)

CheckFunction = Callable[[], CheckResult]

SAMPLE_SEED = 20240601
RANDOM_DIVISORS = 1000
RR_DIVISORS = 100
TRANSLATED_DIVISORS = 20
DOUBLING_DIVISORS = 20
FE_SAMPLES = 10
SYMMETRY_SAMPLES = 3
FF_SAMPLE_POINTS = 20
GENERATED_CURVES = 50
QUADRATIC_ORACLE_RANGE = 50
EXTREME_SAMPLES = 100_000
COARSE_POINTS = 8
LOCALIZATION_CELLS = 2
MEASURE_POINTS = 32
ASYMPTOTIC_POINTS = (20.0, 40.0, 80.0)
LOCALITY_S = 80.0
W_ZERO_S = 0.5 + 0.3j
LOWER_REGION_POINT = (-1.0 + 0.5j, -2.0 + 0j)
F_W_POINTS = (20.0, 30.0, 40.0)
F_W_T_TOL = 1e-12


@dataclass(slots=True)
class NamedCheck:
    name: str
    group: str
    run: CheckFunction


class Verifier:
    """Named consistency checks over a field, a curve and the regularization identities."""

    def __init__(
        self,
        settings: RunSettings,
        *,
        field: Optional[NumberFieldData] = None,
        curves: Optional[List[ffzeta.CurveData]] = None,
    ) -> None:
        self.settings = settings
        self.field = field
        self.curves = curves if curves is not None else [ffzeta.make_p1(2), ffzeta.make_elliptic(2, 5)]
        self._params: Optional[ZetaEvalParams] = None

    @staticmethod
    def _format_log(event: str, fields: Optional[Mapping[str, object]] = None) -> str:
        lines = [event]
        if fields:
            items = list(fields.items())
            width = max((len(str(key)) for key, _ in items), default=0)
            for key, value in items:
                text = "" if value is None else str(value)
                lines.append(f"  {str(key):<{width}}: {text}")
        return "\n".join(lines)

    @staticmethod
    def _format_inline_log(event: str, fields: Optional[Mapping[str, object]] = None) -> str:
        if not fields:
            return event

        items = list(fields.items())
        width = max((len(str(key)) for key, _ in items), default=0)
        formatted = []
        for key, value in items:
            text = "" if value is None else str(value)
            formatted.append(f"{str(key):<{width}}: {text}")
        return f"{event} | " + " | ".join(formatted)

    @property
    def params(self) -> ZetaEvalParams:
        if self.field is None:
            raise CapabilityError("no field selected for verification")
        if self._params is None:
            self._params = ZetaEvalParams.from_settings(self.field, self.settings)
        return self._params

    def checks(self) -> List[NamedCheck]:
        registered: List[NamedCheck] = []
        if self.field is not None:
            registered.extend(
                [
                    NamedCheck("lattice-origin", "arakelov", self._check_origin),
                    NamedCheck("lattice-grid-minimum", "arakelov", self._check_grid_minimum),
                    NamedCheck("lattice-second-minimum", "arakelov", self._check_second_minimum),
                    NamedCheck("lattice-unit-translation", "arakelov", self._check_unit_translation),
                    NamedCheck("lattice-non-principal-bound", "arakelov", self._check_non_principal_bound),
                    NamedCheck("theta-doubling", "arakelov", self._check_theta_doubling),
                    NamedCheck("riemann-roch", "arakelov", self._check_riemann_roch),
                    NamedCheck("classspace-measure", "classspace", self._check_class_space_measure),
                    NamedCheck("oscillatory-asymptotics", "oscint", self._check_asymptotics),
                    NamedCheck("oscillatory-locality", "oscint", self._check_locality),
                    NamedCheck("zeta-functional-equation", "zeta-nf", self._check_functional_equation),
                    NamedCheck(
                        "zeta-normalized-functional-equation", "zeta-nf", self._check_normalized_functional_equation
                    ),
                    NamedCheck("l-h1-functional-equation", "zeta-nf", self._check_l_h1_functional_equation),
                    NamedCheck("zeta-residue", "zeta-nf", self._check_residue),
                    NamedCheck("zeta-direct-integral", "zeta-nf", self._check_direct_integral),
                    NamedCheck("zeta-direct-lower-region", "zeta-nf", self._check_direct_lower_region),
                    NamedCheck("zeta-w-zero-paths", "zeta-nf", self._check_w_zero_paths),
                    NamedCheck("zeta-dedekind", "zeta-nf", self._check_dedekind),
                    NamedCheck("zeta-l-h1-finite", "zeta-nf", self._check_l_h1),
                    NamedCheck("zeta-f-w-trend", "zeta-nf", self._check_f_w_trend),
                ]
            )
        registered.extend(
            [
                NamedCheck("quadratic-oracle", "fielddata", self._check_quadratic_oracle),
                NamedCheck("hyperplane-closed-form", "oscint", self._check_hyperplane),
                NamedCheck("hyperplane-extremes", "oscint", self._check_hyperplane_extremes),
                NamedCheck("regularized-sqrt-2pi", "regprod", self._check_sqrt_2pi),
                NamedCheck("regularized-finite-product", "regprod", self._check_finite_product),
                NamedCheck("regularized-lerch", "regprod", self._check_lerch),
                NamedCheck("regularized-gamma", "regprod", self._check_gamma),
                NamedCheck("regularized-p1", "regprod", self._check_ff_regularization),
            ]
        )
        for curve in self.curves:
            registered.append(NamedCheck(f"curve-identities[{curve}]", "ffzeta", self._curve_check(curve)))
        registered.append(NamedCheck("generated-curves", "ffzeta", self._check_generated_curves))
        registered.append(NamedCheck("p1-divisor-counts", "ffzeta", self._check_p1_oracle))
        return registered

    def run(self, groups: Optional[Set[str]] = None) -> VerificationStats:
        stats = VerificationStats()
        checks = [check for check in self.checks() if groups is None or check.group in groups]
        results: Dict[int, Tuple[NamedCheck, Optional[CheckResult], Optional[Exception]]] = {}
        workers = self.settings.threads or 1

        def execute(check: NamedCheck) -> CheckResult:
            return check.run()

        with Progress(disable=not LOGGER.isEnabledFor(logging.DEBUG)) as progress:
            task_id = progress.add_task("Verifying", total=len(checks))
            with ThreadPoolExecutor(max_workers=workers) as executor:
                future_map = {executor.submit(execute, check): (index, check) for index, check in enumerate(checks)}
                for future in as_completed(future_map):
                    index, check = future_map[future]
                    try:
                        results[index] = (check, future.result(), None)
                    except ArakZetaError as exc:
                        results[index] = (check, None, exc)
                    progress.advance(task_id, 1)

        for index in range(len(checks)):
            check, result, error = results[index]
            if error is not None:
                if isinstance(error, CapabilityError):
                    stats.register_warning(f"{check.name}: skipped ({error})")
                    LOGGER.debug(self._format_inline_log("Check Skipped", {"Check": check.name, "Reason": error}))
                    continue
                stats.register_error(check.name, str(error))
                LOGGER.error(
                    self._format_log("Check Raised", {"Check": check.name, "Group": check.group, "Error": error})
                )
                continue
            assert result is not None
            stats.register(result)
            fields = {"Check": result.name, "Group": check.group, "Residual": result.residual, "Detail": result.detail}
            if result.passed:
                LOGGER.debug(self._format_inline_log("Check Passed", fields))
            else:
                LOGGER.warning(self._format_log("Check Failed", fields))

        LOGGER.info(
            self._format_inline_log(
                "Summary",
                {"Passed": stats.passed, "Failed": stats.failed, "Errored": stats.errored},
            )
        )
        if stats.failures or stats.warnings:
            self._log_detailed_summary(stats)
        return stats

    def _log_detailed_summary(self, stats: VerificationStats, *, level: int = logging.INFO) -> None:
        def _format_lines(items: List[str]) -> str:
            if not items:
                return "    (none)"
            unique_items = list(dict.fromkeys(items))
            return "\n".join(f"    - {item}" for item in unique_items)

        summary_lines = [
            "Detailed Summary",
            f"  Failures ({len(stats.failures)}):",
            _format_lines(stats.failures),
            f"  Warnings ({len(stats.warnings)}):",
            _format_lines(stats.warnings),
        ]
        LOGGER.log(level, "\n".join(summary_lines))

    # -- number field checks -------------------------------------------------

    def _require_field(self) -> NumberFieldData:
        if self.field is None:
            raise CapabilityError("no field selected for verification")
        return self.field

    def _grid_minima(self, grid: ClassSpaceGrid) -> np.ndarray:
        field = self._require_field()
        invariants = self.params.cache.invariants(field, grid, self.settings.band, self.settings.threads)
        return np.array([item.a for item in invariants])

    @staticmethod
    def _near_origin(point: ClassSpacePoint, radius: float) -> bool:
        return point.class_index == 0 and bool(np.all(np.abs(torus_displacement(point)) <= radius))

    def _check_origin(self) -> CheckResult:
        field = self._require_field()
        invariants = invariants_abnu(field, ArakelovDivisor.zero(field), self.settings.band)
        residual = abs(invariants.a - field.degree_n)
        passed = residual <= 1e-9 and invariants.nu == field.mu_count
        detail = f"a(0)={invariants.a:.12g} (n={field.degree_n}), nu(0)={invariants.nu} (|mu|={field.mu_count})"
        return CheckResult("lattice-origin", passed, detail, residual)

    def _check_grid_minimum(self) -> CheckResult:
        field = self._require_field()
        n = field.degree_n
        grid = self.params.grid
        values = self._grid_minima(grid)
        best = int(np.argmin(values))
        point = grid.points[best]
        in_origin_cell = self._near_origin(point, 1.0 / grid.points_per_dim)
        lowest = float(np.min(values))

        # the margin comes from a coarse scan away from the origin
        coarse = build_grid(field, COARSE_POINTS)
        radius = LOCALIZATION_CELLS / COARSE_POINTS
        coarse_values = self._grid_minima(coarse)
        outside = [a for item, a in zip(coarse.points, coarse_values) if not self._near_origin(item, radius)]
        margin = 0.25 * (min(outside) - n) if outside else math.inf
        strays = sum(
            1 for item, a in zip(grid.points, values) if a < n + margin and not self._near_origin(item, radius)
        )
        passed = in_origin_cell and lowest >= n - 1e-9 and margin > 0 and strays == 0
        detail = (
            f"minimum a={lowest:.12g} at class {point.class_index}, theta={point.theta}; "
            f"margin {margin:.3e}, points below n + margin away from the origin: {strays}"
        )
        return CheckResult("lattice-grid-minimum", passed, detail, lowest - n)

    def _check_second_minimum(self) -> CheckResult:
        field = self._require_field()
        rng = np.random.default_rng(SAMPLE_SEED)
        worst = 0.0
        odd = 0
        for divisor in sample_divisors(field, RANDOM_DIVISORS, rng):
            invariants = invariants_abnu(field, divisor, self.settings.band)
            worst = max(worst, invariants.b / invariants.a)
            odd += invariants.nu % 2
        passed = worst <= 4.0 * (1.0 + self.settings.band) and odd == 0
        detail = f"max b/a={worst:.6f} over {RANDOM_DIVISORS} divisors, odd kissing numbers: {odd}"
        return CheckResult("lattice-second-minimum", passed, detail, worst - 4.0)

    def _check_unit_translation(self) -> CheckResult:
        field = self._require_field()
        if field.unit_rank_r == 0:
            return CheckResult("lattice-unit-translation", True, "no units of infinite order", 0.0)
        rng = np.random.default_rng(SAMPLE_SEED + 6)
        worst = 0.0
        kissing_changes = 0
        for divisor in sample_divisors(field, TRANSLATED_DIVISORS, rng):
            base = invariants_abnu(field, divisor, self.settings.band)
            for unit in field.unit_logs:
                for sign in (1.0, -1.0):
                    moved = invariants_abnu(field, divisor.translate(sign * np.asarray(unit)), self.settings.band)
                    worst = max(worst, abs(moved.a - base.a) / base.a)
                    kissing_changes += int(moved.nu != base.nu)
        passed = worst <= 1e-9 and kissing_changes == 0
        detail = f"max relative change of a {worst:.3e}, kissing number changes: {kissing_changes}"
        return CheckResult("lattice-unit-translation", passed, detail, worst)

    def _check_non_principal_bound(self) -> CheckResult:
        field = self._require_field()
        if field.class_number_h == 1:
            return CheckResult("lattice-non-principal-bound", True, "class number one", 0.0)
        grid = self.params.grid
        bound = field.degree_n * 4.0 ** (1.0 / field.degree_n)
        values = [a for point, a in zip(grid.points, self._grid_minima(grid)) if point.class_index != 0]
        lowest = min(values)
        passed = lowest >= bound - 1e-9
        detail = f"min a={lowest:.12g} on non-principal classes, bound n 4^(1/n)={bound:.12g}"
        return CheckResult("lattice-non-principal-bound", passed, detail, bound - lowest)

    def _check_theta_doubling(self) -> CheckResult:
        field = self._require_field()
        tol = self.settings.theta_tol
        rng = np.random.default_rng(SAMPLE_SEED + 7)
        divisors = sample_divisors(field, DOUBLING_DIVISORS, rng)
        worst = max(theta_doubling_gap(field, divisor, tol) for divisor in divisors)
        return CheckResult("theta-doubling", worst < tol, f"max change {worst:.3e} (tol {tol:g})", worst)

    def _check_riemann_roch(self) -> CheckResult:
        field = self._require_field()
        rng = np.random.default_rng(SAMPLE_SEED + 1)
        worst = 0.0
        for divisor in sample_divisors(field, RR_DIVISORS, rng):
            worst = max(worst, abs(riemann_roch_residual(field, divisor, self.settings.theta_tol)))
        return CheckResult("riemann-roch", worst <= 1e-8, f"max residual {worst:.3e}", worst)

    def _check_class_space_measure(self) -> CheckResult:
        field = self._require_field()
        rank = field.unit_rank_r
        points = min(self.settings.grid, MEASURE_POINTS if rank <= 1 else COARSE_POINTS)
        grid = build_grid(field, points)
        weight_gap = abs(grid.total_weight - field.hR) / field.hR
        band = self.settings.band
        theta_tol = self.settings.theta_tol
        integrands: Dict[str, Callable[[ClassSpacePoint], complex]] = {
            "a": lambda point: invariants_abnu(field, point.divisor, band).a,
            "k0": lambda point: theta_k0(field, point.divisor, theta_tol),
        }
        # one cell and one full period
        offsets = [(1.0 / points,) * rank, (1.0,) * rank]
        worst = 0.0
        for func in integrands.values():
            base = integrate(field, grid, func, self.settings.threads)
            for offset in offsets:
                moved = integrate(field, build_grid(field, points, offset), func, self.settings.threads)
                worst = max(worst, abs(moved - base) / abs(base))
        passed = weight_gap <= 1e-12 and worst <= 1e-9
        detail = f"total weight {grid.total_weight:.12g} (hR={field.hR:.12g}), max offset change {worst:.3e}"
        return CheckResult("classspace-measure", passed, detail, max(weight_gap, worst))

    def _check_asymptotics(self) -> CheckResult:
        field = self._require_field()
        grid = self.params.grid
        if field.unit_rank_r == 0:
            value = oscint.C_integral(field, grid, 5.0, band=self.settings.band, threads=self.settings.threads)
            expected = field.mu_count * field.regulator * field.degree_n**-5.0
            residual = abs(value - expected) / expected
            return CheckResult("oscillatory-asymptotics", residual <= 1e-9, f"C(5)={value.real:.12g}", residual)
        gaps = [
            abs(oscint.asymptotic_ratio(field, grid, s, band=self.settings.band, threads=self.settings.threads) - 1.0)
            for s in ASYMPTOTIC_POINTS
        ]
        decreasing = all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
        passed = decreasing and gaps[-1] <= 0.15
        detail = "|ratio - 1| " + ", ".join(f"s={s:g}: {gap:.3e}" for s, gap in zip(ASYMPTOTIC_POINTS, gaps))
        return CheckResult("oscillatory-asymptotics", passed, detail, gaps[-1])

    def _check_locality(self) -> CheckResult:
        field = self._require_field()
        grid = self.params.grid
        cache, band, threads = self.params.cache, self.settings.band, self.settings.threads
        log_scale = math.log(field.degree_n)
        eps = oscint.local_window(field)
        local = oscint.C_integral_local(
            field, grid, LOCALITY_S, eps, cache=cache, band=band, threads=threads, log_scale=log_scale
        )
        closed = oscint.hyperplane_integral_local(
            field, LOCALITY_S, eps, self.settings.hyperplane_tol, log_scale=log_scale
        )
        to_closed = abs(local - closed) / abs(closed)
        # the rest of the class group is negligible at this s
        whole = oscint.C_integral(field, grid, LOCALITY_S, cache=cache, band=band, threads=threads)
        reference = whole * field.degree_n**LOCALITY_S
        to_whole = abs(local - reference) / abs(reference)
        residual = max(to_closed, to_whole)
        detail = f"window {eps:.6g}: local vs hyperplane {to_closed:.3e}, local vs whole {to_whole:.3e}"
        return CheckResult("oscillatory-locality", residual <= 1e-4, detail, residual)

    def _random_pair(self, rng: np.random.Generator) -> Tuple[complex, complex]:
        s = complex(rng.uniform(-2, 3), rng.uniform(-2, 2))
        w = complex(rng.uniform(-1, 2), rng.uniform(-1, 1))
        return s, w

    def _check_functional_equation(self) -> CheckResult:
        field = self._require_field()
        rng = np.random.default_rng(SAMPLE_SEED + 2)
        worst = 0.0
        passed = True
        for _ in range(FE_SAMPLES):
            s, w = self._random_pair(rng)
            left = zeta_Xk(field, self.params, s, w)
            right = zeta_Xk(field, self.params, w - s, w)
            gap = abs(left.value - right.value)
            allowed = 2.0 * (left.est_error + right.est_error) + 1e-12
            worst = max(worst, gap)
            passed = passed and gap <= allowed
        detail = f"max |zeta(s,w) - zeta(w-s,w)|={worst:.3e} over {FE_SAMPLES} points"
        return CheckResult("zeta-functional-equation", passed, detail, worst)

    def _scaled_symmetry(
        self,
        name: str,
        func: Callable[[NumberFieldData, ZetaEvalParams, complex, complex], TwoVarZetaValue],
        seed: int,
    ) -> CheckResult:
        """``func(w - s, w) = d^(s - w/2) func(s, w)`` at random points."""
        field = self._require_field()
        rng = np.random.default_rng(seed)
        log_d = math.log(field.disc_abs)
        worst = 0.0
        passed = True
        for _ in range(SYMMETRY_SAMPLES):
            s, w = self._random_pair(rng)
            mirrored = func(field, self.params, w - s, w)
            value = func(field, self.params, s, w)
            factor = cmath.exp((s - 0.5 * w) * log_d)
            gap = abs(mirrored.value - factor * value.value)
            allowed = 2.0 * (mirrored.est_error + abs(factor) * value.est_error) + 1e-12 * max(1.0, abs(mirrored.value))
            worst = max(worst, gap)
            passed = passed and gap <= allowed
        return CheckResult(name, passed, f"max gap {worst:.3e} over {SYMMETRY_SAMPLES} points", worst)

    def _check_normalized_functional_equation(self) -> CheckResult:
        return self._scaled_symmetry("zeta-normalized-functional-equation", zeta_normalized, SAMPLE_SEED + 8)

    def _check_l_h1_functional_equation(self) -> CheckResult:
        return self._scaled_symmetry("l-h1-functional-equation", L_H1, SAMPLE_SEED + 9)

    def _check_residue(self) -> CheckResult:
        field = self._require_field()
        s = 1e-4
        value = zeta_Xk(field, self.params, s, 1.0)
        residual = abs(s * value.value + field.hR)
        return CheckResult("zeta-residue", residual <= 1e-3, f"s zeta(s,1) at s=1e-4: {s * value.value:.8g}", residual)

    def _direct_gap(self, name: str, s: complex, w: complex) -> CheckResult:
        field = self._require_field()
        continued = zeta_Xk(field, self.params, s, w)
        direct = zeta_Xk_direct(field, self.params, s, w)
        gap = abs(continued.value - direct.value)
        allowed = 3.0 * (continued.est_error + direct.est_error) + 1e-10 * max(1.0, abs(continued.value))
        return CheckResult(name, gap <= allowed, f"s={s}, w={w}: gap {gap:.3e}, allowed {allowed:.3e}", gap)

    def _check_direct_integral(self) -> CheckResult:
        return self._direct_gap("zeta-direct-integral", 3.0 + 0.5j, 1.0 + 0j)

    def _check_direct_lower_region(self) -> CheckResult:
        s, w = LOWER_REGION_POINT
        return self._direct_gap("zeta-direct-lower-region", s, w)

    def _check_w_zero_paths(self) -> CheckResult:
        field = self._require_field()
        delta = max(10.0 * self.settings.w_small, 1e-4)

        def value(w: complex) -> complex:
            return zeta_normalized(field, self.params, W_ZERO_S, w).value

        at_zero = value(0j)
        along_real = 0.5 * (value(delta) + value(-delta))
        along_imaginary = 0.5 * (value(1j * delta) + value(-1j * delta))
        scale = max(1.0, abs(at_zero))
        residual = max(abs(along_real - at_zero), abs(along_imaginary - at_zero)) / scale
        detail = f"s={W_ZERO_S}: zeta(X, s, 0)={at_zero:.10g}, step {delta:g}, max path gap {residual:.3e}"
        return CheckResult("zeta-w-zero-paths", residual <= 1e-6, detail, residual)

    def _check_dedekind(self) -> CheckResult:
        field = self._require_field()
        worst = 0.0
        for s in (2.0, 3.0):
            oracle = dedekind_zeta_completed(field, s)
            value = zeta_normalized(field, self.params, s, 1.0).value
            worst = max(worst, abs(value - oracle) / abs(oracle))
        return CheckResult("zeta-dedekind", worst <= 1e-6, f"max relative error {worst:.3e}", worst)

    def _check_l_h1(self) -> CheckResult:
        field = self._require_field()
        at_zero = L_H1(field, self.params, 0.0, 1.0).value
        # (-w / 4 pi^2) times the residue of zeta(X, ., w) at s = 0
        expected = 2.0 ** (field.r1 / 2.0) * field.hR / (4.0 * math.pi**2 * field.mu_count)
        residual = abs(at_zero - expected)
        finite = cmath.isfinite(at_zero)
        return CheckResult("zeta-l-h1-finite", finite and residual <= 1e-8, f"L(H1, 0, 1)={at_zero:.12g}", residual)

    def _check_f_w_trend(self) -> CheckResult:
        field = self._require_field()
        params = replace(self.params, t_tol=min(self.params.t_tol, F_W_T_TOL))
        passed = True
        details = []
        worst = 0.0
        for w in (0.0, 1.0, 2.0):
            gaps = [abs(f_w_ratio(field, params, s, w).value - 1.0) for s in F_W_POINTS]
            passed = passed and all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
            worst = max(worst, gaps[-1])
            details.append(f"w={w:g}: " + ", ".join(f"{gap:.2e}" for gap in gaps))
        return CheckResult("zeta-f-w-trend", passed, "|f_w - 1| " + "; ".join(details), worst)

    # -- field independent checks --------------------------------------------

    def _check_quadratic_oracle(self) -> CheckResult:
        mismatches = []
        worst = 0.0
        for m in range(-QUADRATIC_ORACLE_RANGE, QUADRATIC_ORACLE_RANGE + 1):
            if m in (0, 1) or not is_squarefree(m):
                continue
            field = make_quadratic(m)
            h, regulator = analytic_class_data(m)
            gap = abs(field.regulator - regulator) / regulator
            worst = max(worst, gap)
            if field.class_number_h != h or gap > 1e-9:
                mismatches.append(m)
        detail = "h and R agree" if not mismatches else f"mismatch for m in {mismatches}"
        detail += f" for squarefree |m| <= {QUADRATIC_ORACLE_RANGE}, max regulator gap {worst:.3e}"
        return CheckResult("quadratic-oracle", not mismatches, detail, worst)

    def _check_hyperplane(self) -> CheckResult:
        tol = self.settings.hyperplane_tol
        cases = [
            (oscint.HyperplaneIntegralSpec((1.0, 1.0), (1, 1)), 2.0, 0.5),
            (oscint.HyperplaneIntegralSpec((1.0, 1.0), (2, 2)), 2.0, 0.25),
            (oscint.HyperplaneIntegralSpec((1.0, 2.0, 3.0), (1, 2, 1)), 3.0, None),
        ]
        worst = 0.0
        for spec, s, exact in cases:
            closed = oscint.hyperplane_integral_closed(spec, s)
            numeric = oscint.hyperplane_integral_numeric(spec, s, tol)
            worst = max(worst, abs(closed - numeric) / abs(closed))
            if exact is not None:
                worst = max(worst, abs(closed - exact) / exact)
        return CheckResult("hyperplane-closed-form", worst <= 1e-8, f"max relative error {worst:.3e}", worst)

    def _check_hyperplane_extremes(self) -> CheckResult:
        rng = np.random.default_rng(SAMPLE_SEED + 10)
        violations = 0
        for dimension in (2, 3, 4):
            points = oscint.random_hyperplane_points(rng, EXTREME_SAMPLES, dimension)
            violations += int(np.count_nonzero(~oscint.extreme_coordinates_bounded(points)))
        detail = f"{violations} violations among {3 * EXTREME_SAMPLES} points in dimensions 2 to 4"
        return CheckResult("hyperplane-extremes", violations == 0, detail, float(violations))

    def _check_sqrt_2pi(self) -> CheckResult:
        sequence = regprod.RegularizedSequence(tails=(regprod.ArithmeticTail(1.0, 1.0),))
        value = regprod.reg_product(sequence, 1.0)
        residual = abs(value - math.sqrt(2.0 * math.pi))
        return CheckResult("regularized-sqrt-2pi", residual <= 1e-10, f"prod nu = {value.real:.15g}", residual)

    def _check_finite_product(self) -> CheckResult:
        rng = np.random.default_rng(SAMPLE_SEED + 11)
        cases: List[Tuple[List[Tuple[complex, int]], float]] = [([(3.0, 1), (5.0, 2)], 1.0)]
        for _ in range(5):
            values = [
                (complex(rng.uniform(0.1, 5.0), rng.uniform(-2.0, 2.0)), int(rng.integers(1, 4)))
                for _ in range(int(rng.integers(1, 6)))
            ]
            cases.append((values, float(rng.uniform(0.2, 3.0))))
        worst = max(regprod.finite_product_residual(values, alpha) for values, alpha in cases)
        seventy_five = regprod.reg_product(regprod.RegularizedSequence(((3.0, 1), (5.0, 2))))
        worst = max(worst, abs(seventy_five - 75.0) / 75.0)
        detail = f"max relative gap {worst:.3e} over {len(cases)} multisets"
        return CheckResult("regularized-finite-product", worst <= 1e-12, detail, worst)

    def _check_lerch(self) -> CheckResult:
        rng = np.random.default_rng(SAMPLE_SEED + 3)
        worst = 0.0
        for _ in range(10):
            alpha = float(rng.uniform(0.1, 2.0))
            z = complex(rng.uniform(0.05, 3.0), rng.uniform(-2.0, 2.0))
            closed = regprod.lerch_closed(alpha, z)
            numeric = regprod.lerch_numeric(alpha, z)
            worst = max(worst, abs(numeric - closed) / abs(closed))
            worst = max(worst, abs(regprod.translation_residual(alpha, z)))
        return CheckResult("regularized-lerch", worst <= 1e-9, f"max relative error {worst:.3e}", worst)

    def _check_gamma(self) -> CheckResult:
        worst = 0.0
        for s in (1.0, 2.0, 2.3 + 0.7j, -0.5 + 1j):
            worst = max(worst, abs(regprod.gamma_R_reg_check(s)), abs(regprod.gamma_C_reg_check(s)))
        return CheckResult("regularized-gamma", worst <= 1e-9, f"max residual {worst:.3e}", worst)

    def _check_ff_regularization(self) -> CheckResult:
        rng = np.random.default_rng(SAMPLE_SEED + 4)
        worst = 0.0
        drift = 0.0
        for _ in range(5):
            s = complex(rng.uniform(1.5, 3.0), rng.uniform(-1.0, 1.0))
            first = regprod.ff_regularization_check(2, 1.0, s)
            second = regprod.ff_regularization_check(2, 1.0, s, alpha=1.0)
            worst = max(worst, abs(first))
            drift = max(drift, abs(first - second))
        passed = worst <= 1e-6 and drift <= 1e-8
        return CheckResult("regularized-p1", passed, f"max residual {worst:.3e}, alpha drift {drift:.3e}", worst)

    def _curve_check(self, curve: ffzeta.CurveData) -> CheckFunction:
        def check() -> CheckResult:
            zeta = ffzeta.zeta_two_var(curve)
            ffzeta.extract_P(zeta, curve.genus)
            holds, index = ffzeta.check_functional_equation(zeta, curve.genus)
            rng = np.random.default_rng(SAMPLE_SEED + 5)
            worst = 0.0
            for _ in range(FF_SAMPLE_POINTS):
                s = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                left = ffzeta.zeta_sw_ff(curve, s, w)
                right = ffzeta.zeta_sw_ff(curve, w - s, w)
                worst = max(worst, abs(left - right) / max(1.0, abs(left)))
                gs = ffzeta.zeta_GS_ff(curve, s, w - s)
                worst = max(worst, abs(gs - left) / max(1.0, abs(left)))
            passed = holds and worst <= 1e-12
            detail = f"{curve}: P symmetry {'ok' if holds else f'fails at {index}'}, max residual {worst:.3e}"
            return CheckResult(f"curve-identities[{curve}]", passed, detail, worst)

        return check

    def _check_generated_curves(self) -> CheckResult:
        rng = np.random.default_rng(SAMPLE_SEED + 12)
        failures = []
        for index in range(GENERATED_CURVES):
            genus = int(rng.integers(1, 4))
            h = int(rng.integers(1, 8))
            q = int(rng.choice([2, 3, 4, 5, 7]))
            curve = ffzeta.random_curve_data(rng, genus, h, q)
            zeta = ffzeta.zeta_two_var(curve)
            holds, _ = ffzeta.check_functional_equation(zeta, genus)
            if not holds or ffzeta.functional_equation_residual(zeta, genus) != 0:
                failures.append(index)
        detail = f"{GENERATED_CURVES} class data sets of genus <= 3, failing: {failures or 'none'}"
        return CheckResult("generated-curves", not failures, detail, float(len(failures)))

    def _check_p1_oracle(self) -> CheckResult:
        mismatches = []
        for q in (2, 3, 4):
            counts = ffzeta.p1_effective_divisor_oracle(q, ffzeta.ORACLE_MAX_DEGREE)
            series = ffzeta.specialize_u(ffzeta.zeta_two_var(ffzeta.make_p1(q)), q).taylor(len(counts))
            if [int(value) for value in series] != counts:
                mismatches.append(q)
        detail = "all coefficients match" if not mismatches else f"mismatch for q in {mismatches}"
        return CheckResult("p1-divisor-counts", not mismatches, detail, float(len(mismatches)))


def run_verification(
    settings: RunSettings,
    *,
    field: Optional[NumberFieldData] = None,
    curves: Optional[List[ffzeta.CurveData]] = None,
    groups: Optional[Set[str]] = None,
) -> VerificationStats:
    return Verifier(settings, field=field, curves=curves).run(groups)
