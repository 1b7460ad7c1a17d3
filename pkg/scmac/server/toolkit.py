import csv
import dataclasses
import logging
import os
from fractions import Fraction

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel

from scmac.analysis import de_coupled, de_single, exit_trace
from scmac.analysis.channel import RatePair, shannon_threshold, shannon_threshold_for
from scmac.analysis.ensemble import (
    CoupledParams,
    DegreeProfile,
    asymptotic_rate,
    design_rate,
    rate_loss,
    require_valid,
)
from scmac.schema import (
    ConstellationResponse,
    CurvePoint,
    ExitCurveResponse,
    ForwardDEResponse,
    OutputFormat,
    RateResponse,
    RunConfig,
    SectionRow,
    ShannonResponse,
    ShapeReport,
    SimulationResponse,
    SweepRow,
    ThresholdResponse,
    UserRate,
)
from scmac.simulation.sweep import sweep_error_rate
from scmac.util.error import InternalError, ParameterError


@dataclasses.dataclass
class Table:
    fieldnames: list[str]
    rows: list[dict]


@dataclasses.dataclass
class Result:
    """What one computation hands back to the command layer."""

    name: str
    response: BaseModel
    table: Table
    summary: str
    extra: dict[str, Table] = dataclasses.field(default_factory=dict)
    key: str = ""  # tells apart the files of a multi-result request


def format_value(value) -> str:
    """17 significant digits for floats, locale independent."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _profile(cfg: RunConfig) -> DegreeProfile:
    missing = [name for name in ("l1", "r1", "l2", "r2") if getattr(cfg, name) is None]
    if missing:
        raise ParameterError(f"missing degrees: {', '.join(missing)}", details=missing)
    deg = DegreeProfile(cfg.l1, cfg.r1, cfg.l2, cfg.r2)
    require_valid(deg)
    return deg


def _coupled(cfg: RunConfig, L: int | None = None) -> CoupledParams:
    deg = _profile(cfg)
    if L is None:
        if not cfg.L:
            raise ParameterError("missing chain half-length L")
        L = cfg.L[0]
    if cfg.w is None:
        raise ParameterError("missing smoothing window w")
    p = CoupledParams(deg, L, cfg.w)
    require_valid(p)
    return p


def _or(value, default):
    return default if value is None else value


def _name(*parts) -> str:
    return "_".join(str(part).replace(",", "_").strip("()") for part in parts)


def _section_rows(c: de_coupled.Constellation) -> list[dict]:
    return [{"i": i, "x1": a, "x2": b} for i, a, b in c.rows()]


class AnalysisServer:
    """
    AnalysisServer runs the analysis and simulation requests of the command
    line and writes their CSV/JSON outputs.
    """

    def __init__(self, output_dir: str, jobs: int = 1):
        self._output_dir = output_dir
        self._jobs = jobs

    @property
    def output_dir(self) -> str:
        return self._output_dir

    def jobs(self, cfg: RunConfig) -> int:
        return cfg.jobs if cfg.jobs is not None else self._jobs

    def output_path(self, cfg: RunConfig, name: str, suffix: str = "") -> str:
        """
        Where a result goes: the configured path (with ``suffix`` before the
        extension) or ``<output_dir>/<name>.<format>``.
        """
        if cfg.output:
            stem, ext = os.path.splitext(cfg.output)
            return f"{stem}{suffix}{ext or '.' + cfg.format.value}"
        return os.path.join(self._output_dir, f"{name}{suffix}.{cfg.format.value}")

    def write(self, cfg: RunConfig, result: Result, suffix: str = "") -> list[str]:
        path = self.output_path(cfg, result.name, suffix)
        if cfg.format == OutputFormat.CSV:
            self.write_csv(path, result.table)
        else:
            self.write_json(path, result.response)
        paths = [path]

        for label, table in result.extra.items():
            stem, _ = os.path.splitext(path)
            extra_path = f"{stem}_{label}.csv"
            self.write_csv(extra_path, table)
            paths.append(extra_path)
        return paths

    @staticmethod
    def _open(path: str, **kwargs):
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            return open(path, "w", encoding="utf-8", **kwargs)
        except OSError as e:
            raise InternalError(f"cannot write {path}: {e}", details={"path": path}) from e

    def write_csv(self, path: str, table: Table):
        with self._open(path, newline="") as f:
            writer = csv.DictWriter(f, fieldnames=table.fieldnames, lineterminator="\n")
            writer.writeheader()
            for row in table.rows:
                writer.writerow({key: format_value(row[key]) for key in table.fieldnames})
        logging.info(f"wrote {len(table.rows)} rows to {path}")

    def write_json(self, path: str, response: BaseModel):
        with self._open(path, newline="\n") as f:
            f.write(response.model_dump_json(indent=2, exclude_none=True))
            f.write("\n")
        logging.info(f"wrote {path}")

    def rate(self, cfg: RunConfig) -> Result:
        p = _coupled(cfg)
        users, rows = [], []
        for u in (1, 2):
            l, r = p.degrees.user(u)
            user = UserRate(
                user=u,
                l=l,
                r=r,
                asymptotic_rate=asymptotic_rate(l, r),
                design_rate=design_rate(l, r, p.L, p.w),
                rate_loss=rate_loss(l, r, p.L, p.w),
            )
            users.append(user)
            rows.append(user.model_dump())

        eps_shannon = shannon_threshold_for(p, coupled=True)
        response = RateResponse(profile=str(p), users=users, eps_shannon=eps_shannon, config=cfg)
        summary = (
            f"rate {p}: R1={users[0].design_rate:.6f} R2={users[1].design_rate:.6f} "
            f"loss1={users[0].rate_loss:.6f} loss2={users[1].rate_loss:.6f}"
        )
        table = Table(["user", "l", "r", "asymptotic_rate", "design_rate", "rate_loss"], rows)
        return Result(_name("rate", p), response, table, summary)

    def shannon(self, cfg: RunConfig) -> Result:
        if cfg.R1 is not None and cfg.R2 is not None:
            # the decimal text of a float gives the intended rational: 0.5 -> 1/2
            rates = RatePair(Fraction(str(cfg.R1)), Fraction(str(cfg.R2)))
        elif cfg.R1 is None and cfg.R2 is None:
            deg = _profile(cfg)
            rates = RatePair(1 - Fraction(deg.l1, deg.r1), 1 - Fraction(deg.l2, deg.r2))
        else:
            raise ParameterError("give both R1 and R2, or the degrees")

        exact = Fraction(shannon_threshold(rates))
        response = ShannonResponse(
            R1=float(rates.R1), R2=float(rates.R2), eps_shannon=float(exact), exact=str(exact), config=cfg
        )
        summary = f"shannon R1={float(rates.R1):.6f} R2={float(rates.R2):.6f}: eps_sh={float(exact):.6f} ({exact})"
        table = Table(["R1", "R2", "eps_shannon"], [{"R1": response.R1, "R2": response.R2, "eps_shannon": response.eps_shannon}])
        return Result(_name("shannon", rates.R1, rates.R2).replace("/", "-"), response, table, summary)

    def threshold(self, cfg: RunConfig) -> Result:
        tol_eps = _or(cfg.tol_eps, de_single.DEFAULT_TOL_EPS)
        if cfg.coupled:
            p = _coupled(cfg)
            eps_bp = de_coupled.bp_threshold_coupled(p, tol_eps=tol_eps)
            label, profile = "coupled", p
        else:
            deg = _profile(cfg)
            eps_bp = de_single.bp_threshold_uncoupled(deg, tol_eps=tol_eps)
            label, profile = "uncoupled", deg

        eps_shannon = shannon_threshold_for(profile)
        response = ThresholdResponse(
            profile=str(profile),
            coupled=bool(cfg.coupled),
            eps_bp=eps_bp,
            eps_shannon=eps_shannon,
            gap=eps_shannon - eps_bp,
            tol_eps=tol_eps,
            config=cfg,
        )
        summary = f"threshold {label} {profile}: eps_bp={eps_bp:.6f} eps_sh={eps_shannon:.6f} gap={eps_shannon - eps_bp:.6f}"
        table = Table(
            ["eps_bp", "eps_shannon", "gap"],
            [{"eps_bp": eps_bp, "eps_shannon": eps_shannon, "gap": eps_shannon - eps_bp}],
        )
        return Result(_name("threshold", label, profile), response, table, summary)

    def forward_de(self, cfg: RunConfig) -> Result:
        p = _coupled(cfg)
        if not cfg.eps:
            raise ParameterError("missing channel value eps")
        eps = cfg.eps[0]
        schedule = self._schedule(cfg, p)
        fp = de_coupled.forward_de(
            eps, p, sched=schedule, tol=_or(cfg.tol, de_coupled.DEFAULT_TOL), max_sweeps=cfg.max_sweeps
        )

        rows = _section_rows(fp.constellation)
        response = ForwardDEResponse(
            profile=str(p),
            eps=eps,
            schedule=schedule.kind.value,
            sweeps=fp.sweeps,
            residual=fp.residual,
            entropy=de_coupled.constellation_entropy(fp.constellation),
            nontrivial=de_coupled.is_nontrivial(fp),
            constellation=[SectionRow(**row) for row in rows],
            config=cfg,
        )
        summary = (
            f"forward-de {p} at eps={eps}: {'stuck' if response.nontrivial else 'decoded'} "
            f"after {fp.sweeps} sweeps, max x={fp.constellation.max:.6f}"
        )
        return Result(_name("forward_de", p, eps), response, Table(["i", "x1", "x2"], rows), summary)

    @staticmethod
    def _schedule(cfg: RunConfig, p: CoupledParams) -> de_coupled.Schedule:
        kind = de_coupled.ScheduleKind(cfg.schedule or de_coupled.ScheduleKind.PARALLEL.value)
        if kind == de_coupled.ScheduleKind.RANDOM_ADMISSIBLE:
            return de_coupled.Schedule.random_admissible(_or(cfg.seed, 0))
        if kind == de_coupled.ScheduleKind.ROUND_ROBIN_SUBSETS:
            blocks = _or(cfg.blocks, 2)
            if blocks < 1:
                raise ParameterError(f"blocks={blocks} must be at least 1")
            sections = range(-p.L, p.L + 1)
            return de_coupled.Schedule.round_robin(
                [[i for i in sections if (i + p.L) % blocks == k] for k in range(blocks)]
            )
        return de_coupled.Schedule.parallel()

    def _grid(self, cfg: RunConfig, low: float, high: float) -> np.ndarray:
        grid_min = cfg.grid_min if cfg.grid_min is not None else low
        grid_max = cfg.grid_max if cfg.grid_max is not None else high
        points = _or(cfg.points, 99)
        if points < 2 or grid_min >= grid_max:
            raise ParameterError(f"bad grid: {points} points on [{grid_min}, {grid_max}]")
        return np.linspace(grid_min, grid_max, points)

    def exit_curves(self, cfg: RunConfig) -> list[Result]:
        """
        EXIT-like curves: the coupled EBP curve for every requested L (through
        the worker pool), or the uncoupled EBP/BP curve.
        """
        if not cfg.coupled:
            return [self._uncoupled_curve(cfg)]

        params = [_coupled(cfg, L) for L in sorted(set(cfg.L or []))]
        if not params:
            raise ParameterError("missing chain half-length L")
        grid = self._grid(cfg, 0.01, 0.99)
        tol = _or(cfg.tol, exit_trace.DEFAULT_TOL)
        curves = Parallel(n_jobs=self.jobs(cfg))(
            delayed(exit_trace.ebp_curve_coupled)(p, grid, tol=tol) for p in params
        )

        results = []
        for p, curve in sorted(zip(params, curves), key=lambda item: item[0].L):
            rows = [dataclasses.asdict(point) for point in curve.points]
            drop = exit_trace.drop_location(curve) if len(curve.points) >= 2 else None
            response = ExitCurveResponse(
                profile=str(p),
                kind="coupled-ebp",
                points=[CurvePoint(**row) for row in rows],
                gaps=curve.gaps,
                drop_eps=drop,
                config=cfg,
            )
            summary = f"exit-curve {p}: {len(curve.points)} points, {len(curve.gaps)} gaps" + (
                f", drop at eps={drop:.6f}" if drop is not None else ""
            )
            results.append(
                Result(_name("exit_curve", p), response, Table(["chi", "eps", "h_bp"], rows), summary, key=f"_L{p.L}")
            )
        return results

    def _uncoupled_curve(self, cfg: RunConfig) -> Result:
        deg = _profile(cfg)
        if cfg.bp:
            grid = self._grid(cfg, 0.0, 1.0)
            rows = [{"eps": eps, "h_bp": h} for eps, h in de_single.bp_curve_uncoupled(deg, grid)]
            kind, fields = "uncoupled-bp", ["eps", "h_bp"]
        else:
            grid = self._grid(cfg, 0.01, 1.0)
            rows = [{"x": pt.x, "eps": pt.eps, "h_bp": pt.h} for pt in de_single.ebp_curve_uncoupled(deg, grid)]
            kind, fields = "uncoupled-ebp", ["x", "eps", "h_bp"]

        response = ExitCurveResponse(profile=str(deg), kind=kind, points=[CurvePoint(**row) for row in rows], config=cfg)
        summary = f"exit-curve {kind} {deg}: {len(rows)} points"
        return Result(_name("exit_curve", kind, deg), response, Table(fields, rows), summary)

    def constellation(self, cfg: RunConfig) -> Result:
        p = _coupled(cfg)
        if cfg.chi is None:
            raise ParameterError("missing target entropy chi")
        fp = exit_trace.reverse_de_fp(
            cfg.chi,
            p,
            tol=_or(cfg.tol, exit_trace.DEFAULT_TOL),
            max_sweeps=cfg.max_sweeps,
            damping=_or(cfg.damping, 0.0),
        )
        uncoupled_fp = de_single.forward_fp_uncoupled(fp.eps, p.degrees).x1
        shape = exit_trace.analyze_constellation(fp.constellation, ref_uncoupled_fp=uncoupled_fp)

        response = ConstellationResponse(
            profile=str(p),
            chi=cfg.chi,
            eps=fp.eps,
            h_bp=exit_trace.coupled_exit_value(fp.constellation, p),
            residual=fp.residual,
            sweeps=fp.sweeps,
            shape=ShapeReport.model_validate(shape),
            uncoupled_fp=uncoupled_fp,
            plateau_gap=abs(shape.flat_value - uncoupled_fp),
            config=cfg,
        )
        summary = (
            f"constellation {p} at chi={cfg.chi}: eps={fp.eps:.6f} flat_value={shape.flat_value:.6f} "
            f"symmetric={shape.symmetric} unimodal={shape.unimodal}"
        )
        rows = _section_rows(fp.constellation)
        return Result(_name("constellation", p, cfg.chi), response, Table(["i", "x1", "x2"], rows), summary)

    def simulate(self, cfg: RunConfig) -> Result:
        p = _coupled(cfg)
        if not cfg.eps:
            raise ParameterError("missing channel values eps")
        if cfg.M is None:
            raise ParameterError("missing graph size M")
        rows = sweep_error_rate(
            p,
            cfg.M,
            cfg.eps,
            _or(cfg.trials, 100),
            _or(cfg.seed, 0),
            jobs=self.jobs(cfg),
            max_rounds=cfg.max_rounds,
        )

        models = [SweepRow.model_validate(row) for row in rows]
        response = SimulationResponse(profile=str(p), M=cfg.M, rows=models, config=cfg)
        fields = ["eps", "trials", "block_errors", "block_error_rate", "mean_residual_u1", "mean_residual_u2"]
        table = Table(fields, [model.model_dump(include=set(fields)) for model in models])

        extra = {}
        if cfg.profiles:
            profile_rows = [
                {"eps": row.eps, "i": i, "residual_u1": a, "residual_u2": b}
                for row in rows
                for i, a, b in zip(range(-p.L, p.L + 1), row.profile_u1, row.profile_u2)
            ]
            extra["profiles"] = Table(["eps", "i", "residual_u1", "residual_u2"], profile_rows)

        summary = f"simulate {p} M={cfg.M}: " + " ".join(
            f"eps={row.eps:g}:{row.block_errors}/{row.trials}" for row in rows
        )
        return Result(_name("simulate", p, cfg.M), response, table, summary, extra)
