"""
Convergence and gauge-invariance runs over families of spacetime meshes.
"""

from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from django.db import transaction

from config.constants import ACTION_I, ACTION_L, CONVERGED_FLOOR, ORDER_WINDOW
from config.exceptions import InvalidSize
from config.logger import get_logger, log_duration
from action.actions import evaluate
from action.reference import continuum_action
from gaugefield.fields import apply_gauge, random_field, random_gauge, sample, save_snapshot
from mesh.builders import build_spacetime
from whitney.assembly import assemble_mass
from . import models

logger = get_logger(__name__)

MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class ConvergenceRecord:
    case: int
    action: str
    N: int
    h: float
    S_discrete: float
    S_exact: float

    @property
    def rel_err(self):
        return abs(self.S_discrete - self.S_exact) / abs(self.S_exact)

    def as_row(self):
        return {
            'case': self.case,
            'action': self.action,
            'N': self.N,
            'h': self.h,
            'S_discrete': self.S_discrete,
            'S_exact': self.S_exact,
            'rel_err': self.rel_err,
        }


@dataclass(frozen=True)
class FitResult:
    """
    Least-squares fits of the relative error against h.

    exponent, prefactor: rel_err ~ prefactor * h**exponent, fitted in log-log
    residual: 2-norm of the log-log residuals
    poly: (c0, c1, c2) of rel_err ~ c0 + c1 h + c2 h^2
    """

    exponent: float
    prefactor: float
    residual: float
    points: int
    poly: tuple = field(default=(0.0, 0.0, 0.0))


@dataclass(frozen=True)
class GaugeInvarianceResult:
    N: int
    seeds: int
    fields: int
    amplitude: float
    max_deviation_L: float
    max_deviation_I: float


def parse_n_list(text):
    """
    '4,8,16' -> [4, 8, 16].

    Raises:
        InvalidSize: an entry is not an integer >= 2
    """
    values = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        try:
            n = int(item)
        except ValueError:
            raise InvalidSize(f'mesh size {item!r} is not an integer')
        if n < 2:
            raise InvalidSize(f'mesh size must be >= 2, got {n}')
        values.append(n)
    if not values:
        raise InvalidSize(f'no mesh sizes in {text!r}')
    return values


def default_n_list(long=False):
    return parse_n_list(settings.SGT['LONG_N_LIST' if long else 'DEFAULT_N_LIST'])


def fit_power_law(h, rel_err):
    """
    Fit log rel_err = log C + p log h, plus the quadratic polynomial in h.

    Raises:
        ValueError: fewer than three points, or a non-positive error
    """
    h = np.asarray(h, dtype=float)
    rel_err = np.asarray(rel_err, dtype=float)
    if h.size < MIN_FIT_POINTS:
        raise ValueError(f'a fit needs at least {MIN_FIT_POINTS} points, got {h.size}')
    if np.any(rel_err <= 0.0) or np.any(h <= 0.0):
        raise ValueError('power-law fit needs positive h and rel_err')

    x, y = np.log(h), np.log(rel_err)
    p, log_c = np.polyfit(x, y, 1)
    residual = float(np.linalg.norm(y - (p * x + log_c)))
    c2, c1, c0 = np.polyfit(h, rel_err, 2)
    return FitResult(
        exponent=float(p),
        prefactor=float(np.exp(log_c)),
        residual=residual,
        points=int(h.size),
        poly=(float(c0), float(c1), float(c2)),
    )


class MeshCache:
    """Spacetime meshes and mass data keyed by N, with N_t = N."""

    def __init__(self):
        self._entries = {}

    def get(self, n):
        if n not in self._entries:
            mesh = build_spacetime(n, n)
            self._entries[n] = (mesh, assemble_mass(mesh))
        return self._entries[n]


def run_convergence(case, n_list, kind, cache=None):
    """
    Relative errors of action `kind` for catalogue `case` over the meshes N in n_list.

    Returns:
        tuple: (records, FitResult or None when fewer than three sizes were run
        or every error is below the rounding floor)
    """
    cache = cache or MeshCache()
    exact = continuum_action(case)
    records = []
    with log_duration(logger, f"convergence case={case} action={kind} N={list(n_list)}"):
        for n in n_list:
            mesh, massdata = cache.get(n)
            value = evaluate(kind, sample(case, mesh), massdata).total
            record = ConvergenceRecord(case=case, action=kind, N=n, h=mesh.spatial.h, S_discrete=value, S_exact=exact)
            logger.info(f"case={case} action={kind} N={n}: S={value:.12g} rel_err={record.rel_err:.6e}")
            records.append(record)

    fit = None
    if records and max(r.rel_err for r in records) < CONVERGED_FLOOR:
        logger.info(f"case={case} action={kind}: exact up to rounding, no fit")
    elif len(records) >= MIN_FIT_POINTS:
        fit = fit_power_law([r.h for r in records], [r.rel_err for r in records])
        logger.info(f"case={case} action={kind}: rel_err ~ {fit.prefactor:.4g} h^{fit.exponent:.4f}")
    else:
        logger.warning(f"case={case} action={kind}: {len(records)} sizes, no fit")
    return records, fit


def check_convergence(records, fit, window=ORDER_WINDOW, floor=CONVERGED_FLOOR):
    """
    Failure messages for one sweep; empty when it converges at the expected order.

    A sweep whose errors all sit below `floor` is exact up to rounding and
    passes without a fit. Otherwise errors must decrease strictly and the
    fitted exponent must lie in `window`.
    """
    if not records:
        return ['no mesh sizes were run']
    label = f'case {records[0].case} S^{records[0].action}'
    errors = [r.rel_err for r in records]
    if max(errors) < floor:
        return []
    failures = []
    if any(b >= a for a, b in zip(errors, errors[1:])):
        failures.append(f'{label}: errors do not decrease strictly {errors}')
    if fit is None:
        failures.append(f'{label}: fewer than {MIN_FIT_POINTS} mesh sizes, no fit')
    elif not window[0] <= fit.exponent <= window[1]:
        failures.append(f'{label}: exponent {fit.exponent:.3f} outside {list(window)}')
    return failures


def _relative_change(before, after):
    scale = abs(before) if before != 0.0 else 1.0
    return abs(after - before) / scale


def run_gauge_invariance(n, seeds, amplitude=None, fields=2, snapshot=None):
    """
    Largest relative change of S^L, and of S^I as a control, under random gauge transforms.

    `fields` random gauge fields are each transformed by `seeds` random
    transforms. With snapshot set, the first field is written there.
    """
    amplitude = settings.SGT['GAUGE_AMPLITUDE'] if amplitude is None else float(amplitude)
    mesh = build_spacetime(n, n)
    massdata = assemble_mass(mesh)
    worst_l = worst_i = 0.0
    with log_duration(logger, f"gauge invariance N={n} seeds={seeds} fields={fields}"):
        for k in range(fields):
            base = random_field(mesh, seed=10_000 + k)
            if snapshot and k == 0:
                save_snapshot(base, snapshot)
            s_l = evaluate(ACTION_L, base, massdata).total
            s_i = evaluate(ACTION_I, base, massdata).total
            for seed in range(seeds):
                moved = apply_gauge(base, random_gauge(mesh, seed=seed, amplitude=amplitude))
                worst_l = max(worst_l, _relative_change(s_l, evaluate(ACTION_L, moved, massdata).total))
                worst_i = max(worst_i, _relative_change(s_i, evaluate(ACTION_I, moved, massdata).total))
    logger.info(f"gauge invariance N={n}: S^L {worst_l:.3e}, S^I {worst_i:.3e}")
    return GaugeInvarianceResult(
        N=n,
        seeds=seeds,
        fields=fields,
        amplitude=amplitude,
        max_deviation_L=worst_l,
        max_deviation_I=worst_i,
    )


def save_run(case, kind, records, fit):
    """Store a sweep as a ConvergenceRun with its records."""
    try:
        with transaction.atomic():
            run = models.ConvergenceRun.objects.create(
                case=case,
                action=kind,
                n_list=','.join(str(r.N) for r in records),
                exponent=fit.exponent if fit else None,
                prefactor=fit.prefactor if fit else None,
                residual=fit.residual if fit else None,
                poly_c0=fit.poly[0] if fit else None,
                poly_c1=fit.poly[1] if fit else None,
                poly_c2=fit.poly[2] if fit else None,
            )
            models.ConvergenceRecord.objects.bulk_create([
                models.ConvergenceRecord(
                    run=run,
                    N=r.N,
                    h=r.h,
                    S_discrete=r.S_discrete,
                    S_exact=r.S_exact,
                    rel_err=r.rel_err,
                )
                for r in records
            ])
    except Exception:
        logger.error(f"Could not store convergence run case={case} action={kind}", exc_info=True)
        raise
    logger.info(f"Stored {run}")
    return run
