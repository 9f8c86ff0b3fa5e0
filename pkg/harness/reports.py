"""
CSV and plain-text artifacts of convergence sweeps.

The CSV is the contract: header `case,action,N,h,S_discrete,S_exact,rel_err`,
LF line endings, floats formatted with .17g: up to 17 significant digits,
trailing zeros dropped, so every value reads back as the identical double.
Identical sweeps give byte-identical files.
"""

import csv
from pathlib import Path

from config.constants import CSV_COLUMNS, CSV_FLOAT_FORMAT
from config.exceptions import IOFailure
from config.logger import get_logger

logger = get_logger(__name__)


def _format(value):
    if isinstance(value, float):
        return format(value, CSV_FLOAT_FORMAT)
    return str(value)


def _open(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, 'w', newline='', encoding='ascii')


def emit_csv(records, path):
    """
    Write ConvergenceRecords as CSV; an empty list gives a header-only file.

    Raises:
        IOFailure: the file cannot be written
    """
    records = list(records)
    try:
        with _open(path) as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(CSV_COLUMNS)
            for record in records:
                row = record.as_row()
                writer.writerow([_format(row[column]) for column in CSV_COLUMNS])
    except OSError as e:
        logger.error(f"Could not write CSV {path}", exc_info=True)
        raise IOFailure(f'could not write {path}: {e}')
    logger.info(f"Wrote {len(records)} records to {path}")
    return Path(path)


def report_lines(fits):
    """One line per (case, action, FitResult or None)."""
    yield 'case action points exponent prefactor residual poly_c0 poly_c1 poly_c2'
    for case, action, fit in fits:
        if fit is None:
            yield f'{case} {action} - no fit'
            continue
        c0, c1, c2 = fit.poly
        yield (
            f'{case} {action} {fit.points} {fit.exponent:.6f} {fit.prefactor:.6g} '
            f'{fit.residual:.3e} {c0:.6g} {c1:.6g} {c2:.6g}'
        )


def emit_report(fits, path):
    """
    Write the fit summary of a sweep.

    Raises:
        IOFailure: the file cannot be written
    """
    fits = list(fits)
    try:
        with _open(path) as fh:
            fh.write('\n'.join(report_lines(fits)) + '\n')
    except OSError as e:
        logger.error(f"Could not write report {path}", exc_info=True)
        raise IOFailure(f'could not write {path}: {e}')
    logger.info(f"Wrote fit report for {len(fits)} sweeps to {path}")
    return Path(path)
