"""
Output Writers - CSV and JSON artifacts with a fixed numeric format.

CSV floats use 9 significant digits with ``.`` decimals; JSON floats are
rounded to 12 significant digits and keys are sorted. Neither carries
timestamps, so identical runs write identical bytes.
"""

import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Union

import numpy as np
import pandas as pd

from contracts import CommittedSpendContract, TwoPartTariff
from mechanism import DirectMechanism
from observability.logger import log_info
from verify.results import to_plain

CSV_FLOAT_FORMAT = "%.9g"

PathLike = Union[str, Path]


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    log_info(f"💾 [Export] {path.name}", rows=len(frame))
    return path


def write_json(payload: Mapping[str, Any], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(to_plain(dict(payload)), sort_keys=True, indent=2) + "\n"
    path.write_text(text, encoding="utf-8")
    log_info(f"💾 [Export] {path.name}")
    return path


def empty_frame(columns: Iterable[str]) -> pd.DataFrame:
    return pd.DataFrame({c: pd.Series(dtype=float) for c in columns})


def mechanism_frame(mech: DirectMechanism, thetas, v_points: int) -> pd.DataFrame:
    """theta, v, phi, q, t, u with each type sampled over its own value support."""
    parts = []
    for theta in np.asarray(thetas, dtype=float):
        lo = float(mech.family.lower_support(theta))
        hi = float(mech.family.upper_support(theta))
        parts.append(mech.tabulate([theta], np.linspace(lo, hi, v_points)))
    return pd.concat(parts, ignore_index=True)


def schedules_frame(
    tariff: TwoPartTariff, committed: CommittedSpendContract
) -> pd.DataFrame:
    """Per-type usage and committed prices on the on-path quantities."""
    rows = []
    for i, theta in enumerate(tariff.thetas):
        usage = tariff.schedules[i]
        budget = committed.schedules[i]
        values = usage.values
        if values is None:
            values = np.full(len(usage), np.nan)
        rows.append(
            pd.DataFrame(
                {
                    "theta": theta,
                    "v": values,
                    "q": usage.quantities,
                    "tariff_usage_payment": usage.payments,
                    "committed_payment": budget.payment(usage.quantities),
                }
            )
        )
    return pd.concat(rows, ignore_index=True)
