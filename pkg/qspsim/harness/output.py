"""CSV emission for experiment tables."""

import io
import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from .. import __version__

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def header_line() -> str:
    return f"# qspsim {__version__}\n"


def to_frame(rows: list[dict], columns: Optional[list[str]] = None) -> pd.DataFrame:
    """Rows in the given order; ``columns`` fixes the column order when given."""
    frame = pd.DataFrame.from_records(rows)
    if columns is not None:
        frame = frame.reindex(columns=columns)
    return frame


def format_csv(frame: pd.DataFrame, with_header: bool = True) -> str:
    """UTF-8 CSV text with 12 significant digits and '\\n' line endings."""
    buffer = io.StringIO()
    if with_header:
        buffer.write(header_line())
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_csv(
    frame: pd.DataFrame, target: Union[str, Path, None], with_header: bool = True
) -> str:
    """Write the table to ``target`` (stdout text is returned when None)."""
    text = format_csv(frame, with_header)
    if target is not None:
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(frame)} rows to {path}")
    return text


def read_csv(source: Union[str, Path]) -> pd.DataFrame:
    """Read a table written by ``write_csv``, skipping the version header."""
    return pd.read_csv(source, comment="#")
