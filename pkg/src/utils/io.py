"""
File I/O

Matrix Market and CSV readers/writers, plus the all-or-nothing output
helper used by the CLI.
"""

import logging
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Union

import numpy as np
import pandas as pd
import scipy.io
import scipy.sparse as sp

from src.sparse.matrices import DenseSymMatrix, SparseSymMatrix
from src.utils.config import CSV_FLOAT_FORMAT

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# 17 significant digits round-trip every double.
MM_PRECISION = 17


@contextmanager
def atomic_output(path: PathLike) -> Iterator[Path]:
    """
    Yield a temporary sibling of path and move it into place on success.

    If the body raises, the temporary file is removed and path is left
    untouched, so no partial artifact survives a failed run.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(handle)
    temporary = Path(temporary)
    try:
        yield temporary
        os.replace(temporary, path)
    except BaseException:
        temporary.unlink(missing_ok=True)
        raise


def read_matrix(path: PathLike) -> Union[np.ndarray, sp.csr_matrix]:
    """Read any Matrix Market file: ndarray for array format, CSR for coordinate."""
    data = scipy.io.mmread(str(path))
    if sp.issparse(data):
        return sp.csr_matrix(data, dtype=float)
    return np.asarray(data, dtype=float)


def read_sparse_sym(path: PathLike, spd_asserted: bool = True) -> SparseSymMatrix:
    """
    Read a symmetric matrix (coordinate or array format).

    Raises:
        NotSymmetricError: if the stored matrix is not exactly symmetric
    """
    data = read_matrix(path)
    if sp.issparse(data):
        matrix = SparseSymMatrix.from_scipy(data, spd_asserted=spd_asserted)
    else:
        matrix = SparseSymMatrix.from_dense(data, spd_asserted=spd_asserted)
    logger.info(f"Read {matrix!r} from {path}")
    return matrix


def write_sparse_sym(matrix: SparseSymMatrix, path: PathLike, comment: str = "") -> None:
    """Write as `coordinate real symmetric` (lower triangle, 1-based)."""
    with open(path, "wb") as handle:
        scipy.io.mmwrite(
            handle,
            sp.coo_matrix(matrix.lower),
            comment=comment,
            field="real",
            precision=MM_PRECISION,
            symmetry="symmetric",
        )


def write_dense(values: Union[np.ndarray, DenseSymMatrix], path: PathLike, comment: str = "") -> None:
    """Write a dense matrix in Matrix Market `array` format."""
    with open(path, "wb") as handle:
        scipy.io.mmwrite(
            handle,
            np.array(np.asarray(values), dtype=float),
            comment=comment,
            field="real",
            precision=MM_PRECISION,
            symmetry="general",
        )


def write_csv(frame: pd.DataFrame, path: PathLike) -> None:
    """Write a table with a header row and full-precision floats."""
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
