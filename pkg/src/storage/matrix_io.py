"""
Dense matrix/vector files

VSPM container layout (little-endian):

    magic    4 bytes  b"VSPM"
    version  u16      1
    dtype    u16      1 = complex128, 2 = float64
    rows     u64
    cols     u64
    payload  rows * cols values, row-major

Vectors are stored as N x 1 matrices. CSV (comma-separated, complex cells
as ``1+2j`` or ``1+2i``) and PGM (P2/P5, normalized to [0, 1]) are
accepted as inputs only.
"""
import logging
import struct
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from ..core.errors import ContainerFormatError
from .atomic import atomic_write_bytes

logger = logging.getLogger(__name__)

MAGIC = b"VSPM"
VERSION = 1
HEADER = struct.Struct("<4sHHQQ")

DTYPE_TAGS: Dict[int, np.dtype] = {
    1: np.dtype("<c16"),
    2: np.dtype("<f8"),
}

PathLike = Union[str, Path]


def encode_matrix(array: np.ndarray) -> bytes:
    """Serialize a 1-D or 2-D array; complex arrays keep their imaginary parts"""
    array = np.asarray(array)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise ContainerFormatError(f"only vectors and matrices can be stored, got {array.ndim} dimensions")
    tag = 1 if np.iscomplexobj(array) else 2
    payload = np.ascontiguousarray(array, dtype=DTYPE_TAGS[tag])
    rows, cols = payload.shape
    return HEADER.pack(MAGIC, VERSION, tag, rows, cols) + payload.tobytes(order="C")


def decode_matrix(data: bytes) -> np.ndarray:
    """
    Parse a VSPM byte string into a 2-D array

    Raises:
        ContainerFormatError: bad magic, version, dtype tag or payload length
    """
    if len(data) < HEADER.size:
        raise ContainerFormatError("file too short for a VSPM header")
    magic, version, tag, rows, cols = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ContainerFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise ContainerFormatError(f"unsupported VSPM version {version}")
    dtype = DTYPE_TAGS.get(tag)
    if dtype is None:
        raise ContainerFormatError(f"unknown dtype tag {tag}")
    expected = rows * cols * dtype.itemsize
    payload = data[HEADER.size:]
    if len(payload) != expected:
        raise ContainerFormatError(
            f"payload has {len(payload)} bytes, header promises {expected} ({rows}x{cols})"
        )
    return np.frombuffer(payload, dtype=dtype).reshape(rows, cols).astype(dtype.newbyteorder("="))


def write_matrix(path: PathLike, array: np.ndarray) -> Path:
    return atomic_write_bytes(path, encode_matrix(array))


def read_csv_matrix(path: PathLike) -> np.ndarray:
    """Comma-separated rows; blank lines and lines starting with # are skipped"""
    rows: List[List[complex]] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([complex(cell.strip().replace(" ", "").replace("i", "j")) for cell in line.split(",")])
        except ValueError as e:
            raise ContainerFormatError(f"{path}:{lineno}: {e}") from e
    if not rows:
        raise ContainerFormatError(f"{path}: no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ContainerFormatError(f"{path}: rows have differing lengths")
    return np.asarray(rows, dtype=complex)


def _pgm_tokens(data: bytes, count: int) -> Tuple[List[bytes], int]:
    """First ``count`` whitespace-separated header tokens (comments skipped) and the offset after them"""
    tokens: List[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ContainerFormatError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(path: PathLike) -> np.ndarray:
    """
    Read a P2 or P5 graymap as a rows x cols float array in [0, 1]

    Raises:
        ContainerFormatError: not a PGM or truncated raster
    """
    data = Path(path).read_bytes()
    (magic, width, height, maxval), pos = _pgm_tokens(data, 4)
    try:
        cols, rows, top = int(width), int(height), int(maxval)
    except ValueError as e:
        raise ContainerFormatError(f"{path}: bad PGM header: {e}") from e
    if top < 1 or top > 65535:
        raise ContainerFormatError(f"{path}: maxval {top} out of range")

    if magic == b"P2":
        values = np.array(data[pos:].split()[: rows * cols], dtype=float)
    elif magic == b"P5":
        dtype = np.dtype("u1") if top < 256 else np.dtype(">u2")
        raster = data[pos + 1: pos + 1 + rows * cols * dtype.itemsize]
        values = np.frombuffer(raster, dtype=dtype).astype(float)
    else:
        raise ContainerFormatError(f"{path}: not a PGM file (magic {magic!r})")
    if values.size != rows * cols:
        raise ContainerFormatError(f"{path}: expected {rows * cols} pixels, found {values.size}")
    return values.reshape(rows, cols) / top


def read_matrix(path: PathLike) -> np.ndarray:
    """Read any supported format by suffix (.csv, .pgm, otherwise VSPM)"""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return read_csv_matrix(path)
    if suffix == ".pgm":
        return read_pgm(path)
    return decode_matrix(path.read_bytes())


def read_vector(path: PathLike) -> np.ndarray:
    """
    Read an N x 1 or 1 x N file as a flat vector

    Raises:
        ContainerFormatError: the file holds a proper matrix
    """
    array = read_matrix(path)
    if min(array.shape) != 1:
        raise ContainerFormatError(f"{path} holds a {array.shape[0]}x{array.shape[1]} matrix, expected a vector")
    return array.reshape(-1)
