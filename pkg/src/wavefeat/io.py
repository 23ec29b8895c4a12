"""Voxel-matrix and CSV file formats."""

import struct

import numpy as np

from .operator import FormatError

FVX_MAGIC = b"FVX1"
_FVX_HEADER = struct.Struct("<4sII")
HASH_FIELD = "config="


def write_fvx(path, V):
    """Binary voxel matrix: magic, u32 T, u32 P, column-major little-endian float64."""
    V = np.asarray(V, dtype=np.float64)
    if V.ndim != 2:
        raise ValueError(f"voxel matrix must be 2-D, got shape {V.shape}")
    T, P = V.shape
    with open(path, "wb") as fh:
        fh.write(_FVX_HEADER.pack(FVX_MAGIC, T, P))
        fh.write(V.astype("<f8").tobytes(order="F"))


def read_fvx(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _FVX_HEADER.size:
        raise FormatError(f"{path}: too short for a voxel-matrix header")
    magic, T, P = _FVX_HEADER.unpack_from(blob)
    if magic != FVX_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected {FVX_MAGIC!r}")
    expected = _FVX_HEADER.size + 8 * T * P
    if len(blob) != expected:
        raise FormatError(f"{path}: {len(blob)} bytes, expected {expected} for T={T}, P={P}")
    data = np.frombuffer(blob, dtype="<f8", offset=_FVX_HEADER.size, count=T * P)
    return data.reshape((T, P), order="F").astype(np.float64)


def _header(names, config_hash):
    fields = list(names)
    if config_hash is not None:
        fields.append(HASH_FIELD + config_hash)
    return ",".join(fields)


def write_csv(path, columns, config_hash=None, fmt=None):
    """Write equal-length columns under a one-line header that ends with the config hash."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n = {a.shape[0] for a in arrays}
    if len(n) != 1:
        raise ValueError("all CSV columns must have the same length")
    fmts = fmt or ["%d" if a.dtype.kind in "biu" else "%.17g" for a in arrays]
    data = np.column_stack([a.astype(np.float64) if a.dtype.kind == "f" else a.astype(np.int64)
                            for a in arrays]) if arrays else np.empty((0, 0))
    with open(path, "w", newline="\n") as fh:
        fh.write(_header(names, config_hash) + "\n")
        np.savetxt(fh, data, delimiter=",", fmt=fmts)


def read_csv(path):
    """Return ``(names, data)``; the config-hash header field, if any, is dropped."""
    with open(path) as fh:
        header = fh.readline()
        if not header:
            raise FormatError(f"{path}: empty file")
        names = [h.strip() for h in header.strip().split(",") if not h.strip().startswith(HASH_FIELD)]
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2, dtype=np.float64)
        except ValueError as exc:
            raise FormatError(f"{path}: {exc}") from None
    if data.size and data.shape[1] != len(names):
        raise FormatError(f"{path}: header names {len(names)} columns, rows have {data.shape[1]}")
    if not np.isfinite(data).all():
        raise FormatError(f"{path}: non-finite values")
    return names, data


def read_signal(path, column=None):
    """One column of a CSV; defaults to the last column."""
    names, data = read_csv(path)
    if not names:
        raise FormatError(f"{path}: no columns")
    if column is None:
        return data[:, -1].copy()
    if column not in names:
        raise FormatError(f"{path}: no column {column!r} (have {names})")
    return data[:, names.index(column)].copy()


def read_matrix(path):
    """Voxel matrix from FVX1 binary or CSV (one row per time point)."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == FVX_MAGIC:
        return read_fvx(path)
    _, data = read_csv(path)
    return data


def write_matrix(path, V, config_hash=None):
    if str(path).lower().endswith(".csv"):
        V = np.asarray(V, dtype=np.float64)
        write_csv(path, {f"v{p}": V[:, p] for p in range(V.shape[1])}, config_hash)
    else:
        write_fvx(path, V)
