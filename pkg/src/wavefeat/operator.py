"""Multi-scale feature extraction, per voxel and as a compiled matrix.

The iterative path decomposes a signal, zeroes the scales outside a
:class:`ScaleMask` and reconstructs. Because every stage is linear, the whole
pipeline equals a ``T x T`` matrix ``N``; :func:`build_operator` obtains it by
running the pipeline on the ``T`` standard basis vectors, after which
``V_E = N @ V`` processes all voxels at once.
"""

from dataclasses import dataclass, field
import struct
import time

import numpy as np

from .dwt import check_length, decompose, reconstruct
from .filters import FilterPair

MAGIC = b"NEOP"
_HEADER = struct.Struct("<4sIBBI")
_NAME_LEN = struct.Struct("<I")

FLAG_REFILTER = 0x01
FLAG_APPROX = 0x02


class FormatError(ValueError):
    """Malformed input file."""


@dataclass(frozen=True)
class ScaleMask:
    """Which scales survive extraction: details ``r_j`` for ``j`` in ``keep_details``, plus ``l_I`` if ``keep_approx``."""

    keep_details: frozenset
    keep_approx: bool
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "keep_details", frozenset(int(j) for j in self.keep_details))
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.depth > 32:
            raise ValueError("depth above 32 cannot be encoded in the detail bitset")
        bad = [j for j in self.keep_details if not 1 <= j <= self.depth]
        if bad:
            raise ValueError(f"detail scales {sorted(bad)} outside 1..{self.depth}")

    @classmethod
    def all(cls, depth):
        return cls(frozenset(range(1, depth + 1)), True, depth)

    @classmethod
    def none(cls, depth):
        return cls(frozenset(), False, depth)

    @classmethod
    def single(cls, scale, depth):
        """Mask keeping one scale, named ``"r<j>"`` or ``"l<I>"``/``"approx"``."""
        return cls.parse(scale, depth)

    @classmethod
    def parse(cls, text, depth):
        """Parse ``"all"``, ``"none"`` or a comma list such as ``"r1,r3,approx"``."""
        text = text.strip().lower()
        if text == "all":
            return cls.all(depth)
        if text in ("none", ""):
            return cls.none(depth)
        details, approx = set(), False
        for tok in (t.strip() for t in text.split(",")):
            if tok in ("approx", "l", f"l{depth}"):
                approx = True
            elif tok.startswith("r") and tok[1:].isdigit():
                details.add(int(tok[1:]))
            else:
                raise ValueError(f"cannot parse scale {tok!r}; use r<j>, l{depth} or approx")
        return cls(frozenset(details), approx, depth)

    @property
    def bitset(self):
        return sum(1 << (j - 1) for j in self.keep_details)

    @classmethod
    def from_bitset(cls, bits, keep_approx, depth):
        return cls(frozenset(j for j in range(1, 33) if bits >> (j - 1) & 1), keep_approx, depth)

    def describe(self):
        names = [f"r{j}" for j in sorted(self.keep_details)]
        if self.keep_approx:
            names.append(f"l{self.depth}")
        return ",".join(names) if names else "none"

    @property
    def is_empty(self):
        return not self.keep_details and not self.keep_approx


def extract_iterative(v, f, mask, refilter=False):
    """Decompose, zero the unkept scales and reconstruct.

    ``v`` may be a single series or a ``(T, P)`` batch; batch columns are
    processed exactly as they would be one at a time.
    """
    v = np.asarray(v, dtype=np.float64)
    pyramid = decompose(v, f, mask.depth, refilter)
    kept = pyramid.masked(mask.keep_details, mask.keep_approx)
    return reconstruct(kept, f, refilter)


@dataclass(frozen=True, eq=False)
class ExtractionOperator:
    """Dense ``T x T`` matrix equivalent of :func:`extract_iterative`."""

    matrix: np.ndarray
    filter_name: str
    mask: ScaleMask
    refilter: bool

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64, order="C")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def T(self):
        return self.matrix.shape[0]

    @property
    def depth(self):
        return self.mask.depth

    def projection_defect(self):
        """Frobenius norm of ``N @ N - N``; zero when extraction is idempotent."""
        return float(np.linalg.norm(self.matrix @ self.matrix - self.matrix))

    def to_bytes(self):
        flags = (FLAG_REFILTER if self.refilter else 0) | (FLAG_APPROX if self.mask.keep_approx else 0)
        name = self.filter_name.encode("utf-8")
        return b"".join([
            _HEADER.pack(MAGIC, self.T, flags, self.mask.depth, self.mask.bitset),
            _NAME_LEN.pack(len(name)),
            name,
            self.matrix.astype("<f8").tobytes(order="C"),
        ])

    @classmethod
    def from_bytes(cls, blob):
        if len(blob) < _HEADER.size + _NAME_LEN.size:
            raise FormatError("operator file truncated in header")
        magic, T, flags, depth, bits = _HEADER.unpack_from(blob, 0)
        if magic != MAGIC:
            raise FormatError(f"bad operator magic {magic!r}, expected {MAGIC!r}")
        off = _HEADER.size
        (nlen,) = _NAME_LEN.unpack_from(blob, off)
        off += _NAME_LEN.size
        name = blob[off:off + nlen].decode("utf-8")
        off += nlen
        expected = off + 8 * T * T
        if len(blob) != expected:
            raise FormatError(f"operator file has {len(blob)} bytes, expected {expected}")
        matrix = np.frombuffer(blob, dtype="<f8", count=T * T, offset=off).reshape(T, T)
        try:
            mask = ScaleMask.from_bitset(bits, bool(flags & FLAG_APPROX), depth)
        except ValueError as exc:
            raise FormatError(f"operator header inconsistent: {exc}") from None
        return cls(matrix.astype(np.float64), name, mask, bool(flags & FLAG_REFILTER))

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def build_operator(f: FilterPair, mask: ScaleMask, refilter: bool, T: int) -> ExtractionOperator:
    """Compile the extraction pipeline into a matrix by probing with basis vectors."""
    check_length(T, mask.depth, refilter)
    if mask.is_empty:
        matrix = np.zeros((T, T))
    else:
        # column t of the result is the pipeline applied to e_t
        matrix = extract_iterative(np.eye(T), f, mask, refilter)
    return ExtractionOperator(matrix, f.name, mask, refilter)


def apply_operator(op, V, block_size=None):
    """``V_E = N @ V``; ``block_size`` splits the columns without changing results."""
    V = np.asarray(V, dtype=np.float64)
    squeeze = V.ndim == 1
    if squeeze:
        V = V[:, None]
    if V.ndim != 2 or V.shape[0] != op.T:
        raise ValueError(f"operator is {op.T}x{op.T} but data has {V.shape[0]} time points (shape {V.shape})")
    if block_size is None or block_size >= V.shape[1]:
        out = op.matrix @ V
    else:
        if block_size < 1:
            raise ValueError(f"block_size must be positive, got {block_size}")
        out = np.empty_like(V)
        for start in range(0, V.shape[1], block_size):
            stop = start + block_size
            out[:, start:stop] = op.matrix @ V[:, start:stop]
    return out[:, 0] if squeeze else out


@dataclass
class BenchReport:
    T: int
    P: int
    repetitions: int
    iterative_s: float
    build_s: float
    apply_s: float
    max_discrepancy: float
    projection_defect: float
    backend: str
    extra: dict = field(default_factory=dict)

    @property
    def matrix_s(self):
        return self.build_s + self.apply_s

    @property
    def speedup(self):
        return self.iterative_s / self.matrix_s if self.matrix_s > 0 else float("inf")


def _min_time(fn, repetitions):
    best, result = float("inf"), None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_compare(T, P, f, mask, refilter=False, repetitions=3, seed=0, V=None):
    """Time per-voxel extraction against build-once-then-multiply.

    Times are minima over ``repetitions``. The matrix path is charged for
    building the operator as well as applying it.
    """
    from . import _backend

    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    check_length(T, mask.depth, refilter)
    if V is None:
        V = np.random.default_rng(seed).standard_normal((T, P))

    def iterative():
        out = np.empty_like(V)
        for p in range(V.shape[1]):
            out[:, p] = extract_iterative(V[:, p], f, mask, refilter)
        return out

    it_s, it_out = _min_time(iterative, repetitions)
    build_s, op = _min_time(lambda: build_operator(f, mask, refilter, T), repetitions)
    apply_s, mat_out = _min_time(lambda: apply_operator(op, V), repetitions)
    disc = float(np.max(np.abs(it_out - mat_out))) if V.size else 0.0
    return BenchReport(T, V.shape[1], repetitions, it_s, build_s, apply_s, disc,
                       op.projection_defect(), _backend.active())
