"""File formats: IDX image ingestion, PGM/CSV export, DMFD model files.

DMFD model record (all integers little-endian):

    magic   4 bytes  b"DMFD"
    version u32      currently 1
    m, n, d u32      visible size, hidden size, node width
    acts_h  n bytes  activation code per hidden row
    acts_v  m bytes  activation code per visible row
    W       n*m f64  row-major
    B_h     n*d f64  row-major
    B_v     m*d f64  row-major

A stack file is a u32 layer count followed by that many model records;
a file that begins directly with the magic is a single model.  Round-trips
are bit-exact.
"""

import struct

import numpy as np

from .activations import ACTIVATION_CODES, ACTIVATION_FROM_CODE, ActivationMap
from .exceptions import DataFormatError
from .rbm import RbmParams
from .stack import RbmStack

IDX_IMAGE_MAGIC = 0x00000803
DMFD_MAGIC = b"DMFD"
DMFD_VERSION = 1
_MAX_STACK_LAYERS = 4096


# ---------------------------------------------------------------------------
# IDX images

class IdxImages:
    """Grayscale image set loaded from an IDX file, pixels scaled to [0, 1]."""

    def __init__(self, pixels, rows, cols):
        self.pixels = pixels  # (count, rows*cols) float64
        self.rows = rows
        self.cols = cols

    @property
    def count(self):
        return self.pixels.shape[0]

    def image(self, i):
        return self.pixels[i].reshape(self.rows, self.cols)

    def samples(self, start=0, count=None):
        """Images start..start+count as a list of (rows*cols, 1) columns."""
        count = self.count - start if count is None else count
        return [self.pixels[i].reshape(-1, 1).copy() for i in range(start, start + count)]


def read_idx(path):
    with open(path, "rb") as f:
        header = f.read(16)
        if len(header) < 16:
            raise DataFormatError(f"{path}: truncated IDX header")
        magic, count, rows, cols = struct.unpack(">IIII", header)
        if magic != IDX_IMAGE_MAGIC:
            raise DataFormatError(f"{path}: bad IDX magic 0x{magic:08x}")
        payload = f.read(count * rows * cols)
    if len(payload) != count * rows * cols:
        raise DataFormatError(
            f"{path}: expected {count * rows * cols} pixels, got {len(payload)}"
        )
    raw = np.frombuffer(payload, dtype=np.uint8).reshape(count, rows * cols)
    return IdxImages(raw.astype(np.float64) / 255.0, rows, cols)


def write_idx(path, images_u8):
    """Write a (count, rows, cols) uint8 array as an IDX image file."""
    a = np.ascontiguousarray(images_u8, dtype=np.uint8)
    count, rows, cols = a.shape
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", IDX_IMAGE_MAGIC, count, rows, cols))
        f.write(a.tobytes())


# ---------------------------------------------------------------------------
# PGM

def write_pgm(matrix, path):
    """Write a [0, 1]-valued matrix as binary PGM (P5, maxval 255).

    Values outside [0, 1] are clamped before quantization; the number of
    clamped entries is returned so callers can warn.
    """
    a = np.asarray(matrix, dtype=np.float64)
    clamped = int(np.count_nonzero((a < 0.0) | (a > 1.0)))
    q = np.rint(np.clip(a, 0.0, 1.0) * 255.0).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode())
        f.write(q.tobytes())
    return clamped


def read_pgm(path):
    """Parse a binary PGM written by write_pgm; returns a uint8 matrix."""
    with open(path, "rb") as f:
        data = f.read()
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5":
        raise DataFormatError(f"{path}: not a binary PGM")
    width, height = (int(v) for v in parts[1].split())
    if parts[2] != b"255":
        raise DataFormatError(f"{path}: unsupported maxval")
    pixels = np.frombuffer(parts[3][: width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise DataFormatError(f"{path}: truncated pixel data")
    return pixels.reshape(height, width)


# ---------------------------------------------------------------------------
# CSV

def format_float(v):
    return repr(float(v))


def write_csv(path, rows, header=None):
    """Comma-separated values at full float64 precision, one record per row."""
    with open(path, "w", encoding="ascii", newline="") as f:
        if header is not None:
            f.write(",".join(str(h) for h in header) + "\n")
        for row in rows:
            f.write(",".join(
                str(v) if isinstance(v, (int, np.integer)) else format_float(v)
                for v in row
            ) + "\n")


def read_csv(path, skip_header=False):
    """Parse a CSV written by write_csv into a list of float lists."""
    out = []
    with open(path, "r", encoding="ascii") as f:
        lines = f.read().splitlines()
    for line in lines[1 if skip_header else 0:]:
        if line:
            out.append([float(v) for v in line.split(",")])
    return out


# ---------------------------------------------------------------------------
# DMFD model files

def _pack_layer(params):
    n, m = params.weights.shape
    d = params.node_width
    chunks = [
        DMFD_MAGIC,
        struct.pack("<IIII", DMFD_VERSION, m, n, d),
        bytes(ACTIVATION_CODES[k] for k in params.act_h.kinds),
        bytes(ACTIVATION_CODES[k] for k in params.act_v.kinds),
        params.weights.astype("<f8").tobytes(),
        params.hidden_bias.astype("<f8").tobytes(),
        params.visible_bias.astype("<f8").tobytes(),
    ]
    return b"".join(chunks)


class _Reader:
    def __init__(self, data, path):
        self.data = data
        self.path = path
        self.pos = 0

    def take(self, size):
        if self.pos + size > len(self.data):
            raise DataFormatError(f"{self.path}: truncated model file")
        out = self.data[self.pos:self.pos + size]
        self.pos += size
        return out


def _unpack_layer(reader):
    if reader.take(4) != DMFD_MAGIC:
        raise DataFormatError(f"{reader.path}: bad model magic")
    version, m, n, d = struct.unpack("<IIII", reader.take(16))
    if version != DMFD_VERSION:
        raise DataFormatError(f"{reader.path}: unsupported version {version}")
    try:
        acts_h = [ACTIVATION_FROM_CODE[c] for c in reader.take(n)]
        acts_v = [ACTIVATION_FROM_CODE[c] for c in reader.take(m)]
    except KeyError as err:
        raise DataFormatError(f"{reader.path}: unknown activation code {err}") from None
    def block(rows, cols):
        raw = reader.take(rows * cols * 8)
        return np.frombuffer(raw, dtype="<f8").reshape(rows, cols).copy()
    return RbmParams(
        weights=block(n, m),
        hidden_bias=block(n, d),
        visible_bias=block(m, d),
        act_h=ActivationMap(acts_h),
        act_v=ActivationMap(acts_v),
    )


def save_model(params, path):
    with open(path, "wb") as f:
        f.write(_pack_layer(params))


def load_model(path):
    with open(path, "rb") as f:
        reader = _Reader(f.read(), path)
    params = _unpack_layer(reader)
    if reader.pos != len(reader.data):
        raise DataFormatError(f"{path}: trailing bytes after model record")
    return params


def save_stack(stack, path):
    with open(path, "wb") as f:
        f.write(struct.pack("<I", len(stack.layers)))
        for params in stack.layers:
            f.write(_pack_layer(params))


def load_stack(path):
    with open(path, "rb") as f:
        reader = _Reader(f.read(), path)
    (count,) = struct.unpack("<I", reader.take(4))
    if not 1 <= count <= _MAX_STACK_LAYERS:
        raise DataFormatError(f"{path}: implausible stack layer count {count}")
    layers = [_unpack_layer(reader) for _ in range(count)]
    if reader.pos != len(reader.data):
        raise DataFormatError(f"{path}: trailing bytes after stack records")
    return RbmStack(layers)


def load_any(path):
    """Load either a single model or a stack file; returns an RbmStack."""
    with open(path, "rb") as f:
        head = f.read(4)
    if head == DMFD_MAGIC:
        return RbmStack([load_model(path)])
    return load_stack(path)
