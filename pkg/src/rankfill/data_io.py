"""File I/O: PGM/PPM images, sampling masks, and trace CSV export."""

from dataclasses import dataclass

import numpy as np

from .errors import ImageFormatError, ShapeMismatchError, UnsupportedDepthError

# PRNG used for mask sampling; recorded so published masks are reconstructible.
MASK_PRNG = "numpy-default-rng-pcg64"


@dataclass
class Mask:
    observed: np.ndarray  # boolean, (rows, cols)
    sr: float
    seed: int

    @property
    def rows(self):
        return self.observed.shape[0]

    @property
    def cols(self):
        return self.observed.shape[1]


def load_image(path):
    """Read a binary PGM (2-D grid) or PPM (3-band stack), scaled to [0, 1]."""
    with open(path, "rb") as f:
        data = f.read()
    magic, fields, pixels = _parse_netpbm_header(data)
    if magic == b"P5":
        rows, cols = fields[1], fields[0]
        n = rows * cols
        if len(pixels) < n:
            raise ImageFormatError("truncated PGM pixel data")
        arr = np.frombuffer(pixels[:n], dtype=np.uint8).reshape(rows, cols)
        return arr.astype(np.float64) / 255.0
    rows, cols = fields[1], fields[0]
    n = rows * cols * 3
    if len(pixels) < n:
        raise ImageFormatError("truncated PPM pixel data")
    arr = np.frombuffer(pixels[:n], dtype=np.uint8).reshape(rows, cols, 3)
    return arr.astype(np.float64).transpose(2, 0, 1) / 255.0


def save_image(path, grid):
    """Write a 2-D grid as PGM or a (3, rows, cols) stack as PPM, 8-bit."""
    grid = np.asarray(grid, dtype=np.float64)
    samples = np.round(255.0 * np.clip(grid, 0.0, 1.0)).astype(np.uint8)
    if grid.ndim == 2:
        header = b"P5\n%d %d\n255\n" % (grid.shape[1], grid.shape[0])
        body = samples.tobytes()
    elif grid.ndim == 3 and grid.shape[0] == 3:
        header = b"P6\n%d %d\n255\n" % (grid.shape[2], grid.shape[1])
        body = samples.transpose(1, 2, 0).tobytes()
    else:
        raise ShapeMismatchError(f"cannot save shape {grid.shape}")
    with open(path, "wb") as f:
        f.write(header + body)


def _parse_netpbm_header(data):
    if data[:2] not in (b"P5", b"P6"):
        raise ImageFormatError(f"unsupported magic {data[:2]!r}")
    magic = data[:2]
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        try:
            fields.append(int(data[start:pos]))
        except ValueError as exc:
            raise ImageFormatError("malformed header") from exc
    pos += 1  # single whitespace after maxval
    if fields[2] != 255:
        raise UnsupportedDepthError(f"maxval {fields[2]} unsupported; 8-bit only")
    return magic, fields, data[pos:]


def make_mask(rows, cols, sr, seed):
    """Uniform mask with exactly round(sr*rows*cols) observed pixels."""
    if not 0 < sr <= 1:
        raise ValueError("sampling rate must lie in (0, 1]")
    n = rows * cols
    count = int(round(sr * n))
    rng = np.random.default_rng(seed)
    observed = np.zeros(n, dtype=bool)
    observed[rng.choice(n, size=count, replace=False)] = True
    return Mask(observed=observed.reshape(rows, cols), sr=sr, seed=seed)


def apply_mask(im, mask):
    """Zero-fill the unobserved pixels."""
    im = np.asarray(im, dtype=np.float64)
    if im.shape != mask.observed.shape:
        raise ShapeMismatchError(f"image {im.shape} vs mask {mask.observed.shape}")
    return np.where(mask.observed, im, 0.0)


def save_mask(path, mask):
    """Textual header (rows cols sr seed) followed by row-major 0/1 bytes."""
    header = f"{mask.rows} {mask.cols} {mask.sr!r} {mask.seed}\n".encode()
    with open(path, "wb") as f:
        f.write(header + mask.observed.astype(np.uint8).tobytes())


def load_mask(path):
    with open(path, "rb") as f:
        header = f.readline().split()
        if len(header) != 4:
            raise ImageFormatError("malformed mask header")
        rows, cols = int(header[0]), int(header[1])
        sr, seed = float(header[2]), int(header[3])
        body = f.read(rows * cols)
    if len(body) != rows * cols:
        raise ImageFormatError("truncated mask data")
    observed = np.frombuffer(body, dtype=np.uint8).reshape(rows, cols).astype(bool)
    return Mask(observed=observed, sr=sr, seed=seed)


def export_trace(trace, path):
    """Write the trace as CSV; deterministic 17-significant-digit formatting."""
    lines = ["iter,rel_change,primal_gap,coupling_gap,psnr"]
    has_psnr = len(trace.psnr) == len(trace.rel_change)
    for i in range(len(trace.rel_change)):
        p = format(trace.psnr[i], ".17g") if has_psnr else ""
        lines.append(
            f"{i + 1},{trace.rel_change[i]:.17g},{trace.primal_gap[i]:.17g},"
            f"{trace.coupling_gap[i]:.17g},{p}"
        )
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
