"""Frame input/output: binary PGM (P5), raw float32 streams and output planes.

Raw streams are little-endian float32, row-major, frame after frame.  The
sidecar ``<stream>.json`` holds ``width``, ``height`` and ``frames``.
"""
import json
import os
from pathlib import Path

import numpy as np


class FrameFormatError(OSError):
    pass


def _pgm_tokens(data: bytes, count: int):
    """First ``count`` header tokens and the offset just past the last one."""
    tokens, i, n = [], 0, len(data)
    while len(tokens) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace() and data[i:i + 1] != b"#":
            i += 1
        if start == i:
            raise FrameFormatError("truncated PGM header")
        tokens.append(data[start:i])
    return tokens, i + 1  # exactly one whitespace byte precedes the raster


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    (magic, w, h, maxval), offset = _pgm_tokens(data, 4)
    if magic != b"P5":
        raise FrameFormatError(f"{path}: unsupported PGM magic {magic!r}")
    w, h, maxval = int(w), int(h), int(maxval)
    if not 0 < maxval < 65536:
        raise FrameFormatError(f"{path}: bad maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = w * h * dtype.itemsize
    raster = data[offset:offset + need]
    if len(raster) != need:
        raise FrameFormatError(f"{path}: expected {need} raster bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=dtype).reshape(h, w).astype(np.float32)


def write_pgm(path, image, maxval: int = 255) -> None:
    img = np.asarray(image)
    h, w = img.shape
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    raster = np.clip(np.rint(img), 0, maxval).astype(dtype)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        fh.write(raster.tobytes())


def write_preview(path, plane) -> None:
    """8-bit PGM with linear min-max mapping."""
    plane = np.asarray(plane, dtype=float)
    lo, hi = float(plane.min()), float(plane.max())
    scaled = np.zeros_like(plane) if hi == lo else (plane - lo) * (255.0 / (hi - lo))
    write_pgm(path, scaled)


def iter_pgm_dir(directory):
    files = sorted(p for p in Path(directory).iterdir() if p.suffix.lower() in (".pgm", ".pnm"))
    if not files:
        raise FrameFormatError(f"{directory}: no .pgm frames found")
    shape = None
    for p in files:
        frame = read_pgm(p)
        if shape is None:
            shape = frame.shape
        elif frame.shape != shape:
            raise FrameFormatError(f"{p}: frame size {frame.shape} differs from {shape}")
        yield frame


def sidecar_path(raw_path) -> Path:
    return Path(str(raw_path) + ".json")


def write_raw_stream(path, frames) -> None:
    frames = np.asarray(frames, dtype="<f4")
    n, h, w = frames.shape
    with open(path, "wb") as fh:
        fh.write(frames.tobytes())
    sidecar_path(path).write_text(json.dumps(
        {"width": w, "height": h, "frames": n, "dtype": "float32", "endian": "little"}))


def iter_raw_stream(path):
    """Yield frames one at a time; only one frame is held in memory."""
    try:
        header = json.loads(sidecar_path(path).read_text())
        w, h, n = int(header["width"]), int(header["height"]), int(header["frames"])
    except (OSError, ValueError, KeyError) as exc:
        raise FrameFormatError(f"{path}: unreadable sidecar header ({exc})") from exc
    if header.get("endian", "little") != "little":
        raise FrameFormatError(f"{path}: only little-endian streams are supported")
    size = w * h * 4
    if os.path.getsize(path) < n * size:
        raise FrameFormatError(f"{path}: file shorter than {n} frames of {w}x{h}")
    with open(path, "rb") as fh:
        for _ in range(n):
            yield np.frombuffer(fh.read(size), dtype="<f4").reshape(h, w)


def iter_frames(source):
    source = Path(source)
    if source.is_dir():
        return iter_pgm_dir(source)
    if not source.exists():
        raise FrameFormatError(f"{source}: no such file or directory")
    return iter_raw_stream(source)


def write_plane(path, plane) -> None:
    np.asarray(plane, dtype="<f4").tofile(path)


def read_plane(path, shape) -> np.ndarray:
    return np.fromfile(path, dtype="<f4").reshape(shape)
