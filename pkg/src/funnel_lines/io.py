"""Image files: binary PGM (P5), grayscale PNG, overlays and heatmaps.

Pixel data in memory is float; quantization happens only here.  PGM
rasters keep their integer samples in :class:`PGMImage` so that reading
and writing at the same depth is bit exact.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PGMError",
    "PGMImage",
    "parse_pgm",
    "read_pgm",
    "encode_pgm",
    "write_pgm",
    "quantize",
    "load_image",
    "save_image",
    "render_heatmap",
    "draw_overlay",
    "SPACE_COLORS",
]

# regular-space lines in green, inverse-space lines in carmine
SPACE_COLORS = {"regular": (0, 200, 0), "inverse": (150, 0, 24)}


class PGMError(ValueError):
    """Malformed PGM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


@dataclass
class PGMImage:
    """Integer raster ``data[row, col]`` with its ``maxval``."""

    data: np.ndarray
    maxval: int

    def to_float(self):
        return self.data.astype(float) / self.maxval


def _header_tokens(buf, count):
    """Read ``count`` whitespace-separated tokens after the magic number.

    ``#`` comments run to the end of the line.  Returns the tokens and the
    offset just past the single whitespace byte that ends the last one.
    """
    tokens, pos, n = [], 2, len(buf)
    while len(tokens) < count:
        if pos >= n:
            raise PGMError("truncated PGM header", pos)
        ch = buf[pos:pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            end = buf.find(b"\n", pos)
            if end < 0:
                raise PGMError("truncated PGM header inside a comment", n)
            pos = end + 1
        elif ch.isdigit():
            start = pos
            while pos < n and buf[pos:pos + 1].isdigit():
                pos += 1
            if pos >= n:
                raise PGMError("truncated PGM header", pos)
            tokens.append((int(buf[start:pos]), start))
        else:
            raise PGMError(f"unexpected byte {ch!r} in PGM header", pos)
    if not buf[pos:pos + 1].isspace():
        raise PGMError("missing whitespace after PGM header", pos)
    return tokens, pos + 1


def parse_pgm(buf):
    """Decode the bytes of a binary (P5) PGM file."""
    if len(buf) < 2:
        raise PGMError("truncated PGM header", len(buf))
    if buf[:2] != b"P5":
        raise PGMError("not a binary PGM (expected magic 'P5')", 0)
    tokens, start = _header_tokens(buf, 3)
    (w, w_at), (h, h_at), (maxval, m_at) = tokens
    if w <= 0:
        raise PGMError("width must be positive", w_at)
    if h <= 0:
        raise PGMError("height must be positive", h_at)
    if not 0 < maxval <= 65535:
        raise PGMError("maxval must lie in 1..65535", m_at)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    size = w * h * dtype.itemsize
    if len(buf) - start < size:
        raise PGMError(f"pixel data truncated: need {size} bytes, have {len(buf) - start}",
                       len(buf))
    data = np.frombuffer(buf, dtype=dtype, count=w * h, offset=start).reshape(h, w)
    if data.max(initial=0) > maxval:
        raise PGMError("sample exceeds maxval", start)
    return PGMImage(data.astype(np.uint16 if maxval > 255 else np.uint8), maxval)


def read_pgm(path):
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def encode_pgm(image):
    """Bytes of a P5 file for a :class:`PGMImage`."""
    data = np.asarray(image.data)
    if data.ndim != 2:
        raise ValueError("PGM data must be 2D")
    if not 0 < image.maxval <= 65535:
        raise ValueError("maxval must lie in 1..65535")
    if data.size and (data.min() < 0 or data.max() > image.maxval):
        raise ValueError("samples must lie in 0..maxval")
    h, w = data.shape
    dtype = ">u2" if image.maxval > 255 else "u1"
    header = f"P5\n{w} {h}\n{image.maxval}\n".encode("ascii")
    return header + data.astype(dtype).tobytes()


def write_pgm(path, image):
    with open(path, "wb") as fh:
        fh.write(encode_pgm(image))


def quantize(img, maxval=255):
    """Clamp a float image to ``[0, 1]`` and round onto ``0..maxval``."""
    img = np.clip(np.asarray(img, dtype=float), 0.0, 1.0)
    dtype = np.uint16 if maxval > 255 else np.uint8
    return np.rint(img * maxval).astype(dtype)


def _ext(path):
    return os.path.splitext(str(path))[1].lower()


def load_image(path):
    """Read a grayscale PGM or PNG into floats in ``[0, 1]``.

    PNG files are decoded with Pillow; 8- and 16-bit grayscale are scaled by
    their full range, color images are converted to luminance first.
    """
    if _ext(path) == ".png":
        from PIL import Image

        with Image.open(path) as im:
            if im.mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(im, dtype=float)
                return arr / 65535.0
            if im.mode != "L":
                im = im.convert("L")
            return np.asarray(im, dtype=float) / 255.0
    return read_pgm(path).to_float()


def save_image(path, img, maxval=255):
    """Write a float image; ``.png`` through Pillow, anything else as P5 PGM."""
    data = quantize(img, maxval)
    if _ext(path) == ".png":
        from PIL import Image

        if maxval > 255:
            Image.fromarray(data.astype(np.uint16)).save(path)
        else:
            Image.fromarray(data, mode="L").save(path)
        return
    write_pgm(path, PGMImage(data, maxval))


def render_heatmap(magnitudes, log=False):
    """Min-max normalize a field to 8-bit; ``log`` applies ``log(1 + x)`` first."""
    f = np.asarray(magnitudes, dtype=float)
    if log:
        f = np.log1p(np.maximum(f, 0.0))
    lo, hi = (float(f.min()), float(f.max())) if f.size else (0.0, 0.0)
    if hi <= lo:
        return np.zeros(f.shape, dtype=np.uint8)
    return np.rint((f - lo) / (hi - lo) * 255.0).astype(np.uint8)


def _clip_to_image(line, w, h):
    """Full-crossing segment of ``line`` inside the pixel-center box, or None."""
    x0, y0 = line.point()
    dx, dy = line.direction()
    lo_x, hi_x = -(w // 2), w - 1 - w // 2
    lo_y, hi_y = -(h // 2), h - 1 - h // 2
    t_lo, t_hi = -math.inf, math.inf
    for p, d, lo, hi in ((x0, dx, lo_x, hi_x), (y0, dy, lo_y, hi_y)):
        if abs(d) < 1e-12:
            if not lo <= p <= hi:
                return None
            continue
        a, b = (lo - p) / d, (hi - p) / d
        t_lo, t_hi = max(t_lo, min(a, b)), min(t_hi, max(a, b))
    if t_hi < t_lo:
        return None
    return (x0 + t_lo * dx, y0 + t_lo * dy), (x0 + t_hi * dx, y0 + t_hi * dy)


def draw_overlay(img, detections, width=1):
    """RGB overlay of detections on a grayscale image (Pillow image).

    Segments use the estimated extent when present, otherwise the whole
    crossing of the image.  Colors follow :data:`SPACE_COLORS`.
    """
    from PIL import Image, ImageDraw

    gray = quantize(img)
    h, w = gray.shape
    canvas = Image.fromarray(gray, mode="L").convert("RGB")
    pen = ImageDraw.Draw(canvas)
    for det in detections:
        if det.extent is not None:
            seg = det.extent.endpoints
        else:
            seg = _clip_to_image(det.line, w, h)
        if seg is None:
            continue
        (xa, ya), (xb, yb) = seg
        pen.line([(xa + w // 2, ya + h // 2), (xb + w // 2, yb + h // 2)],
                 fill=SPACE_COLORS.get(det.peak.space, (255, 0, 0)), width=width)
    return canvas
