"""Image quality metrics and the stopping-rule quantity."""

import numpy as np
from scipy.signal import convolve2d

from .errors import ShapeMismatchError

# 11x11 Gaussian window with sigma 1.5, the customary SSIM choice.
_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_C1 = 0.01**2  # (K1 * L)^2 with dynamic range L = 1
_C2 = 0.03**2


def _check_shapes(a, b):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{a.shape} vs {b.shape}")


def psnr(reference, test, literal=False):
    """Peak signal-to-noise ratio in dB; +inf for identical images.

    The default normalizes the squared error by the pixel count (MSE). The
    literal mode divides by the raw squared Frobenius norm instead.
    """
    reference = np.asarray(reference, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    _check_shapes(reference, test)
    err = float(np.sum((reference - test) ** 2))
    if err == 0.0:
        return float("inf")
    peak = float(reference.max()) ** 2
    if not literal:
        err /= reference.size
    return 10.0 * np.log10(peak / err)


def _gaussian_window(size, sigma):
    half = (size - 1) / 2.0
    x = np.arange(size) - half
    g = np.exp(-(x**2) / (2.0 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(reference, test):
    """Mean local structural similarity over valid window positions."""
    x = np.asarray(reference, dtype=np.float64)
    y = np.asarray(test, dtype=np.float64)
    _check_shapes(x, y)
    size = min(_SSIM_WINDOW, min(x.shape) - (1 - min(x.shape) % 2))
    w = _gaussian_window(size, _SSIM_SIGMA)

    def filt(img):
        return convolve2d(img, w, mode="valid")

    mx = filt(x)
    my = filt(y)
    mxx = filt(x * x) - mx * mx
    myy = filt(y * y) - my * my
    mxy = filt(x * y) - mx * my
    num = (2.0 * mx * my + _C1) * (2.0 * mxy + _C2)
    den = (mx * mx + my * my + _C1) * (mxx + myy + _C2)
    return float(np.mean(num / den))


def rel_change(current, previous):
    """||current - previous||_F / ||previous||_F, absolute when previous is zero."""
    current = np.asarray(current, dtype=np.float64)
    previous = np.asarray(previous, dtype=np.float64)
    _check_shapes(current, previous)
    diff = float(np.linalg.norm(current - previous))
    denom = float(np.linalg.norm(previous))
    return diff / denom if denom > 0.0 else diff
