"""Reference kernels: one straightforward multi-pass function per measure.

Each kernel takes two domain-adjusted float64 vectors and a Guard, computes
the catalog formula in the plainest shape that reads like the formula, and
returns a Python float. Correctness over speed; the optimized backend is the
fast twin and is held to these values within 1e-9 relative.
"""

from __future__ import annotations

import math

import numpy as np

from .common import Guard
from .registry import DistanceId


def _d1(x, y, g: Guard) -> float:
    return float(np.abs(x - y).max())


def _d2(x, y, g: Guard) -> float:
    num = (x - y) ** 2
    den = g.den_arr(x + y)
    return float((num / den).sum())


def _d3(x, y, g: Guard) -> float:
    s = ((x - y) ** 2).sum()
    return math.sqrt(max(s, 0.0))


def _d4(x, y, g: Guard) -> float:
    return 1.0 - math.exp(-0.5 * _d3(x, y, g))


def _d5(x, y, g: Guard) -> float:
    return math.log1p(_d3(x, y, g))


def _d6(x, y, g: Guard) -> float:
    return float(np.abs(x - y).sum())


def _d7(x, y, g: Guard) -> float:
    num = float(np.abs(x - y).sum())
    return num / g.den(float((x + y).sum()))


def _d8(x, y, g: Guard) -> float:
    num = np.abs(x - y)
    den = g.den_arr(np.abs(x) + np.abs(y))
    return float((num / den).sum())


def _d9(x, y, g: Guard) -> float:
    return float(np.abs(x - y).sum()) / x.size


def _d10(x, y, g: Guard) -> float:
    num = float(np.abs(x - y).sum())
    return num / g.den(float(np.minimum(x, y).sum()))


def _d11(x, y, g: Guard) -> float:
    return float(np.log1p(np.abs(x - y)).sum())


def _d12(x, y, g: Guard) -> float:
    return 0.5 * float(np.abs(x - y).sum())


def _d13(x, y, g: Guard) -> float:
    num = float(np.abs(x - y).sum())
    return num / g.den(float(np.maximum(x, y).sum()))


def _d14(x, y, g: Guard) -> float:
    # chord = sqrt(2 - 2 cos) computed as the norm of the normalized
    # difference; identical algebra, exact zero at x = y
    xn = x / g.den(math.sqrt(max(float((x * x).sum()), 0.0)))
    yn = y / g.den(math.sqrt(max(float((y * y).sum()), 0.0)))
    s = ((xn - yn) ** 2).sum()
    return math.sqrt(max(float(s), 0.0))


def _d15(x, y, g: Guard) -> float:
    nx = math.sqrt(max(float((x * x).sum()), 0.0))
    ny = math.sqrt(max(float((y * y).sum()), 0.0))
    return 1.0 - float((x * y).sum()) / g.den(nx * ny)


def _d16(x, y, g: Guard) -> float:
    den = g.den(float((x * x).sum()) + float((y * y).sum()))
    return 1.0 - 2.0 * float((x * y).sum()) / den


def _d17(x, y, g: Guard) -> float:
    xy = float((x * y).sum())
    den = g.den(float((x * x).sum()) + float((y * y).sum()) - xy)
    return 1.0 - xy / den


def _d18(x, y, g: Guard) -> float:
    s = float(np.sqrt(np.maximum(x * y, 0.0)).sum())
    return -math.log(g.log(s))


def _d19(x, y, g: Guard) -> float:
    s = ((np.sqrt(x) - np.sqrt(y)) ** 2).sum()
    return math.sqrt(max(2.0 * float(s), 0.0))


def _d20(x, y, g: Guard) -> float:
    s = ((np.sqrt(x) - np.sqrt(y)) ** 2).sum()
    return math.sqrt(max(float(s), 0.0))


def _d21(x, y, g: Guard) -> float:
    return float(((np.sqrt(x) - np.sqrt(y)) ** 2).sum())


def _d22(x, y, g: Guard) -> float:
    num = (x - y) ** 2 * (x + y)
    den = g.den_arr(x * y)
    return float((num / den).sum())


def _d23(x, y, g: Guard) -> float:
    s = ((x - y) ** 2).sum()
    return math.sqrt(max(float(s) / x.size, 0.0))


def _d24(x, y, g: Guard) -> float:
    t = np.abs(x - y) / g.den_arr(x + y)
    return math.sqrt(max(float((t * t).sum()), 0.0))


def _d25(x, y, g: Guard) -> float:
    den = g.den_arr(x + y)
    return 2.0 * float(((x - y) ** 2 / (den * den)).sum())


def _d26(x, y, g: Guard) -> float:
    return math.log1p(float(((x - y) ** 2).sum()))


def _d27(x, y, g: Guard) -> float:
    s = float(((x - y) ** 2).sum())
    live = g.den(float((x + y != 0.0).sum()))
    return math.sqrt(max(s / live, 0.0))


def _d28(x, y, g: Guard) -> float:
    return float(((x - y) ** 2 / g.den_arr(x)).sum())


def _d29(x, y, g: Guard) -> float:
    return float(((x - y) ** 2 / g.den_arr(y)).sum())


def _d30(x, y, g: Guard) -> float:
    return 2.0 * float(((x - y) ** 2 / g.den_arr(x + y)).sum())


def _d31(x, y, g: Guard) -> float:
    return float(((x - y) ** 2 / g.den_arr(x + y)).sum())


def _d32(x, y, g: Guard) -> float:
    return float(((x - y) ** 2).sum())


def _d33(x, y, g: Guard) -> float:
    return float(((x - y) * np.log(g.log_arr(x / y))).sum())


def _d34(x, y, g: Guard) -> float:
    m = (x + y) / 2.0
    left = (x * np.log(x) + y * np.log(y)) / 2.0
    return float((left - m * np.log(g.log_arr(m))).sum())


def _d35(x, y, g: Guard) -> float:
    den = g.den_arr(x + y)
    a = x * np.log(g.log_arr(2.0 * x / den))
    b = y * np.log(g.log_arr(2.0 * y / den))
    return 0.5 * (float(a.sum()) + float(b.sum()))


def _d36(x, y, g: Guard) -> float:
    den = g.den_arr(x + y)
    return float((x * np.log(g.log_arr(2.0 * x / den))).sum())


def _d37(x, y, g: Guard) -> float:
    return float((x * np.log(g.log_arr(x / y))).sum())


def _d38(x, y, g: Guard) -> float:
    den = g.den_arr(x + y)
    a = x * np.log(g.log_arr(2.0 * x / den))
    b = y * np.log(g.log_arr(2.0 * y / den))
    return float(a.sum()) + float(b.sum())


def _d39(x, y, g: Guard) -> float:
    sq = (x - y) ** 2
    a = float((sq / g.den_arr(x)).sum())
    b = float((sq / g.den_arr(y)).sum())
    return max(a, b)


def _d40(x, y, g: Guard) -> float:
    sq = (x - y) ** 2
    a = float((sq / g.den_arr(x)).sum())
    b = float((sq / g.den_arr(y)).sum())
    return min(a, b)


def _d41(x, y, g: Guard) -> float:
    mn = np.minimum(x, y)
    return float(((x - y) ** 2 / g.den_arr(mn * mn)).sum())


def _d42(x, y, g: Guard) -> float:
    return float(((x - y) ** 2 / g.den_arr(np.minimum(x, y))).sum())


def _d43(x, y, g: Guard) -> float:
    return float(((x - y) ** 2 / g.den_arr(np.maximum(x, y))).sum())


def _d44(x, y, g: Guard) -> float:
    return float((np.abs(x - y) / g.den_arr(np.minimum(x, y))).sum())


def _d45(x, y, g: Guard) -> float:
    return float((x != y).sum())


def _d46(x, y, g: Guard) -> float:
    mn = np.minimum(x, y)
    mx = np.maximum(x, y)
    shift = np.where(mn < 0.0, -mn, 0.0)
    return float((1.0 - (1.0 + mn + shift) / (1.0 + mx + shift)).sum())


def _d47(x, y, g: Guard) -> float:
    m = (x + y) / 2.0
    return float(np.abs(x - m).sum())


KERNELS = {
    DistanceId.D1: _d1, DistanceId.D2: _d2, DistanceId.D3: _d3,
    DistanceId.D4: _d4, DistanceId.D5: _d5, DistanceId.D6: _d6,
    DistanceId.D7: _d7, DistanceId.D8: _d8, DistanceId.D9: _d9,
    DistanceId.D10: _d10, DistanceId.D11: _d11, DistanceId.D12: _d12,
    DistanceId.D13: _d13, DistanceId.D14: _d14, DistanceId.D15: _d15,
    DistanceId.D16: _d16, DistanceId.D17: _d17, DistanceId.D18: _d18,
    DistanceId.D19: _d19, DistanceId.D20: _d20, DistanceId.D21: _d21,
    DistanceId.D22: _d22, DistanceId.D23: _d23, DistanceId.D24: _d24,
    DistanceId.D25: _d25, DistanceId.D26: _d26, DistanceId.D27: _d27,
    DistanceId.D28: _d28, DistanceId.D29: _d29, DistanceId.D30: _d30,
    DistanceId.D31: _d31, DistanceId.D32: _d32, DistanceId.D33: _d33,
    DistanceId.D34: _d34, DistanceId.D35: _d35, DistanceId.D36: _d36,
    DistanceId.D37: _d37, DistanceId.D38: _d38, DistanceId.D39: _d39,
    DistanceId.D40: _d40, DistanceId.D41: _d41, DistanceId.D42: _d42,
    DistanceId.D43: _d43, DistanceId.D44: _d44, DistanceId.D45: _d45,
    DistanceId.D46: _d46, DistanceId.D47: _d47,
}


def kernel_value(id: DistanceId, x: np.ndarray, y: np.ndarray, g: Guard) -> float:
    r = KERNELS[id](x, y, g)
    return r if r > 0.0 else 0.0
