"""Unit conversions between SI and the shop-floor units used in reports.

Everything internal is SI (Pa, m, N, N.m). Displays and flags use kPa, cm,
kg-force and kg.cm because that is how bench numbers are usually quoted.
"""

import math

GRAVITY = 9.81  # m/s^2; "kg" loads are weights


def _finite(value: float, name: str = "value") -> float:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return float(value)


def kpa_to_pa(value: float) -> float:
    return _finite(value) * 1000.0


def pa_to_kpa(value: float) -> float:
    return _finite(value) / 1000.0


def cm_to_m(value: float) -> float:
    return _finite(value) / 100.0


def m_to_cm(value: float) -> float:
    return _finite(value) * 100.0


def mm_to_m(value: float) -> float:
    return _finite(value) / 1000.0


def m_to_mm(value: float) -> float:
    return _finite(value) * 1000.0


def kgf_to_newton(value: float) -> float:
    """kilogram-force to newtons (x 9.81)."""
    return _finite(value) * GRAVITY


def newton_to_kgf(value: float) -> float:
    return _finite(value) / GRAVITY


def kgcm_to_newton_meter(value: float) -> float:
    """kg.cm torque to N.m (x 0.0981)."""
    return _finite(value) * (GRAVITY / 100.0)


def newton_meter_to_kgcm(value: float) -> float:
    return _finite(value) / (GRAVITY / 100.0)
