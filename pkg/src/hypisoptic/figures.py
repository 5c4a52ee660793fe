"""Catalog of reference configurations: a conic plus a viewing angle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict

from .conics import ConicSpec, central, osculating_parabola, parabola, semi_hyperbola


@dataclass(frozen=True)
class FigurePreset:
    name: str
    conic: ConicSpec
    alpha: float


def _preset(name: str, conic: ConicSpec, alpha: float) -> FigurePreset:
    return FigurePreset(name, conic, alpha)


PRESETS: Dict[str, FigurePreset] = {
    p.name: p
    for p in (
        _preset("fig01", central(0.3, 2), math.pi / 2),
        _preset("fig02", central(0.5, -2), math.pi / 3),
        _preset("fig03", central(1.1, -1.5), 19 * math.pi / 36),
        _preset("fig04", central(2, 3), 7 * math.pi / 18),
        _preset("fig05", central(0.45, 0.8), math.pi / 2),
        _preset("fig06", parabola(2, 1.5), math.pi / 3),
        _preset("fig07", parabola(-2.5, -5), 7 * math.pi / 18),
        _preset("fig08", parabola(-5, -2.7), math.pi / 2),
        _preset("fig09", parabola(1, 2), math.pi / 2),
        _preset("fig10", parabola(-2, 1.5), math.pi / 3),
        _preset("fig11", parabola(0.8, -0.4), math.pi / 3),
        _preset("fig12a", semi_hyperbola(1.4, 0.5), math.pi / 4),
        _preset("fig12b", semi_hyperbola(1.4, 0.5), 8 * math.pi / 18),
        _preset("fig13a", osculating_parabola(0.4), math.pi / 3),
        _preset("fig13b", osculating_parabola(0.4), 2 * math.pi / 3),
    )
}


def preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown figure preset {name!r}; known: {', '.join(PRESETS)}") from None
