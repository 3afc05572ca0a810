"""Gráficos SVG autocontidos: pontos e curvas no plano complexo com escala isotrópica."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np

from .errors import ConfigError

VIEWPORT = 800
MARGIN = 40


def _fmt(value: float) -> str:
    return f"{value:.3f}"


@dataclass
class SvgPlot:
    """Acumula camadas e as desenha num quadro ``800×800`` com o mesmo fator nos dois eixos."""

    title: str = ""
    version: str = ""
    size: int = VIEWPORT
    margin: int = MARGIN
    _layers: List[Dict] = field(default_factory=list, init=False, repr=False)

    def add_points(self, zs: Iterable[complex], color: str = "#1f4e9c", radius: float = 1.6) -> None:
        self._layers.append({"kind": "points", "z": np.asarray(list(zs), dtype=np.complex128), "color": color, "radius": radius})

    def add_curve(self, zs: Iterable[complex], color: str = "#d62728", closed: bool = True, width: float = 1.5) -> None:
        self._layers.append(
            {"kind": "curve", "z": np.asarray(list(zs), dtype=np.complex128), "color": color, "closed": closed, "width": width}
        )

    def add_marker(self, z: complex, label: str, color: str = "#2ca02c") -> None:
        self._layers.append({"kind": "marker", "z": np.asarray([complex(z)]), "color": color, "label": label})

    def affine_map(self) -> Dict[str, float]:
        """Mapa ``(x, y) ↦ (offset_x + scale·x, offset_y − scale·y)`` dos dados para o quadro."""

        points = [layer["z"] for layer in self._layers if layer["z"].size]
        if not points:
            raise ConfigError("gráfico sem dados")
        data = np.concatenate(points)
        x_min, x_max = float(data.real.min()), float(data.real.max())
        y_min, y_max = float(data.imag.min()), float(data.imag.max())
        span = max(x_max - x_min, y_max - y_min, 1e-12)
        scale = (self.size - 2 * self.margin) / span
        offset_x = self.size / 2 - scale * (x_min + x_max) / 2
        offset_y = self.size / 2 + scale * (y_min + y_max) / 2
        return {"scale": scale, "offset_x": offset_x, "offset_y": offset_y, "width": float(self.size), "height": float(self.size)}

    def render(self, mapping: Optional[Dict[str, float]] = None) -> str:
        mapping = mapping or self.affine_map()
        scale, ox, oy = mapping["scale"], mapping["offset_x"], mapping["offset_y"]

        def xy(z: np.ndarray):
            return ox + scale * z.real, oy - scale * z.imag

        lines = ['<?xml version="1.0" encoding="UTF-8"?>']
        lines.append(f"<!-- toeplitz-spectra {self.version} -->")
        lines.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="0 0 {self.size} {self.size}">'
        )
        lines.append(f'<rect x="0" y="0" width="{self.size}" height="{self.size}" fill="white"/>')
        origin_x, origin_y = xy(np.asarray(0j))
        lines.append(
            f'<line x1="0" y1="{_fmt(origin_y)}" x2="{self.size}" y2="{_fmt(origin_y)}" stroke="#bbbbbb" stroke-width="0.5"/>'
        )
        lines.append(
            f'<line x1="{_fmt(origin_x)}" y1="0" x2="{_fmt(origin_x)}" y2="{self.size}" stroke="#bbbbbb" stroke-width="0.5"/>'
        )
        if self.title:
            lines.append(f'<text x="{self.margin}" y="{self.margin // 2}" font-size="14" font-family="sans-serif">{self.title}</text>')
        for layer in self._layers:
            xs, ys = xy(layer["z"])
            if layer["kind"] == "points":
                for x, y in zip(xs, ys):
                    lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{layer["radius"]}" fill="{layer["color"]}"/>')
            elif layer["kind"] == "curve":
                coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
                tag = "polygon" if layer["closed"] else "polyline"
                lines.append(
                    f'<{tag} points="{coords}" fill="none" stroke="{layer["color"]}" stroke-width="{layer["width"]}"/>'
                )
            else:
                x, y = xs[0], ys[0]
                lines.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="none" stroke="{layer["color"]}"/>')
                lines.append(
                    f'<text x="{_fmt(x + 6)}" y="{_fmt(y - 6)}" font-size="12" font-family="sans-serif">{layer["label"]}</text>'
                )
        lines.append("</svg>")
        return "\n".join(lines) + "\n"


__all__ = ["SvgPlot"]
