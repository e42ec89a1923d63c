"""Loci rendering: the maculate regions and immaculate locus on a window,
as ascii art, json, or a small standalone svg."""

from __future__ import annotations

import json

from . import cohomology as coh
from .varieties import VarietySpec, canonical_bundle


def loci_grid(spec: VarietySpec, window: int):
    """Map each lattice point of the window to its nonvanishing degrees."""
    grid = {}
    for i in range(-window, window + 1):
        for j in range(-window, window + 1):
            dims = coh.h_dims(spec, (i, j))
            grid[(i, j)] = tuple(k for k, x in enumerate(dims) if x)
    return grid


def loci_json(spec: VarietySpec, window: int) -> str:
    grid = loci_grid(spec, window)
    payload = {
        "spec": spec.to_json(),
        "window": window,
        "canonical": list(canonical_bundle(spec)),
        "immaculate": sorted([list(p) for p, ks in grid.items() if not ks]),
        "maculate": {
            f"{p[0]},{p[1]}": list(ks) for p, ks in sorted(grid.items()) if ks
        },
    }
    if spec.kind != "tangent_dual":
        payload["regions"] = [
            {"k": r.k, "apex": list(r.apex), "gens": [list(g) for g in r.gens]}
            for r in coh.maculate_regions(spec)
        ]
    return json.dumps(payload, sort_keys=True, indent=1)


_DEGREE_GLYPHS = "0123456789abcdefghij"


def loci_ascii(spec: VarietySpec, window: int) -> str:
    """One character per lattice point: '.' immaculate, the degree glyph for
    a single nonvanishing degree, '*' for several; O and K are marked."""
    grid = loci_grid(spec, window)
    k_class = canonical_bundle(spec)
    lines = []
    for j in range(window, -window - 1, -1):
        row = []
        for i in range(-window, window + 1):
            ks = grid[(i, j)]
            if (i, j) == (0, 0):
                ch = "O"
            elif (i, j) == k_class:
                ch = "K"
            elif not ks:
                ch = "."
            elif len(ks) == 1:
                ch = _DEGREE_GLYPHS[ks[0] % len(_DEGREE_GLYPHS)]
            else:
                ch = "*"
            row.append(ch)
        lines.append("".join(row))
    legend = "rows j = %d..%d (top to bottom), cols i = %d..%d" % (
        window, -window, -window, window,
    )
    return "\n".join(lines + [legend])


_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def loci_svg(spec: VarietySpec, window: int) -> str:
    grid = loci_grid(spec, window)
    cell = 14
    size = (2 * window + 1) * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    k_class = canonical_bundle(spec)
    for (i, j), ks in sorted(grid.items()):
        x = (i + window) * cell
        y = (window - j) * cell
        if not ks:
            fill = "#eeeeee"
            label = ""
        else:
            fill = _PALETTE[ks[0] % len(_PALETTE)]
            label = "*" if len(ks) > 1 else str(ks[0])
        parts.append(
            f'<rect x="{x}" y="{y}" width="{cell - 1}" height="{cell - 1}" fill="{fill}"/>'
        )
        if label:
            parts.append(
                f'<text x="{x + 3}" y="{y + cell - 4}" font-size="9">{label}</text>'
            )
    for mark, p in (("O", (0, 0)), ("K", k_class)):
        if abs(p[0]) <= window and abs(p[1]) <= window:
            x = (p[0] + window) * cell
            y = (window - p[1]) * cell
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell - 1}" height="{cell - 1}" '
                f'fill="none" stroke="black" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{x + 3}" y="{y + cell - 4}" font-size="9" '
                f'font-weight="bold">{mark}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
