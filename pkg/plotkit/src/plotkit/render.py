"""Deterministic rendering of figure recipes to PNG and SVG."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .csvio import Table, read_table
from .recipes import RECIPES, FigureRecipe
from .style import RC_PARAMS


def load_tables(recipe: FigureRecipe, data_dir: Path) -> dict[str, Table]:
    tables: dict[str, Table] = {}
    for name in recipe.inputs:
        tables[name] = read_table(data_dir / name)
    for name in recipe.optional_inputs:
        path = data_dir / name
        if path.exists():
            tables[name] = read_table(path)
    return tables


def render(figure_id: str, data_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Render one figure; returns the written image paths (PNG and SVG).

    Identical inputs produce byte-identical SVGs: the Agg backend, a
    fixed hash salt, and a stripped Date field leave no nondeterminism in
    the output.
    """
    if figure_id not in RECIPES:
        raise ValueError(f"unknown figure {figure_id!r}; valid: {sorted(RECIPES)}")
    recipe = RECIPES[figure_id]
    data_dir = Path(data_dir)
    out_dir = Path(out_dir)
    tables = load_tables(recipe, data_dir)  # parse errors precede any output
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    with plt.rc_context(RC_PARAMS):
        fig = plt.figure()
        try:
            recipe.draw(fig, tables)
            fig.align_labels()
            for ext in ("png", "svg"):
                path = out_dir / f"{figure_id}.{ext}"
                # SVG would otherwise embed a creation date.
                metadata = {"Date": None} if ext == "svg" else None
                fig.savefig(path, format=ext, metadata=metadata)
                written.append(path)
        finally:
            plt.close(fig)
    return written
