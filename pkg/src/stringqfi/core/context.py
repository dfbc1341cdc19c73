from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd


@dataclass
class RunContext:
    """
    Container for everything one figure run produced.

    Attributes
    ----------
    name : str
        Figure name (fig3 ... fig6).
    tables : dict[str, pd.DataFrame]
        Per-panel scan tables keyed by panel name (radial, tangential, parallel).
    metadata : dict[str, Any]
        Fixed parameters, axes, scheme and tool version; written as the manifest.
    outputs : dict[str, Path]
        Files written, keyed by panel name plus 'manifest'.
    errors : dict[str, int]
        Number of failed cells per panel.
    """

    name: str
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, Path] = field(default_factory=dict)
    errors: dict[str, int] = field(default_factory=dict)

    def add_table(self, panel: str, table: pd.DataFrame) -> None:
        """Add or replace the table of one panel."""
        self.tables[panel] = table

    def get_table(self, panel: str) -> pd.DataFrame | None:
        return self.tables.get(panel, None)
