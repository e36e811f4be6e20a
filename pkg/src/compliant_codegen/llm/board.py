"""Character-grid summaries of a board layout for inclusion in prompts."""
from __future__ import annotations

from dataclasses import dataclass, field


class InvalidGrid(ValueError):
    pass


DEFAULT_LEGEND = {"c": "cable", "s": "screw", "B": "channel"}

# The published RGMC board sketch; the last row is padded to the grid width.
APPENDIX_BOARD_ROWS = (
    "    B",
    "ccc c",
    "cscsc",
    "c ccc",
    "1    ",
)


@dataclass(frozen=True)
class BoardGrid:
    rows: tuple
    legend: dict = field(default_factory=lambda: dict(DEFAULT_LEGEND))
    pitch: float = 0.03     # m between neighbouring cells

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise InvalidGrid("a board needs at least one non-empty row")
        width = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != width:
                raise InvalidGrid(f"row {i} has length {len(r)}, expected {width}")
            for ch in r:
                if ch != " " and not ch.isdigit() and ch not in self.legend:
                    raise InvalidGrid(f"symbol {ch!r} in row {i} is not in the legend")
        if not self.pitch > 0:
            raise InvalidGrid("pitch must be > 0")

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.rows[0])

    def find(self, symbol: str) -> list:
        """(x, y) cell coordinates of ``symbol``, y counted from the bottom row."""
        h = len(self.rows)
        return [(c, h - 1 - r) for r, row in enumerate(self.rows) for c, ch in enumerate(row) if ch == symbol]


APPENDIX_BOARD = BoardGrid(APPENDIX_BOARD_ROWS)


def _pitch_text(pitch: float) -> str:
    s = f"{pitch:g}"
    return s[1:] if s.startswith("0.") else s


def render_board(grid: BoardGrid) -> str:
    used = {ch for row in grid.rows for ch in row if ch != " "}
    lines = ["Here is the board layout:"]
    lines += [row.rstrip() for row in grid.rows]
    lines.append("")
    lines.append("Legend:")
    for sym, meaning in grid.legend.items():
        if sym in used:
            lines.append(f"{sym}: {meaning}")
    if any(ch.isdigit() for ch in used):
        lines.append("digits: numbered start poses, pose(n)")
    lines.append("")
    lines.append("x translations go left to right and y translations go bottom to top. "
                 f"Neighbouring cells are {_pitch_text(grid.pitch)}M apart.")
    return "\n".join(lines) + "\n"
