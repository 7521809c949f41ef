from typing import List, Optional, Union
from hdakit.errors import InvalidComplex
from hdakit.precubical import HDA, PrecubicalSet


def _escaped(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _quoted(text: str) -> str:
    return '"' + _escaped(text) + '"'


def export_dot(X: Union[PrecubicalSet, HDA]) -> str:
    """
    Graphviz text of a complex: 0-cells become nodes, 1-cells labeled edges and every higher cell
    a shaded cluster with a note listing its boundary. Cells appear in file order.
    """
    initial: Optional[str] = None
    if isinstance(X, HDA):
        initial = X.initial
        X = X.pcs
    violations = X.violations()
    if len(violations) > 0:
        raise InvalidComplex(violations)

    lines: List[str] = ["digraph hda {", "  rankdir=LR;"]
    for cell_id in X.cells_of_dim(0):
        shape = "doublecircle" if cell_id == initial else "circle"
        lines.append("  " + _quoted(cell_id) + " [shape=" + shape + "];")
    for cell_id in X.cells_of_dim(1):
        cell = X.cell(cell_id)
        lines.append("  " + _quoted(cell.d0[0]) + " -> " + _quoted(cell.d1[0]) +
                     " [label=" + _quoted(cell.labels[0]) + ", id=" + _quoted(cell_id) + "];")
    for n in range(2, X.dimension + 1):
        for cell_id in X.cells_of_dim(n):
            cell = X.cell(cell_id)
            boundary = ["d0: " + " ".join(cell.d0), "d1: " + " ".join(cell.d1)]
            lines.append("  subgraph " + _quoted("cluster_" + cell_id) + " {")
            lines.append("    style=filled; color=lightgrey; label=" + _quoted(cell_id + " (" + ",".join(cell.labels) + ")") + ";")
            lines.append("    " + _quoted("note_" + cell_id) + " [shape=note, label=\"" + "\\n".join(_escaped(line) for line in boundary) + "\"];")
            lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
