import itertools
from typing import Dict, List, Optional
from hdakit.base_cats import CanonicalObject
from hdakit.precubical import HDA, Cell, PrecubicalSet


def cell(cell_id: str, labels: str = "", d0=(), d1=()) -> Cell:
    return Cell(cell_id, CanonicalObject(tuple(labels)), tuple(d0), tuple(d1))


def _square_boundary() -> List[Cell]:
    return [cell("v00"), cell("v10"), cell("v01"), cell("v11"),
            cell("a0", "a", ["v00"], ["v10"]),
            cell("a1", "a", ["v01"], ["v11"]),
            cell("b0", "b", ["v00"], ["v01"]),
            cell("b1", "b", ["v10"], ["v11"])]


def square() -> PrecubicalSet:
    """One filled square x with events (a, b); v10 is reached by a, v01 by b."""
    return PrecubicalSet("ab", _square_boundary() + [cell("x", "ab", ["b0", "a0"], ["b1", "a1"])])


def ba_square() -> PrecubicalSet:
    """The same square with its events listed in the order (b, a)."""
    return PrecubicalSet("ab", _square_boundary() + [cell("y", "ba", ["a0", "b0"], ["a1", "b1"])])


def hollow_square() -> PrecubicalSet:
    return PrecubicalSet("ab", _square_boundary())


def square_hda(filled: bool = True) -> HDA:
    return HDA(square() if filled else hollow_square(), "v00")


def ba_square_hda() -> HDA:
    return HDA(ba_square(), "v00")


def two_squares(perturbed: bool = False) -> PrecubicalSet:
    """Two squares x (a, b) and y (a, c) sharing the a-edge s."""
    return PrecubicalSet("abc", [
        cell("w0"), cell("w1"), cell("w2"), cell("w3"), cell("w4"), cell("w5"),
        cell("p", "b", ["w0"], ["w1"]),
        cell("t", "b", ["w2"], ["w3"]),
        cell("q", "a", ["w0"], ["w2"]),
        cell("s", "a", ["w1"], ["w3"]),
        cell("v", "c", ["w1"], ["w4"]),
        cell("u", "c", ["w3"], ["w5"]),
        cell("l", "a", ["w4"], ["w5"]),
        cell("x", "ab", ["p", "p" if perturbed else "q"], ["t", "s"]),
        cell("y", "ac", ["v", "s"], ["u", "l"])])


def _face(word: str, i: int, k: int) -> str:
    positions = [n for n, char in enumerate(word) if char == "*"]
    n = positions[i - 1]
    return word[:n] + str(k) + word[n + 1:]


def cube_cells(labels: str, prefix: str = "", max_dim: Optional[int] = None, rename: Optional[Dict[str, str]] = None) -> List[Cell]:
    """
    The standard |labels|-cube. Cells are words over 0, *, 1; δ^k_i fixes the i-th free coordinate
    to k. Faces listed in rename point to those ids instead.
    """
    rename = {} if rename is None else rename

    def name(word: str) -> str:
        return rename.get(word, prefix + word)

    cells = []
    for word in ("".join(chars) for chars in itertools.product("0*1", repeat=len(labels))):
        free = [n for n, char in enumerate(word) if char == "*"]
        if max_dim is not None and len(free) > max_dim:
            continue
        if word in rename:
            continue
        cells.append(Cell(name(word),
                          CanonicalObject(tuple(labels[n] for n in free)),
                          tuple(name(_face(word, i, 0)) for i in range(1, len(free) + 1)),
                          tuple(name(_face(word, i, 1)) for i in range(1, len(free) + 1))))
    return sorted(cells, key=lambda c: (c.dim, c.id))


def cube(labels: str = "abc", max_dim: Optional[int] = None) -> PrecubicalSet:
    return PrecubicalSet(labels, cube_cells(labels, max_dim=max_dim))


def cube_hda(labels: str = "abc", max_dim: Optional[int] = None) -> HDA:
    return HDA(cube(labels, max_dim), "0" * len(labels))


def glued_cubes() -> PrecubicalSet:
    """
    Cube x:*** with events (a, b, c) and cube z:*** with events (a, b, d); the bottom face of z in
    its last coordinate is the top face x:**1 of x.
    """
    rename = {word: "x:" + word[:-1] + "1" for word in ("".join(chars) + "0" for chars in itertools.product("0*1", repeat=2))}
    return PrecubicalSet("abcd", cube_cells("abc", "x:") + cube_cells("abd", "z:", rename=rename))


def single_edge() -> PrecubicalSet:
    return PrecubicalSet("a", [cell("u"), cell("w"), cell("e", "a", ["u"], ["w"])])
