import json
import logging
from dataclasses import dataclass
from math import factorial
from typing import Dict, Iterable, List, Optional, Tuple
from hdakit.base_cats import CanonicalObject, Permutation, induced_face_permutation
from hdakit.errors import ArityMismatch, FormatError, IndexOutOfRange, InvalidComplex


@dataclass(frozen=True)
class Cell:
    id: str
    object: CanonicalObject
    d0: Tuple[str, ...]
    d1: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "d0", tuple(self.d0))
        object.__setattr__(self, "d1", tuple(self.d1))

    @property
    def dim(self) -> int:
        return len(self.object)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.object.labels

    def face_id(self, i: int, k: int) -> str:
        if not 1 <= i <= self.dim:
            raise IndexOutOfRange("cell " + self.id + " has no face " + str(i))
        return self.d0[i - 1] if k == 0 else self.d1[i - 1]

    def to_json(self) -> Dict:
        return {"id": self.id, "labels": list(self.labels), "d0": list(self.d0), "d1": list(self.d1)}

    @staticmethod
    def from_json(data: Dict):
        try:
            return Cell(str(data["id"]),
                        CanonicalObject(tuple(str(label) for label in data.get("labels", []))),
                        tuple(str(face) for face in data.get("d0", [])),
                        tuple(str(face) for face in data.get("d1", [])))
        except (KeyError, TypeError, AttributeError):
            raise FormatError("invalid cell record " + str(data))


def _read_json(filename: str) -> Dict:
    with open(filename, "r") as file:
        text = file.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(filename + ": " + e.msg, e.lineno, e.colno)
    if not isinstance(data, dict):
        raise FormatError(filename + ": expected a JSON object", 1, 1)
    return data


class PrecubicalSet:

    def __init__(self, alphabet: Iterable[str], cells: Iterable[Cell]):
        self.alphabet = tuple(dict.fromkeys(alphabet))
        self.__cells: Dict[str, Cell] = {}
        for cell in cells:
            if cell.id in self.__cells:
                raise InvalidComplex(["duplicate cell id " + cell.id])
            self.__cells[cell.id] = cell
        self.__upper: Optional[Dict[str, List[Tuple[int, str]]]] = None

    def cell(self, cell_id: str) -> Cell:
        cell = self.__cells.get(cell_id)
        if cell is None:
            raise InvalidComplex(["unknown cell " + str(cell_id)])
        return cell

    def has_cell(self, cell_id) -> bool:
        return isinstance(cell_id, str) and cell_id in self.__cells

    @property
    def cells(self) -> List[Cell]:
        return list(self.__cells.values())

    @property
    def cell_ids(self) -> List[str]:
        return list(self.__cells.keys())

    def dim(self, cell_id: str) -> int:
        return self.cell(cell_id).dim

    def labels(self, cell_id: str) -> Tuple[str, ...]:
        return self.cell(cell_id).labels

    def face(self, cell_id: str, i: int, k: int) -> str:
        return self.cell(cell_id).face_id(i, k)

    def cells_of_dim(self, n: int) -> List[str]:
        return [cell.id for cell in self.__cells.values() if cell.dim == n]

    @property
    def dimension(self) -> int:
        return max([cell.dim for cell in self.__cells.values()], default=-1)

    def upper(self, cell_id: str) -> List[Tuple[int, str]]:
        """All (i, y) with δ⁰_i(y) == cell, i.e. the up-steps leaving the cell."""
        if self.__upper is None:
            upper: Dict[str, List[Tuple[int, str]]] = {}
            for cell in self.__cells.values():
                for i, face in enumerate(cell.d0, 1):
                    upper.setdefault(face, []).append((i, cell.id))
            self.__upper = upper
        return list(self.__upper.get(cell_id, []))

    def parse_cell(self, token: str) -> str:
        return token

    def violations(self) -> List[str]:
        violations = []
        for cell in self.__cells.values():
            violations += ["cell " + cell.id + ": " + violation for violation in cell.object.violations(self.alphabet)]
            if len(cell.d0) != cell.dim or len(cell.d1) != cell.dim:
                violations.append("cell " + cell.id + ": face lists must have " + str(cell.dim) + " entries")
                continue
            for k, faces in ((0, cell.d0), (1, cell.d1)):
                for i, face_id in enumerate(faces, 1):
                    face = self.__cells.get(face_id)
                    if face is None:
                        violations.append("cell " + cell.id + ": face d" + str(k) + "[" + str(i) + "] refers to unknown cell " + face_id)
                    elif face.object != cell.object.remove(i):
                        violations.append("cell " + cell.id + ": face d" + str(k) + "[" + str(i) + "] = " + face_id + " has labels " +
                                          str(face.object) + ", expected " + str(cell.object.remove(i)))
        if len(violations) > 0:
            return violations

        for cell in self.__cells.values():
            for j in range(2, cell.dim + 1):
                for i in range(1, j):
                    for k in (0, 1):
                        for l in (0, 1):
                            left = self.face(self.face(cell.id, j, l), i, k)
                            right = self.face(self.face(cell.id, i, k), j - 1, l)
                            if left != right:
                                violations.append("cell " + cell.id + ": cubical identity fails for i=" + str(i) + ", j=" + str(j) +
                                                  ", k=" + str(k) + ", l=" + str(l) + " (" + left + " != " + right + ")")
        return violations

    def summary(self) -> str:
        counts = [len(self.cells_of_dim(n)) for n in range(0, self.dimension + 1)]
        return ", ".join(str(count) + (" cells dim" if n == 0 else " dim") + str(n) for n, count in enumerate(counts))

    def __str__(self):
        return "PrecubicalSet(" + self.summary() + ")"

    def to_json(self) -> Dict:
        return {"alphabet": list(self.alphabet), "cells": [cell.to_json() for cell in self.__cells.values()]}

    @staticmethod
    def from_json(data: Dict):
        if not isinstance(data.get("cells"), list):
            raise FormatError("missing list of cells")
        cells = [Cell.from_json(record) for record in data["cells"]]
        alphabet = data.get("alphabet")
        if alphabet is None:
            alphabet = sorted({label for cell in cells for label in cell.labels})
        return PrecubicalSet([str(label) for label in alphabet], cells)

    def save(self, filename: str):
        with open(filename, "w") as file:
            json.dump(self.to_json(), file, indent=1)
        logging.info("complex with " + self.summary() + " saved to " + filename)

    @staticmethod
    def load(filename: str):
        return PrecubicalSet.from_json(_read_json(filename))


def validate_precubical(X: PrecubicalSet) -> List[str]:
    return X.violations()


class HDA:

    def __init__(self, pcs: PrecubicalSet, initial: str, final: Iterable[str] = ()):
        self.pcs = pcs
        self.initial = initial
        # reserved, carries no semantics
        self.final = tuple(final)

    def violations(self) -> List[str]:
        violations = self.pcs.violations()
        if not self.pcs.has_cell(self.initial):
            violations.append("initial cell " + str(self.initial) + " does not exist")
        elif self.pcs.dim(self.initial) != 0:
            violations.append("initial cell " + self.initial + " has dimension " + str(self.pcs.dim(self.initial)))
        violations += ["final cell " + cell_id + " does not exist" for cell_id in self.final if not self.pcs.has_cell(cell_id)]
        return violations

    def __str__(self):
        return "HDA(initial=" + self.initial + ", " + self.pcs.summary() + ")"

    def to_json(self) -> Dict:
        data = {"alphabet": list(self.pcs.alphabet), "initial": self.initial}
        if len(self.final) > 0:
            data["final"] = list(self.final)
        data["cells"] = [cell.to_json() for cell in self.pcs.cells]
        return data

    @staticmethod
    def from_json(data: Dict):
        if "initial" not in data:
            raise FormatError("missing initial cell")
        return HDA(PrecubicalSet.from_json(data), str(data["initial"]), [str(cell_id) for cell_id in data.get("final", [])])

    def save(self, filename: str):
        with open(filename, "w") as file:
            json.dump(self.to_json(), file, indent=1)
        logging.info("hda with " + self.pcs.summary() + " saved to " + filename)

    @staticmethod
    def load(filename: str):
        return HDA.from_json(_read_json(filename))


def load_complex(filename: str):
    """Reads an HDA if the file names an initial cell, otherwise a plain precubical set."""
    data = _read_json(filename)
    result = HDA.from_json(data) if "initial" in data else PrecubicalSet.from_json(data)
    logging.info("loaded " + str(result) + " from " + filename)
    return result


@dataclass(frozen=True)
class SCell:
    theta: Permutation
    base: str

    @staticmethod
    def parse(token: str):
        if not token.startswith("[") or "]." not in token:
            raise FormatError("invalid symmetric cell " + repr(token))
        head, base = token.split("].", 1)
        return SCell(Permutation.parse(head + "]"), base)

    def __str__(self):
        return str(self.theta) + "." + self.base


class SPrecubicalSet:
    """
    The free symmetric precubical set over a base complex. Cells are pairs (θ, x) and are never
    stored; faces and the permutation action are computed on demand.
    """

    MAX_DIM = 6

    def __init__(self, base: PrecubicalSet, max_dim: int = MAX_DIM):
        self.base = base
        self.max_dim = max_dim

    @property
    def alphabet(self) -> Tuple[str, ...]:
        return self.base.alphabet

    def has_cell(self, scell) -> bool:
        return isinstance(scell, SCell) and self.base.has_cell(scell.base) and scell.theta.arity == self.base.dim(scell.base)

    def dim(self, scell: SCell) -> int:
        return scell.theta.arity

    def object(self, scell: SCell) -> CanonicalObject:
        return self.base.cell(scell.base).object.permuted(scell.theta)

    def labels(self, scell: SCell) -> Tuple[str, ...]:
        return self.object(scell).labels

    def face(self, scell: SCell, i: int, k: int) -> SCell:
        return sface(self, scell, i, k)

    def scells_over(self, base_id: str) -> List[SCell]:
        return [SCell(theta, base_id) for theta in Permutation.all(self.base.dim(base_id))]

    def cells_of_dim(self, n: int) -> List[SCell]:
        if n > self.max_dim:
            raise InvalidComplex(["cannot materialize symmetric cells of dimension " + str(n) + " (limit " + str(self.max_dim) + ")"])
        return [scell for base_id in self.base.cells_of_dim(n) for scell in self.scells_over(base_id)]

    def cells(self) -> List[SCell]:
        cells = [scell for n in range(0, self.base.dimension + 1) for scell in self.cells_of_dim(n)]
        logging.debug("materialized " + str(len(cells)) + " symmetric cells over " + str(len(self.base.cells)) + " base cells")
        return cells

    def upper(self, scell: SCell) -> List[Tuple[int, SCell]]:
        upper = []
        for j, y in self.base.upper(scell.base):
            for sigma in Permutation.all(self.base.dim(y)):
                i = sigma(j)
                if induced_face_permutation(sigma, i) == scell.theta:
                    upper.append((i, SCell(sigma, y)))
        return sorted(upper, key=lambda entry: (entry[0], entry[1].base, entry[1].theta.images))

    def parse_cell(self, token: str) -> SCell:
        return SCell.parse(token)

    def action_table(self) -> Dict[Tuple[Permutation, str], str]:
        """The permutation action on the cells of forget_symmetry(self), keyed by (τ, cell id)."""
        return {(tau, str(scell)): str(saction(self, tau, scell)) for scell in self.cells() for tau in Permutation.all(self.dim(scell))}

    def __str__(self):
        counts = [len(self.base.cells_of_dim(n)) * factorial(n) for n in range(0, self.base.dimension + 1)]
        return "SPrecubicalSet(" + ", ".join(str(count) + " dim" + str(n) for n, count in enumerate(counts)) + ")"


def symmetrize(X: PrecubicalSet, max_dim: int = SPrecubicalSet.MAX_DIM) -> SPrecubicalSet:
    violations = X.violations()
    if len(violations) > 0:
        raise InvalidComplex(violations)
    if X.dimension > max_dim:
        raise InvalidComplex(["complex of dimension " + str(X.dimension) + " exceeds symmetrisation limit " + str(max_dim)])
    SX = SPrecubicalSet(X, max_dim)
    logging.debug("symmetrized " + str(X) + " to " + str(SX))
    return SX


def sface(SX: SPrecubicalSet, scell: SCell, i: int, k: int) -> SCell:
    """(d_iθ, δ^k_{θ⁻¹(i)} x)"""
    theta = scell.theta
    if not 1 <= i <= theta.arity:
        raise IndexOutOfRange("symmetric cell " + str(scell) + " has no face " + str(i))
    return SCell(induced_face_permutation(theta, i), SX.base.face(scell.base, theta.inverse()(i), k))


def saction(SX: SPrecubicalSet, tau: Permutation, scell: SCell) -> SCell:
    if tau.arity != scell.theta.arity:
        raise ArityMismatch("permutation on " + str(tau.arity) + " letters acting on " + str(scell))
    return SCell(tau * scell.theta, scell.base)


def forget_symmetry(SX: SPrecubicalSet) -> PrecubicalSet:
    cells = []
    for scell in SX.cells():
        n = SX.dim(scell)
        cells.append(Cell(str(scell),
                          SX.object(scell),
                          tuple(str(sface(SX, scell, i, 0)) for i in range(1, n + 1)),
                          tuple(str(sface(SX, scell, i, 1)) for i in range(1, n + 1))))
    return PrecubicalSet(SX.alphabet, cells)


def symmetrize_hda(H: HDA, max_dim: int = SPrecubicalSet.MAX_DIM) -> HDA:
    """s*(SH): the symmetrisation of an HDA as a plain HDA, initial cell [].i."""
    SX = symmetrize(H.pcs, max_dim)
    final = [str(scell) for cell_id in H.final for scell in SX.scells_over(cell_id)]
    return HDA(forget_symmetry(SX), str(SCell(Permutation.identity(0), H.initial)), final)


def validate_symmetric_action(X: PrecubicalSet, action: Dict[Tuple[Permutation, str], str]) -> List[str]:
    """
    Checks a claimed permutation action on X: identity and composition laws, labels λ∘τ⁻¹
    and the interchange δ^k_i(τ·x) = d_iτ · δ^k_{τ⁻¹(i)}(x).
    """
    violations = []
    for cell in X.cells:
        n = cell.dim
        perms = Permutation.all(n)
        if any((tau, cell.id) not in action for tau in perms):
            violations.append("cell " + cell.id + ": action is not defined for every permutation")
            continue
        if action[(Permutation.identity(n), cell.id)] != cell.id:
            violations.append("cell " + cell.id + ": identity does not act trivially")
        for tau in perms:
            image = action[(tau, cell.id)]
            if not X.has_cell(image):
                violations.append("cell " + cell.id + ": " + str(tau) + " maps to unknown cell " + image)
                continue
            if X.cell(image).object != cell.object.permuted(tau):
                violations.append("cell " + cell.id + ": " + str(tau) + "·" + cell.id + " = " + image + " has the wrong labels")
                continue
            for sigma in perms:
                inner = action[(sigma, cell.id)]
                if action.get((tau, inner)) != action[(tau * sigma, cell.id)]:
                    violations.append("cell " + cell.id + ": action of " + str(tau) + " after " + str(sigma) + " is not the action of their product")
            for i in range(1, n + 1):
                for k in (0, 1):
                    face = X.face(cell.id, tau.inverse()(i), k)
                    expected = action.get((induced_face_permutation(tau, i), face))
                    if X.face(image, i, k) != expected:
                        violations.append("cell " + cell.id + ": interchange fails for " + str(tau) + ", i=" + str(i) + ", k=" + str(k))
    return violations
