"""JSON text formats for states and POVMs.

Complex entries are two-element ``[real, imag]`` arrays. Parsed numbers keep
their source text, so reading and re-writing a file reproduces every numeric
token exactly as it was written.

State file::

    {
      "dims": [2, 2],
      "matrix": [
        [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
        ...
      ]
    }

POVM file::

    {
      "dim": 2,
      "elements": [
        [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
        ...
      ]
    }
"""

import json
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

import numpy as np

from .exceptions import DimensionError, PovminfoError, ValidationError
from .measure import Povm
from .qstate import DensityMatrix


class ParseError(PovminfoError):
    """Malformed input file; the message names the file and the field."""


class _Float(Decimal):
    """Decimal that remembers the token it was parsed from."""

    def __new__(cls, text):
        obj = super().__new__(cls, text)
        obj.text = text
        return obj


class _Int(int):
    def __new__(cls, text):
        obj = super().__new__(cls, text)
        obj.text = text
        return obj


def _number_text(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (_Float, _Int)):
        return x.text
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Decimal):
        return str(x)
    return repr(float(x))


def _to_float(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, Decimal, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _complex_matrix(rows, n, where):
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"{where}: expected {n} rows")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{where}[{i}]: expected {n} entries")
        for j, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError(f"{where}[{i}][{j}]: expected a [real, imag] pair")
            out[i, j] = complex(_to_float(entry[0], f"{where}[{i}][{j}][0]"),
                                _to_float(entry[1], f"{where}[{i}][{j}][1]"))
    return out


def _matrix_tokens(m):
    return [[[x.real, x.imag] for x in row] for row in np.asarray(m, dtype=complex)]


def _format_matrix(rows, indent):
    pad = " " * indent
    lines = []
    for row in rows:
        cells = ", ".join(f"[{_number_text(re)}, {_number_text(im)}]" for re, im in row)
        lines.append(f"{pad}  [{cells}]")
    return "[\n" + ",\n".join(lines) + f"\n{pad}]"


def _load_json(text, source):
    try:
        return json.loads(text, parse_float=_Float, parse_int=_Int)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _positive_int(obj, key, source):
    if key not in obj:
        raise ParseError(f"{source}: missing field '{key}'")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ParseError(f"{source}: field '{key}' must be a positive integer, got {v!r}")
    return v


@dataclass
class StateFile:
    dims: tuple
    matrix: list  # rows of [real, imag] number tokens

    @classmethod
    def parse(cls, text, source="<state>"):
        obj = _load_json(text, source)
        if not isinstance(obj, dict):
            raise ParseError(f"{source}: top level must be an object")
        dims = obj.get("dims")
        if (not isinstance(dims, list) or len(dims) != 2
                or any(isinstance(d, bool) or not isinstance(d, int) or d < 1 for d in dims)):
            raise ParseError(f"{source}: field 'dims' must be a pair of positive integers, got {dims!r}")
        if "matrix" not in obj:
            raise ParseError(f"{source}: missing field 'matrix'")
        n = dims[0] * dims[1]
        _complex_matrix(obj["matrix"], n, f"{source}: field 'matrix'")
        return cls(tuple(dims), obj["matrix"])

    @classmethod
    def from_density(cls, rho):
        return cls(tuple(rho.require_split()), _matrix_tokens(rho.mat))

    def density(self):
        n = self.dims[0] * self.dims[1]
        return DensityMatrix(_complex_matrix(self.matrix, n, "matrix"), self.dims)

    def to_text(self):
        return (
            "{\n"
            f'  "dims": [{self.dims[0]}, {self.dims[1]}],\n'
            f'  "matrix": {_format_matrix(self.matrix, 2)}\n'
            "}\n"
        )


@dataclass
class PovmFile:
    dim: int
    elements: list  # one token matrix per element

    @classmethod
    def from_obj(cls, obj, source="<povm>"):
        if not isinstance(obj, dict):
            raise ParseError(f"{source}: POVM must be an object")
        dim = _positive_int(obj, "dim", source)
        elems = obj.get("elements")
        if not isinstance(elems, list) or not elems:
            raise ParseError(f"{source}: field 'elements' must be a non-empty list")
        for k, e in enumerate(elems):
            _complex_matrix(e, dim, f"{source}: field 'elements'[{k}]")
        return cls(dim, elems)

    @classmethod
    def parse(cls, text, source="<povm>"):
        return cls.from_obj(_load_json(text, source), source)

    @classmethod
    def from_povm(cls, povm):
        return cls(povm.dim, [_matrix_tokens(m) for m in povm.elements])

    def povm(self):
        return Povm(np.array([_complex_matrix(e, self.dim, "elements") for e in self.elements]))

    def to_text(self, indent=0):
        pad = " " * indent
        elems = ",\n".join(f"{pad}    {_format_matrix(e, indent + 4)}" for e in self.elements)
        return (
            "{\n"
            f'{pad}  "dim": {self.dim},\n'
            f'{pad}  "elements": [\n{elems}\n{pad}  ]\n'
            f"{pad}}}"
        )


def _validated(build, source):
    try:
        return build()
    except (ValidationError, DimensionError) as exc:
        raise type(exc)(f"{source}: {exc}") from None


def read_state(path):
    path = Path(path)
    return _validated(StateFile.parse(path.read_text(), str(path)).density, path)


def write_state(path, rho):
    Path(path).write_text(StateFile.from_density(rho).to_text())


def read_povm(path):
    path = Path(path)
    return _validated(PovmFile.parse(path.read_text(), str(path)).povm, path)


def write_povm(path, povm):
    Path(path).write_text(PovmFile.from_povm(povm).to_text() + "\n")


def write_povm_pair(path, povm_a, povm_b):
    """Both sides of a measurement pair as ``{"povm_a": ..., "povm_b": ...}``."""
    text = (
        "{\n"
        f'  "povm_a": {PovmFile.from_povm(povm_a).to_text(2)},\n'
        f'  "povm_b": {PovmFile.from_povm(povm_b).to_text(2)}\n'
        "}\n"
    )
    Path(path).write_text(text)
