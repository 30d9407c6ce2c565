"""Parser for the measure mini-language.

Grammar (no whitespace anywhere)::

    spec     := "lebesgue"
              | "powerweight:s=" decimal
              | "atoms:[" atom ("," atom)* "]"
              | "counterexample:K=" int
    atom     := "(" decimal "," decimal ")"          position, mass
    decimal  := [+-]? (digits ("." digits?)? | "." digits) ([eE] [+-]? digits)?
    int      := digits
"""

from __future__ import annotations

import re

from .measure import AtomList, DiskDensityMeasure, Lebesgue, PowerWeight

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")


class MeasureSpecError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class _Cursor:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def expect(self, literal):
        if not self.text.startswith(literal, self.pos):
            at = self.pos
            while at - self.pos < len(literal) and at < len(self.text) \
                    and self.text[at] == literal[at - self.pos]:
                at += 1
            raise MeasureSpecError(f"expected {literal!r}", self.text, at)
        self.pos += len(literal)

    def match(self, pattern, what):
        m = pattern.match(self.text, self.pos)
        if not m:
            raise MeasureSpecError(f"expected {what}", self.text, self.pos)
        self.pos = m.end()
        return m.group(0)

    def end(self):
        if self.pos != len(self.text):
            raise MeasureSpecError("unexpected trailing text", self.text, self.pos)


def parse_measure(text: str):
    """Parse a spec string into a radial measure or a disk density measure."""
    cur = _Cursor(text)
    if text == "lebesgue":
        return Lebesgue()
    if text.startswith("powerweight:"):
        cur.expect("powerweight:s=")
        start = cur.pos
        s = float(cur.match(_DECIMAL, "a decimal exponent"))
        cur.end()
        try:
            return PowerWeight(s)
        except ValueError as exc:
            raise MeasureSpecError(str(exc), text, start) from None
    if text.startswith("atoms:"):
        cur.expect("atoms:[")
        atoms = []
        while True:
            start = cur.pos
            cur.expect("(")
            t = float(cur.match(_DECIMAL, "an atom position"))
            cur.expect(",")
            m = float(cur.match(_DECIMAL, "an atom mass"))
            cur.expect(")")
            try:
                AtomList(((t, m),))
            except ValueError as exc:
                raise MeasureSpecError(str(exc), text, start) from None
            atoms.append((t, m))
            if text.startswith("]", cur.pos):
                cur.pos += 1
                break
            cur.expect(",")
        cur.end()
        return AtomList(tuple(atoms))
    if text.startswith("counterexample:"):
        cur.expect("counterexample:K=")
        start = cur.pos
        K = int(cur.match(_INT, "an integer K"))
        cur.end()
        if not 1 <= K <= 20:
            raise MeasureSpecError(f"K must lie in 1..20, got {K}", text, start)
        return DiskDensityMeasure.counterexample(K)
    raise MeasureSpecError("unknown measure kind (expected lebesgue, powerweight:, "
                           "atoms: or counterexample:)", text, 0)
