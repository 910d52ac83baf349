"""Line-based text formats for every structure that crosses a file boundary.

All formats share the same skeleton: UTF-8, one directive per line,
``#`` starts a comment, blank lines ignored.  Rationals are serialized
``p/q``.  Serializers emit a canonical form (stable element order,
sorted covers and atoms) so outputs are byte-diffable.

System and kernel files reference their poset and measure files by
path, resolved relative to the referencing file.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .cftp import Kernel, kernel
from .coupling import (
    Coupling,
    InfeasibilityCertificate,
    MeasureSystem,
    measure_system,
)
from .errors import ParseError
from .measure import RationalMeasure, rational_measure
from .poset import Poset, covers, validate_poset
from .synchronize import CellPermutation

Lines = list[tuple[int, list[str]]]


def _read_lines(path: Path) -> Lines:
    out: Lines = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(str(path), 0, f"cannot read file: {e}") from e
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _fraction(path: Path, lineno: int, token: str) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(str(path), lineno, f"bad rational {token!r}") from e
    return value


def _frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _args(path: Path, lineno: int, parts: list[str], n: int) -> list[str]:
    if len(parts) - 1 != n:
        raise ParseError(str(path), lineno,
                         f"{parts[0]} takes {n} argument(s), got {len(parts) - 1}")
    return parts[1:]


def parse_poset(path: str | Path) -> Poset:
    path = Path(path)
    elements: list[str] = []
    pairs: list[tuple[str, str]] = []
    for lineno, parts in _read_lines(path):
        if parts[0] == "element":
            (name,) = _args(path, lineno, parts, 1)
            elements.append(name)
        elif parts[0] in ("cover", "leq"):
            lo, hi = _args(path, lineno, parts, 2)
            pairs.append((lo, hi))
        else:
            raise ParseError(str(path), lineno,
                             f"unknown directive {parts[0]!r}")
    return validate_poset(elements, pairs)


def serialize_poset(poset: Poset) -> str:
    lines = [f"element {x}" for x in poset.elements]
    lines += [f"cover {a} {b}" for a, b in covers(poset)]
    return "\n".join(lines) + "\n"


def parse_measures(path: str | Path, poset: Poset,
                   ) -> dict[str, RationalMeasure]:
    """Labeled measures over the poset's ground set; absent masses are zero."""
    path = Path(path)
    raw: dict[str, dict[str, Fraction]] = {}
    label: str | None = None
    for lineno, parts in _read_lines(path):
        if parts[0] == "measure":
            (label,) = _args(path, lineno, parts, 1)
            if label in raw:
                raise ParseError(str(path), lineno,
                                 f"duplicate measure label {label!r}")
            raw[label] = {}
        elif parts[0] == "mass":
            el, frac = _args(path, lineno, parts, 2)
            if label is None:
                raise ParseError(str(path), lineno,
                                 "mass line before any measure header")
            if el in raw[label]:
                raise ParseError(str(path), lineno,
                                 f"duplicate mass for {el!r} in {label!r}")
            raw[label][el] = _fraction(path, lineno, frac)
        else:
            raise ParseError(str(path), lineno,
                             f"unknown directive {parts[0]!r}")
    return {
        lbl: rational_measure(poset.elements, masses)
        for lbl, masses in raw.items()
    }


def serialize_measures(measures: Mapping[str, RationalMeasure],
                       order: Sequence[str] | None = None) -> str:
    """Canonical form: support masses only, in the given element order
    (an extension order when one is in play, else the domain order)."""
    lines: list[str] = []
    for label, measure in measures.items():
        lines.append(f"measure {label}")
        els = order if order is not None else measure.domain()
        for x in els:
            if measure.of(x) > 0:
                lines.append(f"mass {x} {_frac_str(measure.of(x))}")
    return "\n".join(lines) + "\n"


def _parse_bindings(path: Path, want_index: bool):
    path = Path(path)
    index_ref: tuple[int, str] | None = None
    states_ref: tuple[int, str] | None = None
    measure_refs: list[str] = []
    assigns: list[tuple[int, str, str]] = []
    for lineno, parts in _read_lines(path):
        if parts[0] == "index" and want_index:
            (ref,) = _args(path, lineno, parts, 1)
            if index_ref is not None:
                raise ParseError(str(path), lineno, "duplicate index line")
            index_ref = (lineno, ref)
        elif parts[0] == "states":
            (ref,) = _args(path, lineno, parts, 1)
            if states_ref is not None:
                raise ParseError(str(path), lineno, "duplicate states line")
            states_ref = (lineno, ref)
        elif parts[0] == "measures":
            (ref,) = _args(path, lineno, parts, 1)
            measure_refs.append(ref)
        elif parts[0] == "assign":
            alpha, label = _args(path, lineno, parts, 2)
            assigns.append((lineno, alpha, label))
        else:
            raise ParseError(str(path), lineno,
                             f"unknown directive {parts[0]!r}")
    if want_index and index_ref is None:
        raise ParseError(str(path), 0, "missing index line")
    if states_ref is None:
        raise ParseError(str(path), 0, "missing states line")
    if not measure_refs:
        raise ParseError(str(path), 0, "missing measures line")

    base = path.parent
    state_poset = parse_poset(base / states_ref[1])
    labeled: dict[str, RationalMeasure] = {}
    for ref in measure_refs:
        batch = parse_measures(base / ref, state_poset)
        dup = set(batch) & set(labeled)
        if dup:
            raise ParseError(str(path), 0,
                             f"measure labels defined twice: {sorted(dup)}")
        labeled.update(batch)

    bound: dict[str, RationalMeasure] = {}
    for lineno, alpha, label in assigns:
        if label not in labeled:
            raise ParseError(str(path), lineno,
                             f"assign references unknown measure {label!r}")
        if alpha in bound:
            raise ParseError(str(path), lineno,
                             f"duplicate assign for {alpha!r}")
        bound[alpha] = labeled[label]

    index_poset = parse_poset(base / index_ref[1]) if want_index else state_poset
    return index_poset, state_poset, bound


def parse_system(path: str | Path) -> MeasureSystem:
    index_poset, state_poset, bound = _parse_bindings(Path(path), True)
    return measure_system(index_poset, state_poset, bound)


def serialize_system(index_ref: str, states_ref: str,
                     measure_refs: Sequence[str],
                     assigns: Mapping[str, str]) -> str:
    lines = [f"index {index_ref}", f"states {states_ref}"]
    lines += [f"measures {ref}" for ref in measure_refs]
    lines += [f"assign {a} {lbl}" for a, lbl in assigns.items()]
    return "\n".join(lines) + "\n"


def parse_kernel(path: str | Path) -> Kernel:
    """Kernel files are system files without an index line: the rows are
    indexed by the state poset itself."""
    _, state_poset, bound = _parse_bindings(Path(path), False)
    return kernel(state_poset, bound)


def serialize_kernel(states_ref: str, measure_refs: Sequence[str],
                     assigns: Mapping[str, str]) -> str:
    lines = [f"states {states_ref}"]
    lines += [f"measures {ref}" for ref in measure_refs]
    lines += [f"assign {x} {lbl}" for x, lbl in assigns.items()]
    return "\n".join(lines) + "\n"


def parse_coupling(path: str | Path,
                   index_order: Sequence[str]) -> Coupling:
    path = Path(path)
    atoms: dict[tuple[str, ...], Fraction] = {}
    for lineno, parts in _read_lines(path):
        if parts[0] != "atom":
            raise ParseError(str(path), lineno,
                             f"unknown directive {parts[0]!r}")
        tup_str, frac = _args(path, lineno, parts, 2)
        tup = tuple(tup_str.split(","))
        if len(tup) != len(index_order):
            raise ParseError(str(path), lineno,
                             f"atom has {len(tup)} states, "
                             f"expected {len(index_order)}")
        if tup in atoms:
            raise ParseError(str(path), lineno, f"duplicate atom {tup_str!r}")
        atoms[tup] = _fraction(path, lineno, frac)
    total = sum(atoms.values(), Fraction(0))
    if total != 1:
        raise ParseError(str(path), 0, f"atom weights sum to {total}, not 1")
    return Coupling(tuple(index_order), atoms)


def serialize_coupling(coupling: Coupling) -> str:
    lines = [
        f"atom {','.join(tup)} {_frac_str(w)}"
        for tup, w in sorted(coupling.atoms.items())
    ]
    return "\n".join(lines) + "\n"


def parse_phi(path: str | Path) -> CellPermutation:
    path = Path(path)
    L: int | None = None
    images: dict[int, int] = {}
    for lineno, parts in _read_lines(path):
        if parts[0] == "cells":
            (tok,) = _args(path, lineno, parts, 1)
            if L is not None:
                raise ParseError(str(path), lineno, "duplicate cells line")
            if not tok.isdigit() or int(tok) == 0:
                raise ParseError(str(path), lineno, f"bad grid size {tok!r}")
            L = int(tok)
        elif parts[0] == "map":
            i_tok, j_tok = _args(path, lineno, parts, 2)
            if not (i_tok.isdigit() and j_tok.isdigit()):
                raise ParseError(str(path), lineno, "map arguments must be cells")
            i, j = int(i_tok), int(j_tok)
            if i in images:
                raise ParseError(str(path), lineno, f"duplicate map for cell {i}")
            images[i] = j
        else:
            raise ParseError(str(path), lineno,
                             f"unknown directive {parts[0]!r}")
    if L is None:
        raise ParseError(str(path), 0, "missing cells line")
    if set(images) != set(range(L)):
        raise ParseError(str(path), 0, "map lines do not cover every cell once")
    return CellPermutation(L, tuple(images[i] for i in range(L)))


def serialize_phi(phi: CellPermutation) -> str:
    lines = [f"cells {phi.L}"]
    lines += [f"map {i} {phi.perm[i]}" for i in range(phi.L)]
    return "\n".join(lines) + "\n"


def parse_certificate(path: str | Path) -> InfeasibilityCertificate:
    path = Path(path)
    dual: dict[tuple[str, str], Fraction] = {}
    gap: Fraction | None = None
    for lineno, parts in _read_lines(path):
        if parts[0] == "dual":
            alpha, state, frac = _args(path, lineno, parts, 3)
            if (alpha, state) in dual:
                raise ParseError(str(path), lineno,
                                 f"duplicate dual entry {alpha} {state}")
            dual[(alpha, state)] = _fraction(path, lineno, frac)
        elif parts[0] == "gap":
            (frac,) = _args(path, lineno, parts, 1)
            if gap is not None:
                raise ParseError(str(path), lineno, "duplicate gap line")
            gap = _fraction(path, lineno, frac)
        else:
            raise ParseError(str(path), lineno,
                             f"unknown directive {parts[0]!r}")
    if gap is None:
        raise ParseError(str(path), 0, "missing gap line")
    return InfeasibilityCertificate(dual, gap)


def serialize_certificate(certificate: InfeasibilityCertificate) -> str:
    lines = [
        f"dual {alpha} {state} {_frac_str(w)}"
        for (alpha, state), w in sorted(certificate.dual.items())
    ]
    lines.append(f"gap {_frac_str(certificate.gap)}")
    return "\n".join(lines) + "\n"
