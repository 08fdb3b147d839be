"""
Scenario files: INI sections describing a field, a ring, a group and a list of tasks.

    [field]      p, deg, modulus, generator
    [ring]       vars, weights
    [group]      NAME = "[[..],[..]]" | "perm (1 2 3)(4 5)" ; copies = k ; regular = yes
    [define]     NAME = "POLY"
    [subgroups]  NAME = "word, word, ..."
    [cocycles]   NAME = "degree D; gen: POLY, ..." | "character gen: ELEM, ...; gen: ELEM, ..."
    [tasks]      KIND[ LABEL] = "PART; PART; ..."   with PART := KEY: VALUE | KEY=VALUE | VALUE

The full grammar, including polynomial and field-element expressions, is the
EBNF block under "Scenario Files" in README.md.

Every name a task mentions is resolved when the task runs, so later tasks can
use cocycles and algebras saved by earlier ones.
"""
import configparser
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.errors import PolySyntaxError, ScenarioParseError, SepAlgError, UnknownVariableError
from src.mechanics.gf import FieldCtx
from src.mechanics.group import (FiniteMatrixGroup, GroupElement, direct_sum, enumerate_group, parse_permutation,
                                 permutation_matrix, regular_representation)
from src.mechanics.mpoly import Polynomial, PolyRing
from src.mechanics.parsing import ExprParser

log = logging.getLogger(__name__)

SECTIONS = ("field", "ring", "group", "define", "subgroups", "cocycles", "tasks")
_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_OPTION_RE = re.compile(r"^\s*([^=#;\s][^=]*?)\s*=")
_KEYED_RE = re.compile(r"^\s*([A-Za-z_][\w-]*)\s*[:=]\s*(.*)$", re.S)
_ROW_RE = re.compile(r"\[([^\[\]]*)\]")


@dataclass
class TaskSpec:
    kind: str
    label: str
    text: str
    line: int

    @property
    def name(self) -> str:
        return f"{self.kind} {self.label}".strip()


@dataclass
class TaskArgs:
    """ARGS split into keyed parts and bare parts."""
    keyed: Dict[str, str]
    bare: List[str]
    line: int = 0

    @classmethod
    def parse(cls, text: str, keys: Sequence[str], line: int = 0) -> "TaskArgs":
        keyed: Dict[str, str] = {}
        bare: List[str] = []
        allowed = set(keys) | {"expect"}
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            m = _KEYED_RE.match(part)
            if m and m.group(1) in allowed:
                keyed[m.group(1)] = m.group(2).strip()
            else:
                bare.append(part)
        return cls(keyed, bare, line)

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return self.keyed.get(key, default)

    def require(self, key: str) -> str:
        if key in self.keyed:
            return self.keyed[key]
        raise ScenarioParseError(f"missing argument '{key}'", self.line)

    def integer(self, key: str, default: Optional[int] = None) -> Optional[int]:
        raw = self.keyed.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ScenarioParseError(f"argument '{key}' must be an integer, got '{raw}'", self.line) from None

    def first(self, key: Optional[str] = None) -> str:
        """The keyed value if present, else the first bare part."""
        if key and key in self.keyed:
            return self.keyed[key]
        if self.bare:
            return self.bare[0]
        raise ScenarioParseError(f"missing argument{' ' + repr(key) if key else ''}", self.line)

    @property
    def expect(self) -> Optional[str]:
        return self.keyed.get("expect")


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def split_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


@dataclass
class Scenario:
    path: str
    field: FieldCtx
    ring: PolyRing
    group: FiniteMatrixGroup
    defines: Dict[str, Polynomial] = field(default_factory=dict)
    subgroups: Dict[str, FiniteMatrixGroup] = field(default_factory=dict)
    cocycles: Dict[str, object] = field(default_factory=dict)
    algebras: Dict[str, object] = field(default_factory=dict)
    tasks: List[TaskSpec] = field(default_factory=list)
    lines: Dict[Tuple[str, str], int] = field(default_factory=dict)
    columns: Dict[Tuple[str, str], int] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return os.path.splitext(os.path.basename(self.path))[0]

    # --- resolution helpers ---
    def poly(self, text: str, line: int = 0, offset: Optional[int] = None) -> Polynomial:
        """A polynomial over the ring; [define] names may appear inside expressions.

        offset is where text starts in its file line (0-based); without it
        errors carry the line only.
        """
        ring = self.ring

        def from_name(name, pos):
            if name in self.defines:
                return self.defines[name]
            if name in ring.vars:
                return ring.var(name)
            if name == self.field.generator_name and self.field.n > 1:
                return ring.const(self.field.generator())
            raise UnknownVariableError(name, pos)

        try:
            return ExprParser(text, ring.const, from_name).parse()
        except PolySyntaxError as exc:
            if offset is None:
                raise ScenarioParseError(str(exc), line) from None
            raise ScenarioParseError(exc.reason, line, offset + exc.position + 1) from None
        except UnknownVariableError as exc:
            if offset is None or exc.position < 0:
                raise ScenarioParseError(str(exc), line) from None
            raise ScenarioParseError(f"unknown variable '{exc.name}'", line, offset + exc.position + 1) from None

    def polys(self, text: str, line: int = 0) -> List[Polynomial]:
        return [self.poly(item, line) for item in split_list(text)]

    def element(self, word: str, line: int = 0) -> GroupElement:
        """A product of generator names such as "s*t"."""
        G = self.group
        out = G.identity()
        word = word.strip()
        if word == "1":
            return out
        for name in word.split("*"):
            name = name.strip()
            if name not in G.names:
                raise ScenarioParseError(f"unknown group generator '{name}'", line)
            out = out * G.generator(name)
        return out

    def subgroup(self, name: str, line: int = 0) -> FiniteMatrixGroup:
        if name in self.subgroups:
            return self.subgroups[name]
        raise ScenarioParseError(f"unknown subgroup '{name}'", line)

    def cocycle(self, name: str, line: int = 0):
        if name in self.cocycles:
            return self.cocycles[name]
        raise ScenarioParseError(f"unknown cocycle '{name}'", line)

    def algebra(self, name: str, line: int = 0):
        if name in self.algebras:
            return self.algebras[name]
        raise ScenarioParseError(f"unknown presented algebra '{name}'", line)


# --- PARSING ---

def _scan_lines(text: str) -> Tuple[Dict[Tuple[str, str], int], Dict[Tuple[str, str], int]]:
    """File line of every (section, option), and the 0-based offset in that
    line where its value starts, past any opening quote."""
    lines: Dict[Tuple[str, str], int] = {}
    columns: Dict[Tuple[str, str], int] = {}
    section = ""
    for number, raw in enumerate(text.splitlines(), start=1):
        m = _SECTION_RE.match(raw)
        if m:
            section = m.group(1).strip()
            continue
        m = _OPTION_RE.match(raw)
        if m and section:
            key = (section, m.group(1).strip())
            if key in lines:
                continue
            lines[key] = number
            start = m.end()
            while start < len(raw) and raw[start] in " \t":
                start += 1
            columns[key] = start + 1 if raw[start:start + 1] in ("\"", "'") else start
    return lines, columns


def parse_matrix(ctx: FieldCtx, text: str, line: int = 0) -> List[List[int]]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ScenarioParseError(f"matrix must be written [[..],[..]], got '{text}'", line)
    rows = []
    for body in _ROW_RE.findall(text[1:-1]):
        try:
            rows.append([ctx.parse(x).value for x in split_list(body)])
        except SepAlgError as exc:
            raise ScenarioParseError(f"bad matrix entry in '{body}': {exc}", line) from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ScenarioParseError("matrix must be square", line)
    return rows


def _parse_modulus(p: int, text: str, generator: str, line: int) -> Tuple[int, ...]:
    base = FieldCtx(p, generator_name="_")
    ring = PolyRing(base, [generator], reserved_ok=True)
    try:
        poly = ring.parse(text)
    except SepAlgError as exc:
        raise ScenarioParseError(f"bad modulus '{text}': {exc}", line) from None
    coeffs = [0] * (poly.degree() + 1)
    for (k,), c in poly.coeffs.items():
        coeffs[k] = c
    return tuple(coeffs)


def _field(parser: configparser.ConfigParser, lines) -> FieldCtx:
    if not parser.has_section("field"):
        raise ScenarioParseError("missing [field] section")
    sec = parser["field"]
    try:
        p = int(_unquote(sec.get("p", "")))
        n = int(_unquote(sec.get("deg", "1")))
    except ValueError:
        raise ScenarioParseError("p and deg must be integers", lines.get(("field", "p"), 0)) from None
    generator = _unquote(sec.get("generator", "w"))
    modulus = None
    if "modulus" in sec:
        modulus = _parse_modulus(p, _unquote(sec["modulus"]), generator, lines.get(("field", "modulus"), 0))
    return FieldCtx(p, n, modulus, generator)


def _ring(parser, ctx: FieldCtx, lines) -> PolyRing:
    if not parser.has_section("ring"):
        raise ScenarioParseError("missing [ring] section")
    sec = parser["ring"]
    names = split_list(_unquote(sec.get("vars", "")))
    weights = None
    if "weights" in sec:
        try:
            weights = [int(w) for w in split_list(_unquote(sec["weights"]))]
        except ValueError:
            raise ScenarioParseError("weights must be integers", lines.get(("ring", "weights"), 0)) from None
    try:
        return PolyRing(ctx, names, weights=weights)
    except SepAlgError as exc:
        raise ScenarioParseError(str(exc), lines.get(("ring", "vars"), 0)) from None


def _group(parser, ctx: FieldCtx, ring: PolyRing, lines) -> FiniteMatrixGroup:
    if not parser.has_section("group"):
        return FiniteMatrixGroup(ctx, [], dim=ring.nvars)
    sec = parser["group"]
    names, matrices, perms = [], [], []
    copies = 1
    regular = _unquote(sec.get("regular", "no")).lower() in ("yes", "true", "1")
    for key, raw in sec.items():
        value = _unquote(raw)
        line = lines.get(("group", key), 0)
        if key == "copies":
            copies = int(value)
        elif key == "regular":
            continue
        elif value.startswith("perm"):
            names.append(key)
            perms.append(parse_permutation(value[4:], ring.nvars if not regular else None))
        else:
            names.append(key)
            matrices.append(parse_matrix(ctx, value, line))
    if perms and matrices:
        raise ScenarioParseError("mix of permutation and matrix generators", lines.get(("group", names[0]), 0))
    if regular:
        G = regular_representation(ctx, perms, names)
    elif perms:
        G = enumerate_group(ctx, [permutation_matrix(p) for p in perms], names)
    else:
        G = enumerate_group(ctx, matrices, names, dim=None if matrices else ring.nvars)
    if copies > 1:
        G = direct_sum(G, copies)
    return G


def _assignments(G: FiniteMatrixGroup, body: str, line: int) -> Dict[str, str]:
    out = {}
    for item in split_list(body):
        gen, sep, val = item.partition(":")
        if not sep or gen.strip() not in G.names:
            raise ScenarioParseError(f"expected 'generator: value', got '{item}'", line)
        out[gen.strip()] = val.strip()
    return out


def parse_module(scenario: Scenario, head: str, line: int = 0):
    """ "degree D" or "character gen: ELEM, ..." as a coefficient module."""
    from src.mechanics.cohomology import CoefficientModule
    G = scenario.group
    head = head.strip()
    if head.startswith("degree"):
        try:
            degree = int(head.split()[1])
        except (IndexError, ValueError):
            raise ScenarioParseError(f"bad degree in '{head}'", line) from None
        return CoefficientModule.graded(G, scenario.ring, degree)
    if head.startswith("character"):
        chars = _assignments(G, head[len("character"):], line)
        return CoefficientModule.from_character(G, [scenario.field.parse(chars.get(g, "1")).value for g in G.names])
    raise ScenarioParseError(f"module must start with 'degree' or 'character', got '{head}'", line)


def _cocycle(scenario: Scenario, name: str, text: str, line: int):
    from src.mechanics.cohomology import Cocycle1
    G = scenario.group
    head, _, tail = text.partition(";")
    module = parse_module(scenario, head, line)
    values = _assignments(G, tail, line)
    gen_values = []
    for gen in G.names:
        if module.kind == "character":
            gen_values.append(module.parse_value(values.get(gen, "0")))
            continue
        f = scenario.poly(values.get(gen, "0"), line)
        if not f.is_zero() and (not f.is_homogeneous() or f.degree() != module.degree):
            raise ScenarioParseError(f"value {f} of '{name}' at {gen} is not homogeneous of degree {module.degree}", line)
        gen_values.append(module.piece.vector(f))
    cocycle = Cocycle1.from_generators(module, gen_values)
    cocycle.verify()
    return cocycle


def parse_scenario_text(text: str, path: str = "<scenario>") -> Scenario:
    parser = configparser.ConfigParser(delimiters=("=",), interpolation=None, strict=True)
    parser.optionxform = str
    try:
        parser.read_string(text, source=path)
    except configparser.DuplicateOptionError as exc:
        raise ScenarioParseError(f"duplicate entry '{exc.option}' in [{exc.section}]", exc.lineno or 0) from None
    except configparser.DuplicateSectionError as exc:
        raise ScenarioParseError(f"duplicate section [{exc.section}]", exc.lineno or 0) from None
    except configparser.Error as exc:
        raise ScenarioParseError(str(exc).splitlines()[0], getattr(exc, "lineno", 0) or 0) from None
    for section in parser.sections():
        if section not in SECTIONS:
            raise ScenarioParseError(f"unknown section [{section}]")
    lines, columns = _scan_lines(text)

    ctx = _field(parser, lines)
    ring = _ring(parser, ctx, lines)
    try:
        G = _group(parser, ctx, ring, lines)
    except ScenarioParseError:
        raise
    except (SepAlgError, ValueError) as exc:
        raise ScenarioParseError(f"group: {exc}", lines.get(("group", next(iter(parser["group"]), "")), 0)) from None
    scenario = Scenario(path, ctx, ring, G, lines=lines, columns=columns)

    if parser.has_section("define"):
        for key, raw in parser["define"].items():
            scenario.defines[key] = scenario.poly(_unquote(raw), lines.get(("define", key), 0),
                                                  columns.get(("define", key)))
    if parser.has_section("subgroups"):
        for key, raw in parser["subgroups"].items():
            line = lines.get(("subgroups", key), 0)
            words = split_list(_unquote(raw))
            scenario.subgroups[key] = G.subgroup([scenario.element(w, line) for w in words], words)
    if parser.has_section("cocycles"):
        for key, raw in parser["cocycles"].items():
            scenario.cocycles[key] = _cocycle(scenario, key, _unquote(raw), lines.get(("cocycles", key), 0))
    if parser.has_section("tasks"):
        for key, raw in parser["tasks"].items():
            kind, _, label = key.partition(" ")
            scenario.tasks.append(TaskSpec(kind.strip(), label.strip(), _unquote(raw), lines.get(("tasks", key), 0)))
    log.debug("📄 parsed %s: %d tasks, group of order %d", path, len(scenario.tasks), G.order)
    return scenario


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario_text(text, path)
