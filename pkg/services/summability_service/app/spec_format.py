"""
Текстовый формат файла анализа (построчный, см. docs/SPEC_FORMAT.md).

    SPACE 2
    PAIR p: 0 q: n
    SET cubes = POW(3)
    SEQ z = (0, n^2) if cubes; (0, n^-2)
    CERT zc decrease dominator=z set=NOT(cubes)
    TASK t1 check cert=zc

Ошибки разбора - SpecSyntaxError с номером строки и столбца. Ссылки на
имена разрешаются только назад: объявление должно стоять выше.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from typing import Any

from .certificates import Certificate, DecreaseCert, DStatOrderCert, OrderConvCert
from .deferred_pairs import DeferredPair, IndexRule, validate_pair
from .errors import SpecSyntaxError, SummabilityError
from .index_sets import ALL, EMPTY, AP, Complement, Finite, IndexSet, Intersection, PowerImage, Union
from .riesz import LatticeVector
from .sequences import Piece, RuleSequence
from .terms import parse_term
from .theorems import LatticeOp

logger = getLogger(__name__)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"-?\d+")
_PAIR_RE = re.compile(r"p:\s*(?P<p>.+?)\s+q:\s*(?P<q>.+?)\s*$")
RESERVED = frozenset({"ALL", "EMPTY", "FIN", "AP", "POW", "NOT", "AND", "OR", "if"})


# ---------------------------------------------------------------------------
# Модель разобранного файла
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertSpec:
    kind: str  # decrease | order | dstat
    params: tuple[tuple[str, Any], ...]

    @property
    def args(self) -> dict[str, Any]:
        return dict(self.params)


@dataclass(frozen=True)
class TaskSpec:
    id: str
    op: str
    params: tuple[tuple[str, Any], ...]
    line: int = field(default=0, compare=False)

    @property
    def args(self) -> dict[str, Any]:
        return dict(self.params)


@dataclass(frozen=True)
class AnalysisSpec:
    dim: int
    pair: DeferredPair
    sets: dict[str, IndexSet] = field(default_factory=dict)
    sequences: dict[str, RuleSequence] = field(default_factory=dict)
    certificates: dict[str, CertSpec] = field(default_factory=dict)
    tasks: tuple[TaskSpec, ...] = ()

    def certificate(self, name: str) -> Certificate:
        return build_certificate(self.certificates[name], self.sequences, self.pair)


def _cert_pair(args: dict[str, Any], default: DeferredPair) -> DeferredPair:
    if "p" in args:
        return validate_pair(args["p"], args["q"])
    return default


def build_certificate(cert: CertSpec, sequences: dict[str, RuleSequence], pair: DeferredPair) -> Certificate:
    args = cert.args
    if cert.kind == "decrease":
        return DecreaseCert(sequences[args["dominator"]], args["set"], _cert_pair(args, pair))
    if cert.kind == "order":
        return OrderConvCert(sequences[args["seq"]], args["limit"], sequences[args["dominator"]])
    return DStatOrderCert(
        sequences[args["seq"]],
        args["limit"],
        sequences[args["dominator"]],
        args["set"],
        _cert_pair(args, pair),
        args.get("dominator_set"),
    )


# ---------------------------------------------------------------------------
# Сигнатуры: какие ключи принимает каждая запись
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    required: tuple[tuple[str, str], ...]
    optional: tuple[tuple[str, str], ...] = ()

    def kinds(self) -> dict[str, str]:
        return dict(self.required + self.optional)

    def order(self) -> list[str]:
        return [key for key, _ in self.required + self.optional]


_PAIR_KEYS = (("p", "rule"), ("q", "rule"))

CERT_SIGNATURES = {
    "decrease": Signature((("dominator", "seq"), ("set", "set")), _PAIR_KEYS),
    "order": Signature((("seq", "seq"), ("limit", "vector"), ("dominator", "seq"))),
    "dstat": Signature(
        (("seq", "seq"), ("limit", "vector"), ("dominator", "seq"), ("set", "set")),
        (("dominator_set", "set"),) + _PAIR_KEYS,
    ),
}

TASK_SIGNATURES = {
    "density": Signature((("set", "set"),)),
    "cesaro": Signature((("seq", "seq"), ("n", "int"))),
    "strong": Signature((("seq", "seq"), ("limit", "rational")), (("coordinate", "int"), ("tol", "rational"))),
    "real_stat": Signature(
        (("seq", "seq"), ("limit", "rational"), ("eps", "rational")), (("coordinate", "int"),)
    ),
    "check": Signature((("cert", "cert"),)),
    "statistical": Signature((("cert", "dstat"),)),
    "linear": Signature((("a", "dstat"), ("b", "dstat"), ("lambda", "rational"), ("mu", "rational"))),
    "decrease_sum": Signature(
        (("a", "decrease"), ("b", "decrease"), ("lambda", "rational"), ("mu", "rational"))
    ),
    "lattice": Signature((("op", "op"), ("a", "dstat")), (("b", "dstat"),)),
    "unique": Signature((("a", "dstat"), ("b", "dstat"))),
    "monotone": Signature((("cert", "dstat"),)),
    "subsequence": Signature((("cert", "dstat"), ("set", "set"))),
    "stat_to_deferred": Signature((("cert", "dstat"),) + _PAIR_KEYS),
    "refine": Signature((("cert", "dstat"),) + _PAIR_KEYS),
    "ideal": Signature((("cert", "dstat"), ("support", "support"))),
    "null_transfer": Signature((("seq", "seq"), ("cert", "dstat"))),
    "dominator_transfer": Signature((("cert", "dstat"), ("dominator", "seq")), (("set", "set"),)),
    "order_preservation": Signature((("a", "dstat"), ("b", "dstat"))),
    "positive_cone": Signature((("cert", "dstat"),)),
    "decrease_subset": Signature((("cert", "decrease"), ("set", "set"))),
    "member": Signature((("seq", "seq"), ("dominator", "seq"), ("limits", "vectors")), (("set", "set"),)),
    "falsify": Signature((("seq", "seq"), ("limit", "vector"))),
    "oscillating_example": Signature(()),
}

TASK_CATEGORIES = {
    "density": frozenset({"density"}),
    "cesaro": frozenset({"cesaro", "strong", "real_stat"}),
    "member": frozenset({"member"}),
    "falsify": frozenset({"falsify", "oscillating_example"}),
}
TASK_CATEGORIES["check"] = frozenset(TASK_SIGNATURES) - frozenset().union(*TASK_CATEGORIES.values())


# ---------------------------------------------------------------------------
# Разбор множеств индексов
# ---------------------------------------------------------------------------

class _SetParser:
    """ALL | EMPTY | FIN(a,...) | AP(c,r) | POW(e) | NOT(s) | AND(s,...) | OR(s,...) | имя."""

    def __init__(self, text: str, line: int, offset: int, names: dict[str, IndexSet]):
        self.text = text
        self.line = line
        self.offset = offset
        self.names = names
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> SpecSyntaxError:
        return SpecSyntaxError(message, self.line, self.offset + (self.pos if pos is None else pos) + 1)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _expect(self, char: str) -> None:
        self._skip()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            raise self.error(f"Expected {char!r} in index set")
        self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _int(self) -> int:
        self._skip()
        match = _INT_RE.match(self.text, self.pos)
        if match is None:
            raise self.error("Expected an integer in index set")
        self.pos = match.end()
        return int(match.group())

    def _ints(self) -> list[int]:
        self._expect("(")
        values = []
        if self._peek() != ")":
            values.append(self._int())
            while self._peek() == ",":
                self.pos += 1
                values.append(self._int())
        self._expect(")")
        return values

    def _sets(self) -> list[IndexSet]:
        self._expect("(")
        items = [self._set()]
        while self._peek() == ",":
            self.pos += 1
            items.append(self._set())
        self._expect(")")
        return items

    def _set(self) -> IndexSet:
        self._skip()
        start = self.pos
        match = _NAME_RE.match(self.text, self.pos)
        if match is None:
            raise self.error("Expected an index set")
        word = match.group()
        self.pos = match.end()
        try:
            if word == "ALL":
                return ALL
            if word == "EMPTY":
                return EMPTY
            if word == "FIN":
                return Finite(tuple(self._ints()))
            if word == "AP":
                args = self._ints()
                if len(args) != 2:
                    raise self.error("AP takes a modulus and a residue", start)
                return AP(*args)
            if word == "POW":
                args = self._ints()
                if len(args) != 1:
                    raise self.error("POW takes one exponent", start)
                return PowerImage(args[0])
            if word == "NOT":
                items = self._sets()
                if len(items) != 1:
                    raise self.error("NOT takes one index set", start)
                return Complement(items[0])
            if word in ("AND", "OR"):
                items = self._sets()
                if len(items) < 2:
                    raise self.error(f"{word} takes at least two index sets", start)
                node = Intersection if word == "AND" else Union
                result = items[0]
                for item in items[1:]:
                    result = node(result, item)
                return result
        except SpecSyntaxError:
            raise
        except SummabilityError as exc:
            raise self.error(str(exc), start) from exc
        if word not in self.names:
            raise self.error(f"Unknown index set {word!r}", start)
        return self.names[word]

    def parse(self) -> IndexSet:
        result = self._set()
        if self._peek():
            raise self.error(f"Unexpected {self._peek()!r} after index set")
        return result


def parse_index_set(text: str, names: dict[str, IndexSet] | None = None, line: int = 1, offset: int = 0) -> IndexSet:
    return _SetParser(text, line, offset, names or {}).parse()


# ---------------------------------------------------------------------------
# Лексика строк
# ---------------------------------------------------------------------------

def _split_top(text: str, sep: str) -> list[tuple[str, int]]:
    """Разбиение по sep вне скобок; возвращает (часть, смещение начала)."""
    parts, depth, start = [], 0, 0
    for i, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        elif char == sep and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return parts


def _tokens(text: str, offset: int, line: int) -> list[tuple[str, int]]:
    """Слова через пробел; скобки склеивают пробелы внутри себя."""
    out, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        start, depth = i, 0
        while i < len(text) and (depth > 0 or not text[i].isspace()):
            if text[i] == "(":
                depth += 1
            elif text[i] == ")":
                depth -= 1
            i += 1
        if depth != 0:
            raise SpecSyntaxError("Unbalanced parentheses", line, offset + start + 1)
        out.append((text[start:i], offset + start + 1))
    return out


def _strip(text: str) -> tuple[str, int]:
    """Обрезанный текст и число съеденных слева символов."""
    stripped = text.lstrip()
    return stripped.rstrip(), len(text) - len(stripped)


@dataclass
class _State:
    dim: int | None = None
    pair: DeferredPair | None = None
    sets: dict[str, IndexSet] = field(default_factory=dict)
    sequences: dict[str, RuleSequence] = field(default_factory=dict)
    certificates: dict[str, CertSpec] = field(default_factory=dict)
    cert_kinds: dict[str, str] = field(default_factory=dict)
    tasks: list[TaskSpec] = field(default_factory=list)

    def taken(self, name: str) -> bool:
        return name in self.sets or name in self.sequences or name in self.certificates


class _SpecParser:
    def __init__(self, text: str):
        self.text = text
        self.state = _State()
        self.line = 0

    def error(self, message: str, column: int = 1) -> SpecSyntaxError:
        return SpecSyntaxError(message, self.line, column)

    # --- значения -------------------------------------------------------

    def _vector(self, text: str, column: int) -> LatticeVector:
        if not (text.startswith("(") and text.endswith(")")):
            raise self.error("Expected a vector like (0, 1/2)", column)
        try:
            coords = [Fraction(part.strip()) for part, _ in _split_top(text[1:-1], ",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(f"Bad rational in vector {text}", column) from exc
        if len(coords) != self.state.dim:
            raise self.error(f"Vector {text} has {len(coords)} coordinates, expected {self.state.dim}", column)
        return LatticeVector(tuple(coords))

    def _value(self, kind: str, text: str, column: int) -> Any:
        state = self.state
        if kind == "seq":
            if text not in state.sequences:
                raise self.error(f"Unknown sequence {text!r}", column)
            return text
        if kind in ("cert", "dstat", "decrease"):
            if text not in state.certificates:
                raise self.error(f"Unknown certificate {text!r}", column)
            actual = state.cert_kinds[text]
            if kind != "cert" and actual != kind:
                raise self.error(f"Certificate {text!r} is {actual}, expected {kind}", column)
            return text
        if kind == "set":
            return parse_index_set(text, state.sets, self.line, column - 1)
        if kind == "vector":
            return self._vector(text, column)
        if kind == "vectors":
            return tuple(self._vector(part.strip(), column + start) for part, start in _split_top(text, "|"))
        if kind == "rational":
            try:
                return Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise self.error(f"Bad rational {text!r}", column) from exc
        if kind == "int":
            if not _INT_RE.fullmatch(text) or int(text) < 1:
                raise self.error(f"Expected a positive integer, got {text!r}", column)
            return int(text)
        if kind == "rule":
            try:
                return IndexRule.parse(text)
            except ValueError as exc:
                raise self.error(str(exc), column) from exc
        if kind == "support":
            parts = text.split(",") if text else []
            if not all(_INT_RE.fullmatch(p.strip()) for p in parts):
                raise self.error(f"Expected coordinates like 1,2 got {text!r}", column)
            support = tuple(sorted({int(p) for p in parts}))
            bad = [i for i in support if not 1 <= i <= state.dim]
            if bad:
                raise self.error(f"Support index {bad[0]} out of range 1..{state.dim}", column)
            return support
        if kind == "op":
            try:
                return LatticeOp(text)
            except ValueError as exc:
                raise self.error(f"Unknown lattice operation {text!r}", column) from exc
        raise AssertionError(kind)

    def _params(self, signature: Signature, tokens: list[tuple[str, int]], what: str) -> tuple:
        kinds = signature.kinds()
        found: dict[str, Any] = {}
        for token, column in tokens:
            key, sep, value = token.partition("=")
            if not sep:
                raise self.error(f"Expected key=value, got {token!r}", column)
            if key not in kinds:
                raise self.error(f"Unknown key {key!r} for {what}", column)
            if key in found:
                raise self.error(f"Duplicate key {key!r}", column)
            found[key] = self._value(kinds[key], value, column + len(key) + 1)
        missing = [key for key, _ in signature.required if key not in found]
        if missing:
            raise self.error(f"Missing key {missing[0]!r} for {what}")
        if ("p" in found) != ("q" in found):
            raise self.error("Keys p and q must be given together")
        if "p" in found:
            self._pair(found["p"], found["q"])
        return tuple((key, found[key]) for key in signature.order() if key in found)

    def _pair(self, p: IndexRule, q: IndexRule, column: int = 1) -> DeferredPair:
        try:
            return validate_pair(p, q)
        except SummabilityError as exc:
            raise self.error(str(exc), column) from exc

    def _name(self, text: str, column: int) -> str:
        if not _NAME_RE.fullmatch(text) or text in RESERVED:
            raise self.error(f"Bad name {text!r}", column)
        if self.state.taken(text):
            raise self.error(f"Name {text!r} is already declared", column)
        return text

    # --- записи ---------------------------------------------------------

    def _space(self, rest: str, column: int) -> None:
        if self.state.dim is not None:
            raise self.error("SPACE declared twice")
        if not _INT_RE.fullmatch(rest) or int(rest) < 1:
            raise self.error("SPACE needs a positive dimension", column)
        self.state.dim = int(rest)

    def _pair_line(self, rest: str, column: int) -> None:
        if self.state.pair is not None:
            raise self.error("PAIR declared twice")
        match = _PAIR_RE.match(rest)
        if match is None:
            raise self.error("PAIR needs the form 'p: <rule> q: <rule>'", column)
        try:
            p, q = IndexRule.parse(match.group("p")), IndexRule.parse(match.group("q"))
        except ValueError as exc:
            raise self.error(str(exc), column) from exc
        self.state.pair = self._pair(p, q, column)

    def _definition(self, rest: str, column: int) -> tuple[str, str, int]:
        name_part, sep, body = rest.partition("=")
        if not sep:
            raise self.error("Expected 'name = ...'", column)
        name, _ = _strip(name_part)
        body_text, shift = _strip(body)
        return self._name(name, column), body_text, column + len(name_part) + 1 + shift

    def _set_line(self, rest: str, column: int) -> None:
        name, body, body_col = self._definition(rest, column)
        self.state.sets[name] = parse_index_set(body, self.state.sets, self.line, body_col - 1)

    def _piece(self, text: str, column: int) -> Piece:
        match = re.search(r"\sif\s", text)
        depth_ok = match is not None and text[: match.start()].count("(") == text[: match.start()].count(")")
        if depth_ok:
            terms_text, guard_text = text[: match.start()], text[match.end():]
            guard_text, shift = _strip(guard_text)
            guard = parse_index_set(guard_text, self.state.sets, self.line, column - 1 + match.end() + shift)
        else:
            terms_text, guard = text, ALL
        terms_text = terms_text.rstrip()
        if not (terms_text.startswith("(") and terms_text.endswith(")")):
            raise self.error("A piece needs a term tuple like (t1, t2)", column)
        terms = []
        for part, start in _split_top(terms_text[1:-1], ","):
            stripped, shift = _strip(part)
            term_col = column + 1 + start + shift
            try:
                terms.append(parse_term(stripped))
            except SpecSyntaxError as exc:
                raise self.error(exc.message, term_col + exc.column - 1) from exc
        if len(terms) != self.state.dim:
            raise self.error(f"Piece has {len(terms)} terms, expected {self.state.dim}", column)
        return Piece(guard, tuple(terms))

    def _seq_line(self, rest: str, column: int) -> None:
        name, body, body_col = self._definition(rest, column)
        pieces = []
        for part, start in _split_top(body, ";"):
            stripped, shift = _strip(part)
            pieces.append(self._piece(stripped, body_col + start + shift))
        try:
            self.state.sequences[name] = RuleSequence(tuple(pieces))
        except SummabilityError as exc:
            raise self.error(str(exc), body_col) from exc

    def _cert_line(self, rest: str, column: int) -> None:
        tokens = _tokens(rest, column - 1, self.line)
        if len(tokens) < 2:
            raise self.error("CERT needs a name and a kind", column)
        (name, name_col), (kind, kind_col) = tokens[:2]
        name = self._name(name, name_col)
        if kind not in CERT_SIGNATURES:
            raise self.error(f"Unknown certificate kind {kind!r}", kind_col)
        cert = CertSpec(kind, self._params(CERT_SIGNATURES[kind], tokens[2:], f"{kind} certificate"))
        try:
            build_certificate(cert, self.state.sequences, self.state.pair)
        except SummabilityError as exc:
            raise self.error(str(exc), name_col) from exc
        self.state.certificates[name] = cert
        self.state.cert_kinds[name] = kind

    def _task_line(self, rest: str, column: int) -> None:
        tokens = _tokens(rest, column - 1, self.line)
        if len(tokens) < 2:
            raise self.error("TASK needs an id and an operation", column)
        (task_id, id_col), (op, op_col) = tokens[:2]
        if not _NAME_RE.fullmatch(task_id):
            raise self.error(f"Bad task id {task_id!r}", id_col)
        if any(t.id == task_id for t in self.state.tasks):
            raise self.error(f"Task id {task_id!r} is already used", id_col)
        if op not in TASK_SIGNATURES:
            raise self.error(f"Unknown operation {op!r}", op_col)
        params = self._params(TASK_SIGNATURES[op], tokens[2:], f"task {op}")
        self.state.tasks.append(TaskSpec(task_id, op, params, self.line))

    _HANDLERS = {
        "SPACE": _space,
        "PAIR": _pair_line,
        "SET": _set_line,
        "SEQ": _seq_line,
        "CERT": _cert_line,
        "TASK": _task_line,
    }

    def parse(self) -> AnalysisSpec:
        for line, raw in enumerate(self.text.splitlines(), start=1):
            self.line = line
            content = raw.split("#", 1)[0].rstrip()
            body, indent = _strip(content)
            if not body:
                continue
            keyword, _, rest = body.partition(" ")
            handler = self._HANDLERS.get(keyword)
            if handler is None:
                raise self.error(f"Unknown keyword {keyword!r}", indent + 1)
            if keyword != "SPACE" and self.state.dim is None:
                raise self.error("SPACE must come first", indent + 1)
            if keyword in ("CERT", "TASK") and self.state.pair is None:
                raise self.error("PAIR must be declared before certificates and tasks", indent + 1)
            rest_text, shift = _strip(rest)
            handler(self, rest_text, indent + len(keyword) + 2 + shift)
        state = self.state
        if state.dim is None:
            raise SpecSyntaxError("SPACE is missing", max(self.line, 1), 1)
        if state.pair is None:
            raise SpecSyntaxError("PAIR is missing", max(self.line, 1), 1)
        logger.debug(
            "Parsed spec: %d sets, %d sequences, %d certificates, %d tasks",
            len(state.sets), len(state.sequences), len(state.certificates), len(state.tasks),
        )
        return AnalysisSpec(
            state.dim, state.pair, state.sets, state.sequences, state.certificates, tuple(state.tasks)
        )


def parse_spec(text: str) -> AnalysisSpec:
    return _SpecParser(text).parse()


# ---------------------------------------------------------------------------
# Обратная запись
# ---------------------------------------------------------------------------

def render_value(kind: str, value: Any) -> str:
    if kind == "set":
        return value.render()
    if kind == "vector":
        return "(" + ",".join(str(c) for c in value.coords) + ")"
    if kind == "vectors":
        return "|".join(render_value("vector", v) for v in value)
    if kind == "rule":
        return value.render().replace(" ", "")
    if kind == "support":
        return ",".join(str(i) for i in value)
    if kind == "op":
        return value.value
    return str(value)


def _render_params(signature: Signature, params: tuple) -> str:
    kinds = signature.kinds()
    return " ".join(f"{key}={render_value(kinds[key], value)}" for key, value in params)


def render_spec(spec: AnalysisSpec) -> str:
    lines = [f"SPACE {spec.dim}", f"PAIR {spec.pair.render()}"]
    lines += [f"SET {name} = {s.render()}" for name, s in spec.sets.items()]
    lines += [f"SEQ {name} = {seq.render()}" for name, seq in spec.sequences.items()]
    for name, cert in spec.certificates.items():
        params = _render_params(CERT_SIGNATURES[cert.kind], cert.params)
        lines.append(f"CERT {name} {cert.kind} {params}".rstrip())
    for task in spec.tasks:
        params = _render_params(TASK_SIGNATURES[task.op], task.params)
        lines.append(f"TASK {task.id} {task.op} {params}".rstrip())
    return "\n".join(lines) + "\n"
