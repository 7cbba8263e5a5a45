"""Document language for fuzzy sets, sequences and slice regions.

Example document::

    fuzzyset ucn {
      cut alpha in (0.6, 1]: [0, 1] | [3, 4];
      cut alpha in [0, 0.6]: [0, 4];
    }

    sequence wcrepu (n >= 1) {
      cut alpha in (0.6, 1]: [0, 1] | [3, 4];
      cut alpha in (1/(3*n), 0.6]: [0, 4];
      cut alpha in [0, 1/(3*n)]: [0, 9*n] | [10*n, inf);
    }

    sliceset dcn {
      slice alpha in [0, 0.5]: [0, 4];
      slice alpha in (0.5, 1]: [1 - alpha*alpha, 1] | [3, 4 - alpha*alpha];
    }

Cut bands must tile (0, 1] from the top down; their upper ends are the
thresholds. The variable n is available inside sequences, alpha inside
sliceset slice endpoints. A sequence can also interleave two earlier
definitions (odd indices from the first, even from the second)::

    sequence genr (n >= 1) = interleave(gen_limit, gen);

Finite part endpoints take closed brackets; infinite ones are written
"(-inf" and "inf)". Literals are exact rationals and decimal spellings
survive printing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .convergence import FuzzySeq, SeqBand, instantiate, interleave
from .core import StepFuzzySet, from_cut_family
from .endograph import Band, SlicePart, SliceSet
from .errors import DslSyntaxError, SemanticError, StepfuzzError
from .exprs import (BinOp, Expr, Lit, Neg, PosInf, evaluate, free_vars,
                    to_text)
from .spatial import INF, IntervalUnion

# ---------------------------------------------------------------------------
# Document model.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetSpec:
    """Right-hand side of a band: parts, 'empty' or 'R'."""

    kind: str  # parts | empty | whole
    parts: tuple = ()  # of (Expr | None, Expr | None)


@dataclass(frozen=True)
class BandSpec:
    lo: Expr
    hi: Expr
    lo_closed: bool
    hi_closed: bool
    value: SetSpec


@dataclass(frozen=True)
class FuzzysetDef:
    name: str
    bands: tuple


@dataclass(frozen=True)
class SequenceDef:
    name: str
    n_min: int
    bands: tuple
    arms: Optional[tuple] = None  # pair of referenced names


@dataclass(frozen=True)
class SlicesetDef:
    name: str
    bands: tuple


Definition = Union[FuzzysetDef, SequenceDef, SlicesetDef]


@dataclass(frozen=True)
class Document:
    entries: tuple

    def names(self) -> list:
        return [d.name for d in self.entries]

    def lookup(self, name: str) -> Definition:
        for d in self.entries:
            if d.name == name:
                return d
        raise SemanticError(f"no definition named {name!r}")


# ---------------------------------------------------------------------------
# Lexer.
# ---------------------------------------------------------------------------

_SYMBOLS = ("&", ">=", "{", "}", "(", ")", "[", "]", ",", ":", ";", "|",
            "+", "-", "*", "/", "=")


@dataclass(frozen=True)
class _Token:
    kind: str  # name | number | sym | eof
    text: str
    line: int
    col: int


def _lex(text: str) -> list:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            tokens.append(_Token("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if text.startswith(">=", i):
            tokens.append(_Token("sym", ">=", line, col))
            i += 2
            col += 2
            continue
        if ch in "{}()[],:;|+-*/=":
            tokens.append(_Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.peek()
        raise DslSyntaxError(message, tok.line, tok.col)

    def accept_sym(self, s: str) -> bool:
        if self.peek().kind == "sym" and self.peek().text == s:
            self.next()
            return True
        return False

    def expect_sym(self, s: str):
        if not self.accept_sym(s):
            self.fail(f"expected {s!r}")

    def accept_kw(self, word: str) -> bool:
        if self.peek().kind == "name" and self.peek().text == word:
            self.next()
            return True
        return False

    def expect_kw(self, word: str):
        if not self.accept_kw(word):
            self.fail(f"expected {word!r}")

    def expect_name(self) -> str:
        t = self.peek()
        if t.kind != "name":
            self.fail("expected a name")
        return self.next().text

    # expressions -----------------------------------------------------------

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept_sym("+"):
                e = BinOp("+", e, self.term())
            elif self.accept_sym("-"):
                e = BinOp("-", e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            if self.accept_sym("*"):
                e = BinOp("*", e, self.factor())
            elif self.accept_sym("/"):
                e = BinOp("/", e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        if self.accept_sym("-"):
            return Neg(self.factor())
        return self.atom()

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "number":
            self.next()
            if "." in t.text:
                whole, frac = t.text.split(".")
                value = Fraction(int(whole + frac), 10 ** len(frac))
            else:
                value = Fraction(int(t.text))
            return Lit(value, t.text)
        if t.kind == "name":
            if t.text == "inf":
                self.next()
                return PosInf()
            self.next()
            return Var(t.text)
        if self.accept_sym("("):
            e = self.expr()
            self.expect_sym(")")
            return e
        self.fail("expected an expression")

    # ranges, parts, bands --------------------------------------------------

    def range(self) -> tuple:
        t = self.peek()
        if t.kind == "sym" and t.text in "([":
            lo_closed = t.text == "["
            self.next()
        else:
            self.fail("expected '(' or '[' to open a range")
        lo = self.expr()
        self.expect_sym(",")
        hi = self.expr()
        t = self.peek()
        if t.kind == "sym" and t.text in ")]":
            hi_closed = t.text == "]"
            self.next()
        else:
            self.fail("expected ')' or ']' to close a range")
        return lo, hi, lo_closed, hi_closed

    def part(self) -> tuple:
        t = self.peek()
        if not (t.kind == "sym" and t.text in "(["):
            self.fail("expected a part")
        open_round = t.text == "("
        self.next()
        lo = self.expr()
        self.expect_sym(",")
        hi = self.expr()
        t2 = self.peek()
        if not (t2.kind == "sym" and t2.text in ")]"):
            self.fail("expected ')' or ']' to close a part")
        close_round = t2.text == ")"
        self.next()
        lo_inf = _is_neg_inf(lo)
        hi_inf = isinstance(hi, PosInf)
        if open_round and not lo_inf:
            self.fail("finite left endpoints take '['; '(' is only for -inf", t)
        if not open_round and lo_inf:
            self.fail("-inf endpoints take '('", t)
        if close_round and not hi_inf:
            self.fail("finite right endpoints take ']'; ')' is only for inf", t2)
        if not close_round and hi_inf:
            self.fail("inf endpoints take ')'", t2)
        return (None if lo_inf else lo, None if hi_inf else hi)

    def setexpr(self) -> SetSpec:
        if self.accept_kw("empty"):
            return SetSpec("empty")
        if self.accept_kw("R"):
            return SetSpec("whole", ((None, None),))
        parts = [self.part()]
        while self.accept_sym("|"):
            parts.append(self.part())
        return SetSpec("parts", tuple(parts))

    def band(self, keyword: str) -> BandSpec:
        self.expect_kw(keyword)
        self.expect_kw("alpha")
        self.expect_kw("in")
        lo, hi, lo_closed, hi_closed = self.range()
        self.expect_sym(":")
        value = self.setexpr()
        self.expect_sym(";")
        return BandSpec(lo, hi, lo_closed, hi_closed, value)

    # definitions -----------------------------------------------------------

    def document(self) -> Document:
        entries = []
        while self.peek().kind != "eof":
            t = self.peek()
            if self.accept_kw("fuzzyset"):
                entries.append(self.fuzzyset())
            elif self.accept_kw("sequence"):
                entries.append(self.sequence())
            elif self.accept_kw("sliceset"):
                entries.append(self.sliceset())
            else:
                self.fail("expected 'fuzzyset', 'sequence' or 'sliceset'", t)
        return Document(tuple(entries))

    def fuzzyset(self) -> FuzzysetDef:
        name = self.expect_name()
        self.expect_sym("{")
        bands = []
        while not self.accept_sym("}"):
            bands.append(self.band("cut"))
        return FuzzysetDef(name, tuple(bands))

    def sequence(self) -> SequenceDef:
        name = self.expect_name()
        self.expect_sym("(")
        self.expect_kw("n")
        n_min = 1
        if self.accept_sym(">="):
            t = self.peek()
            if t.kind != "number" or "." in t.text:
                self.fail("expected an integer bound")
            n_min = int(self.next().text)
        self.expect_sym(")")
        if self.accept_sym("="):
            self.expect_kw("interleave")
            self.expect_sym("(")
            first = self.expect_name()
            self.expect_sym(",")
            second = self.expect_name()
            self.expect_sym(")")
            self.expect_sym(";")
            return SequenceDef(name, n_min, (), (first, second))
        self.expect_sym("{")
        bands = []
        while not self.accept_sym("}"):
            bands.append(self.band("cut"))
        return SequenceDef(name, n_min, tuple(bands))

    def sliceset(self) -> SlicesetDef:
        name = self.expect_name()
        self.expect_sym("{")
        bands = []
        while not self.accept_sym("}"):
            bands.append(self.band("slice"))
        return SlicesetDef(name, tuple(bands))


def _is_neg_inf(e: Expr) -> bool:
    return isinstance(e, Neg) and isinstance(e.operand, PosInf)


from .exprs import Var  # placed late to keep the import block tidy above


# ---------------------------------------------------------------------------
# Semantic validation and materialization.
# ---------------------------------------------------------------------------


def _check_vars(e: Optional[Expr], allowed: set, what: str):
    if e is None:
        return
    extra = free_vars(e) - allowed
    if extra:
        raise SemanticError(f"variable {sorted(extra)[0]!r} not allowed in {what}")


def _const(e: Expr, what: str) -> Fraction:
    _check_vars(e, set(), what)
    v = evaluate(e, {})
    if not isinstance(v, Fraction):
        raise SemanticError(f"{what} must be finite")
    return v


def _validate_cut_bands(d, allowed_vars: set):
    """Cut bands: upper ends closed, tile (0, 1] written top-down."""
    if not d.bands:
        raise SemanticError(f"{d.name}: needs at least one cut band")
    for b in d.bands:
        _check_vars(b.lo, allowed_vars, f"{d.name} range")
        _check_vars(b.hi, allowed_vars, f"{d.name} range")
        for lo, hi in b.value.parts:
            _check_vars(lo, allowed_vars, f"{d.name} part")
            _check_vars(hi, allowed_vars, f"{d.name} part")
        if not b.hi_closed:
            raise SemanticError(f"{d.name}: cut band upper end must be closed")
        if b.lo_closed and b.lo != Lit(Fraction(0)):
            raise SemanticError(
                f"{d.name}: cut band lower end may be closed only at 0")
    top = d.bands[0]
    if top.hi != Lit(Fraction(1)):
        raise SemanticError(f"{d.name}: topmost cut band must reach level 1")
    for above, below in zip(d.bands, d.bands[1:]):
        if above.lo != below.hi:
            raise SemanticError(
                f"{d.name}: cut bands must tile contiguously from the top down")
    bottom = d.bands[-1]
    if bottom.lo != Lit(Fraction(0)):
        raise SemanticError(f"{d.name}: lowest cut band must start at 0")


def to_fuzzyset(d: FuzzysetDef) -> StepFuzzySet:
    _validate_cut_bands(d, set())
    thresholds = []
    cuts = []
    for b in d.bands:
        thresholds.append(_const(b.hi, f"{d.name} band level"))
        pairs = []
        for lo, hi in b.value.parts:
            a = _const(lo, f"{d.name} part endpoint") if lo is not None else -INF
            bb = _const(hi, f"{d.name} part endpoint") if hi is not None else INF
            pairs.append((a, bb))
        cuts.append(IntervalUnion.of(*pairs))
    try:
        return from_cut_family(thresholds, cuts)
    except StepfuzzError as exc:
        raise SemanticError(f"{d.name}: {exc}") from None


def to_fuzzyseq(d: SequenceDef, doc: Document) -> FuzzySeq:
    if d.arms is not None:
        arms = []
        for ref in d.arms:
            target = doc.lookup(ref)
            if isinstance(target, FuzzysetDef):
                arms.append(to_fuzzyset(target))
            elif isinstance(target, SequenceDef):
                arms.append(to_fuzzyseq(target, doc))
            else:
                raise SemanticError(
                    f"{d.name}: interleave arm {ref!r} must be a fuzzyset or sequence")
        return interleave(d.name, arms[0], arms[1], d.n_min)
    _validate_cut_bands(d, {"n"})
    bands = tuple(SeqBand(b.lo, b.hi, b.value.parts) for b in d.bands)
    seq = FuzzySeq(d.name, d.n_min, bands)
    for k in (d.n_min, d.n_min + 1, d.n_min + 6):
        try:
            instantiate(seq, k)
        except StepfuzzError as exc:
            raise SemanticError(f"{d.name}: member {k} is invalid: {exc}") from None
    return seq


def to_sliceset(d: SlicesetDef) -> SliceSet:
    if not d.bands:
        raise SemanticError(f"{d.name}: needs at least one slice band")
    bands = []
    for b in d.bands:
        lo = _const(b.lo, f"{d.name} range")
        hi = _const(b.hi, f"{d.name} range")
        if not (0 <= lo <= hi <= 1):
            raise SemanticError(f"{d.name}: slice band outside [0, 1]")
        for plo, phi in b.value.parts:
            _check_vars(plo, {"alpha"}, f"{d.name} part")
            _check_vars(phi, {"alpha"}, f"{d.name} part")
        parts = tuple(SlicePart(lo_e, hi_e) for lo_e, hi_e in b.value.parts)
        try:
            bands.append(Band(lo, hi, b.lo_closed, b.hi_closed, parts))
        except StepfuzzError as exc:
            raise SemanticError(f"{d.name}: {exc}") from None
    for below, above in zip(bands, bands[1:]):
        if below.hi != above.lo:
            raise SemanticError(
                f"{d.name}: slice bands must tile contiguously bottom-up")
        if below.hi_closed == above.lo_closed:
            raise SemanticError(
                f"{d.name}: exactly one side must be closed at level {below.hi}")
    ss = SliceSet(tuple(bands))
    for band in bands:
        for beta in (band.lo, (band.lo + band.hi) / 2, band.hi):
            band.slice_at(beta)  # surfaces evaluation errors early
    return ss


def materialize(doc: Document, name: str):
    """Resolve a name to a StepFuzzySet, FuzzySeq or SliceSet."""
    d = doc.lookup(name)
    if isinstance(d, FuzzysetDef):
        return to_fuzzyset(d)
    if isinstance(d, SequenceDef):
        return to_fuzzyseq(d, doc)
    return to_sliceset(d)


def parse(text: str) -> Document:
    """Parse and validate a document; every definition is materialized once
    so structural errors surface at parse time."""
    doc = _Parser(text).document()
    seen = set()
    for d in doc.entries:
        if d.name in seen:
            raise SemanticError(f"duplicate definition {d.name!r}")
        seen.add(d.name)
    for d in doc.entries:
        if isinstance(d, SequenceDef) and d.arms is not None:
            for ref in d.arms:
                doc.lookup(ref)
        materialize(doc, d.name)
    return doc


# ---------------------------------------------------------------------------
# Printing.
# ---------------------------------------------------------------------------


def _part_text(part: tuple) -> str:
    lo, hi = part
    left = "(-inf" if lo is None else f"[{to_text(lo)}"
    right = "inf)" if hi is None else f"{to_text(hi)}]"
    return f"{left}, {right}"


def _value_text(v: SetSpec) -> str:
    if v.kind == "empty":
        return "empty"
    if v.kind == "whole":
        return "R"
    return " | ".join(_part_text(p) for p in v.parts)


def _band_text(b: BandSpec, keyword: str) -> str:
    lo_br = "[" if b.lo_closed else "("
    hi_br = "]" if b.hi_closed else ")"
    rng = f"{lo_br}{to_text(b.lo)}, {to_text(b.hi)}{hi_br}"
    return f"  {keyword} alpha in {rng}: {_value_text(b.value)};"


def print_document(doc: Document) -> str:
    """Canonical text form; parsing it back yields an equal Document."""
    blocks = []
    for d in doc.entries:
        if isinstance(d, FuzzysetDef):
            lines = [f"fuzzyset {d.name} {{"]
            lines += [_band_text(b, "cut") for b in d.bands]
            lines.append("}")
        elif isinstance(d, SequenceDef):
            head = f"sequence {d.name} (n >= {d.n_min})"
            if d.arms is not None:
                blocks.append(f"{head} = interleave({d.arms[0]}, {d.arms[1]});")
                continue
            lines = [head + " {"]
            lines += [_band_text(b, "cut") for b in d.bands]
            lines.append("}")
        else:
            lines = [f"sliceset {d.name} {{"]
            lines += [_band_text(b, "slice") for b in d.bands]
            lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
