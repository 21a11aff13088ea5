"""Session files: a ring header followed by named bindings.

    # comments start with '#'
    char: 2
    vars: a, b, c, d
    order: grevlex                 (optional; grevlex, lex or elim(k))
    ideal I: a*(c+d), b*c*(c+d), d*(a^3+b*c*d)
    poly u: a*d*(c+d)*(a^3+b*c*d)
    ideal J: a, d^2, I             (a bound ideal name splices its generators)
    int e: 1
    multiplier U: u over I         (optionally "level 2"; checked on load)

Polynomial expressions may mention earlier ``poly`` bindings by name.
An empty ideal is written ``()`` or left blank.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, PreconditionError
from .frobenius import FrobeniusMultiplier
from .groebner import Ideal
from .ring import MonomialOrder, Polynomial, RingContext, parse_poly

_HEADER_KEYS = ("char", "vars", "order")
_BINDING = re.compile(r"(ideal|poly|int|multiplier)\s+([A-Za-z_][A-Za-z_0-9]*)\s*:(.*)\Z")
_MULT = re.compile(r"\s*(\S+)\s+over\s+(\S+)(?:\s+level\s+(\d+))?\s*\Z")


@dataclass
class SessionFile:
    ctx: RingContext
    ideals: dict = field(default_factory=dict)
    polys: dict = field(default_factory=dict)
    ints: dict = field(default_factory=dict)
    multipliers: dict = field(default_factory=dict)
    path: str | None = None

    def names(self) -> set:
        return set(self.ideals) | set(self.polys) | set(self.ints) | set(self.multipliers)

    # -- reference resolution (used by the CLI) --

    def poly(self, ref: str) -> Polynomial:
        """A bound polynomial, or ``ref`` parsed as an expression."""
        if ref in self.polys:
            return self.polys[ref]
        return parse_poly(self.ctx, ref, self.polys)

    def ideal(self, ref: str) -> Ideal:
        """A bound ideal, ``R`` for the unit ideal, or an inline generator list."""
        if ref in self.ideals:
            return self.ideals[ref]
        if ref == "R" and "R" not in self.ctx.variables:
            return Ideal.unit(self.ctx)
        return Ideal(self.ctx, split_generators(ref, self))

    def integer(self, ref: str) -> int:
        if ref in self.ints:
            return self.ints[ref]
        try:
            return int(ref)
        except ValueError:
            raise ParseError(f"{ref!r} is neither an int binding nor an integer") from None


def _split_top_level(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _outer_parens(text: str) -> bool:
    if not (text.startswith("(") and text.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(text):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and i < len(text) - 1:
            return False
    return True


def split_generators(text: str, session: SessionFile) -> list[Polynomial]:
    """Parse a comma-separated generator list; bound ideal names splice in."""
    text = text.strip()
    if text in ("", "()"):
        return []
    if _outer_parens(text) and len(_split_top_level(text[1:-1])) > 1:
        text = text[1:-1]
    gens = []
    for item in _split_top_level(text):
        if not item:
            raise ParseError(f"empty generator in {text!r}")
        if item in session.ideals:
            gens.extend(session.ideals[item].gens)
        else:
            gens.append(parse_poly(session.ctx, item, session.polys))
    return gens


def _parse_header(header: dict) -> RingContext:
    if "char" not in header or "vars" not in header:
        raise ParseError("session header needs 'char' and 'vars'", line=1)
    char_text, char_line = header["char"]
    try:
        p = int(char_text)
    except ValueError:
        raise ParseError(f"characteristic {char_text!r} is not an integer", line=char_line) from None
    names = tuple(v.strip() for v in header["vars"][0].split(",") if v.strip())
    order = MonomialOrder()
    if "order" in header:
        try:
            order = MonomialOrder.parse(header["order"][0])
        except ValueError as exc:
            raise ParseError(str(exc), line=header["order"][1]) from None
    try:
        return RingContext(p, names, order)
    except ValueError as exc:
        raise ParseError(str(exc), line=header["vars"][1]) from None


def parse_session(text: str, path: str | None = None) -> SessionFile:
    header: dict = {}
    session = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BINDING.match(line)
        if m is None:
            key, sep, value = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in _HEADER_KEYS:
                raise ParseError(f"cannot parse line: {raw.strip()!r}", line=lineno)
            if session is not None:
                raise ParseError(f"header key {key!r} after the first binding", line=lineno)
            if key in header:
                raise ParseError(f"duplicate header key {key!r}", line=lineno)
            header[key] = (value.strip(), lineno)
            continue
        if session is None:
            session = SessionFile(_parse_header(header), path=path)
        kind, name, value = m.groups()
        if name in session.names():
            raise ParseError(f"duplicate binding {name!r}", line=lineno)
        if name in session.ctx.variables:
            raise ParseError(f"binding {name!r} shadows a ring variable", line=lineno)
        try:
            _bind(session, kind, name, value.strip())
        except ParseError as exc:
            raise ParseError(exc.message, exc.text, exc.position, lineno) from None
        except PreconditionError as exc:
            raise PreconditionError(f"line {lineno}: {exc}") from None
    if session is None:
        session = SessionFile(_parse_header(header), path=path)
    return session


def _bind(session: SessionFile, kind: str, name: str, value: str):
    ctx = session.ctx
    if kind == "poly":
        session.polys[name] = parse_poly(ctx, value, session.polys)
    elif kind == "ideal":
        session.ideals[name] = Ideal(ctx, split_generators(value, session))
    elif kind == "int":
        try:
            session.ints[name] = int(value)
        except ValueError:
            raise ParseError(f"{value!r} is not an integer") from None
    else:
        m = _MULT.match(value)
        if m is None:
            raise ParseError("multiplier syntax is 'POLY over IDEAL [level E]'")
        u_ref, base_ref, level = m.groups()
        if base_ref not in session.ideals:
            raise ParseError(f"unknown ideal {base_ref!r}")
        u = session.poly(u_ref)
        session.multipliers[name] = FrobeniusMultiplier(u, session.ideals[base_ref], int(level or 1))


def load_session(path) -> SessionFile:
    """Read and validate a session file; multipliers are membership-checked here."""
    path = Path(path)
    return parse_session(path.read_text(), str(path))
