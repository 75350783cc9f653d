"""Text format for structure equations.

    # comments run to end of line
    algebra "name" dim 4
    param t
    flag invariant_cohomology_is_manifold_cohomology true
    d f3 = f1^F1
    d f4 = (1/(1-t*conj(t))) * f1^f2 - (t/(1-t*conj(t))) * f1^F2

Generators are f1..fn (holomorphic) and F1..Fn (their conjugates); structure
equations are given on the holomorphic generators only, each right-hand side
a sum of scalar multiples of two-fold wedges (or the literal 0).  Scalars are
rational expressions in declared parameters, conj(param), integers, and the
imaginary unit i (also as a literal like 2i).  Unstated differentials vanish.
A unary sign may open a term or appear inside scalars.  Both '-' and the
unicode minus sign are accepted.
"""

from __future__ import annotations

import re

from .gauss import GaussRat
from .scalar import ScalarExpr, S_ONE
from .exterior import BigradedElement
from .algebra import AlgebraSpec


class DslError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<WS>[ \t]+)
  | (?P<STRING>"[^"\n]*")
  | (?P<IMAG>\d+i(?![A-Za-z0-9_]))
  | (?P<NUMBER>\d+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<OP>[=^+\-*/()])
    """,
    re.VERBOSE,
)

_GEN = re.compile(r"^([fF])([0-9]+)$")

_RESERVED = {"algebra", "dim", "param", "flag", "d", "conj", "i", "true", "false"}

FLAG_NAME = "invariant_cohomology_is_manifold_cohomology"


def _tokenize_line(text, lineno):
    text = text.replace("−", "-")
    hashpos = _unquoted_hash(text)
    if hashpos is not None:
        text = text[:hashpos]
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind != "WS":
            tokens.append((kind, m.group(), lineno, pos + 1))
        pos = m.end()
    return tokens


def _unquoted_hash(text):
    in_str = False
    for i, ch in enumerate(text):
        if ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return i
    return None


class _Parser:
    """Single-pass, line-oriented recursive descent."""

    def __init__(self, text):
        self.lines = text.split("\n")
        self.name = None
        self.n = None
        self.params = []
        self.flag = None
        self.eqs = {}

    def parse(self):
        for lineno, raw in enumerate(self.lines, start=1):
            toks = _tokenize_line(raw, lineno)
            if not toks:
                continue
            head = toks[0]
            if head[0] == "IDENT" and head[1] == "algebra":
                self._header(toks)
            elif head[0] == "IDENT" and head[1] == "param":
                self._param(toks)
            elif head[0] == "IDENT" and head[1] == "flag":
                self._flag(toks)
            elif head[0] == "IDENT" and head[1] == "d":
                self._equation(toks)
            else:
                raise DslError(
                    f"expected 'algebra', 'param', 'flag' or 'd', got {head[1]!r}",
                    head[2],
                    head[3],
                )
        if self.n is None:
            raise DslError("missing 'algebra \"name\" dim N' header", 1, 1)
        d_phi = [self.eqs.get(k, BigradedElement.zero()) for k in range(1, self.n + 1)]
        return AlgebraSpec(self.name, self.n, tuple(self.params), d_phi,
                           flag_invariant_ok=self.flag)

    # -- line kinds ---------------------------------------------------------

    def _header(self, toks):
        if self.n is not None:
            raise DslError("duplicate header", toks[0][2], toks[0][3])
        t = _TokStream(toks)
        t.expect_ident("algebra")
        name = t.expect("STRING")[1][1:-1]
        t.expect_ident("dim")
        n = int(t.expect("NUMBER")[1])
        t.expect_end()
        if n < 1:
            raise DslError("dim must be at least 1", toks[0][2], toks[0][3])
        self.name = name
        self.n = n

    def _param(self, toks):
        self._need_header(toks)
        t = _TokStream(toks)
        t.expect_ident("param")
        tok = t.expect("IDENT")
        t.expect_end()
        name = tok[1]
        if name in _RESERVED or _GEN.match(name):
            raise DslError(f"parameter name {name!r} is reserved", tok[2], tok[3])
        if name in self.params:
            raise DslError(f"duplicate parameter {name!r}", tok[2], tok[3])
        self.params.append(name)

    def _flag(self, toks):
        self._need_header(toks)
        t = _TokStream(toks)
        t.expect_ident("flag")
        tok = t.expect("IDENT")
        if tok[1] != FLAG_NAME:
            raise DslError(f"unknown flag {tok[1]!r}", tok[2], tok[3])
        val = t.expect("IDENT")
        if val[1] not in ("true", "false"):
            raise DslError("flag value must be true or false", val[2], val[3])
        t.expect_end()
        self.flag = val[1] == "true"

    def _equation(self, toks):
        self._need_header(toks)
        t = _TokStream(toks)
        t.expect_ident("d")
        gen = t.expect("IDENT")
        m = _GEN.match(gen[1])
        if not m:
            raise DslError(f"expected a generator after 'd', got {gen[1]!r}", gen[2], gen[3])
        if m.group(1) == "F":
            raise DslError(
                "structure equations are given on f1..fn; the conjugates follow",
                gen[2],
                gen[3],
            )
        idx = self._gen_index(m, gen)
        if idx in self.eqs:
            raise DslError(f"duplicate equation for f{idx}", gen[2], gen[3])
        t.expect_op("=")
        self.eqs[idx] = self._rhs(t)

    def _need_header(self, toks):
        if self.n is None:
            raise DslError("the header line must come first", toks[0][2], toks[0][3])

    def _gen_index(self, m, tok):
        idx = int(m.group(2))
        if not 1 <= idx <= self.n:
            raise DslError(
                f"unknown generator {m.group(0)!r} (dim is {self.n})", tok[2], tok[3]
            )
        return idx

    # -- right-hand sides ---------------------------------------------------

    def _rhs(self, t):
        if t.peek() and t.peek()[0] == "NUMBER" and t.peek()[1] == "0" and t.peek(1) is None:
            t.take()
            return BigradedElement.zero()
        total = self._term(t, negate=False)
        while t.peek():
            op = t.expect_op("+", "-")
            total = total + self._term(t, negate=op[1] == "-")
        t.expect_end()
        return total

    def _term(self, t, negate):
        tok = t.peek()
        if tok and tok[0] == "OP" and tok[1] == "-":
            t.take()
            negate = not negate
        coeff = S_ONE
        tok = t.peek()
        if tok is None:
            raise DslError("expected a term", t.last[2], t.last[3] + len(t.last[1]))
        if not (tok[0] == "IDENT" and _GEN.match(tok[1])):
            coeff = self._scalar_product(t)
            nxt = t.peek()
            if nxt and nxt[0] == "OP" and nxt[1] == "*":
                t.take()
        el = self._wedge(t).scale(coeff)
        return -el if negate else el

    def _wedge(self, t):
        gens = [self._gen_ref(t)]
        while t.peek() and t.peek()[0] == "OP" and t.peek()[1] == "^":
            t.take()
            gens.append(self._gen_ref(t))
        if len(gens) != 2:
            tok = t.last
            raise DslError(
                f"each term must be a wedge of exactly two generators, got {len(gens)}",
                tok[2],
                tok[3],
            )
        (b1, i1), (b2, i2) = gens
        e1 = BigradedElement.gen(i1, barred=b1)
        e2 = BigradedElement.gen(i2, barred=b2)
        return e1.wedge(e2)

    def _gen_ref(self, t):
        tok = t.expect("IDENT")
        m = _GEN.match(tok[1])
        if not m:
            raise DslError(f"expected a generator, got {tok[1]!r}", tok[2], tok[3])
        idx = self._gen_index(m, tok)
        return (m.group(1) == "F", idx)

    # scalar grammar; a '*' whose right neighbour is a generator belongs to
    # the wedge term, not to the scalar, so the product loop stops there
    def _scalar_sum(self, t):
        v = self._scalar_product(t)
        while True:
            tok = t.peek()
            if tok and tok[0] == "OP" and tok[1] in "+-":
                t.take()
                w = self._scalar_product(t)
                v = v + w if tok[1] == "+" else v - w
            else:
                return v

    def _scalar_product(self, t):
        v = self._scalar_signed(t)
        while True:
            tok = t.peek()
            if not (tok and tok[0] == "OP" and tok[1] in "*/"):
                return v
            nxt = t.peek(1)
            if (
                tok[1] == "*"
                and nxt
                and nxt[0] == "IDENT"
                and _GEN.match(nxt[1])
            ):
                return v  # the '*' introduces the wedge monomial
            t.take()
            w = self._scalar_signed(t)
            if tok[1] == "*":
                v = v * w
            else:
                try:
                    v = v / w
                except ZeroDivisionError:
                    raise DslError("division by zero", tok[2], tok[3]) from None

    def _scalar_signed(self, t):
        tok = t.peek()
        if tok and tok[0] == "OP" and tok[1] == "-":
            t.take()
            return -self._scalar_signed(t)
        return self._scalar_power(t)

    def _scalar_power(self, t):
        v = self._scalar_atom(t)
        while t.peek() and t.peek()[0] == "OP" and t.peek()[1] == "^":
            t.take()
            e = t.expect("NUMBER")
            out = S_ONE
            for _ in range(int(e[1])):
                out = out * v
            v = out
        return v

    def _scalar_atom(self, t):
        tok = t.take()
        if tok is None:
            raise DslError("unexpected end of line in scalar", t.last[2], t.last[3])
        kind, text, line, col = tok
        if kind == "NUMBER":
            return ScalarExpr.const(int(text))
        if kind == "IMAG":
            return ScalarExpr.const(GaussRat(0, int(text[:-1])))
        if kind == "IDENT":
            if text == "i":
                return ScalarExpr.const(GaussRat(0, 1))
            if text == "conj":
                t.expect_op("(")
                name = t.expect("IDENT")
                t.expect_op(")")
                self._check_param(name)
                return ScalarExpr.conj_param(name[1])
            if _GEN.match(text):
                raise DslError(
                    f"generator {text!r} cannot appear inside a scalar", line, col
                )
            self._check_param(tok)
            return ScalarExpr.param(text)
        if kind == "OP" and text == "(":
            v = self._scalar_sum(t)
            t.expect_op(")")
            return v
        raise DslError(f"unexpected {text!r} in scalar", line, col)

    def _check_param(self, tok):
        if tok[1] not in self.params:
            raise DslError(f"undeclared parameter {tok[1]!r}", tok[2], tok[3])


class _TokStream:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0
        self.last = toks[0]

    def peek(self, ahead=0):
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is not None:
            self.pos += 1
            self.last = tok
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok is None:
            raise DslError(
                f"unexpected end of line (wanted {kind})",
                self.last[2],
                self.last[3] + len(self.last[1]),
            )
        if tok[0] != kind:
            raise DslError(f"expected {kind}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def expect_ident(self, word):
        tok = self.expect("IDENT")
        if tok[1] != word:
            raise DslError(f"expected {word!r}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def expect_op(self, *ops):
        tok = self.take()
        if tok is None:
            raise DslError(
                f"unexpected end of line (wanted {' or '.join(ops)})",
                self.last[2],
                self.last[3] + len(self.last[1]),
            )
        if tok[0] != "OP" or tok[1] not in ops:
            raise DslError(
                f"expected {' or '.join(repr(o) for o in ops)}, got {tok[1]!r}",
                tok[2],
                tok[3],
            )
        return tok

    def expect_end(self):
        tok = self.peek()
        if tok is not None:
            raise DslError(f"unexpected {tok[1]!r}", tok[2], tok[3])


def parse(text):
    """Parse structure-equation source into an AlgebraSpec."""
    return _Parser(text).parse()


def parse_gauss(text):
    """Parse a Q(i) literal such as 1/2, -i, 1/3+2i, i/2 (for CLI assignments)."""
    toks = _tokenize_line(text, 1)
    if not toks:
        raise DslError("empty value", 1, 1)
    p = _Parser("")
    p.n = 0
    t = _TokStream(toks)
    v = p._scalar_sum(t)
    t.expect_end()
    if not v.is_const():
        raise DslError("value must be a constant", 1, 1)
    return v.const_value()


def pretty(spec):
    """Canonical source for an AlgebraSpec; parse(pretty(s)) == s term by term."""
    out = [f'algebra "{spec.name}" dim {spec.n}']
    for pname in spec.params:
        out.append(f"param {pname}")
    if spec.flag_invariant_ok is not None:
        out.append(f"flag {FLAG_NAME} {'true' if spec.flag_invariant_ok else 'false'}")
    for k in range(1, spec.n + 1):
        el = spec.d_phi[k - 1]
        if el.is_zero():
            out.append(f"d f{k} = 0")
            continue
        terms = []
        for (holo, anti), coeff in el.items():
            mono = "^".join(
                [f"f{j}" for j in holo] + [f"F{j}" for j in anti]
            )
            if coeff == S_ONE:
                terms.append(mono)
            else:
                terms.append(f"({coeff}) * {mono}")
        out.append(f"d f{k} = " + " + ".join(terms))
    return "\n".join(out) + "\n"
