"""First-order sentences about graphs: parser, evaluator, and enumeration.

Grammar (precedence ! > & > | > ->, quantifier scope runs to the closing
delimiter of its body)::

    formula  := quantified | implies
    quantified := ("exists" | "forall") var "." formula
    implies  := or ("->" implies)?
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "!" unary | atom | "(" formula ")"
    atom     := "E" "(" var "," var ")" | var "=" var | var "!=" var

`x != y` is sugar for `!(x = y)`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Formula",
    "Equal",
    "Edge",
    "Not",
    "And",
    "Or",
    "Implies",
    "Exists",
    "Forall",
    "ParseError",
    "FreeVariableError",
    "EnumerationLimitError",
    "parse_sentence",
    "parse_formula",
    "print_formula",
    "free_variables",
    "evaluate",
    "quantifier_depth",
    "formula_size",
    "negation_normal_form",
    "enumerate_sentences",
    "find_distinguishing_sentence",
    "MAX_ENUM_DEPTH",
    "MAX_ENUM_SIZE",
]

# Safety limits for enumeration; past these the sentence space is no longer
# desk scale.
MAX_ENUM_DEPTH = 3
MAX_ENUM_SIZE = 9


class Formula:
    """Base class for formula AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Edge(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class FreeVariableError(ValueError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"sentence has free variables: {', '.join(self.names)}")


class EnumerationLimitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"->|!=|[()=.,&|!]|[A-Za-z_][A-Za-z0-9_]*|\S")
_KEYWORDS = {"exists", "forall"}


def _tokenize(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        for match in _TOKEN_RE.finditer(line):
            tokens.append((match.group(), lineno, match.start() + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def error(self, message):
        if self.pos < len(self.tokens):
            _, line, col = self.tokens[self.pos]
            raise ParseError(message, line, col)
        raise ParseError(message + " at end of input")

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            self.error(f"expected {expected!r}" if expected else "unexpected end of input")
        if expected is not None and tok != expected:
            self.error(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def variable(self):
        tok = self.peek()
        if tok is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in _KEYWORDS or tok == "E":
            self.error("expected a variable name")
        self.pos += 1
        return tok

    def formula(self):
        if self.peek() in _KEYWORDS:
            kind = self.take()
            var = self.variable()
            self.take(".")
            body = self.formula()
            return Exists(var, body) if kind == "exists" else Forall(var, body)
        return self.implies()

    def implies(self):
        left = self.or_()
        if self.peek() == "->":
            self.take("->")
            right = self.implies()
            return Implies(left, right)
        return left

    def or_(self):
        node = self.and_()
        while self.peek() == "|":
            self.take("|")
            node = Or(node, self.and_())
        return node

    def and_(self):
        node = self.unary()
        while self.peek() == "&":
            self.take("&")
            node = And(node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take("!")
            return Not(self.unary())
        if tok == "(":
            self.take("(")
            node = self.formula()
            self.take(")")
            return node
        if tok in _KEYWORDS:
            return self.formula()
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "E":
            self.take("E")
            self.take("(")
            left = self.variable()
            self.take(",")
            right = self.variable()
            self.take(")")
            return Edge(left, right)
        left = self.variable()
        op = self.peek()
        if op == "=":
            self.take("=")
            return Equal(left, self.variable())
        if op == "!=":
            self.take("!=")
            return Not(Equal(left, self.variable()))
        self.error("expected '=' or '!=' after variable")


def parse_formula(text):
    """Parse a formula that may contain free variables."""
    parser = _Parser(text)
    node = parser.formula()
    if parser.pos < len(parser.tokens):
        parser.error("trailing input after formula")
    return node


def parse_sentence(text):
    """Parse a closed sentence; free variables are an error."""
    node = parse_formula(text)
    free = free_variables(node)
    if free:
        raise FreeVariableError(free)
    return node


def free_variables(f, bound=frozenset()):
    if isinstance(f, (Equal, Edge)):
        return {v for v in (f.left, f.right) if v not in bound}
    if isinstance(f, Not):
        return free_variables(f.body, bound)
    if isinstance(f, (And, Or, Implies)):
        return free_variables(f.left, bound) | free_variables(f.right, bound)
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body, bound | {f.var})
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4


def _print(f, parent_prec):
    if isinstance(f, Edge):
        return f"E({f.left},{f.right})"
    if isinstance(f, Equal):
        text = f"{f.left} = {f.right}"
        return f"({text})" if parent_prec >= _PREC_UNARY else text
    if isinstance(f, Not):
        if isinstance(f.body, Equal):
            text = f"{f.body.left} != {f.body.right}"
            return f"({text})" if parent_prec >= _PREC_UNARY else text
        return "!" + _print(f.body, _PREC_UNARY)
    if isinstance(f, (Exists, Forall)):
        kind = "exists" if isinstance(f, Exists) else "forall"
        text = f"{kind} {f.var}. {_print(f.body, 0)}"
        return f"({text})" if parent_prec > 0 else text
    if isinstance(f, And):
        text = f"{_print(f.left, _PREC_AND)} & {_print(f.right, _PREC_AND + 1)}"
        return f"({text})" if parent_prec > _PREC_AND else text
    if isinstance(f, Or):
        text = f"{_print(f.left, _PREC_OR)} | {_print(f.right, _PREC_OR + 1)}"
        return f"({text})" if parent_prec > _PREC_OR else text
    if isinstance(f, Implies):
        text = f"{_print(f.left, _PREC_IMPLIES + 1)} -> {_print(f.right, _PREC_IMPLIES)}"
        return f"({text})" if parent_prec > _PREC_IMPLIES else text
    raise TypeError(f"not a formula node: {f!r}")


def print_formula(f):
    return _print(f, 0)


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


def evaluate(g, f, env=None):
    """Tarskian truth of f in graph g under the (possibly partial) environment."""
    env = dict(env) if env else {}
    missing = free_variables(f) - env.keys()
    if missing:
        raise FreeVariableError(missing)
    return _eval(g, f, env)


def _eval(g, f, env):
    if isinstance(f, Edge):
        return g.adjacent(env[f.left], env[f.right])
    if isinstance(f, Equal):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _eval(g, f.body, env)
    if isinstance(f, And):
        return _eval(g, f.left, env) and _eval(g, f.right, env)
    if isinstance(f, Or):
        return _eval(g, f.left, env) or _eval(g, f.right, env)
    if isinstance(f, Implies):
        return (not _eval(g, f.left, env)) or _eval(g, f.right, env)
    if isinstance(f, (Exists, Forall)):
        var, body = f.var, f.body
        shadowed = env.get(var)
        had = var in env
        hit = isinstance(f, Exists)
        result = not hit
        for v in range(g.m):
            env[var] = v
            if _eval(g, body, env) == hit:
                result = hit
                break
        if had:
            env[var] = shadowed
        else:
            env.pop(var, None)
        return result
    raise TypeError(f"not a formula node: {f!r}")


def quantifier_depth(f):
    if isinstance(f, (Equal, Edge)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_depth(f.body)
    raise TypeError(f"not a formula node: {f!r}")


def formula_size(f):
    """AST node count: atoms 1, every connective and quantifier adds 1."""
    if isinstance(f, (Equal, Edge)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, (And, Or, Implies)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, (Exists, Forall)):
        return 1 + formula_size(f.body)
    raise TypeError(f"not a formula node: {f!r}")


def negation_normal_form(f, negate=False):
    """Equivalent formula with negation pushed onto atoms and -> eliminated."""
    if isinstance(f, (Equal, Edge)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return negation_normal_form(f.body, not negate)
    if isinstance(f, And):
        cls = Or if negate else And
        return cls(negation_normal_form(f.left, negate), negation_normal_form(f.right, negate))
    if isinstance(f, Or):
        cls = And if negate else Or
        return cls(negation_normal_form(f.left, negate), negation_normal_form(f.right, negate))
    if isinstance(f, Implies):
        if negate:
            return And(negation_normal_form(f.left, False), negation_normal_form(f.right, True))
        return Or(negation_normal_form(f.left, True), negation_normal_form(f.right, False))
    if isinstance(f, Exists):
        cls = Forall if negate else Exists
        return cls(f.var, negation_normal_form(f.body, negate))
    if isinstance(f, Forall):
        cls = Exists if negate else Forall
        return cls(f.var, negation_normal_form(f.body, negate))
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _var(i):
    return f"x{i}"


@lru_cache(maxsize=None)
def _gen(size, depth, scope):
    """All formulas of exactly `size` nodes, quantifier depth <= depth, whose
    free variables come from x0..x{scope-1}.  Bound variables are named by
    nesting level, so alpha-variants collapse to a single representative."""
    out = []
    if size == 1:
        for i in range(scope):
            for j in range(scope):
                out.append(Equal(_var(i), _var(j)))
                out.append(Edge(_var(i), _var(j)))
        return tuple(out)
    for sub in _gen(size - 1, depth, scope):
        out.append(Not(sub))
    if depth >= 1:
        for sub in _gen(size - 1, depth - 1, scope + 1):
            out.append(Exists(_var(scope), sub))
            out.append(Forall(_var(scope), sub))
    for left_size in range(1, size - 1):
        for left in _gen(left_size, depth, scope):
            for right in _gen(size - 1 - left_size, depth, scope):
                out.append(And(left, right))
                out.append(Or(left, right))
                out.append(Implies(left, right))
    return tuple(out)


def _rename_first_use(f, mapping, counter):
    if isinstance(f, Equal):
        return Equal(mapping[f.left], mapping[f.right])
    if isinstance(f, Edge):
        return Edge(mapping[f.left], mapping[f.right])
    if isinstance(f, Not):
        return Not(_rename_first_use(f.body, mapping, counter))
    if isinstance(f, (And, Or, Implies)):
        left = _rename_first_use(f.left, mapping, counter)
        right = _rename_first_use(f.right, mapping, counter)
        return type(f)(left, right)
    if isinstance(f, (Exists, Forall)):
        fresh = _var(counter[0])
        counter[0] += 1
        inner = dict(mapping)
        inner[f.var] = fresh
        return type(f)(fresh, _rename_first_use(f.body, inner, counter))
    raise TypeError(f"not a formula node: {f!r}")


def canonicalize_variables(f):
    """Rename bound variables to x0, x1, ... in order of first appearance."""
    return _rename_first_use(f, {}, [0])


def enumerate_sentences(max_depth, max_size):
    """All sentences with quantifier depth <= max_depth and <= max_size nodes.

    Deterministic and duplicate-free up to syntactic identity after
    canonical renaming of bound variables; ordered by (size, printed form).
    """
    if max_depth > MAX_ENUM_DEPTH or max_size > MAX_ENUM_SIZE:
        raise EnumerationLimitError(
            f"enumeration bounds (depth {max_depth}, size {max_size}) exceed the "
            f"safety limit (depth {MAX_ENUM_DEPTH}, size {MAX_ENUM_SIZE}); the "
            "sentence space grows too fast past desk scale"
        )
    ordered = []
    for size in range(1, max_size + 1):
        batch = {}
        for f in _gen(size, max_depth, 0):
            g = canonicalize_variables(f)
            batch[print_formula(g)] = g
        ordered.extend(text_f[1] for text_f in sorted(batch.items()))
    return ordered


# Truth signatures are cached per graph so repeated distinguishing scans over
# the same library of sentences stay cheap.
_signature_cache = {}


def _truth_signature(g, max_depth, max_size):
    key = (g.m, g.edges, max_depth, max_size)
    if key not in _signature_cache:
        sentences = enumerate_sentences(max_depth, max_size)
        _signature_cache[key] = tuple(evaluate(g, f) for f in sentences)
    return _signature_cache[key]


def find_distinguishing_sentence(g1, g2, max_depth, max_size=6):
    """First enumerated sentence on which g1 and g2 disagree, or None."""
    sig1 = _truth_signature(g1, max_depth, max_size)
    sig2 = _truth_signature(g2, max_depth, max_size)
    sentences = enumerate_sentences(max_depth, max_size)
    for f, t1, t2 in zip(sentences, sig1, sig2):
        if t1 != t2:
            return f
    return None
