"""First-order formulas over membership and equality.

Concrete syntax (ASCII):

    atom      t in t    |    t = t
    term      variable  |  #name        (# marks a named constant)
    ~ p                 tightest
    p /\\ q   p \\/ q    left-associative
    p -> q              right-associative, loosest
    forall v . p        exists v . p
    forall v in t . p   exists v in t . p     (bounded forms)

A quantifier body extends as far right as possible; parentheses override.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    name: str


Term = Var | Param

# -------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Member:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    bound: Term | None
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    bound: Term | None
    body: "Formula"


Formula = Member | Eq | Not | And | Or | Implies | Forall | Exists

_BINARY = {And: "/\\", Or: "\\/", Implies: "->"}


# ---------------------------------------------------------------- render


def render_term(t: Term) -> str:
    return t.name if isinstance(t, Var) else "#" + t.name


def render(phi: Formula) -> str:
    """Canonical fully-parenthesized form; parse(render(phi)) == phi."""
    if isinstance(phi, Member):
        return f"{render_term(phi.left)} in {render_term(phi.right)}"
    if isinstance(phi, Eq):
        return f"{render_term(phi.left)} = {render_term(phi.right)}"
    if isinstance(phi, Not):
        return f"~({render(phi.body)})"
    if isinstance(phi, (And, Or, Implies)):
        op = _BINARY[type(phi)]
        return f"({render(phi.left)}) {op} ({render(phi.right)})"
    kw = "forall" if isinstance(phi, Forall) else "exists"
    if phi.bound is None:
        return f"{kw} {phi.var} . ({render(phi.body)})"
    return f"{kw} {phi.var} in {render_term(phi.bound)} . ({render(phi.body)})"


# ----------------------------------------------------------------- parse


class ParseError(ValueError):
    pass


_SYMBOLS = ["/\\", "\\/", "->", "~", "(", ")", ".", "="]


def _tokenize(text: str) -> list[str]:
    toks, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(sym)
                i += len(sym)
                break
        else:
            if ch == "#" or ch.isalnum() or ch == "_":
                j = i + 1 if ch == "#" else i
                k = j
                while k < len(text) and (text[k].isalnum() or text[k] in "_'" ):
                    k += 1
                if k == j:
                    raise ParseError(f"bad token at position {i}: {text[i:i+10]!r}")
                toks.append(text[i:k])
                i = k
            else:
                raise ParseError(f"bad character {ch!r} at position {i}")
    return toks


class _Parser:
    def __init__(self, toks: list[str]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of formula")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    def term(self) -> Term:
        tok = self.take()
        if tok.startswith("#"):
            return Param(tok[1:])
        if tok[0].isalpha() or tok[0] == "_":
            if tok in ("in", "forall", "exists"):
                raise ParseError(f"keyword {tok!r} cannot be a term")
            return Var(tok)
        raise ParseError(f"expected a term, got {tok!r}")

    def formula(self) -> Formula:
        return self.implies()

    def implies(self) -> Formula:
        left = self.disjunct()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunct(self) -> Formula:
        left = self.conjunct()
        while self.peek() == "\\/":
            self.take()
            left = Or(left, self.conjunct())
        return left

    def conjunct(self) -> Formula:
        left = self.unary()
        while self.peek() == "/\\":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.take()
            var = self.take()
            if not (var[0].isalpha() or var[0] == "_") or var in ("in", "forall", "exists"):
                raise ParseError(f"bad bound variable {var!r}")
            bound: Term | None = None
            if self.peek() == "in":
                self.take()
                bound = self.term()
            self.take(".")
            body = self.formula()  # scope extends maximally right
            cls = Forall if tok == "forall" else Exists
            return cls(var, bound, body)
        if tok == "(":
            self.take()
            phi = self.formula()
            self.take(")")
            return phi
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        op = self.take()
        if op == "in":
            return Member(left, self.term())
        if op == "=":
            return Eq(left, self.term())
        raise ParseError(f"expected 'in' or '=', got {op!r}")


def parse(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    phi = p.formula()
    if p.peek() is not None:
        raise ParseError(f"trailing tokens starting at {p.peek()!r}")
    return phi


# ------------------------------------------------------------- analysis


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Member, Eq)):
        return frozenset(t.name for t in (phi.left, phi.right) if isinstance(t, Var))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    fv = free_vars(phi.body) - {phi.var}
    if phi.bound is not None and isinstance(phi.bound, Var):
        fv |= {phi.bound.name}
    return fv


def params_of(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Member, Eq)):
        return frozenset(t.name for t in (phi.left, phi.right) if isinstance(t, Param))
    if isinstance(phi, Not):
        return params_of(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return params_of(phi.left) | params_of(phi.right)
    ps = params_of(phi.body)
    if isinstance(phi.bound, Param):
        ps |= {phi.bound.name}
    return ps


def _fresh(base: str, avoid: frozenset[str]) -> str:
    cand = base
    while cand in avoid:
        cand += "'"
    return cand


def substitute(phi: Formula, var: str, t: Term) -> Formula:
    """Replace free occurrences of `var` by `t`, renaming binders on capture."""

    def sub_term(u: Term) -> Term:
        return t if isinstance(u, Var) and u.name == var else u

    if isinstance(phi, Member):
        return Member(sub_term(phi.left), sub_term(phi.right))
    if isinstance(phi, Eq):
        return Eq(sub_term(phi.left), sub_term(phi.right))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, var, t))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(substitute(phi.left, var, t), substitute(phi.right, var, t))
    bound = sub_term(phi.bound) if phi.bound is not None else None
    if phi.var == var:
        return type(phi)(phi.var, bound, phi.body)
    body = phi.body
    if isinstance(t, Var) and phi.var == t.name and var in free_vars(body):
        new = _fresh(phi.var, free_vars(body) | {var, t.name})
        body = substitute(body, phi.var, Var(new))
        return type(phi)(new, bound, substitute(body, var, t))
    return type(phi)(phi.var, bound, substitute(body, var, t))


def relativize(phi: Formula, dom: Term) -> Formula:
    """Bound every unbounded quantifier by `dom`."""
    if isinstance(phi, (Member, Eq)):
        return phi
    if isinstance(phi, Not):
        return Not(relativize(phi.body, dom))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(relativize(phi.left, dom), relativize(phi.right, dom))
    bound = phi.bound if phi.bound is not None else dom
    return type(phi)(phi.var, bound, relativize(phi.body, dom))


def is_delta0(phi: Formula) -> bool:
    if isinstance(phi, (Member, Eq)):
        return True
    if isinstance(phi, Not):
        return is_delta0(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return is_delta0(phi.left) and is_delta0(phi.right)
    return phi.bound is not None and is_delta0(phi.body)


def _is_sigma(phi: Formula) -> bool:
    if is_delta0(phi):
        return True
    if isinstance(phi, (And, Or)):
        return _is_sigma(phi.left) and _is_sigma(phi.right)
    if isinstance(phi, Exists):
        return _is_sigma(phi.body)
    if isinstance(phi, Forall):
        return phi.bound is not None and _is_sigma(phi.body)
    return False


def _is_pi(phi: Formula) -> bool:
    if is_delta0(phi):
        return True
    if isinstance(phi, (And, Or)):
        return _is_pi(phi.left) and _is_pi(phi.right)
    if isinstance(phi, Forall):
        return _is_pi(phi.body)
    if isinstance(phi, Exists):
        return phi.bound is not None and _is_pi(phi.body)
    return False


def classify(phi: Formula) -> str:
    """One of "Delta0", "Sigma", "Pi", "General" (structural, not semantic)."""
    if is_delta0(phi):
        return "Delta0"
    if _is_sigma(phi):
        return "Sigma"
    if _is_pi(phi):
        return "Pi"
    return "General"


def is_positive_in(phi: Formula, name: str, positive: bool = True) -> bool:
    """True iff every occurrence of the parameter `name` sits under an even
    number of polarity flips (negations and antecedents)."""
    def mentions(t: Term | None) -> bool:
        return isinstance(t, Param) and t.name == name

    if isinstance(phi, (Member, Eq)):
        return positive or not (mentions(phi.left) or mentions(phi.right))
    if isinstance(phi, Not):
        return is_positive_in(phi.body, name, not positive)
    if isinstance(phi, Implies):
        return is_positive_in(phi.left, name, not positive) and is_positive_in(
            phi.right, name, positive
        )
    if isinstance(phi, (And, Or)):
        return is_positive_in(phi.left, name, positive) and is_positive_in(
            phi.right, name, positive
        )
    # A bound occurrence acts like v in t -> ... for forall, v in t /\ ... for exists.
    if mentions(phi.bound):
        bound_ok = positive if isinstance(phi, Exists) else not positive
        if not bound_ok:
            return False
    return is_positive_in(phi.body, name, positive)


# ----------------------------------------------------------- enumeration


def _atoms(terms: list[Term]) -> list[Formula]:
    out: list[Formula] = []
    for a, b in itertools.permutations(terms, 2):
        out.append(Member(a, b))
    for a, b in itertools.combinations(terms, 2):
        out.append(Eq(a, b))
    for t in terms:
        out.append(Member(t, t))
    for t in terms:
        out.append(Eq(t, t))
    return out


_BOUND_POOL = ("z", "w", "u", "v", "z1", "w1", "u1", "v1")


def enumerate_delta0(
    max_depth: int,
    variables: tuple[str, ...] = ("x", "y"),
    params: tuple[str, ...] = (),
) -> list[Formula]:
    """Deterministic, duplicate-free stream of bounded formulas.

    Depth counts connective and quantifier nesting; atoms have depth 0.  The
    list for depth d is a prefix of the list for depth d+1.  Bound variables
    are drawn from a fixed pool, one per nesting level, so the stream is
    finite at every depth.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    base_terms: list[Term] = [Var(v) for v in variables] + [Param(p) for p in params]
    layers: list[list[Formula]] = [_atoms(base_terms)]
    seen = {render(phi) for phi in layers[0]}

    def quantifier_layer(prev: list[Formula], depth: int) -> list[Formula]:
        if depth - 1 >= len(_BOUND_POOL):
            return []
        v = _BOUND_POOL[depth - 1]
        out = []
        bounds: list[Term] = [t for t in base_terms]
        for body in prev:
            for cls in (Forall, Exists):
                for b in bounds:
                    out.append(cls(v, b, body))
        return out

    for depth in range(1, max_depth + 1):
        prev_all = [phi for layer in layers for phi in layer]
        prev_terms = [Var(_BOUND_POOL[i]) for i in range(depth - 1)]
        terms = base_terms + prev_terms

        def rebased_atoms() -> list[Formula]:
            return _atoms(terms)

        fresh: list[Formula] = []
        exact_prev = layers[-1] if depth > 1 else layers[0]
        # deeper atoms appear once the bound variable pool has grown
        if depth > 1:
            exact_prev = exact_prev + [a for a in rebased_atoms() if render(a) not in seen]
        for phi in exact_prev:
            fresh.append(Not(phi))
        for phi, psi in itertools.product(exact_prev, prev_all + exact_prev):
            fresh.append(And(phi, psi))
            fresh.append(Or(phi, psi))
            fresh.append(Implies(phi, psi))
        for phi, psi in itertools.product(prev_all, exact_prev):
            fresh.append(And(phi, psi))
            fresh.append(Or(phi, psi))
            fresh.append(Implies(phi, psi))
        fresh.extend(quantifier_layer(exact_prev, depth))
        layer = []
        for phi in fresh:
            key = render(phi)
            if key not in seen:
                seen.add(key)
                layer.append(phi)
        layers.append(layer)
    return [phi for layer in layers for phi in layer]


def enumerate_sigma(
    max_depth: int,
    variables: tuple[str, ...] = ("x", "y"),
    params: tuple[str, ...] = (),
) -> list[Formula]:
    """Bounded formulas plus one unbounded existential wrapper."""
    out = list(enumerate_delta0(max_depth, variables, params))
    if max_depth >= 1:
        inner = enumerate_delta0(max_depth - 1, variables + ("q",), params)
        out.extend(Exists("q", None, phi) for phi in inner)
    return out


def enumerate_pi(
    max_depth: int,
    variables: tuple[str, ...] = ("x", "y"),
    params: tuple[str, ...] = (),
) -> list[Formula]:
    """Bounded formulas plus one unbounded universal wrapper."""
    out = list(enumerate_delta0(max_depth, variables, params))
    if max_depth >= 1:
        inner = enumerate_delta0(max_depth - 1, variables + ("q",), params)
        out.extend(Forall("q", None, phi) for phi in inner)
    return out
