"""Kripke sets over a frame and the forcing relation.

A Kripke set is born at a node and assigns to every node of the birth cone a
finite extension (a tuple of previously built Kripke sets).  Transitions are
inclusions: the extension can only grow along the order.  Equality between
Kripke sets is not identity but the forced, hereditarily extensional one
computed by `forced_equal`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formula import (
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    And,
    Or,
    Member,
    Not,
    Param,
    Term,
    Var,
    free_vars,
    is_delta0,
    params_of,
)
from .frame import Frame, leq, up_set

_uid_counter = itertools.count()


class KripkeSet:
    """Immutable by convention; build the extension map fully, then freeze."""

    __slots__ = ("frame", "birth", "ext", "uid", "rank", "label")

    def __init__(
        self,
        frame: Frame,
        birth: str,
        ext: dict[str, tuple["KripkeSet", ...]],
        label: str = "",
    ):
        cone = up_set(frame, birth)
        if set(ext) != set(cone):
            raise ValueError(f"extension map must cover exactly the cone of {birth!r}")
        for tau in cone:
            for m in ext[tau]:
                if m.frame is not frame:
                    raise ValueError("member belongs to a different frame")
                if not leq(frame, m.birth, tau):
                    raise ValueError(
                        f"member born at {m.birth!r} is not alive at {tau!r}"
                    )
        for tau in cone:
            here = {m.uid for m in ext[tau]}
            for rho in up_set(frame, tau):
                if not here <= {m.uid for m in ext[rho]}:
                    raise ValueError(
                        f"extension shrinks from {tau!r} to {rho!r}; transitions are inclusions"
                    )
        self.frame = frame
        self.birth = birth
        self.ext = {tau: tuple(ext[tau]) for tau in cone}
        self.uid = next(_uid_counter)
        # members predate this set, so ranks are already available: no cycles
        self.rank = 1 + max(
            (m.rank for tau in cone for m in ext[tau]), default=-1
        )
        self.label = label

    def __repr__(self) -> str:
        tag = self.label or f"k{self.uid}"
        return f"<{tag}@{self.birth}>"


def alive(x: KripkeSet, sigma: str) -> bool:
    return leq(x.frame, x.birth, sigma)


def ext_at(x: KripkeSet, tau: str) -> tuple[KripkeSet, ...]:
    if not alive(x, tau):
        raise ValueError(f"set born at {x.birth!r} has no extension at {tau!r}")
    return x.ext[tau]


# ------------------------------------------------------- forced equality


def forced_equal(frame_or_structure, sigma: str, x: KripkeSet, y: KripkeSet) -> bool:
    """Hereditary coextensionality over the cone of sigma.

    x and y are forced equal at sigma iff at every tau >= sigma each member of
    either extension is forced equal at tau to a member of the other.
    """
    f: Frame = getattr(frame_or_structure, "frame", frame_or_structure)
    if not (alive(x, sigma) and alive(y, sigma)):
        raise ValueError("forced_equal on a set not alive at the node")
    memo = f.caches.setdefault("eq", {})
    return _eq(f, memo, sigma, x, y)


def _eq(f: Frame, memo: dict, sigma: str, x: KripkeSet, y: KripkeSet) -> bool:
    if x.uid == y.uid:
        return True
    key = (sigma, x.uid, y.uid) if x.uid < y.uid else (sigma, y.uid, x.uid)
    hit = memo.get(key)
    if hit is not None:
        return hit
    result = True
    for tau in up_set(f, sigma):
        ex, ey = x.ext[tau], y.ext[tau]
        for a in ex:
            if not any(_eq(f, memo, tau, a, b) for b in ey):
                result = False
                break
        if result:
            for b in ey:
                if not any(_eq(f, memo, tau, b, a) for a in ex):
                    result = False
                    break
        if not result:
            break
    memo[key] = result
    return result


def forced_member(frame_or_structure, sigma: str, x: KripkeSet, y: KripkeSet) -> bool:
    """x is forced to belong to y at sigma iff some listed member of y at
    sigma is forced equal to x there."""
    f: Frame = getattr(frame_or_structure, "frame", frame_or_structure)
    if not (alive(x, sigma) and alive(y, sigma)):
        raise ValueError("forced_member on a set not alive at the node")
    memo = f.caches.setdefault("eq", {})
    return any(_eq(f, memo, sigma, x, z) for z in y.ext[sigma])


# ------------------------------------------------------------- structure


@dataclass(frozen=True, eq=False)
class Structure:
    """A frame, a monotone universe map, and a table of named sets.

    Universe members must be alive where listed and closed under membership.
    Named sets only need to be alive somewhere on the frame; they are not
    required to sit inside the universe.
    """

    frame: Frame
    universe: dict[str, tuple[KripkeSet, ...]]
    names: dict[str, KripkeSet]
    notes: tuple = ()
    meta: dict = field(default_factory=dict, compare=False, repr=False)
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if set(self.universe) != set(self.frame.nodes):
            raise ValueError("universe must assign a tuple to every node")
        for tau, elems in self.universe.items():
            uids = set()
            for x in elems:
                if not alive(x, tau):
                    raise ValueError(f"universe element {x!r} not alive at {tau!r}")
                if x.uid in uids:
                    raise ValueError(f"duplicate universe element {x!r} at {tau!r}")
                uids.add(x.uid)
            for x in elems:
                for m in x.ext[tau]:
                    if m.uid not in uids:
                        raise ValueError(
                            f"universe at {tau!r} is not membership-closed: "
                            f"{m!r} in {x!r} is missing"
                        )
        for tau in self.frame.nodes:
            here = {x.uid for x in self.universe[tau]}
            for rho in up_set(self.frame, tau):
                if not here <= {x.uid for x in self.universe[rho]}:
                    raise ValueError(f"universe shrinks from {tau!r} to {rho!r}")
        for name, x in self.names.items():
            if x.frame is not self.frame:
                raise ValueError(f"named set {name!r} lives on a different frame")


def universe_at(s: Structure, sigma: str) -> tuple[KripkeSet, ...]:
    return s.universe[sigma]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: tuple | None = None
    note: str = ""


# ---------------------------------------------------------------- forces


class EvalError(ValueError):
    pass


def forces(
    s: Structure,
    sigma: str,
    phi: Formula,
    env: dict[str, KripkeSet] | None = None,
    extra_names: dict[str, KripkeSet] | None = None,
) -> bool:
    """The forcing relation at a node.

    Conjunction and disjunction are local; negation, implication and
    universal quantification sweep the cone; existentials are witnessed at
    the node itself.  Bounded quantifiers range over the bound's extension.
    """
    env = env or {}
    ctx = _Ctx(s, extra_names or {})
    return ctx.forces(sigma, phi, env)


class _Ctx:
    __slots__ = ("s", "extra", "fv_cache", "pn_cache")

    def __init__(self, s: Structure, extra: dict[str, KripkeSet]):
        self.s = s
        self.extra = extra
        self.fv_cache: dict[int, frozenset[str]] = s.meta.setdefault("_fv", {})
        self.pn_cache: dict[int, frozenset[str]] = s.meta.setdefault("_pn", {})

    # All three caches key by id(phi); each entry pins phi so the address
    # cannot be recycled by a later formula while the entry is live.
    def _fv(self, phi: Formula) -> frozenset[str]:
        got = self.fv_cache.get(id(phi))
        if got is None or got[0] is not phi:
            got = (phi, free_vars(phi))
            self.fv_cache[id(phi)] = got
        return got[1]

    def _pn(self, phi: Formula) -> frozenset[str]:
        got = self.pn_cache.get(id(phi))
        if got is None or got[0] is not phi:
            got = (phi, params_of(phi))
            self.pn_cache[id(phi)] = got
        return got[1]

    def term(self, t: Term, sigma: str, env: dict[str, KripkeSet]) -> KripkeSet:
        if isinstance(t, Var):
            if t.name not in env:
                raise EvalError(f"unbound variable {t.name!r}")
            x = env[t.name]
        else:
            x = self.extra.get(t.name) or self.s.names.get(t.name)
            if x is None:
                raise EvalError(f"unknown parameter #{t.name}")
        if not alive(x, sigma):
            raise EvalError(f"parameter born at {x.birth!r} is dead at {sigma!r}")
        return x

    def forces(self, sigma: str, phi: Formula, env: dict[str, KripkeSet]) -> bool:
        key = (
            id(phi),
            sigma,
            tuple(sorted((v, env[v].uid) for v in self._fv(phi) if v in env)),
            tuple(sorted((p, self.extra[p].uid) for p in self._pn(phi) if p in self.extra)),
        )
        memo = self.s._memo
        hit = memo.get(key)
        if hit is not None and hit[0] is phi:
            return hit[1]
        result = self._eval(sigma, phi, env)
        memo[key] = (phi, result)
        return result

    def _eval(self, sigma: str, phi: Formula, env: dict[str, KripkeSet]) -> bool:
        s = self.s
        if isinstance(phi, Member):
            return forced_member(s, sigma, self.term(phi.left, sigma, env), self.term(phi.right, sigma, env))
        if isinstance(phi, Eq):
            return forced_equal(s, sigma, self.term(phi.left, sigma, env), self.term(phi.right, sigma, env))
        if isinstance(phi, And):
            return self.forces(sigma, phi.left, env) and self.forces(sigma, phi.right, env)
        if isinstance(phi, Or):
            return self.forces(sigma, phi.left, env) or self.forces(sigma, phi.right, env)
        if isinstance(phi, Not):
            return all(not self.forces(tau, phi.body, env) for tau in up_set(s.frame, sigma))
        if isinstance(phi, Implies):
            return all(
                not self.forces(tau, phi.left, env) or self.forces(tau, phi.right, env)
                for tau in up_set(s.frame, sigma)
            )
        if isinstance(phi, Exists):
            pool = (
                ext_at(self.term(phi.bound, sigma, env), sigma)
                if phi.bound is not None
                else s.universe[sigma]
            )
            return any(self.forces(sigma, phi.body, {**env, phi.var: a}) for a in pool)
        if isinstance(phi, Forall):
            for tau in up_set(s.frame, sigma):
                pool = (
                    ext_at(self.term(phi.bound, tau, env), tau)
                    if phi.bound is not None
                    else s.universe[tau]
                )
                for a in pool:
                    if not self.forces(tau, phi.body, {**env, phi.var: a}):
                        return False
            return True
        raise EvalError(f"unknown formula node {phi!r}")


# ----------------------------------------------------- structure relations


def is_end_extension(m: Structure, n: Structure) -> bool:
    """n end-extends m: every m-universe element persists into n's universe,
    and n forces no new members into old sets."""
    if m.frame is not n.frame:
        raise ValueError("structures live on different frames")
    f = m.frame
    for sigma in f.nodes:
        for x in m.universe[sigma]:
            if not any(forced_equal(f, sigma, x, x2) for x2 in n.universe[sigma]):
                return False
    for sigma in f.nodes:
        for y in m.universe[sigma]:
            for x in n.universe[sigma]:
                if forced_member(f, sigma, x, y):
                    if not any(forced_equal(f, sigma, x, old) for old in m.universe[sigma]):
                        return False
    return True


def delta0_absolute(
    m: Structure,
    n: Structure,
    phi: Formula,
    env: dict[str, KripkeSet] | None = None,
) -> bool:
    """Whether a bounded formula with m-side parameters gets the same verdict
    in both structures at every node."""
    if not is_delta0(phi):
        raise ValueError("delta0_absolute needs a bounded formula")
    return all(
        forces(m, sigma, phi, env) == forces(n, sigma, phi, env)
        for sigma in m.frame.nodes
    )


def is_extensional(s: Structure, eq=None) -> bool:
    """Equality agrees with forced coextensionality over the universe.

    `eq` defaults to forced_equal; tests can inject a broken comparator to
    exercise the negative direction.
    """
    f = s.frame
    if eq is None:
        eq = lambda sigma, x, y: forced_equal(f, sigma, x, y)

    def member_via(sigma: str, z: KripkeSet, x: KripkeSet) -> bool:
        return any(eq(sigma, z, w) for w in x.ext[sigma])

    for sigma in f.nodes:
        elems = s.universe[sigma]
        for x, y in itertools.combinations_with_replacement(elems, 2):
            coext = all(
                member_via(tau, z, x) == member_via(tau, z, y)
                for tau in up_set(f, sigma)
                for z in s.universe[tau]
            )
            if eq(sigma, x, y) != coext:
                return False
    return True


_TRANS = None
_MEMB_TRANS = None


def is_ordinal(s: Structure, x: KripkeSet) -> bool:
    """A transitive set of transitive sets, judged by forcing at the birth
    node (and hence on the whole cone)."""
    global _TRANS, _MEMB_TRANS
    from .formula import parse

    if _TRANS is None:
        _TRANS = parse("forall u in a . forall w in u . w in a")
        _MEMB_TRANS = parse("forall u in a . forall w in u . forall v in w . v in u")
    env = {"a": x}
    return forces(s, x.birth, _TRANS, env) and forces(s, x.birth, _MEMB_TRANS, env)
