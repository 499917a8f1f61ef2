"""Definability steps, constructible towers over internal sets, powersets,
and inductive fixed points.

The definability engine works per birth node.  It represents a candidate
definable subset as a map from the cone nodes to bitmasks over the universe
there, seeds the pool with atomic membership and equality maps, and closes
under the connective and quantifier operations round by round.  Maps are
saturated under forced equality automatically because the atoms are, so
distinct maps denote semantically distinct sets and map equality is an exact
deduplication rule.

The fragment is bounded on purpose: one live bound variable besides the
defined one (relation maps of arity two), round count given by
`formula_depth`, and a hard cap on harvested sets per birth node.  When a cap
bites, the result is flagged truncated and downstream reports say
under-enumeration rather than failure.  The first round emits unions of
equality atoms, successor shapes, and stage cuts before anything else, so the
sets the lemma fixtures rely on precede the cap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, free_vars, is_positive_in
from .frame import Frame, leq, up_set
from .construct import branch_formula, p_hat
from .semantics import (
    KripkeSet,
    Structure,
    alive,
    ext_at,
    forced_equal,
    forced_member,
    forces,
    is_ordinal,
    universe_at,
)

HARVEST_CAP = 56
POOL_CAP = 2048


@dataclass(frozen=True)
class DefConfig:
    formula_depth: int = 4
    stabilization_window: int = 2

    def __post_init__(self) -> None:
        if self.formula_depth < 1 or self.stabilization_window < 1:
            raise ValueError("formula_depth and stabilization_window must be >= 1")


# ------------------------------------------------------ structure assembly


def hereditary_closure(sets: tuple[KripkeSet, ...]) -> dict[str, tuple[KripkeSet, ...]]:
    """Per-node universe holding the given sets and all members, recursively."""
    if not sets:
        raise ValueError("need at least one set")
    f = sets[0].frame
    per_node: dict[str, dict[int, KripkeSet]] = {tau: {} for tau in f.nodes}

    def add(x: KripkeSet, tau: str) -> None:
        if x.uid in per_node[tau]:
            return
        per_node[tau][x.uid] = x
        for m in x.ext[tau]:
            add(m, tau)

    for x in sets:
        for tau in f.nodes:
            if alive(x, tau):
                add(x, tau)
    return {tau: tuple(per_node[tau].values()) for tau in f.nodes}


def structure_from_sets(
    f: Frame,
    sets: tuple[KripkeSet, ...],
    names: dict[str, KripkeSet] | None = None,
    notes: tuple = (),
) -> Structure:
    universe = hereditary_closure(sets) if sets else {tau: () for tau in f.nodes}
    return Structure(frame=f, universe=universe, names=dict(names or {}), notes=notes)


def empty_structure(f: Frame, names: dict[str, KripkeSet] | None = None) -> Structure:
    return Structure(frame=f, universe={tau: () for tau in f.nodes}, names=dict(names or {}))


def _shared_empty(f: Frame) -> Structure:
    cache = f.caches.setdefault("constructs", {})
    if "empty_base" not in cache:
        cache["empty_base"] = empty_structure(f)
    return cache["empty_base"]


def _topo(f: Frame) -> list[str]:
    # strictly below implies a strictly larger up-set, so this sort is a
    # linear extension of the frame order
    order = {n: i for i, n in enumerate(f.nodes)}
    return sorted(f.nodes, key=lambda n: (-len(f.up[n]), order[n]))


# --------------------------------------------------------- the def engine


def _zero_decidable_zone(s: Structure, f: Frame) -> dict[str, bool]:
    """Nodes where emptiness is settled for the whole remaining universe:
    every element of every later universe is either forced empty or forced
    apart from empty."""
    from .construct import empty_set

    zero = empty_set(f)
    zone: dict[str, bool] = {}
    for tau in f.nodes:
        ok = True
        for rho in up_set(f, tau):
            for y in s.universe[rho]:
                if forced_equal(f, rho, y, zero):
                    continue
                if all(not forced_equal(f, mu, y, zero) for mu in up_set(f, rho)):
                    continue
                ok = False
                break
            if not ok:
                break
        zone[tau] = ok
    return zone


class _Engine:
    """Bitmask closure over one birth node of one base structure."""

    def __init__(self, s: Structure, sigma: str, cfg: DefConfig):
        self.s = s
        self.f = s.frame
        self.sigma = sigma
        self.cfg = cfg
        self.cone = up_set(self.f, sigma)
        self.idx = {tau: k for k, tau in enumerate(self.cone)}
        self.elems = {tau: s.universe[tau] for tau in self.cone}
        self.pos = {
            tau: {x.uid: i for i, x in enumerate(self.elems[tau])} for tau in self.cone
        }
        self.n = {tau: len(self.elems[tau]) for tau in self.cone}
        # position of each tau-element inside higher universes
        self.fwd = {
            tau: {
                rho: tuple(self.pos[rho][x.uid] for x in self.elems[tau])
                for rho in up_set(self.f, tau)
            }
            for tau in self.cone
        }
        self.membit = {
            tau: tuple(self._bits(tau, ext_at(x, tau)) for x in self.elems[tau])
            for tau in self.cone
        }
        self.truncated = False
        self.stabilized = False

    def _bits(self, tau: str, members) -> int:
        out = 0
        for m in members:
            out |= 1 << self.pos[tau][m.uid]
        return out

    def _mask(self, tau: str, pred) -> int:
        bits = 0
        for i, a in enumerate(self.elems[tau]):
            if pred(a):
                bits |= 1 << i
        return bits

    def _p1(self, fn) -> tuple[int, ...]:
        return tuple(fn(tau) for tau in self.cone)

    def atom_maps(self) -> tuple[list, list, list, list]:
        """Atomic maps grouped: equalities, membership in a parameter,
        parameter-membership, and the remaining fixed maps."""
        f, s = self.f, self.s
        params = self.elems[self.sigma]
        eq = [
            self._p1(lambda tau, p=p: self._mask(tau, lambda a: forced_equal(f, tau, a, p)))
            for p in params
        ]
        mem = [
            self._p1(lambda tau, p=p: self._mask(tau, lambda a: forced_member(f, tau, a, p)))
            for p in params
        ]
        has = [
            self._p1(lambda tau, p=p: self._mask(tau, lambda a: forced_member(f, tau, p, a)))
            for p in params
        ]
        full = self._p1(lambda tau: (1 << self.n[tau]) - 1)
        selfin = self._p1(lambda tau: self._mask(tau, lambda a: forced_member(f, tau, a, a)))
        zone = _zero_decidable_zone(s, f)
        zone_map = self._p1(lambda tau: full[self.idx[tau]] if zone[tau] else 0)
        return eq, mem, has, [full, selfin, zone_map]

    # ---- cone operations on maps of the defined variable alone

    def imp1(self, m1: tuple[int, ...], m2: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for tau in self.cone:
            bits = 0
            for i in range(self.n[tau]):
                ok = True
                for rho in up_set(self.f, tau):
                    j = self.fwd[tau][rho][i]
                    if (m1[self.idx[rho]] >> j) & 1 and not (m2[self.idx[rho]] >> j) & 1:
                        ok = False
                        break
                if ok:
                    bits |= 1 << i
            out.append(bits)
        return tuple(out)

    def not1(self, m: tuple[int, ...]) -> tuple[int, ...]:
        return self.imp1(m, tuple(0 for _ in self.cone))

    # ---- pair maps: per-node bitmask over (i * n + j), i = defined variable

    def atom_maps2(self) -> list[tuple[int, ...]]:
        f = self.f
        out = []
        for kind in ("in", "has", "eq"):
            maps = []
            for tau in self.cone:
                n = self.n[tau]
                bits = 0
                for i, a in enumerate(self.elems[tau]):
                    for j, b in enumerate(self.elems[tau]):
                        if kind == "in":
                            hit = forced_member(f, tau, a, b)
                        elif kind == "has":
                            hit = forced_member(f, tau, b, a)
                        else:
                            hit = forced_equal(f, tau, a, b)
                        if hit:
                            bits |= 1 << (i * n + j)
                maps.append(bits)
            out.append(tuple(maps))
        return out

    def lift(self, m: tuple[int, ...], slot: int) -> tuple[int, ...]:
        out = []
        for k, tau in enumerate(self.cone):
            n = self.n[tau]
            bits = 0
            for i in range(n):
                for j in range(n):
                    if (m[k] >> (i if slot == 0 else j)) & 1:
                        bits |= 1 << (i * n + j)
            out.append(bits)
        return tuple(out)

    def imp2(self, m1: tuple[int, ...], m2: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for tau in self.cone:
            n = self.n[tau]
            bits = 0
            for i in range(n):
                for j in range(n):
                    ok = True
                    for rho in up_set(self.f, tau):
                        nr = self.n[rho]
                        b = self.fwd[tau][rho][i] * nr + self.fwd[tau][rho][j]
                        if (m1[self.idx[rho]] >> b) & 1 and not (m2[self.idx[rho]] >> b) & 1:
                            ok = False
                            break
                    if ok:
                        bits |= 1 << (i * n + j)
            out.append(bits)
        return tuple(out)

    def not2(self, m: tuple[int, ...]) -> tuple[int, ...]:
        return self.imp2(m, tuple(0 for _ in self.cone))

    def collapse(self, m2: tuple[int, ...], how: str, p: KripkeSet | None = None):
        """Bind the second variable: by the first one's members, by a
        parameter's members, or by the whole universe; existentially at the
        node, universally over the cone."""
        out = []
        for tau in self.cone:
            n = self.n[tau]
            bits = 0
            for i in range(n):
                if how.startswith("ex"):
                    if how == "ex_v0":
                        dom = self.membit[tau][i]
                    elif how == "ex_p":
                        dom = self._bits(tau, ext_at(p, tau))
                    else:
                        dom = (1 << n) - 1
                    hit = any(
                        (m2[self.idx[tau]] >> (i * n + j)) & 1
                        for j in range(n)
                        if (dom >> j) & 1
                    )
                else:
                    hit = True
                    for rho in up_set(self.f, tau):
                        nr = self.n[rho]
                        i2 = self.fwd[tau][rho][i]
                        if how == "all_v0":
                            dom = self.membit[rho][i2]
                        elif how == "all_p":
                            dom = self._bits(rho, ext_at(p, rho))
                        else:
                            dom = (1 << nr) - 1
                        for j in range(nr):
                            if (dom >> j) & 1 and not (m2[self.idx[rho]] >> (i2 * nr + j)) & 1:
                                hit = False
                                break
                        if not hit:
                            break
                if hit:
                    bits |= 1 << i
            out.append(bits)
        return tuple(out)

    @staticmethod
    def _or(m1, m2):
        return tuple(a | b for a, b in zip(m1, m2))

    @staticmethod
    def _and(m1, m2):
        return tuple(a & b for a, b in zip(m1, m2))

    # ---- the closure loop

    def run(self) -> list[tuple[int, ...]]:
        eq, mem, has, fixed = self.atom_maps()
        zone_map = fixed[-1]
        pool1: list[tuple[int, ...]] = []
        seen1: set = set()
        pool2: list[tuple[int, ...]] = []
        seen2: set = set()

        def push1(m) -> None:
            if m in seen1:
                return
            if len(pool1) >= POOL_CAP:
                self.truncated = True
                return
            seen1.add(m)
            pool1.append(m)

        def push2(m) -> None:
            if m not in seen2 and len(pool2) < POOL_CAP:
                seen2.add(m)
                pool2.append(m)

        for m in eq:
            push1(m)
        push1(fixed[0])
        # curated early shapes: two-element unions, successor shapes, and
        # stage cuts against the emptiness-decidable zone come before the
        # harvest cap can bite
        for a in range(len(eq)):
            for b in range(a + 1, len(eq)):
                push1(self._or(eq[a], eq[b]))
        for a in range(len(eq)):
            push1(self._or(mem[a], eq[a]))
        for m in eq:
            push1(self.imp1(m, zone_map))
        for m in mem + has + fixed:
            push1(m)
        for m in self.atom_maps2():
            push2(m)

        quiet = 0
        for _ in range(self.cfg.formula_depth):
            before = len(pool1) + len(pool2)
            base1 = list(pool1)
            base2 = list(pool2)
            # each stage stops once its target pool is saturated; a skipped
            # stage can only have chased duplicates or lost candidates, so
            # saturation is reported as truncation either way
            if len(pool1) < POOL_CAP:
                for m in base1:
                    push1(self.not1(m))
                for m1 in base1:
                    if len(pool1) >= POOL_CAP:
                        self.truncated = True
                        break
                    for m2 in base1:
                        push1(self._or(m1, m2))
                        push1(self._and(m1, m2))
                        push1(self.imp1(m1, m2))
            else:
                self.truncated = True
            if len(pool2) < POOL_CAP:
                for m in base1:
                    push2(self.lift(m, 0))
                    push2(self.lift(m, 1))
                for m in base2:
                    push2(self.not2(m))
                for m1 in base2:
                    if len(pool2) >= POOL_CAP:
                        self.truncated = True
                        break
                    for m2 in base2:
                        push2(self._and(m1, m2))
                        push2(self._or(m1, m2))
                        push2(self.imp2(m1, m2))
            else:
                self.truncated = True
            for m in list(pool2):
                if len(pool1) >= POOL_CAP:
                    self.truncated = True
                    break
                push1(self.collapse(m, "ex_v0"))
                push1(self.collapse(m, "all_v0"))
                push1(self.collapse(m, "ex_u"))
                push1(self.collapse(m, "all_u"))
                for p in self.elems[self.sigma]:
                    push1(self.collapse(m, "ex_p", p))
                    push1(self.collapse(m, "all_p", p))
            if self.truncated or len(pool2) >= POOL_CAP:
                self.truncated = True
                break
            if len(pool1) + len(pool2) == before:
                quiet += 1
                if quiet >= self.cfg.stabilization_window:
                    break
            else:
                quiet = 0
        self.stabilized = quiet >= 1 and not self.truncated
        return pool1

    def decode(self, m: tuple[int, ...]) -> dict[str, tuple[KripkeSet, ...]]:
        return {
            tau: tuple(self.elems[tau][i] for i in range(self.n[tau]) if (m[k] >> i) & 1)
            for k, tau in enumerate(self.cone)
        }


def _profile(f: Frame, cone, elems, x: KripkeSet) -> tuple[int, ...]:
    out = []
    for tau in cone:
        bits = 0
        for i, a in enumerate(elems[tau]):
            if forced_member(f, tau, a, x):
                bits |= 1 << i
        out.append(bits)
    return tuple(out)


def harvest_at(
    s: Structure, sigma: str, cfg: DefConfig
) -> tuple[list[KripkeSet], bool, bool]:
    """Definable subsets born at sigma over the given base structure.

    Returns (fresh set objects in canonical order, truncated, stabilized).
    Maps matching the forced-membership profile of an existing universe
    element are dropped; that element already is the set in question.
    Results are interned per structure and node, so repeated calls return
    the same objects.
    """
    f = s.frame
    cache = f.caches.setdefault("harvest", {})
    key = (id(s), sigma, cfg)
    hit = cache.get(key)
    # the cached entry pins the structure, so an id collision cannot occur
    # while the entry lives
    if hit is not None and hit[0] is s:
        return hit[1]
    eng = _Engine(s, sigma, cfg)
    maps = eng.run()
    existing = {_profile(f, eng.cone, eng.elems, x) for x in s.universe[sigma]}
    born: list[KripkeSet] = []
    seen_new: set = set()
    truncated = eng.truncated
    for m in maps:
        if m in seen_new or m in existing:
            continue
        if len(born) >= HARVEST_CAP:
            truncated = True
            break
        new = KripkeSet(f, sigma, eng.decode(m), f"def{sigma}#{len(born)}")
        seen_new.add(m)
        born.append(new)
    result = (born, truncated, eng.stabilized)
    cache[key] = (s, result)
    return result


def def_step(s: Structure, cfg: DefConfig = DefConfig()) -> Structure:
    """One definability step over the whole structure: every node contributes
    the subsets definable there; old sets persist and duplicates collapse
    onto the earliest representative."""
    f = s.frame
    new_by_node: dict[str, list[KripkeSet]] = {tau: [] for tau in f.nodes}
    carried: list[KripkeSet] = []
    truncated = stabilized = False
    for sigma in _topo(f):
        born, trunc, stab = harvest_at(s, sigma, cfg)
        truncated |= trunc
        stabilized |= stab
        for cand in born:
            twin = next(
                (c for c in carried if alive(c, sigma) and forced_equal(f, sigma, cand, c)),
                None,
            )
            if twin is None:
                new_by_node[sigma].append(cand)
                carried.append(cand)
    universe = {
        tau: s.universe[tau]
        + tuple(x for rho in f.nodes if leq(f, rho, tau) for x in new_by_node[rho])
        for tau in f.nodes
    }
    out = Structure(frame=f, universe=universe, names=dict(s.names), notes=s.notes)
    out.meta["truncated"] = truncated
    out.meta["stabilized"] = stabilized
    return out


def iterate_def(s: Structure, steps: int, cfg: DefConfig = DefConfig()) -> Structure:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    for _ in range(steps):
        s = def_step(s, cfg)
    return s


# ----------------------------------------------------- towers over a set


def def_along(
    x: KripkeSet, cfg: DefConfig = DefConfig(), base: Structure | None = None
) -> Structure:
    """The constructible tower over an internal set: at each node, union the
    definability steps over the towers of the members present there.

    Earlier-born sets are carried upward, so universes grow literally along
    the order; a fresh harvest forced equal to something already present is
    dropped in its favor.
    """
    f = x.frame
    if base is None:
        base = _shared_empty(f)
    cache = f.caches.setdefault("tower", {})
    key = (x.uid, cfg, id(base))
    hit = cache.get(key)
    if hit is not None and hit[0] is base:
        return hit[1]

    member_towers = {
        m.uid: def_along(m, cfg, base)
        for tau in f.nodes
        if alive(x, tau)
        for m in x.ext[tau]
    }

    universe: dict[str, tuple[KripkeSet, ...]] = {}
    have: dict[str, dict[int, KripkeSet]] = {}
    truncated = stabilized = False
    order = _topo(f)
    for tau in order:
        pool: dict[int, KripkeSet] = {}
        for rho in order:
            if rho != tau and leq(f, rho, tau):
                pool.update(have[rho])
        for b in base.universe[tau]:
            pool.setdefault(b.uid, b)
        if alive(x, tau):
            for m in x.ext[tau]:
                tower = member_towers[m.uid]
                for e in tower.universe[tau]:
                    pool.setdefault(e.uid, e)
                born, trunc, stab = harvest_at(tower, tau, cfg)
                truncated |= trunc
                stabilized |= stab
                for cand in born:
                    if cand.uid in pool:
                        continue
                    if any(
                        forced_equal(f, tau, cand, o)
                        for o in pool.values()
                        if alive(o, tau)
                    ):
                        continue
                    pool[cand.uid] = cand
        have[tau] = pool
        universe[tau] = tuple(pool.values())
    out = Structure(frame=f, universe=universe, names={})
    out.meta["truncated"] = truncated
    out.meta["stabilized"] = stabilized
    cache[key] = (base, out)
    return out


def constructible(
    x: KripkeSet, cfg: DefConfig = DefConfig(), base: Structure | None = None
) -> Structure:
    """The tower over an internal ordinal; rejects non-ordinal stages."""
    probe = structure_from_sets(x.frame, (x,))
    if not is_ordinal(probe, x):
        raise ValueError("constructible towers are indexed by internal ordinals")
    return def_along(x, cfg, base)


# ---------------------------------------------------------------- powerset


def powerset(s: Structure, limit: int = 1 << 16) -> Structure:
    """All monotone selections from the universe, born at every node."""
    f = s.frame
    new_by_node: dict[str, list[KripkeSet]] = {tau: [] for tau in f.nodes}
    carried: list[KripkeSet] = []
    topo = _topo(f)
    for sigma in topo:
        cone_set = set(up_set(f, sigma))
        cone = [tau for tau in topo if tau in cone_set]
        families: list[dict[str, tuple[KripkeSet, ...]]] = [{}]
        for tau in cone:
            if s.universe[tau] and 1 << len(s.universe[tau]) > limit:
                raise ValueError("powerset too large to enumerate; shrink the structure")
            grown: list[dict[str, tuple[KripkeSet, ...]]] = []
            for fam in families:
                lower: set[int] = set()
                for rho, members in fam.items():
                    if leq(f, rho, tau):
                        lower |= {m.uid for m in members}
                forced = tuple(y for y in s.universe[tau] if y.uid in lower)
                optional = [y for y in s.universe[tau] if y.uid not in lower]
                for k in range(1 << len(optional)):
                    fam2 = dict(fam)
                    fam2[tau] = forced + tuple(
                        optional[i] for i in range(len(optional)) if (k >> i) & 1
                    )
                    grown.append(fam2)
            if len(grown) > limit:
                raise ValueError("powerset too large to enumerate; shrink the structure")
            families = grown
        for fam in families:
            cand = KripkeSet(f, sigma, {tau: fam[tau] for tau in cone}, f"pow{sigma}")
            match = next(
                (y for y in s.universe[sigma] if forced_equal(f, sigma, cand, y)), None
            )
            if match is None:
                match = next(
                    (c for c in carried if alive(c, sigma) and forced_equal(f, sigma, cand, c)),
                    None,
                )
            if match is None:
                new_by_node[sigma].append(cand)
                carried.append(cand)
    universe = {
        tau: s.universe[tau]
        + tuple(x for rho in f.nodes if leq(f, rho, tau) for x in new_by_node[rho])
        for tau in f.nodes
    }
    return Structure(frame=f, universe=universe, names=dict(s.names), notes=s.notes)


# ------------------------------------------------------------ fixed points


def gamma_apply(
    s: Structure,
    x: KripkeSet,
    psi: Formula,
    ysub: KripkeSet,
    var: str = "x",
    yname: str = "Y",
) -> KripkeSet:
    """One application of the operator carving {a in x : psi(a, Y)}."""
    if not is_positive_in(psi, yname):
        raise ValueError(f"formula is not positive in {yname!r}")
    if var not in free_vars(psi):
        raise ValueError(f"formula does not mention the selection variable {var!r}")
    f = s.frame
    ext = {
        tau: tuple(
            a
            for a in ext_at(x, tau)
            if forces(s, tau, psi, {var: a, yname: ysub}, extra_names={yname: ysub})
        )
        for tau in up_set(f, x.birth)
    }
    return KripkeSet(f, x.birth, ext, "gamma")


def _subset_signature(x: KripkeSet) -> tuple:
    return tuple((tau, tuple(m.uid for m in x.ext[tau])) for tau in sorted(x.ext))


def lfp(
    s: Structure, x: KripkeSet, psi: Formula, var: str = "x", yname: str = "Y"
) -> tuple[KripkeSet, list[KripkeSet]]:
    """Least fixed point of the positive operator, iterated up from empty.
    Returns the fixed point and the stage trace ending at it."""
    stage = KripkeSet(x.frame, x.birth, {tau: () for tau in x.ext}, "stage0")
    trace = [stage]
    while True:
        nxt = gamma_apply(s, x, psi, stage, var, yname)
        if _subset_signature(nxt) == _subset_signature(stage):
            return stage, trace
        stage = nxt
        trace.append(stage)


def gfp(
    s: Structure, x: KripkeSet, psi: Formula, var: str = "x", yname: str = "Y"
) -> tuple[KripkeSet, list[KripkeSet]]:
    """Greatest fixed point, iterated down from the full subset."""
    stage = x
    trace = [stage]
    while True:
        nxt = gamma_apply(s, x, psi, stage, var, yname)
        if _subset_signature(nxt) == _subset_signature(stage):
            return stage, trace
        stage = nxt
        trace.append(stage)


def define_subset(
    s: Structure,
    sigma: str,
    phi: Formula,
    var: str = "x",
    extra_names: dict[str, KripkeSet] | None = None,
) -> KripkeSet:
    """The subset of the universe carved by one formula at one birth node."""
    f = s.frame
    ext = {
        tau: tuple(
            a for a in s.universe[tau] if forces(s, tau, phi, {var: a}, extra_names)
        )
        for tau in up_set(f, sigma)
    }
    return KripkeSet(f, sigma, ext, "carved")


def definable_branches(
    s: Structure, q: KripkeSet | None = None, sigma: str | None = None
) -> tuple[KripkeSet, ...]:
    """Universe members at sigma that satisfy the branch predicate against q,
    one representative per forced-equality class.

    q defaults to the full collection of delayed ones; sigma to the bottom.
    """
    f = s.frame
    if q is None:
        q = p_hat(f)
    if sigma is None:
        sigma = f.bottom
    phi = branch_formula()
    found: list[KripkeSet] = []
    for x in universe_at(s, sigma):
        if not forces(s, sigma, phi, extra_names={"B": x, "Q": q}):
            continue
        if any(forced_equal(f, sigma, x, r) for r in found):
            continue
        found.append(x)
    return tuple(found)
