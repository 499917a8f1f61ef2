"""Independent classical evaluator used as an oracle on one-node frames.

Sets are rows of a membership digraph; equality is bisimulation on that
digraph, membership is membership-up-to-bisimulation, and formulas get
ordinary two-valued Tarski semantics.  Deliberately shares no evaluation
code with the package: only the formula AST types are reused.
"""

from __future__ import annotations

from kripkelab.formula import And, Eq, Exists, Forall, Implies, Member, Not, Or, Param, Var


class Digraph:
    """Membership digraph over a finite universe: members[i] lists the row
    indices whose sets are elements of set i."""

    def __init__(self, members: list[list[int]]):
        self.members = members
        self.n = len(members)
        self.eq = self._bisimulation()

    def _bisimulation(self) -> list[list[bool]]:
        n = self.n
        eq = [[True] * n for _ in range(n)]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                for j in range(n):
                    if not eq[i][j]:
                        continue
                    ok = all(
                        any(eq[a][b] for b in self.members[j]) for a in self.members[i]
                    ) and all(
                        any(eq[b][a] for a in self.members[i]) for b in self.members[j]
                    )
                    if not ok:
                        eq[i][j] = False
                        changed = True
        return eq

    def elem(self, i: int, j: int) -> bool:
        return any(self.eq[i][m] for m in self.members[j])


def tarski_eval(g: Digraph, phi, env: dict[str, int], params: dict[str, int]) -> bool:
    """Classical truth of phi over the digraph, with env binding variables
    and params binding parameter names to row indices."""

    def term(t) -> int:
        if isinstance(t, Var):
            if t.name not in env:
                raise KeyError(f"unbound variable {t.name}")
            return env[t.name]
        if isinstance(t, Param):
            if t.name not in params:
                raise KeyError(f"unknown parameter {t.name}")
            return params[t.name]
        raise TypeError(f"not a term: {t!r}")

    def ev(phi) -> bool:
        if isinstance(phi, Eq):
            return g.eq[term(phi.left)][term(phi.right)]
        if isinstance(phi, Member):
            return g.elem(term(phi.left), term(phi.right))
        if isinstance(phi, Not):
            return not ev(phi.body)
        if isinstance(phi, And):
            return ev(phi.left) and ev(phi.right)
        if isinstance(phi, Or):
            return ev(phi.left) or ev(phi.right)
        if isinstance(phi, Implies):
            return (not ev(phi.left)) or ev(phi.right)
        if isinstance(phi, (Forall, Exists)):
            if phi.bound is not None:
                dom = [i for i in range(g.n) if g.elem(i, term(phi.bound))]
            else:
                dom = list(range(g.n))
            hits = []
            for i in dom:
                saved = env.get(phi.var)
                env[phi.var] = i
                hits.append(ev(phi.body))
                if saved is None:
                    del env[phi.var]
                else:
                    env[phi.var] = saved
            return all(hits) if isinstance(phi, Forall) else any(hits)
        raise TypeError(f"not a formula: {phi!r}")

    return ev(phi)


def digraph_of(structure, node: str) -> tuple[Digraph, dict[int, int]]:
    """Flatten one node of a structure into a digraph.

    Returns the digraph and a map from set uid to row index.  Reads only the
    stored extensions, never the package's evaluation routines.
    """
    rows = list(structure.universe[node])
    index = {x.uid: i for i, x in enumerate(rows)}
    members = []
    for x in rows:
        members.append([index[m.uid] for m in x.ext[node] if m.uid in index])
    return Digraph(members), index
