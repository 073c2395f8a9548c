"""Finite posets and complete lattices with exact integer arithmetic.

Elements are dense indices 0..n-1.  The order relation is stored closed
(reflexive-transitive closure computed at build time) so comparability is
an O(1) table lookup, and meet/join tables are precomputed eagerly because
every downstream check re-queries them heavily.
"""

from __future__ import annotations

from dataclasses import dataclass


class LatticeError(Exception):
    pass


class NotAPartialOrder(LatticeError):
    """The supplied pairs contain a cycle (antisymmetry fails after closure)."""


class NotALattice(LatticeError):
    """Some pair lacks a unique greatest lower / least upper bound."""

    def __init__(self, pair, which):
        self.pair = pair
        self.which = which  # "meet" or "join"
        super().__init__(f"no unique {which} for element pair {pair}")


class EmptyInterval(LatticeError):
    pass


@dataclass(frozen=True)
class FiniteLattice:
    """Finite complete lattice over element indices 0..size-1."""

    size: int
    leq: tuple  # closed boolean matrix, leq[a][b] == (a <= b)
    meet_table: tuple
    join_table: tuple
    bottom: int
    top: int
    atoms: tuple

    def le(self, a, b):
        return self.leq[a][b]

    def lt(self, a, b):
        return a != b and self.leq[a][b]

    def downset(self, a):
        return frozenset(x for x in range(self.size) if self.leq[x][a])

    def upset(self, a):
        return frozenset(x for x in range(self.size) if self.leq[a][x])

    def covers(self, a, b):
        """True iff b covers a (a < b with nothing strictly between)."""
        if not self.lt(a, b):
            return False
        return not any(self.lt(a, z) and self.lt(z, b) for z in range(self.size))


@dataclass(frozen=True)
class LatticeMap:
    """A verified order isomorphism between two finite lattices."""

    source: FiniteLattice
    target: FiniteLattice
    assignment: tuple
    kind: str  # "isomorphism" or "automorphism"

    def __call__(self, x):
        return self.assignment[x]

    def compose(self, other):
        """self after other (both must be automorphisms of the same lattice)."""
        assign = tuple(self.assignment[other.assignment[x]] for x in range(self.source.size))
        return LatticeMap(other.source, self.target, assign, self.kind)

    def inverse(self):
        inv = [0] * len(self.assignment)
        for x, y in enumerate(self.assignment):
            inv[y] = x
        return LatticeMap(self.target, self.source, tuple(inv), self.kind)


def build_lattice(size, order_pairs):
    """Build a FiniteLattice from a size and a list of (lower, upper) pairs.

    The pairs are closed reflexively and transitively.  Raises
    NotAPartialOrder on a cycle and NotALattice when some pair of elements
    has no unique greatest lower bound or least upper bound.
    """
    if size < 1:
        raise LatticeError("lattice needs at least one element")
    leq = [[False] * size for _ in range(size)]
    for i in range(size):
        leq[i][i] = True
    for a, b in order_pairs:
        if not (0 <= a < size and 0 <= b < size):
            raise LatticeError(f"order pair ({a},{b}) out of range for size {size}")
        leq[a][b] = True
    # Warshall closure
    for k in range(size):
        row_k = leq[k]
        for i in range(size):
            if leq[i][k]:
                row_i = leq[i]
                for j in range(size):
                    if row_k[j]:
                        row_i[j] = True
    for a in range(size):
        for b in range(a + 1, size):
            if leq[a][b] and leq[b][a]:
                raise NotAPartialOrder(f"cycle through elements {a} and {b}")

    meet_table = [[0] * size for _ in range(size)]
    join_table = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            lower = [x for x in range(size) if leq[x][a] and leq[x][b]]
            glb = [x for x in lower if all(leq[y][x] for y in lower)]
            if len(glb) != 1:
                raise NotALattice((a, b), "meet")
            meet_table[a][b] = glb[0]
            upper = [x for x in range(size) if leq[a][x] and leq[b][x]]
            lub = [x for x in upper if all(leq[x][y] for y in upper)]
            if len(lub) != 1:
                raise NotALattice((a, b), "join")
            join_table[a][b] = lub[0]

    bottom = 0
    for x in range(size):
        bottom = meet_table[bottom][x]
    top = 0
    for x in range(size):
        top = join_table[top][x]
    atoms = tuple(
        x for x in range(size)
        if x != bottom and leq[bottom][x]
        and not any(y != bottom and y != x and leq[y][x] for y in range(size) if leq[bottom][y])
    )
    return FiniteLattice(
        size=size,
        leq=tuple(tuple(row) for row in leq),
        meet_table=tuple(tuple(row) for row in meet_table),
        join_table=tuple(tuple(row) for row in join_table),
        bottom=bottom,
        top=top,
        atoms=atoms,
    )


def meet(L, subset):
    """Greatest lower bound of a subset; the empty meet is the top element."""
    acc = L.top
    for x in subset:
        acc = L.meet_table[acc][x]
    return acc


def join(L, subset):
    """Least upper bound of a subset; the empty join is the bottom element."""
    acc = L.bottom
    for x in subset:
        acc = L.join_table[acc][x]
    return acc


def interval(L, lo, hi):
    """The set {x : lo <= x <= hi}; raises EmptyInterval when lo is not below hi."""
    if not L.leq[lo][hi]:
        raise EmptyInterval(f"{lo} is not below {hi}")
    return frozenset(x for x in range(L.size) if L.leq[lo][x] and L.leq[x][hi])


def _signature(L):
    """Per-element invariant used to prune the isomorphism search."""
    sig = []
    for x in range(L.size):
        down = [y for y in range(L.size) if L.leq[y][x]]
        up = [y for y in range(L.size) if L.leq[x][y]]
        covered = sum(1 for y in range(L.size) if L.covers(y, x))
        covering = sum(1 for y in range(L.size) if L.covers(x, y))
        sig.append((len(down), len(up), covered, covering))
    return sig


def _search_isomorphisms(L1, L2, find_all):
    if L1.size != L2.size:
        return []
    n = L1.size
    sig1 = _signature(L1)
    sig2 = _signature(L2)
    if sorted(sig1) != sorted(sig2):
        return []
    candidates = [[y for y in range(n) if sig2[y] == sig1[x]] for x in range(n)]
    found = []
    assign = [-1] * n
    used = [False] * n

    def consistent(x, y):
        for x2 in range(x):
            y2 = assign[x2]
            if L1.leq[x][x2] != L2.leq[y][y2] or L1.leq[x2][x] != L2.leq[y2][y]:
                return False
        return True

    def backtrack(x):
        if x == n:
            found.append(tuple(assign))
            return not find_all
        for y in candidates[x]:
            if not used[y] and consistent(x, y):
                assign[x] = y
                used[y] = True
                if backtrack(x + 1):
                    return True
                used[y] = False
                assign[x] = -1
        return False

    backtrack(0)
    return found


def find_isomorphism(L1, L2):
    """Order isomorphism between two lattices, or None.

    Deterministic: the backtracking assigns images in ascending element
    order trying ascending targets, so the lexicographically least
    assignment is returned.
    """
    found = _search_isomorphisms(L1, L2, find_all=False)
    if not found:
        return None
    kind = "automorphism" if L1 is L2 else "isomorphism"
    return LatticeMap(L1, L2, found[0], kind)


def automorphisms(L):
    """All order automorphisms, lexicographically sorted; contains identity."""
    found = _search_isomorphisms(L, L, find_all=True)
    return [LatticeMap(L, L, a, "automorphism") for a in sorted(found)]
