"""Formula isomorphism under signed variable permutations.

Two formulas are isomorphic when some bijection of variables combined
with sign flips maps one onto the other. Everything here runs through a
canonical labeling of the clause-literal incidence graph: one vertex per
literal of a used variable (x and -x joined by an edge), one vertex per
clause (joined to its literals), clauses colored by size. Automorphisms
of that graph are exactly the signed permutations preserving the formula.
"""

from collections import namedtuple
from math import factorial

from . import formula as fm

KEY_VERSION = 1

CanonicalData = namedtuple("CanonicalData", "key clause_ranks generators")


def _graph(f):
    used = fm.variables(f)
    k = len(used)
    vidx = {v: i for i, v in enumerate(used)}
    nv = 2 * k + len(f)
    adj = [0] * nv
    for t in range(k):
        adj[2 * t] |= 1 << (2 * t + 1)
        adj[2 * t + 1] |= 1 << (2 * t)
    for ci, c in enumerate(f):
        cv = 2 * k + ci
        for l in c:
            lv = 2 * vidx[abs(l)] + (0 if l > 0 else 1)
            adj[cv] |= 1 << lv
            adj[lv] |= 1 << cv
    # literal vertices colored 0, clause vertices 1 + size
    colors = [0] * (2 * k) + [1 + len(c) for c in f]
    return adj, colors, used


def _initial_cells(colors):
    groups = {}
    for v, col in enumerate(colors):
        groups.setdefault(col, []).append(v)
    return [tuple(groups[col]) for col in sorted(groups)]


def _refine(adj, cells):
    while True:
        masks = [0] * len(cells)
        for i, cell in enumerate(cells):
            mk = 0
            for v in cell:
                mk |= 1 << v
            masks[i] = mk
        new = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            groups = {}
            for v in cell:
                sig = tuple((adj[v] & mk).bit_count() for mk in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                new.append(cell)
            else:
                changed = True
                for sig in sorted(groups):
                    new.append(tuple(groups[sig]))
        cells = new
        if not changed:
            return cells


def _signature(adj, colors, lab):
    pos = {v: p for p, v in enumerate(lab)}
    rows = []
    for v in lab:
        row = 0
        a = adj[v]
        while a:
            b = a & -a
            a ^= b
            row |= 1 << pos[b.bit_length() - 1]
        rows.append(row)
    return (tuple(colors[v] for v in lab), tuple(rows))


def _search(adj, colors):
    """Full individualization-refinement traversal with orbit pruning.

    Returns (best signature, best labeling, automorphism generators as
    vertex permutation tuples).
    """
    nv = len(adj)
    best = [None, None]
    first = [None, None]
    gens = []

    def path_orbits(path):
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            if all(g[x] == x for x in path):
                for v in range(nv):
                    rv, rg = find(v), find(g[v])
                    if rv != rg:
                        parent[rv] = rg
        return find

    def rec(cells, path):
        cells = _refine(adj, cells)
        target = None
        smallest = None
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (smallest is None or len(cell) < smallest):
                smallest = len(cell)
                target = i
        if target is None:
            lab = [cell[0] for cell in cells]
            sig = _signature(adj, colors, lab)
            if first[0] is None:
                first[0], first[1] = sig, lab
            elif sig == first[0]:
                g = [0] * nv
                for p in range(nv):
                    g[first[1][p]] = lab[p]
                if any(g[x] != x for x in range(nv)):
                    gens.append(tuple(g))
            if best[0] is None or sig < best[0]:
                best[0], best[1] = sig, lab
            return
        cell = cells[target]
        explored = []
        for v in cell:
            if explored:
                find = path_orbits(path)
                if any(find(v) == find(u) for u in explored):
                    continue
            rest = tuple(u for u in cell if u != v)
            sub = cells[:target] + [(v,), rest] + cells[target + 1:]
            rec(sub, path + (v,))
            explored.append(v)

    rec(_initial_cells(colors), ())
    return best[0], best[1], gens


def _vertex_perm_to_signed(g, used):
    k = len(used)
    sp = {}
    for t in range(k):
        u = g[2 * t]
        sp[used[t]] = used[u // 2] * (1 if u % 2 == 0 else -1)
    return sp


def _canon(f):
    f = fm.formula(f)
    adj, colors, used = _graph(f)
    if not adj:
        return (((), ()), [], [], used, colors)
    sig, lab, gens = _search(adj, colors)
    return (sig, lab, gens, used, colors)


def canonical_data(f):
    """Canonical key, canonical rank of each clause, automorphism generators."""
    f = fm.formula(f)
    sig, lab, gens, used, colors = _canon(f)
    k = len(used)
    nv = len(lab)
    payload = bytearray([KEY_VERSION, k, len(f)])
    payload.extend(sig[0])
    span = (nv + 7) // 8
    for row in sig[1]:
        payload.extend(row.to_bytes(span, "big"))
    pos = {v: p for p, v in enumerate(lab)}
    ranks = tuple(pos[2 * k + ci] for ci in range(len(f)))
    signed = [_vertex_perm_to_signed(g, used) for g in gens]
    return CanonicalData(bytes(payload).hex(), ranks, signed)


def canonical_key(f):
    return canonical_data(f).key


def is_isomorphic(f, g):
    f, g = fm.formula(f), fm.formula(g)
    if len(f) != len(g) or sorted(map(len, f)) != sorted(map(len, g)):
        return False
    return canonical_key(f) == canonical_key(g)


def canonical_form(f):
    """A canonically relabeled copy of f: isomorphic inputs map to equal outputs.

    Variables are renamed to 1..k by first appearance in the canonical
    labeling; the literal appearing earlier becomes the positive one.
    """
    f = fm.formula(f)
    sig, lab, gens, used, colors = _canon(f)
    k = len(used)
    sp = {}
    nxt = 1
    for v in lab:
        if v < 2 * k:
            var = used[v // 2]
            if var not in sp:
                sp[var] = nxt * (1 if v % 2 == 0 else -1)
                nxt += 1
    return apply_signed_perm(f, sp)


def apply_signed_perm(f, sp):
    """sp maps each used variable to a signed variable image."""
    out = []
    for c in f:
        out.append(tuple(sp[abs(l)] * (1 if l > 0 else -1) for l in c))
    return fm.formula(out)


def apply_signed_perm_clause(c, sp):
    return fm.clause(sp[abs(l)] * (1 if l > 0 else -1) for l in c)


def random_signed_perm(rng, variables_in, variables_out=None):
    """Random bijection with signs from one variable set onto another."""
    src = sorted(variables_in)
    dst = sorted(variables_out) if variables_out is not None else list(src)
    if len(src) != len(dst):
        raise ValueError("variable sets differ in size")
    dst = list(dst)
    rng.shuffle(dst)
    return {v: w * rng.choice((1, -1)) for v, w in zip(src, dst)}


def automorphism_generators(f):
    """Signed permutations generating the automorphism group of f."""
    return canonical_data(f).generators


def _perm_mul(p, q):
    # apply p first, then q
    return tuple(q[p[i]] for i in range(len(p)))


def _perm_inv(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _group_order(gens):
    gens = [g for g in gens if any(g[i] != i for i in range(len(g)))]
    if not gens:
        return 1
    deg = len(gens[0])
    b = min(i for g in gens for i in range(deg) if g[i] != i)
    ident = tuple(range(deg))
    orb = {b: ident}
    queue = [b]
    while queue:
        x = queue.pop()
        for g in gens:
            y = g[x]
            if y not in orb:
                orb[y] = _perm_mul(orb[x], g)
                queue.append(y)
    stab = set()
    for x, tx in orb.items():
        for g in gens:
            sg = _perm_mul(_perm_mul(tx, g), _perm_inv(orb[g[x]]))
            stab.add(sg)
    return len(orb) * _group_order(list(stab))


def automorphism_group_order(f):
    f = fm.formula(f)
    sig, lab, gens, used, colors = _canon(f)
    # the action on literal vertices is faithful; restrict before recursing
    k = len(used)
    lits = [tuple(g[:2 * k]) for g in gens]
    return _group_order(lits)


def variable_orbits(f):
    """Partition of the used variables under the automorphism group."""
    f = fm.formula(f)
    used = fm.variables(f)
    parent = {v: v for v in used}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sp in automorphism_generators(f):
        for v, w in sp.items():
            rv, rw = find(v), find(abs(w))
            if rv != rw:
                parent[rv] = rw
    groups = {}
    for v in used:
        groups.setdefault(find(v), []).append(v)
    return tuple(tuple(sorted(g)) for g in sorted(groups.values()))


def count_labeled_copies(f, n):
    """Number of distinct formulas over variables 1..n isomorphic to f.

    Signed permutations of 1..n act on labeled formulas; the orbit size is
    the full group order divided by the stabilizer, which factors into the
    automorphisms of the used part times arbitrary signed permutations of
    the untouched variables.
    """
    f = fm.formula(f)
    k = len(fm.variables(f))
    if k > n:
        raise ValueError("formula uses more than n variables")
    total = (1 << n) * factorial(n)
    denom = automorphism_group_order(f) * (1 << (n - k)) * factorial(n - k)
    assert total % denom == 0
    return total // denom


def padded_generators(f, n):
    """Generators of the signed permutations of 1..n preserving f.

    Automorphisms of the used part, extended by identity, plus generators
    of the full signed-permutation group on the unused variables.
    """
    f = fm.formula(f)
    used = set(fm.variables(f))
    if used and max(used) > n:
        raise ValueError("formula uses variables beyond 1..n")
    unused = [v for v in range(1, n + 1) if v not in used]
    gens = []
    for sp in automorphism_generators(f):
        g = {v: v for v in range(1, n + 1)}
        g.update(sp)
        gens.append(g)
    if unused:
        g = {v: v for v in range(1, n + 1)}
        g[unused[0]] = -unused[0]
        gens.append(g)
    for a, b in zip(unused, unused[1:]):
        g = {v: v for v in range(1, n + 1)}
        g[a], g[b] = b, a
        gens.append(g)
    return gens
