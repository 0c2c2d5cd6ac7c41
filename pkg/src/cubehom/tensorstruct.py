"""The tensor structure on multi-relative complexes: bracket operators.

A slot functor is a formal Q-linear combination of pipelines, each
pipeline a sequence of pullback words applied right to left; a single
word of r morphism classes acts through the composite-pullback cube and
raises degree by r - 1.  Bracket cubes over the isomorphism chain

    F (x) phi_1 ... phi_l (G)  ~  phi_1(F (x) phi_2 ... (G))  ~  ...

assemble slots into the operators of the tensor structure: the map given
by tensoring with a fixed object, the homotopy exchanging it with a
pullback, and the second homotopy produced by a section of a closed
immersion.

Alternation policy: every operator here is of the form Alt . (plain sum
of pullback words), and alternation absorbs the axis action of words
(Alt Xi Alt = Alt Xi, one of the verified suites).  Identities between
alternated operators are therefore checked by evaluating the plain
operators and alternating the final combination once; the helpers below
produce plain values, and the relation checkers wrap them in lev_alt.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from .cubes import (CubeChain, ExactCube, ExactFunctor, alt, boundary,
                    bracket_cube, composite_pullback)
from .exactlin import MetObj
from .multirel import (GeomView, MorphView, _marks_back, _parity, lev_add,
                       lev_alt, lev_eq, lev_scale, op_homotopy)
from .signs import b_weight, divisions_into, sgn_multidivision


class SlotTerm:
    """A pipeline of pullback words applied right to left."""

    __slots__ = ("words",)

    def __init__(self, words):
        self.words = tuple(tuple(w) for w in words)

    def degree(self) -> int:
        return sum(len(w) - 1 for w in self.words)

    def apply(self, cube: ExactCube) -> ExactCube:
        for w in reversed(self.words):
            cube = composite_pullback(list(w), cube)
        return cube


class SlotSum:
    """A formal combination of pipelines, of a fixed added cube degree."""

    __slots__ = ("terms", "deg")

    def __init__(self, terms, deg: int):
        self.terms = [(Fraction(c), t) for c, t in terms if c != 0]
        self.deg = deg

    def scale(self, c) -> "SlotSum":
        c = Fraction(c)
        return SlotSum([(c * a, t) for a, t in self.terms], self.deg)

    def __add__(self, other: "SlotSum") -> "SlotSum":
        if self.deg != other.deg:
            raise ValueError("slot degree mismatch")
        return SlotSum(self.terms + other.terms, self.deg)

    def compose(self, other: "SlotSum") -> "SlotSum":
        """self after other: pipelines concatenate."""
        out = []
        for a, t in self.terms:
            for b, u in other.terms:
                out.append((a * b, SlotTerm(t.words + u.words)))
        return SlotSum(out, self.deg + other.deg)

    def apply_chain(self, x: CubeChain) -> CubeChain:
        deg = x.degree + self.deg
        acc = CubeChain.zero(deg)
        for c, t in self.terms:
            acc = acc + x.map_cubes(t.apply, deg).scale(c)
        return acc

    def boundary(self) -> "SlotSum":
        """Face expansion of single-word slots along their own axes:
        splits, merges, and dropped zero faces, with signs (-1)^{i+j}."""
        out = []
        for c, t in self.terms:
            if len(t.words) != 1:
                raise ValueError("boundary of a composite pipeline")
            w = t.words[0]
            for j in range(1, len(w)):
                out.append((c * (-1) ** ((j - 1) % 2), SlotTerm([w[:j], w[j:]])))
                merged = w[:j - 1] + (w[j].compose(w[j - 1]),) + w[j + 1:]
                out.append((c * (-1) ** (j % 2), SlotTerm([merged])))
        return SlotSum(out, self.deg - 1)


def _embed_word(g: GeomView, order, top_level) -> list:
    word = []
    cur = set(top_level)
    for k in order:
        nxt = cur - {k}
        word.append(g.tower.cls(g.scheme, g.level(cur), g.scheme, g.level(nxt)))
        cur = nxt
    return word


def xi_slot(g: GeomView, K, I) -> SlotSum:
    """Xi_K as a slot functor from level I to level K | I."""
    K = tuple(sorted(K))
    I = frozenset(I)
    w = len(K)
    if w == 0:
        raise ValueError("Xi slot needs a nonempty removal set")
    terms = []
    for sigma in permutations(range(w)):
        order = [K[sigma[a]] for a in range(w)]
        terms.append((Fraction(_parity(sigma)),
                      SlotTerm([_embed_word(g, order, set(K) | I)])))
    return SlotSum(terms, w - 1)


def _insert_word(geoms, mors, order, inserts, top_level):
    """One pullback word: embeddings along ``order`` with the morphisms of
    ``mors`` inserted after inserts[i] removals (nondecreasing)."""
    word = []
    cur = set(top_level)
    seg = 0
    removed = 0
    total = len(order) + len(mors)
    for _ in range(total):
        if seg < len(mors) and removed == inserts[seg]:
            word.append(mors[seg].cls(cur, cur))
            seg += 1
        else:
            k = order[removed]
            gv = geoms[seg]
            nxt = cur - {k}
            word.append(gv.tower.cls(gv.scheme, gv.level(cur),
                                     gv.scheme, gv.level(nxt)))
            cur = nxt
            removed += 1
    return word


def xi_slot_f(f: MorphView, K, I) -> SlotSum:
    """Xi_{K,f} as a slot functor; K may be empty (then it is f^*)."""
    K = tuple(sorted(K))
    I = frozenset(I)
    w = len(K)
    terms = []
    for sigma in permutations(range(w)):
        base = _parity(sigma)
        order = [K[sigma[a]] for a in range(w)]
        for p in range(w + 1):
            word = _insert_word([f.src, f.dst], [f], order, (p,), set(K) | I)
            terms.append((Fraction(base * (-1) ** (p % 2)), SlotTerm([word])))
    return SlotSum(terms, w)


def xi_slot_fg(f: MorphView, g: MorphView, K, I) -> SlotSum:
    """Xi_{K,f,g} as a slot functor; K may be empty."""
    K = tuple(sorted(K))
    I = frozenset(I)
    w = len(K)
    terms = []
    for sigma in permutations(range(w)):
        base = _parity(sigma)
        order = [K[sigma[a]] for a in range(w)]
        for p in range(w + 1):
            for q in range(p, w + 1):
                word = _insert_word([f.src, f.dst, g.dst], [f, g], order,
                                    (p, q), set(K) | I)
                terms.append((Fraction(base * (-1) ** ((p + q) % 2)),
                              SlotTerm([word])))
    return SlotSum(terms, w + 1)


def bracket_apply(f_obj: MetObj, slots, pis, x: CubeChain) -> CubeChain:
    """The bracket cube of the isomorphism chain, multilinear in the slots,
    applied to a chain.  ``pis[p]`` is the base pullback functor at station
    p (station l innermost, station 0 the output); not alternated."""
    l = len(slots)
    if l == 0:
        tens = ExactFunctor.tensor_by(pis[0].on_obj(f_obj))
        return x.map_cubes(tens.on_cube, x.degree)
    s = sum(sl.deg for sl in slots)
    out_deg = x.degree + s + l
    acc = CubeChain.zero(out_deg)
    combos = [([], Fraction(1))]
    for sl in slots:
        combos = [(picked + [t], co * c) for picked, co in combos
                  for (c, t) in sl.terms]
    for picked, coeff in combos:
        if coeff == 0:
            continue
        for cube, xc in x.terms.items():
            stages = [cube]
            for p in range(l, 0, -1):
                stages.append(picked[p - 1].apply(stages[-1]))
            # stages[i] = slots_{l-i+1..l} applied to cube, i = 0..l
            items = []
            for p in range(l + 1):
                cur = ExactFunctor.tensor_by(pis[p].on_obj(f_obj)).on_cube(
                    stages[l - p])
                for sl_idx in range(p - 1, -1, -1):
                    cur = picked[sl_idx].apply(cur)
                items.append(cur)
            br = bracket_cube(items)
            acc = acc + CubeChain.of(br, coeff * xc)
    return acc


def check_bracket_boundary(f_obj: MetObj, slots, pis, x: CubeChain,
                           phi_apply=None) -> bool:
    """The boundary formula for alternated bracket operators:

    d <F; phi_1..phi_l>(x) = <F; phi_1..phi_{l-1}>(phi_l(x))
      + sum_j (-1)^j <F; .., phi_{l-j} phi_{l-j+1}, ..>(x)
      + (-1)^{s_1 (l-1) + l} phi_1(<F; phi_2..>(x))
      + (-1)^l sum_j (-1)^{s_1+..+s_{j-1}} <F; .., d phi_j, ..>(x)
      + (-1)^{s+l} <F; phi_1..phi_l>(d x),

    with one alternation outside each side."""
    l = len(slots)
    if l == 0:
        raise ValueError("boundary formula needs at least one slot")
    sdeg = [sl.deg for sl in slots]
    s = sum(sdeg)
    lhs = boundary(bracket_apply(f_obj, slots, pis, x))
    rhs = bracket_apply(f_obj, slots[:-1], pis[:-1], slots[-1].apply_chain(x))
    for j in range(1, l):
        merged = slots[l - j - 1].compose(slots[l - j])
        new_slots = slots[:l - j - 1] + [merged] + slots[l - j + 1:]
        new_pis = pis[:l - j] + pis[l - j + 1:]
        rhs = rhs + bracket_apply(f_obj, new_slots, new_pis, x).scale((-1) ** j)
    inner = bracket_apply(f_obj, slots[1:], pis[1:], x)
    rhs = rhs + slots[0].apply_chain(inner).scale(
        (-1) ** ((sdeg[0] * (l - 1) + l) % 2))
    for j in range(1, l + 1):
        dslot = slots[j - 1].boundary()
        new_slots = slots[:j - 1] + [dslot] + slots[j:]
        sgn = (-1) ** ((l + sum(sdeg[:j - 1])) % 2)
        rhs = rhs + bracket_apply(f_obj, new_slots, pis, x).scale(sgn)
    if x.degree >= 1:
        rhs = rhs + bracket_apply(f_obj, slots, pis, boundary(x)).scale(
            (-1) ** ((s + l) % 2))
    return alt(lhs - rhs).is_zero()


# -- divisions with optional empty slots --------------------------------

def _divisions_optional(K, l: int, optional):
    """Ordered divisions of K into l parts, the parts at the 1-based
    positions in ``optional`` allowed to be empty, all others nonempty."""
    K = tuple(sorted(K))
    out = []
    opts = tuple(sorted(optional))
    for empty_mask in range(1 << len(opts)):
        empty = [opts[i] for i in range(len(opts)) if empty_mask >> i & 1]
        filled = l - len(empty)
        if filled < 0 or filled > len(K):
            continue
        if filled == 0:
            if not K:
                out.append(tuple(() for _ in range(l)))
            continue
        for div in divisions_into(K, filled):
            parts = []
            it = iter(div)
            for pos in range(1, l + 1):
                if pos in empty:
                    parts.append(())
                else:
                    parts.append(next(it))
            out.append(tuple(parts))
    return out


# -- the level operators of the tensor structure ------------------------

def _station_levels(parts, I):
    """Station p carries level I | parts[p] | ... | parts[l-1] (0-based),
    for p = 0..l; station l is I itself."""
    l = len(parts)
    out = []
    for p in range(l + 1):
        lvl = set(I)
        for q in range(p, l):
            lvl |= set(parts[q])
        out.append(frozenset(lvl))
    return out


def _pi(view: GeomView, lvl) -> ExactFunctor:
    return view.base_cls(lvl).functor()


def op_tensor(f_obj: MetObj, g: GeomView, m: int, n: int, x: dict) -> dict:
    """(F (x) )^{m,n}, plain (not alternated): the diagonal is tensoring
    with the pullback of F, the off-diagonal components are signed bracket
    operators over ordered divisions of J - I."""
    if n < m:
        return {}
    out = {}
    for I, chain in x.items():
        if len(I) != m:
            raise ValueError("element has a level of the wrong size")
        others = [k for k in g.marks if k not in I]
        for Kc in combinations(others, n - m):
            J = frozenset(I) | set(Kc)
            if n == m:
                term = bracket_apply(f_obj, [], [_pi(g, frozenset(I))], chain)
            else:
                term = CubeChain.zero(chain.degree + n - m)
                for l in range(1, len(Kc) + 1):
                    for parts in divisions_into(Kc, l):
                        sizes = [len(p) for p in parts]
                        sgn = sgn_multidivision(list(parts) + [tuple(sorted(I))],
                                                tuple(sorted(J)))
                        sgn *= (-1) ** (b_weight(sizes) % 2)
                        lvls = _station_levels(parts, I)
                        slots = [xi_slot(g, parts[p], lvls[p + 1])
                                 for p in range(l)]
                        pis = [_pi(g, lvls[p]) for p in range(l + 1)]
                        term = term + bracket_apply(f_obj, slots, pis,
                                                    chain).scale(sgn)
            if term.is_zero():
                continue
            out[J] = out.get(J, CubeChain.zero(term.degree)) + term
    return {k: v for k, v in out.items() if not v.is_zero()}


def op_tensor_homotopy(f_obj: MetObj, f: MorphView, m: int, n: int,
                       x: dict) -> dict:
    """Phi_f^{m,n}, plain: the homotopy exchanging (F (x) ) with f^*.
    One designated slot carries Xi_{K_p, f} and may be empty."""
    if n < m:
        return {}
    out = {}
    for I, chain in x.items():
        if len(I) != m:
            raise ValueError("element has a level of the wrong size")
        I_src = _marks_back(f, I)
        others = [k for k in f.src.marks if k not in I_src]
        for Kc in combinations(others, n - m):
            J = frozenset(I_src) | set(Kc)
            term = CubeChain.zero(chain.degree + n - m + 1)
            for l in range(1, len(Kc) + 2):
                for p0 in range(1, l + 1):
                    for parts in _divisions_optional(Kc, l, [p0]):
                        sizes = [len(q) for q in parts]
                        nonempty = [q for q in parts if q]
                        sgn = sgn_multidivision(
                            nonempty + [tuple(sorted(I_src))], tuple(sorted(J)))
                        merged = ([sizes[0]] + sizes[1:] if p0 == 1 else
                                  sizes[:p0 - 2] + [sizes[p0 - 2] + sizes[p0 - 1]]
                                  + sizes[p0:])
                        sgn *= (-1) ** ((b_weight(merged) + n + p0 + l + 1) % 2)
                        lvls = _station_levels(parts, I_src)
                        slots = []
                        for p in range(1, l + 1):
                            if p == p0:
                                slots.append(xi_slot_f(f, parts[p - 1], lvls[p]))
                            else:
                                gv = f.src if p < p0 else f.dst
                                slots.append(xi_slot(gv, parts[p - 1], lvls[p]))
                        pis = [_pi(f.src if p < p0 else f.dst, lvls[p])
                               for p in range(l + 1)]
                        term = term + bracket_apply(f_obj, slots, pis,
                                                    chain).scale(sgn)
            if term.is_zero():
                continue
            out[J] = out.get(J, CubeChain.zero(term.degree)) + term
    return {k: v for k, v in out.items() if not v.is_zero()}


def op_tensor_theta(f_obj: MetObj, f: MorphView, g: MorphView, m: int, n: int,
                    x: dict) -> dict:
    """Theta^{m,n} = Theta_1 + Theta_2, plain: the second homotopy of the
    section setup g f = Id.  Theta_1 places Xi_{K_p,f,g} in one optional
    slot; Theta_2 places Xi_{K_p,f} and Xi_{K_q,g} in two optional slots."""
    if n < m:
        return {}
    out = {}
    for I, chain in x.items():
        if len(I) != m:
            raise ValueError("element has a level of the wrong size")
        others = [k for k in g.dst.marks if k not in I]
        for Kc in combinations(others, n - m):
            J = frozenset(I) | set(Kc)
            term = CubeChain.zero(chain.degree + n - m + 2)
            # Theta_1
            for l in range(1, len(Kc) + 2):
                for p0 in range(1, l + 1):
                    for parts in _divisions_optional(Kc, l, [p0]):
                        sizes = [len(q) for q in parts]
                        nonempty = [q for q in parts if q]
                        sgn = sgn_multidivision(nonempty + [tuple(sorted(I))],
                                                tuple(sorted(J)))
                        sgn *= (-1) ** ((b_weight(sizes) + 1) % 2)
                        lvls = _station_levels(parts, I)
                        slots = []
                        for p in range(1, l + 1):
                            if p == p0:
                                slots.append(xi_slot_fg(f, g, parts[p - 1], lvls[p]))
                            else:
                                slots.append(xi_slot(g.dst, parts[p - 1], lvls[p]))
                        pis = [_pi(g.dst, lvls[p]) for p in range(l + 1)]
                        term = term + bracket_apply(f_obj, slots, pis,
                                                    chain).scale(sgn)
            # Theta_2
            for l in range(2, len(Kc) + 3):
                for p0 in range(1, l + 1):
                    for q0 in range(p0 + 1, l + 1):
                        for parts in _divisions_optional(Kc, l, [p0, q0]):
                            sizes = [len(q) for q in parts]
                            nonempty = [q for q in parts if q]
                            sgn = sgn_multidivision(nonempty + [tuple(sorted(I))],
                                                    tuple(sorted(J)))
                            c_pq = (b_weight(sizes) + sum(sizes[p0 - 1:q0 - 1])
                                    + p0 + q0 + 1)
                            sgn *= (-1) ** (c_pq % 2)
                            lvls = _station_levels(parts, I)
                            slots = []
                            for p in range(1, l + 1):
                                if p == p0:
                                    slots.append(xi_slot_f(f, parts[p - 1], lvls[p]))
                                elif p == q0:
                                    slots.append(xi_slot_f(g, parts[p - 1], lvls[p]))
                                else:
                                    gv = g.dst if (p < p0 or p > q0) else f.dst
                                    slots.append(xi_slot(gv, parts[p - 1], lvls[p]))
                            pis = [_pi(g.dst if (p < p0 or p >= q0) else f.dst,
                                       lvls[p]) for p in range(l + 1)]
                            term = term + bracket_apply(f_obj, slots, pis,
                                                        chain).scale(sgn)
            if term.is_zero():
                continue
            out[J] = out.get(J, CubeChain.zero(term.degree)) + term
    return {k: v for k, v in out.items() if not v.is_zero()}


def op_psi_section(f: MorphView, g: MorphView, m: int, n: int, x: dict) -> dict:
    """The homotopy from the identity to f^* g^* for a section g f = Id,
    plain: Phi^{m,n} with the double-insert operator Xi_{K,f,g}."""
    return op_homotopy(f, g, m, n, x)


def check_phi_s_equals_tensor(f_obj: MetObj, big: GeomView, x: dict,
                              m: int, n_max: int) -> dict:
    """The cone-induced map of the tensor structure agrees with tensoring.

    The multi-relative complex on (X; Y_1..Y_r) is the simple complex of
    the last restriction map (with the sign twist on levels containing r);
    the square of that map with the tensor operators commutes up to the
    exchange homotopy, and the induced cone map phi_s must equal the
    tensor map, after one outer alternation, on every generator."""
    from .multirel import restriction_morphism
    r = max(big.marks)
    iota = restriction_morphism(big, r)
    geom_a, geom_b = iota.dst, iota.src
    for n in range(m, n_max + 1):
        direct = op_tensor(f_obj, big, m, n, x)
        a = {J: ch for J, ch in x.items() if r not in J}
        b = {frozenset(J - {r}): ch.scale(-1) for J, ch in x.items() if r in J}
        out_a = op_tensor(f_obj, geom_a, m, n, a) if a else {}
        out_b = {}
        if b:
            out_b = op_tensor(f_obj, geom_b, m - 1, n - 1, b)
        if a:
            out_b = lev_add(out_b, op_tensor_homotopy(f_obj, iota, m, n - 1, a))
        cone = dict(out_a)
        for J, ch in out_b.items():
            cone = lev_add(cone, {frozenset(J | {r}): ch.scale(-1)})
        diff = lev_alt(lev_add(direct, lev_scale(cone, -1)))
        if not lev_eq(diff, {}):
            return {"ok": False, "at": {"m": m, "n": n}}
    return {"ok": True}


def bracket_pair(f1_obj: MetObj, f2_obj: MetObj, x: CubeChain) -> CubeChain:
    """The bracket of the two-step tensor chain
    F1 (x) (F2 (x) G) ~ (F1 (x) F2) (x) G, as a chain operator."""
    deg = x.degree + 1
    acc = CubeChain.zero(deg)
    t1 = ExactFunctor.tensor_by(f1_obj)
    t2 = ExactFunctor.tensor_by(f2_obj)
    t12 = ExactFunctor.tensor_by(MetObj(f1_obj.dim * f2_obj.dim,
                                        f1_obj.gram.kron(f2_obj.gram)
                                        if f1_obj.gram is not None
                                        and f2_obj.gram is not None else None,
                                        check=False))
    for cube, c in x.terms.items():
        a = t1.on_cube(t2.on_cube(cube))
        b = t12.on_cube(cube)
        acc = acc + CubeChain.of(bracket_cube([a, b]), c)
    return acc
