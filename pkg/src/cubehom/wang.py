"""Symbolic logarithmic forms on a product of projective lines.

A form is a Q-combination of monomials log|z_a|^2 . w, where w is a wedge
word in the one-form generators dz_b/z_b and conj(dz_c)/conj(z_c) over
indices distinct from each other and from a.  Monomials are stored with
the wedge word sorted by index, the reordering parity absorbed into the
coefficient.  The symmetrized forms W_r built here satisfy the
conjugation symmetry conj(W_r) = (-1)^{r-1} W_r exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

HOLO = "dz"
ANTI = "dzb"


def _canon_wedge(gens):
    """Sort generators by index; return (canonical tuple, parity sign)."""
    gens = list(gens)
    idx = [g[1] for g in gens]
    if len(set(idx)) != len(idx):
        raise ValueError("repeated index in a wedge word")
    sign = 1
    # insertion sort, counting transpositions of odd generators
    for a in range(1, len(gens)):
        b = a
        while b > 0 and gens[b - 1][1] > gens[b][1]:
            gens[b - 1], gens[b] = gens[b], gens[b - 1]
            sign = -sign
            b -= 1
    return tuple(gens), sign


class LogForm:
    """A Q-combination of monomials (log_index or None, wedge word)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (log_ix, wedge), c in (terms.items() if isinstance(terms, dict)
                                       else terms):
                c = Fraction(c)
                if c == 0:
                    continue
                wedge, sign = _canon_wedge(wedge)
                if log_ix is not None and any(g[1] == log_ix for g in wedge):
                    raise ValueError("index repeated between log and wedge")
                key = (log_ix, wedge)
                s = clean.get(key, 0) + sign * c
                if s == 0:
                    clean.pop(key, None)
                else:
                    clean[key] = s
        self.terms = clean

    @staticmethod
    def one() -> "LogForm":
        return LogForm([((None, ()), Fraction(1))])

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        f = LogForm()
        f.terms = out
        return f

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, a) -> "LogForm":
        a = Fraction(a)
        f = LogForm()
        if a != 0:
            f.terms = {k: a * c for k, c in self.terms.items()}
        return f

    def __eq__(self, other):
        if not isinstance(other, LogForm):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return "LogForm(%d monomials)" % len(self.terms)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (log_ix, wedge), c in sorted(self.terms.items(),
                                         key=lambda kv: (str(kv[0][0]), kv[0][1])):
            factors = []
            if log_ix is not None:
                factors.append("log|z%d|^2" % log_ix)
            for kind, ix in wedge:
                if kind == HOLO:
                    factors.append("dz%d/z%d" % (ix, ix))
                else:
                    factors.append("dz~%d/z~%d" % (ix, ix))
            mono = " ^ ".join(factors) if factors else "1"
            bits.append("(%s) %s" % (c, mono))
        return "  +  ".join(bits)


def build_S(r: int, i: int) -> LogForm:
    """The signed symmetrization with i - 1 holomorphic and r - i
    antiholomorphic logarithmic one-form factors."""
    if not 1 <= i <= r:
        raise ValueError("holomorphic split out of range")
    terms = []
    for sigma in permutations(range(1, r + 1)):
        sgn = _perm_sign(sigma)
        log_ix = sigma[0]
        wedge = tuple((HOLO, sigma[a]) for a in range(1, i)) + \
            tuple((ANTI, sigma[a]) for a in range(i, r))
        terms.append(((log_ix, wedge), Fraction(sgn)))
    return LogForm(terms)


def _perm_sign(sigma) -> int:
    sgn = 1
    n = len(sigma)
    for a in range(n):
        for b in range(a + 1, n):
            if sigma[a] > sigma[b]:
                sgn = -sgn
    return sgn


def build_W(r: int) -> LogForm:
    """W_r = (1 / 2 r!) sum_i (-1)^i S_r^i, and W_0 = 1."""
    if r == 0:
        return LogForm.one()
    acc = LogForm()
    for i in range(1, r + 1):
        acc = acc + build_S(r, i).scale((-1) ** i)
    return acc.scale(Fraction(1, 2 * factorial(r)))


def conjugate(f: LogForm) -> LogForm:
    """Complex conjugation: fixes log factors, swaps the two generator
    kinds, and renormalizes the wedge order."""
    out = []
    for (log_ix, wedge), c in f.terms.items():
        new_wedge = tuple((ANTI if kind == HOLO else HOLO, ix)
                          for kind, ix in wedge)
        out.append(((log_ix, new_wedge), c))
    return LogForm(out)


def bidegree_split(f: LogForm) -> dict:
    """Split by (holomorphic, antiholomorphic) generator counts."""
    out = {}
    for key, c in f.terms.items():
        _, wedge = key
        p = sum(1 for kind, _ in wedge if kind == HOLO)
        q = len(wedge) - p
        part = out.setdefault((p, q), LogForm())
        part.terms[key] = part.terms.get(key, 0) + c
    return {k: v for k, v in out.items() if not v.is_zero()}


def monomial_count_S(r: int, i: int) -> int:
    """Number of expansion terms of the signed symmetrization (before any
    collection of equal monomials)."""
    return factorial(r)


def check_conjugation(r_max: int) -> dict:
    for r in range(0, r_max + 1):
        w = build_W(r)
        sgn = (-1) ** ((r - 1) % 2) if r >= 1 else 1
        if conjugate(w) != w.scale(sgn):
            return {"ok": False, "at": r}
    return {"ok": True, "r_max": r_max}


def check_degrees(r_max: int) -> dict:
    """Every monomial of W_r has one log factor and r - 1 one-forms."""
    for r in range(1, r_max + 1):
        w = build_W(r)
        if not w.terms:
            return {"ok": False, "at": r, "why": "empty"}
        for (log_ix, wedge) in w.terms:
            if log_ix is None or len(wedge) != r - 1:
                return {"ok": False, "at": r, "why": "degree"}
    return {"ok": True, "r_max": r_max}
