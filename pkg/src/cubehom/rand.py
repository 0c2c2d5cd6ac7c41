"""Seeded random instances: matrices, cubes, chain complexes, C-complexes.

Every generator takes an explicit ``random.Random`` so suite reports are
reproducible from their seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .ccx import (CComplex, ChainComplex, CHomotopy, CMap, cmap_add,
                  homotopy_defect, map_compose_homotopy, simple,
                  single_complex)
from .cubes import ExactCube, MetObj, object_cube, one_cube, tensor_cube
from .exactlin import RatMatrix, ZERO_OBJ, inverse


def rnd_fraction(rng: random.Random, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def rnd_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.7) -> RatMatrix:
    ent = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rnd_fraction(rng)
                if v != 0:
                    ent[(r, c)] = v
    return RatMatrix(rows, cols, ent)


def rnd_invertible(rng: random.Random, n: int) -> RatMatrix:
    lo = {(i, i): Fraction(1) for i in range(n)}
    up = {(i, i): Fraction(1) for i in range(n)}
    for i in range(n):
        for j in range(i):
            if rng.random() < 0.6:
                lo[(i, j)] = rnd_fraction(rng)
            if rng.random() < 0.6:
                up[(j, i)] = rnd_fraction(rng)
    perm = list(range(n))
    rng.shuffle(perm)
    pm = RatMatrix(n, n, {(perm[i], i): Fraction(1) for i in range(n)})
    return pm.mul(RatMatrix(n, n, lo)).mul(RatMatrix(n, n, up))


def rnd_gram(rng: random.Random, n: int) -> RatMatrix:
    a = rnd_matrix(rng, n, n, density=0.5)
    return a.transpose().mul(a) + RatMatrix.identity(n)


def rnd_metobj(rng: random.Random, max_dim: int = 3, with_gram=None) -> MetObj:
    d = rng.randint(0, max_dim)
    if d == 0:
        return ZERO_OBJ
    if with_gram is None:
        with_gram = rng.random() < 0.5
    return MetObj(d, rnd_gram(rng, d) if with_gram else None, check=False)


def rnd_one_cube(rng: random.Random, max_dim: int = 3, with_gram: bool = False) -> ExactCube:
    a = rng.randint(0, max_dim)
    c = rng.randint(0 if a else 1, max_dim)
    u = rnd_invertible(rng, a + c)
    uinv = inverse(u)
    inj = RatMatrix(a + c, a, {(r, k): u[(r, k)] for r in range(a + c)
                               for k in range(a) if u[(r, k)] != 0})
    surj = RatMatrix(c, a + c, {(r - a, k): uinv[(r, k)] for r in range(a, a + c)
                                for k in range(a + c) if uinv[(r, k)] != 0})
    mk = (lambda n: MetObj(n, rnd_gram(rng, n) if (with_gram and n) else None,
                           check=False))
    return one_cube(mk(a), mk(a + c), mk(c), inj, surj)


def rnd_cube(rng: random.Random, n: int, max_dim: int = 2,
             with_gram: bool = False) -> ExactCube:
    """A random nondegenerate exact n-cube (tensor product of random exact
    one-cubes); degenerate draws are rerolled."""
    if n == 0:
        d = rng.randint(1, max_dim + 1)
        return object_cube(MetObj(d, rnd_gram(rng, d) if with_gram else None,
                                  check=False))
    for _ in range(50):
        cube = rnd_one_cube(rng, max_dim=max_dim, with_gram=with_gram)
        for _ in range(n - 1):
            cube = tensor_cube(cube, rnd_one_cube(rng, max_dim=max_dim,
                                                  with_gram=with_gram))
        if not cube.is_degenerate():
            return cube
    raise RuntimeError("could not draw a nondegenerate cube")


def rnd_chain_complex(rng: random.Random, degs=(0, 3), maxdim: int = 3) -> ChainComplex:
    """A random complex with exactly controllable ranks: a split model
    conjugated by random invertibles, so the boundary squares to zero."""
    lo, hi = degs
    dims = {n: rng.randint(0, maxdim) for n in range(lo, hi + 1)}
    rks = {}
    for n in range(lo + 1, hi + 1):
        cap = min(dims.get(n - 1, 0) - rks.get(n - 1, 0), dims.get(n, 0))
        rks[n] = rng.randint(0, max(0, cap))
    bnd = {}
    base = {n: rnd_invertible(rng, dims.get(n, 0)) for n in range(lo, hi + 1)}
    for n in range(lo + 1, hi + 1):
        ent = {(i, dims[n] - rks[n] + i): Fraction(1) for i in range(rks[n])}
        m = RatMatrix(dims.get(n - 1, 0), dims.get(n, 0), ent)
        bnd[n] = base[n - 1].mul(m).mul(inverse(base[n]))
    return ChainComplex(dims, bnd)


def rnd_homotopy_comps(rng: random.Random, src: CComplex, dst: CComplex,
                       density: float = 0.4, allow_corner: bool = False) -> dict:
    """Random homotopy-shaped components; by default only m <= n, so the
    homotopy defect is a map of C-complexes."""
    comps = {}
    for m in src.indices():
        for n in dst.indices():
            if m > (n + 1 if allow_corner else n):
                continue
            per = {}
            for k in src.cx(m).degrees():
                rows = dst.cx(n).dim(k + n - m + 1)
                cols = src.cx(m).dim(k)
                if rows and cols and rng.random() < density:
                    per[k] = rnd_matrix(rng, rows, cols, density=0.5)
            if per:
                comps[(m, n)] = per
    return comps


def rnd_cmap(rng: random.Random, a: CComplex, b: CComplex) -> CMap:
    """A random (null-homotopic) map of C-complexes."""
    return homotopy_defect(a, b, rnd_homotopy_comps(rng, a, b))


def rnd_ccomplex(rng: random.Random, steps=(0, 2)) -> CComplex:
    """A random C-complex: iterated mapping cones over random maps."""
    a = single_complex(rnd_chain_complex(rng), 0)
    for _ in range(rng.randint(*steps)):
        b = single_complex(rnd_chain_complex(rng), 0)
        a = simple(rnd_cmap(rng, a, b)).ccx
    return a


def direct_sum_ccomplex(b: CComplex, e: CComplex) -> CComplex:
    comps, fm = {}, {}
    for m in set(list(b.complexes) + list(e.complexes)):
        dims, bnd = {}, {}
        for kk in set(list(b.cx(m).dims) + list(e.cx(m).dims)):
            dims[kk] = b.cx(m).dim(kk) + e.cx(m).dim(kk)
        for kk in list(dims):
            ent = {}
            for (r, c), v in b.cx(m).d(kk).entries.items():
                ent[(r, c)] = v
            for (r, c), v in e.cx(m).d(kk).entries.items():
                ent[(b.cx(m).dim(kk - 1) + r, b.cx(m).dim(kk) + c)] = v
            prev = b.cx(m).dim(kk - 1) + e.cx(m).dim(kk - 1)
            if dims.get(kk) and prev:
                bnd[kk] = RatMatrix(prev, dims[kk], ent)
        comps[m] = ChainComplex({kk: d for kk, d in dims.items() if d}, bnd)
    for (m, n) in set(list(b.fmaps) + list(e.fmaps)):
        per = {}
        for kk in set(list(b.fmaps.get((m, n), {})) + list(e.fmaps.get((m, n), {}))):
            rows = b.cx(n).dim(kk + n - m - 1) + e.cx(n).dim(kk + n - m - 1)
            cols = b.cx(m).dim(kk) + e.cx(m).dim(kk)
            ent = {}
            for (r, c), v in b.f(m, n, kk).entries.items():
                ent[(r, c)] = v
            for (r, c), v in e.f(m, n, kk).entries.items():
                ent[(b.cx(n).dim(kk + n - m - 1) + r, b.cx(m).dim(kk) + c)] = v
            per[kk] = RatMatrix(rows, cols, ent)
        fm[(m, n)] = per
    return CComplex(comps, fm)


def rnd_exchange_square(rng: random.Random):
    """A homotopy-commuting square: maps f: A -> B, fp: Ap -> Bp, columns
    pa: A -> Ap, pb: B -> Bp, and a homotopy phi from pb f to fp pa."""
    from .ccx import homotopy_add, homotopy_compose_map
    a, b = rnd_ccomplex(rng), rnd_ccomplex(rng)
    ap, bp = rnd_ccomplex(rng), rnd_ccomplex(rng)
    f = rnd_cmap(rng, a, b)
    fp = rnd_cmap(rng, ap, bp)
    h2 = rnd_homotopy_comps(rng, b, bp)
    pb = homotopy_defect(b, bp, h2)
    hp = rnd_homotopy_comps(rng, a, ap)
    pa = homotopy_defect(a, ap, hp)
    from .ccx import map_compose_homotopy as mch, homotopy_compose_map as hcm
    phi = homotopy_add(mch(fp, CHomotopy(a, ap, hp)),
                       hcm(CHomotopy(b, bp, h2), f), scale_b=-1)
    return a, b, ap, bp, f, fp, pa, pb, phi


def solve_second_homotopy(f, g, fp, gp, phi_a, phi_b, h_f, h_g, psi, psi_p):
    """An explicit second homotopy for the given gadgets, found by solving
    the defining relation exactly; returns the SecondHomotopy or None when
    the residual is not a boundary in the mediating degree."""
    from .ccx import SecondHomotopy, check_second_homotopy
    from .exactlin import solve
    b = g.src
    bp = phi_b.dst
    win = sorted(set(b.indices()) | set(bp.indices())
                 | set(g.dst.indices()))
    if win:
        win = list(range(min(win), max(win) + 1))
    # unknown layout: one block per (m, n, k) with m <= n + 2
    blocks = []
    offs = {}
    total = 0
    for m in b.indices():
        for n in bp.indices():
            if m > n + 2:
                continue
            for k in b.cx(m).degrees():
                rows = bp.cx(n).dim(k + n - m + 2)
                cols = b.cx(m).dim(k)
                if rows and cols:
                    offs[(m, n, k)] = (total, rows, cols)
                    total += rows * cols
    eq_rows = []
    rhs_rows = []

    def theta_slot(mm, nn, kk):
        return offs.get((mm, nn, kk))

    eqs = {}
    rhsv = {}
    eqcount = 0
    for m in b.indices():
        for n in bp.indices():
            if m > n + 2:
                continue
            for k in b.cx(m).degrees():
                rows = bp.cx(n).dim(k + n - m + 2 - 1)
                cols = b.cx(m).dim(k)
                if not cols:
                    continue
                # relation evaluated in degree shift +1 relative to Theta:
                # (-1)^n d Th^{m,n}[k] + sum F Th^{m,l}[k]
                # - (-1)^m Th^{m,n}[k-1] d - sum Th^{l,n}[k+l-m-1] F = R
                rdim = bp.cx(n).dim(k + n - m + 1)
                if not rdim:
                    continue
                # target value R^{m,n}[k]
                acc = RatMatrix(rdim, cols)
                for l in win:
                    acc = acc + psi_p.c(l, n, k + l - m).mul(phi_b.c(m, l, k))
                    acc = acc - h_f.c(l, n, k + l - m).mul(g.c(m, l, k))
                    acc = acc - fp.c(l, n, k + l - m + 1).mul(h_g.c(m, l, k))
                    acc = acc - phi_b.c(l, n, k + l - m + 1).mul(psi.c(m, l, k))
                for (rr, cc), v in acc.entries.items():
                    rhsv[(eqcount + rr * cols + cc, 0)] = v
                # left multiplication: eq(rr,cc) += sign*left[rr,uu]*Th[uu,cc]
                def put(mm, nn, kk, left, sign):
                    slot = theta_slot(mm, nn, kk)
                    if slot is None:
                        return
                    off, trows, tcols = slot
                    for (rr, uu), v in left.entries.items():
                        for cc in range(tcols):
                            eqs[(eqcount + rr * cols + cc,
                                 off + uu * tcols + cc)] = \
                                eqs.get((eqcount + rr * cols + cc,
                                         off + uu * tcols + cc), 0) + sign * v

                def put_right(mm, nn, kk, right, sign):
                    slot = theta_slot(mm, nn, kk)
                    if slot is None:
                        return
                    off, trows, tcols = slot
                    for (uu, cc), v in right.entries.items():
                        for rr in range(trows):
                            eqs[(eqcount + rr * cols + cc,
                                 off + rr * tcols + uu)] = \
                                eqs.get((eqcount + rr * cols + cc,
                                         off + rr * tcols + uu), 0) + sign * v

                put(m, n, k, bp.cx(n).d(k + n - m + 2), (-1) ** n)
                for l in win:
                    if l < n:
                        put(m, l, k, bp.f(l, n, k + l - m + 2), 1)
                put_right(m, n, k - 1, b.cx(m).d(k), -((-1) ** m))
                for l in win:
                    if l > m:
                        put_right(l, n, k + l - m - 1, b.f(m, l, k), -1)
                eqcount += rdim * cols
    mat = RatMatrix(eqcount, total, {k: v for k, v in eqs.items() if v})
    rhs = RatMatrix(eqcount, 1, rhsv)
    sol = solve(mat, rhs)
    if sol is None:
        return None
    comps = {}
    for (m, n, k), (off, rows, cols) in offs.items():
        ent = {}
        for rr in range(rows):
            for cc in range(cols):
                v = sol[(off + rr * cols + cc, 0)]
                if v != 0:
                    ent[(rr, cc)] = v
        if ent:
            comps.setdefault((m, n), {})[k] = RatMatrix(rows, cols, ent)
    theta = SecondHomotopy(comps, f, g, fp, gp, phi_a, phi_b, h_f, h_g,
                           psi, psi_p)
    rep = check_second_homotopy(theta)
    return theta if rep["ok"] else None


def rnd_retraction(rng: random.Random):
    """A random section setup: f: A -> B with g: B -> A and a homotopy psi
    from the identity of B to f g; returns (A, B, f, g, psi)."""
    b = rnd_ccomplex(rng)
    e = rnd_ccomplex(rng)
    a = direct_sum_ccomplex(b, e)
    fc, gc = {}, {}
    for m in a.indices():
        perf, perg = {}, {}
        for kk in a.cx(m).degrees():
            db = b.cx(m).dim(kk)
            if db:
                perf[kk] = RatMatrix(db, a.cx(m).dim(kk),
                                     {(i, i): Fraction(1) for i in range(db)})
                perg[kk] = RatMatrix(a.cx(m).dim(kk), db,
                                     {(i, i): Fraction(1) for i in range(db)})
        if perf:
            fc[(m, m)] = perf
        if perg:
            gc[(m, m)] = perg
    fmap = CMap(a, b, fc)
    gmap = CMap(b, a, gc)
    h = rnd_homotopy_comps(rng, b, a)
    g2 = cmap_add(gmap, homotopy_defect(b, a, h))
    psi = map_compose_homotopy(fmap, CHomotopy(b, a, h))
    return a, b, fmap, g2, psi


def rnd_second_homotopy_setup(rng: random.Random):
    """A full cast for the mediating-homotopy relation: a retraction with
    identity-perturbed columns, the induced exchange homotopies, and an
    explicitly solved second homotopy.  Returns a dict of the gadgets, or
    None when the linear solve happens to be obstructed."""
    from .ccx import (homotopy_add, homotopy_compose_map, identity_cmap,
                      map_compose_homotopy)
    a, b, f, g, psi = rnd_retraction(rng)
    h1 = rnd_homotopy_comps(rng, a, a, density=0.3)
    h2 = rnd_homotopy_comps(rng, b, b, density=0.3)
    phi_a = cmap_add(identity_cmap(a), homotopy_defect(a, a, h1))
    phi_b = cmap_add(identity_cmap(b), homotopy_defect(b, b, h2))
    # exchange homotopies from phi_B f to f phi_A and from phi_A g to g phi_B
    h_f = homotopy_add(map_compose_homotopy(f, CHomotopy(a, a, h1)),
                       homotopy_compose_map(CHomotopy(b, b, h2), f), scale_b=-1)
    h_g = homotopy_add(map_compose_homotopy(g, CHomotopy(b, b, h2)),
                       homotopy_compose_map(CHomotopy(a, a, h1), g), scale_b=-1)
    theta = solve_second_homotopy(f, g, f, g, phi_a, phi_b, h_f, h_g, psi, psi)
    if theta is None:
        return None
    return {"A": a, "B": b, "f": f, "g": g, "psi": psi,
            "phi_a": phi_a, "phi_b": phi_b, "h_f": h_f, "h_g": h_g,
            "theta": theta}
