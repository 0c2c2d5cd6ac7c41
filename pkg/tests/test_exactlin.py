import random
from fractions import Fraction

import pytest

from cubehom.exactlin import (MetObj, RatMatrix, ShortExact, ZERO_OBJ,
                              homology_dims, is_short_exact, kernel_basis,
                              rank, rat_str, rref, solve, tensor_map,
                              tensor_obj)
from helpers import rnd_chain_complex, rnd_gram, rnd_matrix, rnd_one_cube


def M(rows):
    return RatMatrix.from_rows(rows)


def test_rank_examples():
    assert rank(RatMatrix.identity(2)) == 2
    assert rank(RatMatrix.zero(3, 2)) == 0
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_rank_sparse_and_dense_agree():
    rng = random.Random(0)
    for _ in range(40):
        m = rnd_matrix(rng, rng.randint(1, 20), rng.randint(1, 20), density=0.3)
        assert rank(m) == len(rref(m)[1])


def test_kernel_basis_examples():
    assert kernel_basis(RatMatrix.identity(3)) == []
    assert len(kernel_basis(RatMatrix.zero(2, 3))) == 3
    (v,) = kernel_basis(M([[1, 1]]))
    assert v[(0, 0)] == -v[(1, 0)] != 0


def test_kernel_vectors_annihilate():
    rng = random.Random(1)
    for _ in range(25):
        m = rnd_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        basis = kernel_basis(m)
        assert len(basis) == m.cols - rank(m)
        for v in basis:
            assert m.mul(v).is_zero()


def test_homology_dims_trivial():
    ident = {1: RatMatrix.identity(1)}
    assert homology_dims(ident, 0, 1) == {0: 0, 1: 0}
    zero = {1: RatMatrix.zero(2, 3), 2: RatMatrix.zero(3, 1)}
    assert homology_dims(zero, 0, 2) == {0: 2, 1: 3, 2: 1}


def test_homology_dims_rejects_nonzero_square():
    bad = {1: M([[1]]), 2: M([[1]])}
    with pytest.raises(ValueError):
        homology_dims(bad, 0, 2)


def test_homology_matches_dense_oracle():
    rng = random.Random(2)
    for _ in range(100):
        cx = rnd_chain_complex(rng, degs=(0, 3), maxdim=4)
        assert sum(cx.dims.values()) <= 24
        h = cx.homology()
        for n in cx.degrees():
            want = cx.dim(n) - len(rref(cx.d(n))[1]) - len(rref(cx.d(n + 1))[1])
            assert h[n] == want


def test_is_short_exact_examples():
    inj = M([[1], [0]])
    surj = M([[0, 1]])
    s = ShortExact(MetObj(1), MetObj(2), MetObj(1), inj, surj)
    assert is_short_exact(s)
    bad = ShortExact(MetObj(1), MetObj(1), MetObj(1),
                     RatMatrix.identity(1), RatMatrix.identity(1))
    assert not is_short_exact(bad)


def test_is_short_exact_shape_mismatch_is_error():
    with pytest.raises(ValueError):
        ShortExact(MetObj(2), MetObj(2), MetObj(1),
                   RatMatrix.identity(1), M([[1, 0]]))


def test_random_extension_is_exact():
    rng = random.Random(3)
    for _ in range(30):
        cube = rnd_one_cube(rng, max_dim=4)
        s = ShortExact(cube.vertices[(-1,)], cube.vertices[(0,)],
                       cube.vertices[(1,)], cube.arrows[(1, (-1,))],
                       cube.arrows[(1, (0,))])
        assert is_short_exact(s)
        assert rank(s.inj) + rank(s.surj) == s.mid.dim
        assert s.surj.mul(s.inj).is_zero()


def test_tensor_obj_examples():
    a, b = MetObj(2), MetObj(3)
    assert tensor_obj(a, b).dim == 6
    rng = random.Random(4)
    x = MetObj(2, rnd_gram(rng, 2))
    y = MetObj(1, rnd_gram(rng, 1))
    z = MetObj(2, rnd_gram(rng, 2))
    assert tensor_obj(tensor_obj(x, y), z) == tensor_obj(x, tensor_obj(y, z))


def test_kron_gram_positive_definite():
    rng = random.Random(5)
    for _ in range(10):
        g1 = rnd_gram(rng, 2)
        g2 = rnd_gram(rng, 2)
        MetObj(4, g1.kron(g2))  # constructor checks leading minors


def test_tensor_map_mixed_gram():
    a = MetObj(2)
    b = MetObj(2, rnd_gram(random.Random(6), 2))
    assert tensor_obj(a, b).gram is None
    assert tensor_map(RatMatrix.identity(2), RatMatrix.identity(3)) == \
        RatMatrix.identity(6)


def test_matrix_json_roundtrip():
    m = M([[Fraction(1, 2), 0], [3, Fraction(-7, 5)]])
    obj = m.to_json_obj()
    assert obj["rows"] == 2 and obj["cols"] == 2
    assert ["0", "0", "1/2"] == [str(obj["entries"][0][0]),
                                 str(obj["entries"][0][1]),
                                 obj["entries"][0][2]]
    assert RatMatrix.from_json(m.to_json()) == m


def test_solve_consistency():
    rng = random.Random(7)
    for _ in range(25):
        m = rnd_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        x = rnd_matrix(rng, m.cols, 1, density=0.9)
        rhs = m.mul(x)
        sol = solve(m, rhs)
        assert sol is not None and m.mul(sol) == rhs


def test_rat_str():
    assert rat_str(Fraction(3)) == "3"
    assert rat_str(Fraction(-4, 6)) == "-2/3"


def test_gram_must_be_positive_definite():
    with pytest.raises(ValueError):
        MetObj(2, M([[1, 2], [2, 1]]))
    with pytest.raises(ValueError):
        MetObj(2, M([[1, 2], [3, 4]]))


def test_zero_obj():
    assert ZERO_OBJ.dim == 0 and ZERO_OBJ.is_zero()
