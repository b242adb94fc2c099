from fractions import Fraction

import numpy as np
import pytest

from dualdet.dcmat import (
    DCMatrix,
    ai_tilde_det,
    assemble_block_triangular,
    char_roots,
    charpoly,
    charpoly_eval,
    complete_eigenpair,
    det,
    det_block_triangular,
    det_leibniz,
    det_sum_expansion,
    frobenius,
    inverse,
    schur_det,
    verify_eigenpair,
)
from dualdet.errors import NoCompletion, NotAnEigenpair, NotAppreciable, NotInvertible, ShapeError, SizeLimit
from dualdet.generate import dc, dc_unitary
from dualdet.scalar import DualComplex

from conftest import load_fixture, rngs

F = Fraction


def dclose(a: DualComplex, b: DualComplex, tol=1e-10) -> bool:
    scale = max(1.0, abs(complex(b.st)), abs(complex(b.in_)))
    return abs(complex(a.st) - complex(b.st)) <= tol * scale and abs(complex(a.in_) - complex(b.in_)) <= tol * scale


def test_immutable():
    A = DCMatrix.identity(2)
    with pytest.raises(AttributeError):
        A.st = None
    with pytest.raises(ValueError):
        A.st[0, 0] = 5


def test_from_entries_shape():
    with pytest.raises(ShapeError):
        DCMatrix.from_entries(2, 2, [1, 2, 3])
    A = DCMatrix.from_entries(1, 2, [DualComplex(1j, 2 + 0j), 3])
    assert A[0, 0] == DualComplex(1j, 2 + 0j)


def test_leibniz_examples():
    assert det_leibniz(DCMatrix.identity(3)) == DualComplex(1, 0)
    d = [DualComplex(2 + 1j, 1 + 0j), DualComplex(3 + 0j, -1j), DualComplex(-1 + 0j, 2 + 0j)]
    want = d[0] * d[1] * d[2]
    assert dclose(det_leibniz(DCMatrix.diag(d)), want)
    assert det_leibniz(load_fixture("rational_roots")) == DualComplex(27, 12)
    with pytest.raises(SizeLimit):
        det_leibniz(DCMatrix.identity(9))


def test_det_example_48_exact():
    assert det(load_fixture("rational_roots")) == DualComplex(F(27), F(12))


def test_det_matches_leibniz_with_singular_standard_part():
    for g in rngs(1, 30):
        A = dc(g, 3)
        st = np.array(A.st)
        st[2] = st[0] + 2 * st[1]
        A = DCMatrix(st, A.in_)
        assert dclose(det(A), det_leibniz(A))


def test_det_conjugate():
    A = dc(np.random.default_rng(0), 4)
    assert dclose(det(A.conj()), det(A).conjugate())


def test_sum_expansion():
    g = np.random.default_rng(3)
    A, B = dc(g, 3), dc(g, 3)
    Z = DCMatrix.zeros(3, 3)
    assert dclose(det_sum_expansion(A, Z), det(A))
    assert dclose(det_sum_expansion(Z, B), det(B))
    assert dclose(det_sum_expansion(A, B), det(A + B))
    with pytest.raises(SizeLimit):
        det_sum_expansion(DCMatrix.identity(6), DCMatrix.identity(6))


def test_block_triangular():
    g = np.random.default_rng(4)
    A, B, C = dc(g, 2), dc(g, 2), dc(g, 2)
    assert det_block_triangular(DCMatrix.identity(2), DCMatrix.identity(2), C=C) == DualComplex(1, 0)
    assert dclose(det_block_triangular(A, B, C=C), det(assemble_block_triangular(A, B, C=C)))
    assert dclose(det_block_triangular(A, B, D=C), det(assemble_block_triangular(A, B, D=C)))
    a, b = DCMatrix.diag([DualComplex(2 + 0j, 1j)]), DCMatrix.diag([DualComplex(3j, 1 + 0j)])
    assert dclose(det_block_triangular(a, b), a[0, 0] * b[0, 0])
    with pytest.raises(ShapeError):
        det_block_triangular(A, B, C=dc(g, 3))


def test_schur():
    g = np.random.default_rng(5)
    A, B, C, D = dc(g, 2), dc(g, 2), dc(g, 2), dc(g, 2)
    from dualdet.dcmat import block

    assert dclose(schur_det(A, B, C, D), det(block([[A, B], [C, D]])))
    Z = DCMatrix.zeros(2, 2)
    assert dclose(schur_det(A, Z, Z, D), det(A) * det(D))
    assert abs(schur_det(A, B, C, C @ inverse(A) @ B).st) < 1e-10
    with pytest.raises(NotInvertible):
        schur_det(DCMatrix.zeros(2, 2), B, C, D)


def test_inverse_examples():
    assert inverse(DCMatrix.identity(3)).allclose(DCMatrix.identity(3))
    A = DCMatrix.diag([DualComplex(2 + 0j, 1 + 0j), 1])
    assert inverse(A).allclose(DCMatrix.diag([DualComplex(0.5 + 0j, -0.25 + 0j), 1]))
    with pytest.raises(NotInvertible):
        inverse(DCMatrix([[1, 2], [2, 4]], [[1, 0], [0, 1]]))
    B = dc(np.random.default_rng(6), 4)
    Bi = inverse(B)
    assert (B @ Bi).allclose(DCMatrix.identity(4), 1e-9)
    assert (Bi @ B).allclose(DCMatrix.identity(4), 1e-9)


def test_unitary_det_modulus():
    U = dc_unitary(np.random.default_rng(7), 4)
    d = det(U)
    p = d * d.conjugate()
    assert abs(p.st - 1) < 1e-10 and abs(p.in_) < 1e-9


def test_charpoly_examples():
    f = charpoly(load_fixture("rational_roots"))
    assert f.g == (F(-27), F(-9), F(3), F(1))  # (x - 3)(x + 3)^2
    f = charpoly(load_fixture("no_root"))
    assert f.g == (F(1), F(-2), F(1)) and f.tau == (F(-1), F(0))
    f = charpoly(DCMatrix([[0]]))
    assert [complex(c) for c in f.g] == [0, 1] and [complex(c) for c in f.tau] == [0]


def test_charpoly_eval_matches_det():
    for g in rngs(8, 10):
        A = dc(g, 3)
        lam = DualComplex(complex(*g.standard_normal(2)), complex(*g.standard_normal(2)))
        direct = det(DCMatrix.identity(3).scale(lam) - A)
        assert dclose(charpoly_eval(charpoly(A), lam), direct, 1e-9)


def test_ai_tilde_example_48():
    A = load_fixture("rational_roots")
    lam1 = DualComplex(F(3), F(7, 6))
    assert [ai_tilde_det(A, lam1, i) for i in (1, 2, 3)] == [F(49, 3), F(2), F(-55, 3)]
    for a in (F(-1), F(0), F(5, 2)):
        lam2 = DualComplex(F(-3), a)
        assert [ai_tilde_det(A, lam2, i) for i in (1, 2, 3)] == [2 * a, 0, -2 * a]
    with pytest.raises(IndexError):
        ai_tilde_det(A, lam1, 4)


def test_char_roots_examples():
    (r,) = char_roots(load_fixture("no_root"))
    assert r.lambda_st == 1 and r.kind == "none" and not r.exists
    roots = {round(r.lambda_st.real): r for r in char_roots(load_fixture("free_root"))}
    assert roots[-1].kind == "free" and roots[-1].multiplicity == 2
    assert roots[2].kind == "unique" and abs(roots[2].lambda_in - 1) < 1e-9
    roots = {round(r.lambda_st.real): r for r in char_roots(load_fixture("rational_roots"))}
    assert roots[3].kind == "unique" and abs(roots[3].lambda_in - 7 / 6) < 1e-9
    assert roots[-3].kind == "free"


def test_complete_eigenpair_examples():
    A = load_fixture("rational_roots")
    c = complete_eigenpair(A, 3, [1, 1, 1])
    assert abs(c.lambda_in - 7 / 6) < 1e-10 and c.unique
    x = [DualComplex(1 + 0j, complex(v)) for v in c.x_in]
    assert verify_eigenpair(A, DualComplex(3 + 0j, c.lambda_in), x).st < 1e-10
    B = load_fixture("free_root")
    for b in (0, 2, -3):
        with pytest.raises(NoCompletion):
            complete_eigenpair(B, -1, [-1, 1, 0], lambda_in=b)
    assert complete_eigenpair(B, -1, [-1, 1, 0], lambda_in=1).residual < 1e-10
    D = DCMatrix.diag([DualComplex(1 + 0j, 5 + 0j), DualComplex(2 + 0j, -3 + 0j)])
    assert abs(complete_eigenpair(D, 2, [0, 1]).lambda_in + 3) < 1e-12
    with pytest.raises(NotAnEigenpair):
        complete_eigenpair(A, 3, [1, 0, 0])
    with pytest.raises(NotAppreciable):
        complete_eigenpair(A, 3, [0, 0, 0])


def test_verify_eigenpair_examples():
    A = load_fixture("rational_roots")
    x = [DualComplex(1, F(-1, 2)), DualComplex(1, F(-5, 12)), DualComplex(1, 0)]
    assert verify_eigenpair(A, DualComplex(3, F(7, 6)), x).st <= 1e-12
    for a in (0, 1, -2):
        xh = [DualComplex(1, -3 * a - 1), DualComplex(-2, F(7, 2) * a + 1), DualComplex(1, 0)]
        r = verify_eigenpair(A, DualComplex(-3, a), xh)
        assert r.st <= 1e-12 and abs(r.in_) <= 1e-12
    assert verify_eigenpair(A, DualComplex(2, 0), x).st > 0.1
    with pytest.raises(NotAppreciable):
        verify_eigenpair(A, DualComplex(3, 0), [DualComplex(0, 1)] * 3)


def test_frobenius():
    assert frobenius(DCMatrix.identity(4)).st == 2
    B = dc(np.random.default_rng(9), 3)
    e = frobenius(DCMatrix(np.zeros((3, 3)), B.st))
    assert e.st == 0 and abs(e.in_ - np.linalg.norm(B.st)) < 1e-12
