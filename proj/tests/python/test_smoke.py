import itertools
import os
import pathlib
import random

import pytest

import moc

FIXTURES = pathlib.Path(os.environ.get("MOC_FIXTURES", pathlib.Path(__file__).parents[1] / "fixtures"))


def test_legacy_words():
    assert moc.legacy_encode(123456789) == [1, 2345, 16789]
    assert moc.legacy_encode(-123456789) == [1, 2345, 26789]
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(-10**40, 10**40)
        assert moc.legacy_decode(moc.legacy_encode(n)) == n


def test_big_integers_cross_the_boundary():
    n = 3**200
    assert moc.det([[n, 1], [0, 1]]) == n
    assert moc.hnf([[2, 4], [1, 3]]) == [[1, 1], [0, 2]]


def test_dec_solve():
    assert moc.dec_solve([3, 5], [[1, 1], [0, 1]]) == [3, 2]
    assert moc.dec_solve([1, 1], [[1, 0]]) is None
    with pytest.raises(moc.MocError, match="non-integral"):
        moc.dec_solve([1, 0], [[2, 0], [0, 1]])


def test_a5_table():
    t = moc.load_table(str(FIXTURES / "A5.tbl"))
    assert t.name == "A5" and t.order == 60
    assert t.labels == ["X.1", "X.2", "X.3", "X.4", "X.5"]
    assert t.blocks(5) == [[0, 1, 2, 3], [4]]
    assert t.blocks(2) == [[0, 1, 2, 4], [3]]
    assert len(t.usual()) == 5


def brute(a, b, c, upper):
    best = None
    for x in itertools.product(*(range(u + 1) for u in upper)):
        if all(sum(r[j] * x[j] for j in range(len(x))) <= bi for r, bi in zip(a, b)):
            v = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or v < best:
                best = v
    return best


def test_bounded_ilp_against_python_enumeration():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(-2, 6) for _ in range(m)]
        c = [rng.randint(-3, 3) for _ in range(n)]
        upper = [rng.randint(0, 3) for _ in range(n)]
        r = moc.solve_bounded(a, b, c, upper)
        expect = brute(a, b, c, upper)
        if expect is None:
            assert r["status"] == "infeasible"
        else:
            assert r["status"] == "optimum" and r["value"] == expect


def test_pair_and_atoms():
    ok, d = moc.certify_pair([[1, 0], [1, 1]])
    assert ok and d == 1
    assert moc.detect_atom_pims([[1, 0], [1, 1]]) == [1]


def test_part_test_certifies_indecomposable():
    proved, part = moc.part_test([1, 1], [[1, -1]])
    assert proved and part is None


def test_errors_are_mapped():
    with pytest.raises(moc.MocError):
        moc.load_table(str(FIXTURES / "missing.tbl"))


def test_command_line(tmp_path):
    rc, out, err = moc.run(["init", "--group", "A5", "--prime", "5", "--root", str(tmp_path)])
    assert rc == 0, err
    rc, out, err = moc.run(["import-table", str(FIXTURES / "A5.tbl"), "--group", "A5", "--prime", "5",
                            "--root", str(tmp_path)])
    assert rc == 0, err
    rc, out, _ = moc.run(["blocks", "--group", "A5", "--prime", "5", "--root", str(tmp_path)])
    assert rc == 0 and "defect 1" in out
    rc, _, _ = moc.run(["trace", "P999", "--group", "A5", "--prime", "5", "--root", str(tmp_path)])
    assert rc == 1
