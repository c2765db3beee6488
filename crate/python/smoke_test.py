"""Smoke test for the nfold extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`
or `pip install crates/py`, then run `python python/smoke_test.py`.
"""

import json

import nfold


def main():
    a = nfold.Expr("(2 #2 3) #1 1", 2)
    b = nfold.Expr("2 #2 1 #2 3", 2)
    assert str(a) == "(2 #2 3) #1 1"
    assert nfold.hom_exists(a, b)
    assert not nfold.hom_exists(a, nfold.Expr("1 #2 3 #2 2", 2))
    assert a.restrict([1, 2]) == nfold.Expr("2 #1 1")
    assert (2, 3, 2, 2) in a.relations(2)

    steps = json.loads(nfold.witness(nfold.Expr("2 #1 1"), nfold.Expr("1 #2 2"), 2))
    assert len(steps) == 1
    assert nfold.witness(nfold.Expr("1 #2 2"), nfold.Expr("2 #1 1"), 2) is None

    assert len(nfold.enumerate(2, 3)) == 36
    assert len(nfold.enumerate(2, 3, milgram=True)) == 24
    assert nfold.shape_sequence(2, 5) == [1, 1, 2, 6, 22, 90]
    assert nfold.counts_csv(2, 4).splitlines()[-1] == "4,22,528,45/11,4.0909090909"
    assert len(set(nfold.enumerate(3, 2))) == 6

    outer = nfold.Expr("1 #1 2")
    composed = nfold.operad_compose(outer, [nfold.Expr("1 #2 2"), nfold.Expr("1")])
    assert str(composed) == "(1 #2 2) #1 3"

    assert len(nfold.downset(2, nfold.Expr("1 #2 2 #2 3"))) == 13
    assert len(nfold.downset(2, nfold.Expr("1 #2 2 #2 3"), milgram=False)) == 17
    cells = [nfold.Expr(s) for s in ["(1 #2 3) #1 (2 #2 4 #2 5)", "(1 #2 3 #2 4) #1 (2 #2 5)"]]
    assert str(nfold.pi_retract(*cells)) == "(1 #2 3) #1 4 #1 (2 #2 5)"
    assert nfold.q_map(3, cells).is_level_ordered()

    h = nfold.homology(2, 3)
    assert h["betti"][:3] == [1, 3, 2] and h["torsion"] == []
    assert nfold.homology(3, 2, "gamma")["betti"] == [1, 0, 1]

    s = json.dumps({"k": 3, "chain": [[1, 2, 3], [2, 1, 3], [2, 3, 1], [2, 1, 3]]})
    assert nfold.in_gamma(s, 3) and not nfold.in_gamma(s, 2)

    x = nfold.Expr("(1 #2 2) #1 3")
    c = nfold.realize(x, 2)
    assert nfold.in_g(c, x) and nfold.in_f(c, x)
    assert nfold.decomposable(c) and nfold.decomposable(c, milgram=True)
    assert nfold.decomposable(nfold.shrink(c), milgram=True)

    try:
        nfold.Expr("1 #1 1")
    except nfold.NfoldError:
        pass
    else:
        raise AssertionError("duplicate label accepted")
    print("python smoke test ok")


if __name__ == "__main__":
    main()
