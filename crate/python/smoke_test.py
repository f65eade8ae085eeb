"""Smoke test for the pycharsum extension module.

Build it with
    cargo build --release -p charsum-python --features extension-module
then copy target/release/libpycharsum.so next to this file as pycharsum.so
(or put it anywhere on PYTHONPATH) and run `python3 python/smoke_test.py`.
"""

import itertools

import pycharsum as cs


def check_forms():
    q = cs.QuadraticForm("x1x2+x3x4+x5x6", 6)
    assert q.rank() == 3
    assert str(q.normal_form()) == "x1x2+x3x4+x5x6"
    pairs, residual = cs.QuadraticForm("x1x3+x2x3+x4+1", 4).decompose()
    assert len(pairs) == 1 and residual
    assert q.support() == 28


def check_witness():
    s = cs.CharacterSum("0 ; x1x2+1 ; x3x4+1 ; x1x2+x3x4", 4)
    assert s.table() == cs.FunctionTable.and_n(4)
    assert cs.CharacterSum.and_construction(6).weight == 8


def check_circuits():
    s = cs.CharacterSum.and_construction(4)
    c = s.to_circuit()
    assert c.depth() == 3
    accepted = sum(c.evaluate(list(x)) for x in itertools.product([False, True], repeat=4))
    assert accepted == 15
    assert c.to_characters().table() == s.table()


def check_search():
    weight, witness = cs.bfs_min_weight(cs.FunctionTable.and_n(3))
    assert witness.table() == cs.FunctionTable.and_n(3)
    hist = cs.sample_histogram(6, 2, 20000, seed=1)
    assert sum(hist.values()) == 20000
    assert max(hist, key=hist.get) == 32
    a = cs.CharacterSum("0 ; x1x2+1", 4).table()
    b = cs.CharacterSum("x3x4+1 ; x1x2+x3x4", 4).table()
    assert (0, 1) in cs.scan_pairs([a, b])
    return weight


def check_groups():
    assert all(ok for _, ok in cs.g72_relations())
    assert cs.group_order("g72") == 72
    assert cs.group_order("s3") == 6
    element, accepted = cs.eval_program("accept=1\nbit=1 zero=a one=aa\nbit=1 zero=aa one=a", [True])
    assert accepted and element == "()"


def main():
    check_forms()
    check_witness()
    check_circuits()
    weight = check_search()
    check_groups()
    print(f"pycharsum smoke test passed (AND3 weight {weight})")


if __name__ == "__main__":
    main()
