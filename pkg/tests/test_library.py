import random

import pytest

from cutexplain import explain, library
from cutexplain.kernel import check
from cutexplain.kernel import proofs as P
from cutexplain.lang import (Add, And, Eq, ForallNat, ForallRange, IntLit, Mul,
                             eval_formula, eval_term, subst)

from oracles import magic_by_division

NAMES = ["repunit_core", "geom_merge", "repunit_general", "digit_scaling",
         "division_invariant_core"]

# natural parameters are drawn from these ranges; the hypotheses of each
# lemma hold on them, so no sampled instance is vacuous
RANGES = {"b": (2, 16), "p": (1, 4), "m": (1, 4), "x": (0, 9)}


def _random_instance(f, rng):
    env = {}
    while isinstance(f, ForallNat) or (hasattr(f, "r") and isinstance(f.r, ForallNat)):
        if isinstance(f, ForallNat):
            env[f.var] = rng.randint(*RANGES[f.var])
            f = f.body
        else:
            assert eval_formula(f.l, env)
            f = f.r
    return f, env


def test_library_checks_in_order():
    lib = library.load_library()
    assert list(lib) == NAMES
    known = {}
    for name, e in lib.items():
        assert check(e.proof, e.statement, known).accepted
        known[name] = e.statement


@pytest.mark.parametrize("name", NAMES)
def test_generic_lemmas_do_not_enumerate(name):
    e = library.lemma(name)
    assert e.is_generic
    assert P.count_nodes(e.proof, P.RangeEnum) == 0


@pytest.mark.parametrize("name", NAMES)
def test_random_instances_evaluate_true(name):
    rng = random.Random(name)
    st = library.lemma(name).statement
    for _ in range(25):
        body, env = _random_instance(st, rng)
        assert eval_formula(body, env), env


def _instances(name, rng):
    e = library.lemma(name)
    st, proof = e.statement, e.proof
    if isinstance(st, And):
        st, proof = st.l, P.AndElimL(proof)
    lo, hi = (1, 9) if isinstance(st, ForallRange) else (0, 40)
    if isinstance(st, ForallRange):
        lo, hi = eval_term(st.lo), eval_term(st.hi)
    for _ in range(20):
        v = rng.randint(lo, hi)
        # mix plain literals with closed compound terms of the same value
        t = IntLit(v) if rng.random() < 0.5 else Add(IntLit(v // 2), IntLit(v - v // 2))
        yield st, proof, t


@pytest.mark.parametrize("name", NAMES)
def test_substitution_stability(name):
    rng = random.Random(f"subst-{name}")
    known = library.statements()
    for st, proof, t in _instances(name, rng):
        want = subst(st.body, st.var, t)
        if isinstance(proof, (P.ForallIntro, P.ForallRangeIntro)):
            tpl = explain.Template(st.var, st.body, proof)
            direct = explain.instantiate(tpl, t)
            assert check(direct, want, known).accepted
        assert check(P.ForallElim(proof, t), want, known).accepted


@pytest.mark.parametrize("b", [10, 20, 2])
def test_specializations(b):
    st = library.repunit_general().statement
    known = library.statements()
    inst = subst(st.body, "b", IntLit(b))
    proof = P.ForallElim(library.repunit_general().proof, IntLit(b))
    assert check(proof, inst, known).accepted
    magic = eval_term(subst(st.body.r.body.r.l.l.l, "b", IntLit(b)))
    assert magic == magic_by_division(b, 1)
    for p in range(1, 4):
        assert eval_formula(subst(inst.r.body, "p", IntLit(p)))


@pytest.mark.parametrize("n,rhs", [(4, 444444444), (7, 777777777), (1, 111111111)])
def test_digit_scaling_instances(n, rhs):
    goal, proof = library.digit_scaling_instance(n)
    assert goal == Eq(Mul(IntLit(12345679), IntLit(9 * n)), IntLit(rhs))
    assert check(proof, goal, library.statements()).accepted
    e = library.digit_scaling()
    direct = P.ForallElim(e.proof, IntLit(n))
    assert check(direct, subst(e.statement.body, "n", IntLit(n)), library.statements()).accepted


def test_digit_scaling_instance_range():
    with pytest.raises(ValueError):
        library.digit_scaling_instance(10)


def test_broken_file_is_refused(tmp_path):
    library.write_files(tmp_path)
    f = tmp_path / "repunit_core.sexp"
    f.write_text(f.read_text().replace("RingNormalize", "Distribute", 1))
    with pytest.raises(library.LibraryError):
        library.load_library(tmp_path)


def test_missing_file_is_refused(tmp_path):
    library.write_files(tmp_path)
    (tmp_path / "geom_merge.sexp").unlink()
    with pytest.raises(library.LibraryError):
        library.load_library(tmp_path)
