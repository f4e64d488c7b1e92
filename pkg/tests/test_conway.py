import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from qalinks import conway
from qalinks.conway import (
    ConwaySyntaxError, MissingParameterError, MontesinosSpec, Neg,
    NotMontesinosFormError, NotRationalTangleError, Param, Poly, Prod, Ram,
    Seq, UnknownBasisError, VertexArityError, cf_pair, conway_to_montesinos,
    mirror_expr, montesinos_canonical, montesinos_det, montesinos_to_conway,
    montesinos_value, normalize, parameters, parse, positive_cf_terms,
    ram_summands, render, substitute, symbol_crossings, tangle_fraction,
)

# symbols that appear across the working corpus, in the exact source styling
CORPUS = [
    "2", "3", "2 2", "3 1 2", "2 1 1 2", "-2 2,2 2,3", "2 1 2,2 1 1,-2 1",
    "2 1 2,-2 2,3", "-2 1 1 1,2 1 1,3", "3,3,2-", "3,3,-3", "4,3,-3",
    "5,3,-3", "-2 1 2,3,3", "(3,-2 1) (2 1,2)", "(2,2+) -(2 1,2)",
    "3,2 1,-2", "2 1 1,2 1,-2", "(3,-2 1) (2,2)", "(-2 1,4) (2,2)",
    ".2.-3 0.2", "6*-3.-2.2 0:2.-1", "6*2.2 1.-2 0.-1.-2", "6*", "8*",
    "8*2:2:2", "10***", ".2.(-2 1,2).2", "-2 2,2 2,4", "-2 2,2 1 2,3",
    "(3,2+) -(2 1,3)", "2:-3 1 0:3 0", "-2.-2.-2 0.2.2.2 0",
    "(-3 1,3) (2 1,2)", "8*2.2 0:-2 1 0", "2 1 1:-2 1 0:2 0",
    "2 1 1,2 2,-2 1 1", "(-2 1,2 1 1) (2,2)", "(-2 1,-4) (2,2)",
    "(2 1,3),2,(2,-2)", "6*2:.(-2 1,3) 0", "(2,2,2+) -(2 1 1,3)",
    "p q,r,s-", "p,q,r,s-", "(p,q) -(r,s)", "p,q,r,s--",
    "p 1,q,r-", "p 1 q,r,s-", "(p,q+) (r,s-)", "(p 1,q) -(r,s)",
    "(p,q+) -(r,s)", ".-(p,q)", "p q,r s,t-", "p 1 1 q,r,s-",
    "p 1 1,q,r-", "p 1,q,r,s--", "p,q,r,s,t-", "p,q,r,s,t--",
    "(p,q,r--) (s,t)", "(p q,r) -(s,t)", "(p,q) r (s,t-)",
    "(p,q,r) (s,t-)", "(p,q,r) -(s,t)", "(p,q+r) (s,t-)",
    "(p 1,q+) (r,s-)", "(p,q) -r (s,t)", "(p,q),r,-(s,t)",
    "(p,q),r,(s,t-)", "p:-q 0:-r 0", "-p 1 0:q 0:r 0", ".-(p,q).r",
    ".-(p,q).r 0", ".-(p,q):r 0", ".-(p,q):r", ".(p,q-) 1",
    "p 1,q 1,r,s--", "(p 1 1,q) -(r 1,s)", ".-(p 1,q).r", ".p.-(q 1,r)",
    "6*-(p 1,q).r 0", "6*p.-(q,r 1)", "(p 1 q,r) -(s,t)",
    "(p,q 1) -(r 1,s 1)", "(p,q,r--) (s,t+)", "-(p 1,q),r,(s,t)",
    "(p 1,q),r,-(s,t)", "(p,q),r 1,-(s,t)", "-(p,q),r,(s,t+)",
    "(p,q) 1,-(r,s),t", "6*-(p 1,q 1)", "6*-(p,q 1 1)", "6*-(p,q 1)",
    "6*-(p,q),-r", "6*(p,q,r--)", "6*p 1:.-(q,r) 0", "6*p:.-(q,r)",
    "6*-(p,q).r 0.s", "6*p.-(q,r).s 0", "6*-(p,q).r 0::s 0",
    "6*p.-(q,r).s", "8*-(p,q) 0", "8*-(p,q)", "10***p::-1.-1.-1.-1:-1",
    "10***::-1.-1.-1.-1.p 0.-1", "p 1 1 1,q,r-", "-p 1 1:q:r",
    "-p 1 1 0:q 0:r 0", "p.q 0.-r.s.t 0", "-p 0:q 1:-r 0",
    "p q:-r 0:-s 0", "p.-q 1.-r 0.s 0", "p.-q.-r 0.s 0", "8*p.-q 0.r",
    "p q,r 1,s-", "9*.-p:.-q", "p q 1 r,s,t-", "p 1 q r,s,t-",
    "(p,q-) (r 1,s 1+)", "-(p q,r) (s,t+)", "(p q,r-) (s,t+)",
    "-(p,q) (r s,t+)", "(p,q-) (r 1 1,s+)", "(p,q-) (r 1,s+t)",
    "(p 1,q-) -1 -1 (r,s)", "(p 1,q) -1 -1 (r,s-)", "(p 1,q) 1 1 -(r,s)",
    "-(p,q) 1 1 (r,s)", "(p,q) 1 1 -(r,s)", "-(p,q) 1 1 (r,s+)",
    "(p 1,q,r) (s,t-)", "(p,q,r+) (s,t-)", "(p,q,r+) -(s,t)",
    "(p,q,r-) (s,t+)", "-(p,q,r) (s,t+)", "(p,q),r 1,(s,t-)",
    "(p,q-),r+,(s,t-)", "(p,q),r+,(s,t-)", "(p,q),-r,-1,(s,t)",
    "(p,q) -1 -1 -1 (r,s)", "(p,q-) 1 1 1 (r,s-)", "(p,q) -1 -1 -1 (r,s-)",
    "(p,q) 1 1 1 -(r,s)", "(p,q) r 1 -(s,t)", "6*-p q.r 0.s",
    "6*-p 1.q.-r", "6*-p.q 0.r", "6*-p.q 1.-r 1", "6*-p.q.-r",
    "6*p.q.r 0.-s 1", "6*p.q.-r 1.s 0", "6*-p 1.q.-r:s",
    "6*p.q.-r.s 0.t", "6*-p 1.q 0.r.s 0", "6*-p.q.-r:s",
    "6*p.q 0.-r.s 0.t", "6*(p,q-)", "6*(p,q-) r", "6*(p,q-),r",
    "6*p.-(q,r) 1", "6*p:.-(q,r) 1 0", "6*p:.(q,r-) 1 0",
    "6*(p,q).-r 0.-s", "6*-(p,q).r.-s", "6*p.(q,r-).s", "8*p.-q 1 0",
    "8*-p 0.-q 0.-r 0", "(p,2+) -(2 1,3)", "(2,2,2+) -(2 1 1,p)",
    "6*p.(2,-2):2 0",
]


@pytest.mark.parametrize("text", CORPUS)
def test_corpus_round_trip(text):
    ast = parse(text)
    out = render(ast)
    assert out == text
    assert parse(out) == ast


def test_seq_shapes():
    assert parse("2") == Seq((2,))
    assert parse("2 2") == Seq((2, 2))
    assert parse("-2 2") == Seq((-2, -2))
    assert parse("-3 0") == Seq((-3, 0))
    assert parse("-2 1 0") == Seq((-2, -1, 0))
    assert parse("p q") == Seq((Param("p"), Param("q")))
    assert parse("-p q") == Seq((Param("p", True), Param("q", True)))


def test_ram_shapes():
    t = parse("2,3")
    assert t == Ram((Seq((2,)), Seq((3,))))
    t = parse("3,3,2-")
    assert t.runs == (0, 0, -1)
    t = parse("p,q,r,s--")
    assert t.runs == (0, 0, 0, -2)
    t = parse("(2,2+)")
    assert t == Ram((Seq((2,)), Seq((2,))), (0, 1))
    assert t.wrapped
    assert t.trailing_twists == 1
    t = parse("(p,q-),r+,(s,t-)")
    assert t.runs == (0, 1, 0)
    assert t.parts[0].runs == (0, -1)
    t = parse("(p,q-) (r 1,s+t)")
    assert t.factors[1].runs == (0, Param("t"))


def test_product_shapes():
    t = parse("(2,2+) -(2 1,2)")
    assert isinstance(t, Prod)
    first, second = t.factors
    assert first == Ram((Seq((2,)), Seq((2,))), (0, 1))
    assert second == Neg(Ram((Seq((2, 1)), Seq((2,)))))
    # bare integers merge into one rational factor
    assert parse("(2,2) 2 1").factors[1] == Seq((2, 1))
    assert parse("(p,q) -1 -1 (r,s)").factors[1] == Seq((-1, -1))


def test_polyhedral_shapes():
    t = parse(".2.-3 0.2")
    assert t == Poly("6*", (Seq((1,)), Seq((2,)), Seq((-3, 0)), Seq((2,)),
                            Seq((1,)), Seq((1,))))
    assert not t.basis_shown
    t = parse("6*-3.-2.2 0:2.-1")
    assert t.slots == (Seq((-3,)), Seq((-2,)), Seq((2, 0)), Seq((1,)),
                       Seq((2,)), Seq((-1,)))
    assert parse("6*2:2") == parse("6*2.1.2")
    assert parse("8*2:2:2") == parse("8*2.1.2.1.2.1.1.1")
    assert parse(":.2") == parse("6*1.1.1.2")
    assert parse("6*") == parse(".1")
    assert len(parse("10***p::-1.-1.-1.-1:-1").slots) == 10


def test_parse_errors():
    for bad in ["", "2,,3", "(2,2", "2)", "pq", "2,2+-", "2,2---",
                "12*2.2", "6*2.2.2.2.2.2.2", "-", "2 -", "()", "2..2.(2:2)"]:
        with pytest.raises(ConwaySyntaxError):
            parse(bad)
    with pytest.raises(UnknownBasisError):
        parse("7*2.2")
    with pytest.raises(VertexArityError):
        parse("6*2.2.2.2.2.2.2.2")


def test_cf_pair_table():
    assert cf_pair((2, 2)) == (5, 2)
    assert cf_pair((-2, -2)) == (-5, 2)
    assert cf_pair((2, 0)) == (1, 2)
    assert cf_pair((2, 1, 2)) == (8, 3)
    assert cf_pair((0,)) == (0, 1)
    assert cf_pair((1, -1)) == (0, 1)
    # the infinity tangle comes out with a zero denominator
    assert cf_pair((0, 0)) == (1, 0)


@given(st.lists(st.integers(-9, 9).filter(bool), min_size=1, max_size=6))
def test_cf_pair_matches_nested_fractions(terms):
    p, q = cf_pair(tuple(terms))
    try:
        value = oracles.cf_value(terms)
    except ZeroDivisionError:
        assume(False)
    assert q != 0
    assert value == Fraction(p, q)
    assert math.gcd(abs(p), q) == 1


@given(st.lists(st.integers(1, 9), min_size=1, max_size=6))
def test_cf_pair_mirror_negates(terms):
    p, q = cf_pair(tuple(terms))
    mp, mq = cf_pair(tuple(-t for t in terms))
    assert (mp, mq) == (-p, q)


def test_tangle_fraction_flattens_products():
    assert tangle_fraction(parse("2 1 2")) == cf_pair((2, 1, 2))
    assert tangle_fraction(parse("-(2 1)")) == (-3, 2)
    with pytest.raises(NotRationalTangleError):
        tangle_fraction(parse("2,2"))


def test_substitute_family_members():
    fam = parse("p,q,r-")
    assert render(substitute(fam, {"p": 2, "q": 2, "r": 2})) == "2,2,2-"
    assert render(substitute(parse("(p,q-) (r 1,s+t)"),
                             dict(p=2, q=3, r=2, s=2, t=2))) == "(2,3-) (2 1,2++)"
    with pytest.raises(MissingParameterError):
        substitute(fam, {"p": 2, "q": 2})
    assert parameters(parse("(p,q-) (r 1,s+t)")) == list("pqrst")


def test_normalize_resolves_marks():
    assert normalize(parse("3,3,2-")) == normalize(parse("3,3,-2"))
    assert normalize(parse("2,2+")) == normalize(parse("2,2,1"))
    assert normalize(parse("p,q,r,s--")) == normalize(parse("p,q,-r,-s"))
    assert normalize(parse("(2,2++)")) == normalize(parse("2,2,1,1"))


def test_mirror_expr():
    assert mirror_expr(parse("2 2")) == Seq((-2, -2))
    assert render(mirror_expr(parse("2 1 2,-2 2,3"))) == "-2 1 2,2 2,-3"
    t = parse("(2,2) (3,-2 1)")
    assert mirror_expr(mirror_expr(t)) == normalize(t)
    p = parse("6*2.2 1.-2 0.-1.-2")
    assert parse(render(mirror_expr(p))) == mirror_expr(p)


def test_symbol_crossings():
    assert symbol_crossings(parse("2 2")) == 4
    assert symbol_crossings(parse("3,3,2-")) == 8
    assert symbol_crossings(parse("(2,2+) -(2 1,2)")) == 10
    assert symbol_crossings(parse("6*")) == 6
    assert symbol_crossings(parse("6*2.2 1.-2 0.-1.-2")) == 11
    assert symbol_crossings(parse("(3,-2 1) (2 1,2)")) == 11
    assert symbol_crossings(parse(".2.-3 0.2")) == 10


def test_ram_summands_insert_marks_in_place():
    # marks resolve at this level only; parts keep their own marks
    parts = ram_summands(parse("(2,3-),2+,(2,2)"))
    assert parts == [parse("(2,3-)"), Seq((2,)), Seq((1,)), parse("(2,2)")]
    assert ram_summands(parse("3,3,2-"))[-1] == Seq((-2,))


# Montesinos forms


def test_montesinos_value_and_det():
    spec = MontesinosSpec(0, ((5, -2), (5, 2), (3, 1)))
    assert montesinos_value(spec) == montesinos_value(
        MontesinosSpec(1, ((5, 3), (5, 2), (3, 1))))
    assert montesinos_det(spec) == 25
    assert montesinos_canonical(spec) == MontesinosSpec(
        1, ((5, 3), (5, 2), (3, 1)))


@pytest.mark.parametrize("text,det", [
    ("-2 2,2 2,3", 25),
    ("2 1 2,2 1 1,-2 1", 37),
    ("2 1 2,-2 2,3", 37),
    ("-2 1 1 1,2 1 1,3", 37),
    ("3,3,-3", 9),
    ("3,2 1,-2", 9),
    ("2 1 1,2 1,-2", 23),
    ("-2 2,2 2,4", 25),
    ("-2 2,2 1 2,3", 37),
])
def test_montesinos_det_fixtures(text, det):
    assert montesinos_det(conway_to_montesinos(parse(text))) == det
    assert oracles.symbol_det(text) == det


def test_conway_to_montesinos_rejects_non_montesinos():
    with pytest.raises(NotMontesinosFormError):
        conway_to_montesinos(parse("2 2"))
    with pytest.raises(NotMontesinosFormError):
        conway_to_montesinos(parse("(2,2) (2,2)"))


@st.composite
def montesinos_specs(draw):
    k = draw(st.integers(2, 4))
    branches = []
    for _ in range(k):
        a = draw(st.integers(2, 9))
        b0 = draw(st.integers(1, a - 1))
        assume(math.gcd(a, b0) == 1)
        b = b0 + a * draw(st.integers(-2, 2))
        branches.append((a, b))
    return MontesinosSpec(draw(st.integers(-3, 3)), tuple(branches))


@given(montesinos_specs())
def test_montesinos_round_trip(spec):
    sym = montesinos_to_conway(spec)
    back = conway_to_montesinos(sym)
    assert montesinos_canonical(back) == montesinos_canonical(spec)
    assert montesinos_value(back) == montesinos_value(spec)


@given(montesinos_specs())
def test_montesinos_det_matches_pair_calculus(spec):
    sym = montesinos_to_conway(spec)
    assert oracles.symbol_det(render(sym)) == montesinos_det(spec)


@given(st.integers(2, 60), st.integers(1, 59))
def test_positive_cf_expansion_inverts(a, b):
    assume(b < a and math.gcd(a, b) == 1)
    terms = positive_cf_terms(a, b)
    assert all(t >= 1 for t in terms)
    assert cf_pair(tuple(reversed(terms))) == (a, b)


# property: parse(render(ast)) == ast over generated canonical trees

_params = st.sampled_from("pqrst").map(Param)
_terms = st.one_of(st.integers(1, 9), _params)


@st.composite
def seq_nodes(draw):
    terms = draw(st.lists(_terms, min_size=1, max_size=4))
    if draw(st.booleans()):
        terms = terms + [0]
    if draw(st.booleans()):
        terms = [conway._negate_term(t) for t in terms]
    return Seq(tuple(terms))


@st.composite
def ram_nodes(draw, parts_strategy):
    n = draw(st.integers(1, 4))
    parts = tuple(draw(parts_strategy) for _ in range(n))
    runs = []
    for j in range(n):
        r = draw(st.sampled_from([0, 0, 0, 1, 2, -1, -2]))
        if r < 0:
            r = max(r, -(j + 1))
        runs.append(r)
    if n == 1 and runs[0] == 0:
        runs[0] = 1
    return Ram(parts, tuple(runs), draw(st.booleans()))


@st.composite
def prod_nodes(draw, groups, seqs):
    factors = [draw(groups)]
    for _ in range(draw(st.integers(1, 2))):
        if draw(st.booleans()):
            factors.append(draw(seqs))
            factors.append(draw(groups))
        else:
            factors.append(draw(groups))
    return Prod(tuple(factors))


def tangle_nodes():
    seqs = seq_nodes()
    rams0 = ram_nodes(seqs)
    groups0 = st.one_of(rams0, rams0.map(Neg))
    rams1 = ram_nodes(st.one_of(seqs, groups0, prod_nodes(groups0, seqs)))
    groups1 = st.one_of(rams1, rams1.map(Neg))
    return st.one_of(seqs, groups1, prod_nodes(groups1, seqs))


@st.composite
def poly_nodes(draw):
    basis = draw(st.sampled_from(sorted(conway.BASIS_VERTICES)))
    n = conway.BASIS_VERTICES[basis]
    k = draw(st.integers(0, n))
    slots = [draw(tangle_nodes()) for _ in range(k)]
    slots += [Seq((1,))] * (n - k)
    return Poly(basis, tuple(slots), draw(st.booleans()))


@given(st.one_of(tangle_nodes(), poly_nodes()))
def test_render_parse_round_trip(node):
    text = render(node)
    assert parse(text) == node


# --- reduced Montesinos symbols ----------------------------------------


@pytest.mark.parametrize("sym, p, q", [
    ("3,3,-3", (3, 3), 3),
    ("4,3,-3", (4, 3), 3),
    ("2,2,-4", (2, 2), 4),
    ("2 2,2 1,-2", (2, 1), 2),
    # a mirrored multi-number part: the final twist sits one level in
    ("-2 1 2,3,3", (3, 3), 3),
    ("2 1,2 1,-3", (1, 1), 3),
])
def test_reduce_montesinos(sym, p, q):
    r = conway.reduce_montesinos(sym)
    assert (r.reduced_p, r.reduced_q) == (p, q)


def test_reduce_montesinos_accepts_parsed_nodes():
    node = parse("3,3,-3")
    assert conway.reduce_montesinos(node) == conway.reduce_montesinos("3,3,-3")


@pytest.mark.parametrize("sym", [
    "2 2",            # no comma join
    "3,3",            # no negative part
    "-2,-2,3",        # two negative parts
    "(2,2),3,-2",     # non-sequence part
])
def test_reduce_montesinos_rejects_other_shapes(sym):
    with pytest.raises(NotMontesinosFormError):
        conway.reduce_montesinos(sym)


def test_reduce_montesinos_mixed_sign_part():
    node = Ram((Seq((2,)), Seq((2, -2)), Seq((-2,))))
    with pytest.raises(NotMontesinosFormError):
        conway.reduce_montesinos(node)


def test_reduce_montesinos_needs_concrete_parameters():
    with pytest.raises(MissingParameterError):
        conway.reduce_montesinos("p,3,-2")
    r = conway.reduce_montesinos(substitute(parse("p,3,-2"), {"p": 5}))
    assert r == conway.ReducedSymbol((5, 3), 2)
