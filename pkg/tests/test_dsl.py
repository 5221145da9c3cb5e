import math
import os
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from heisgeo.dsl import (
    BinOp,
    Call,
    Name,
    Neg,
    Num,
    eval_jet,
    load_scene,
    parse_expr,
    parse_scene,
    to_source,
    tokenize,
)
from heisgeo.dsl.expr import MAX_NESTING
from heisgeo.errors import (
    DomainError,
    DslError,
    DslSyntaxError,
    HeisgeoError,
    SceneDomainError,
    UnboundIdentifier,
    UnknownCharacter,
    UnresolvedReference,
)
from heisgeo.numerics import Jet

SCENES = os.path.join(os.path.dirname(__file__), "..", "src", "heisgeo", "scenes")

# -- tokens and expressions ----------------------------------------------


def test_tokenize_examples():
    toks = tokenize("sin(2*t)")
    assert [(t.kind, t.text) for t in toks[:-1]] == [
        ("ident", "sin"), ("op", "("), ("num", "2"), ("op", "*"), ("ident", "t"), ("op", ")")]
    assert tokenize("1.5e-3")[0].value == 0.0015
    with pytest.raises(UnknownCharacter) as exc:
        tokenize("2 @ 3")
    assert exc.value.col == 3


def test_parse_examples():
    assert parse_expr("a*sin(t)") == BinOp("*", Name("a"), Call("sin", Name("t")))
    assert parse_expr("-t^2") == Neg(BinOp("^", Name("t"), Num(2.0)))
    assert parse_expr("2^-1") == BinOp("^", Num(2.0), Neg(Num(1.0)))
    assert parse_expr("2^3^2") == BinOp("^", Num(2.0), BinOp("^", Num(3.0), Num(2.0)))
    assert parse_expr("1-2-3") == BinOp("-", BinOp("-", Num(1.0), Num(2.0)), Num(3.0))
    with pytest.raises(DslSyntaxError, match="argument"):
        parse_expr("sin()")
    with pytest.raises(DslSyntaxError):
        parse_expr("sin(1, 2)")
    with pytest.raises(DslSyntaxError, match="unknown function"):
        parse_expr("foo(1)")
    with pytest.raises(DslSyntaxError):
        parse_expr("(1 + 2")


def test_eval_jet_examples():
    j = eval_jet(parse_expr("R*sin(s/R)"), math.pi, {"R": 2.0})
    assert j.v0 == pytest.approx(2.0) and j.v1 == pytest.approx(0.0, abs=1e-15)
    assert eval_jet(parse_expr("t"), 5.0).derivs == (5.0, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError, match="line 1, col 1"):
        eval_jet(parse_expr("log(t)"), 0.0)
    with pytest.raises(UnboundIdentifier):
        eval_jet(parse_expr("s*t"), 1.0)
    assert eval_jet(parse_expr("2*pi"), 1.0).v0 == pytest.approx(2 * math.pi)


def test_depth_limit():
    with pytest.raises(DslSyntaxError, match="deeper"):
        parse_expr("(" * 5000 + "1" + ")" * 5000)
    with pytest.raises(DslSyntaxError, match="deeper"):
        parse_expr("+".join(["1"] * 5000))
    k = MAX_NESTING - 1
    assert parse_expr("(" * k + "1" + ")" * k) == Num(1.0)
    parse_expr("sin(" * k + "t" + ")" * k)
    for src in ("sin(" * 500 + "1" + ")" * 500, "-" * 500 + "1", "2^" * 500 + "1"):
        with pytest.raises(DslSyntaxError):
            parse_expr(src)


NAMES = st.sampled_from(["a", "b", "R", "t", "s", "k2", "pi", "e", "x_1"])
FUNCS = st.sampled_from(["sin", "cos", "tan", "exp", "log", "sqrt", "abs"])
LEAF = st.one_of(st.floats(0, 1e6, allow_nan=False).map(Num), NAMES.map(Name))


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
        st.builds(Call, FUNCS, children),
    )


EXPRS = st.recursive(LEAF, _extend, max_leaves=24)


@settings(max_examples=300)
@given(EXPRS)
def test_round_trip(node):
    text = to_source(node)
    back = parse_expr(text)
    assert back == node
    assert to_source(back) == text


# Smooth expressions for the derivative check: denominators and logs are
# kept away from zero, exponentials see bounded arguments.
SMOOTH_LEAF = st.one_of(st.floats(-3, 3, allow_nan=False).map(lambda v: Num(abs(v))), st.just(Name("t")))


def _smooth(children):
    two = Num(2.0)
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from("+-*"), children, children),
        st.builds(lambda a, b: BinOp("/", a, BinOp("+", two, BinOp("*", b, b))), children, children),
        st.builds(lambda a, k: BinOp("^", a, Num(float(k))), children, st.integers(0, 3)),
        st.builds(Call, st.sampled_from(["sin", "cos"]), children),
        children.map(lambda a: Call("exp", Call("sin", a))),
        children.map(lambda a: Call("sqrt", BinOp("+", Num(1.0), BinOp("*", a, a)))),
        children.map(lambda a: Call("log", BinOp("+", two, Call("cos", a)))),
    )


SMOOTH = st.recursive(SMOOTH_LEAF, _smooth, max_leaves=10)


@settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow], deadline=None)
@given(SMOOTH, st.floats(-1.5, 1.5))
def test_jet_matches_finite_differences(node, x):
    node = parse_expr(to_source(node))
    j = eval_jet(node, x, var="t")
    assume(np.isfinite(j.derivs).all() and max(map(abs, j.derivs)) < 1e6)
    h = 1e-3

    def val(u):
        return eval_jet(node, u, var="t").v0

    # fourth-order central differences
    f = [val(x + k * h) for k in (-2, -1, 1, 2)]
    fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    scale = max(1.0, abs(j.v1), abs(j.v0))
    assert abs(j.v1 - fd) <= 1e-5 * scale


GRAMMAR_CHARS = st.sampled_from(list("0123456789.eE+-*/^(),;:=[] \n\t#stuxyzfgh") + [
    "sin", "param ", "curve ", "profile ", "surface ", "task ", "tube", "raw", "domain", "closed",
    "true", "false", "pi", "area", "@", "$", "é"])


@settings(max_examples=400, deadline=None)
@given(st.lists(GRAMMAR_CHARS, max_size=200).map("".join))
def test_fuzz_scene_never_panics(text):
    try:
        parse_scene(text)
    except HeisgeoError:
        pass


@settings(max_examples=400, deadline=None)
@given(st.text(max_size=300))
def test_fuzz_expr_never_panics(text):
    try:
        parse_expr(text)
    except DslError:
        pass


def test_fuzz_large_inputs():
    rng = np.random.default_rng(0)
    alphabet = np.array(list("0123456789.e+-*/^(),;:=[] \nstpicurveofl#"))
    for _ in range(4):
        text = "".join(rng.choice(alphabet, 64 * 1024))
        for fn in (parse_expr, parse_scene):
            try:
                fn(text)
            except DslError:
                pass
    text = "(" * (64 * 1024)
    with pytest.raises(DslSyntaxError):
        parse_expr(text)


# -- scenes ---------------------------------------------------------------


def test_bundled_torus_scene():
    scene = load_scene(os.path.join(SCENES, "torus.scn"))
    assert list(scene.surfaces) == ["torus"]
    assert [t.op for t in scene.tasks].count("volume") == 1


def test_empty_scene():
    scene = parse_scene("")
    assert not scene.tasks and not scene.surfaces and not scene.curves
    assert not parse_scene("# only a comment\n\n").tasks


def test_unresolved_reference():
    text = ("profile p : f = 0 ; g = cos(t) ; h = sin(t) ; domain = [0, 2*pi] ; closed = true\n"
            "surface S : tube(missing, p)\n")
    with pytest.raises(UnresolvedReference, match="missing"):
        parse_scene(text)


def test_scene_errors():
    with pytest.raises(SceneDomainError):
        parse_scene("profile p : f = t ; g = 0 ; h = 0 ; domain = [0, -1]\n")
    with pytest.raises(SceneDomainError, match="declared closed"):
        parse_scene("curve c : x = s ; y = 0 ; z = 0 ; domain = [0, 1] ; closed = true\n")
    with pytest.raises(SceneDomainError, match="declared open"):
        parse_scene("curve c : x = cos(s) ; y = sin(s) ; z = 0 ; domain = [0, 2*pi] ; closed = false\n")
    with pytest.raises(DslSyntaxError, match="mixes"):
        parse_scene("curve c : x = s ; y = u ; z = 0 ; domain = [0, 1]\n")
    with pytest.raises(UnboundIdentifier):
        parse_scene("profile p : f = s ; g = 0 ; h = 0 ; domain = [0, 1]\n")
    with pytest.raises(SceneDomainError, match="finite"):
        parse_scene("param a = 10^400\n")
    with pytest.raises(DomainError):
        parse_scene("param a = 1/0\n")
    with pytest.raises(DslSyntaxError, match="unknown task"):
        parse_scene("curve c : x = s ; y = 0 ; z = 0 ; domain = [0, 1]\ntask nope(c)\n")
    with pytest.raises(DslSyntaxError, match="reserved|name"):
        parse_scene("param pi = 3\n")


def test_scene_builds_objects():
    text = """
param R = 2
curve c : x = R*sin(s/R) ; y = -R*cos(s/R) ; z = (1 - R)*s ; domain = [0, 2*pi]
profile p : f = sin(t) ; g = cos(t) ; h = 0 ; domain = [0, 2*pi] ; closed = true
surface T : tube(c, p)
surface P : raw(x = s, y = 0.5*s + 1, z = t, domain = [0, 1] x [0, 2])
task area(P, tol=1e-9, expect=2*sqrt(1.25))
"""
    scene = parse_scene(text)
    assert scene.params == {"R": 2.0}
    assert scene.curves["c"].curve.domain == pytest.approx((0, 2 * math.pi))
    assert scene.surfaces["T"].surface.closed_t and not scene.surfaces["T"].surface.closed_s
    assert scene.tasks[0].options == {"tol": 1e-9, "expect": pytest.approx(2 * math.sqrt(1.25))}


def test_tube_reparametrizes_slow_curve():
    text = ("curve c : x = 2*s ; y = 0 ; z = 0 ; domain = [0, 1]\n"
            "profile p : f = 0 ; g = cos(t) ; h = sin(t) ; domain = [0, 2*pi] ; closed = true\n"
            "surface T : tube(c, p)\n")
    T = parse_scene(text).surfaces["T"].surface
    assert T.s_range == pytest.approx((0, 2))


@pytest.mark.parametrize("name", sorted(f for f in os.listdir(SCENES) if f.endswith(".scn")))
def test_bundled_scenes_parse(name):
    scene = load_scene(os.path.join(SCENES, name))
    assert scene.tasks
