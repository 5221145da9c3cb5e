"""Scene files: parameters, curves, profiles, surfaces and tasks.

One statement per line, ``#`` comments::

    param R = 2
    curve c : x = R*sin(s/R) ; y = -R*cos(s/R) ; z = (1-R)*s ; domain = [0, 2*pi] ; closed = false
    profile p : f = 2.3*sin(t) ; g = 0.8*cos(t) ; h = 0 ; domain = [0, 2*pi] ; closed = true
    surface tube1 : tube(c, p)
    surface plane : raw(x = s, y = 0.5*s, z = t, domain = [0, 1] x [0, 1])
    task area(tube1, tol=1e-6)

Curves use the variable ``s`` or ``u``, profiles ``t``, raw surfaces
``s`` and ``t``. Domain bounds and parameter values may be constant
expressions (``2*pi``). Declared closedness is checked numerically in both
directions. ``tube`` reparametrizes its curve by horizontal arc-length if
it is not already unit speed. Raw surfaces accept optional
``closed_s``/``closed_t`` flags. Task names may contain hyphens, and
tasks take keyword arguments ``tol`` and ``expect`` (an expected value).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..checks import OPERATIONS
from ..curves import CLOSED_TOL, Curve, reparam_horizontal_arclength, unit_speed_defect
from ..errors import (
    DomainError,
    DslSyntaxError,
    HeisgeoError,
    SceneDomainError,
    UnboundIdentifier,
    UnresolvedReference,
)
from ..surfaces import ParametricSurface, ProfileTriple, make_tube
from .expr import CONSTANTS, FUNCTIONS, TokenStream, evaluate, free_names, parse_stream
from .lexer import EOF, IDENT, NEWLINE, NUM, OP, tokenize

TASK_KEYS = ("tol", "expect")
RESERVED = {"s", "t", "u", "x", "true", "false", "tube", "raw"} | set(CONSTANTS) | set(FUNCTIONS)


@dataclass(frozen=True)
class CurveDef:
    name: str
    exprs: tuple
    var: str
    domain: tuple
    closed: bool
    curve: Curve
    line: int


@dataclass(frozen=True)
class ProfileDef:
    name: str
    exprs: tuple
    domain: tuple
    closed: bool
    profile: ProfileTriple
    line: int


@dataclass(frozen=True)
class SurfaceDef:
    name: str
    kind: str  # "tube" or "raw"
    refs: tuple
    exprs: tuple
    surface: ParametricSurface
    line: int


@dataclass(frozen=True)
class Task:
    op: str
    target: str
    options: dict
    line: int


@dataclass
class Scene:
    params: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    surfaces: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    def lookup(self, name):
        """The curve, profile or surface object called ``name``."""
        for table, attr in ((self.surfaces, "surface"), (self.curves, "curve"), (self.profiles, "profile")):
            if name in table:
                return getattr(table[name], attr)
        raise UnresolvedReference(f"no object named {name!r} in scene")


class _SceneParser:
    def __init__(self, text):
        self.ts = TokenStream(tokenize(text))
        self.scene = Scene()

    # -- helpers ------------------------------------------------------

    def skip_newlines(self):
        while self.ts.accept(NEWLINE):
            pass

    def end_statement(self):
        if not self.ts.at(EOF):
            self.ts.expect(NEWLINE, what="end of line")

    def ident(self, what="a name"):
        return self.ts.expect(IDENT, what=what)

    def new_name(self, tok):
        if tok.text in RESERVED:
            raise DslSyntaxError(f"{tok.text!r} is reserved and cannot be defined", tok.line, tok.col)
        s = self.scene
        if tok.text in s.params or tok.text in s.curves or tok.text in s.profiles or tok.text in s.surfaces:
            raise DslSyntaxError(f"name {tok.text!r} is already defined", tok.line, tok.col)

    def constant(self):
        """A constant expression over numbers, pi, e and earlier params."""
        start = self.ts.peek()
        node = parse_stream(self.ts)
        for name, n in free_names(node).items():
            if name not in self.scene.params:
                raise UnboundIdentifier(f"unbound identifier {name!r} in a constant", n.line, n.col)
        with np.errstate(all="ignore"):
            value = float(evaluate(node, self.scene.params))
        if not math.isfinite(value):
            raise SceneDomainError("constant is not finite", start.line, start.col)
        return value

    def expression(self, allowed, context):
        node = parse_stream(self.ts)
        used = set()
        for name, n in free_names(node).items():
            if name in self.scene.params:
                continue
            if name not in allowed:
                raise UnboundIdentifier(
                    f"unbound identifier {name!r} in {context} (allowed variables: {', '.join(sorted(allowed))})",
                    n.line, n.col)
            used.add(name)
        return node, used

    def flag(self):
        tok = self.ident("true or false")
        if tok.text not in ("true", "false"):
            raise DslSyntaxError(f"expected true or false, found {tok.text!r}", tok.line, tok.col)
        return tok.text == "true"

    def interval(self):
        start = self.ts.expect(OP, "[")
        a = self.constant()
        self.ts.expect(OP, ",")
        b = self.constant()
        self.ts.expect(OP, "]")
        if not a < b:
            raise SceneDomainError(f"empty domain [{a:g}, {b:g}]", start.line, start.col)
        return a, b

    def fields(self, readers, sep, closer=None):
        """``key = value`` items separated by ``sep``; ``readers`` maps key -> reader."""
        out = {}
        while True:
            key = self.ident("a field name")
            if key.text not in readers:
                raise DslSyntaxError(f"unknown field {key.text!r} (expected one of {', '.join(readers)})",
                                     key.line, key.col)
            if key.text in out:
                raise DslSyntaxError(f"field {key.text!r} given twice", key.line, key.col)
            self.ts.expect(OP, "=")
            out[key.text] = (readers[key.text](), key)
            if not self.ts.accept(OP, sep):
                break
            if closer is None and (self.ts.at(NEWLINE) or self.ts.at(EOF)):
                break
        return out

    def require(self, got, keys, tok):
        missing = [k for k in keys if k not in got]
        if missing:
            raise DslSyntaxError(f"missing field(s) {', '.join(missing)}", tok.line, tok.col)

    # -- statements ---------------------------------------------------

    def parse(self):
        while True:
            self.skip_newlines()
            if self.ts.at(EOF):
                return self.scene
            tok = self.ident("a statement keyword")
            handler = getattr(self, f"stmt_{tok.text}", None)
            if handler is None:
                raise DslSyntaxError(
                    f"unknown statement {tok.text!r} (expected param, curve, profile, surface or task)",
                    tok.line, tok.col)
            handler(tok)
            self.end_statement()

    def stmt_param(self, kw):
        name = self.ident("a parameter name")
        self.new_name(name)
        self.ts.expect(OP, "=")
        self.scene.params[name.text] = self.constant()

    def stmt_curve(self, kw):
        name = self.ident("a curve name")
        self.new_name(name)
        self.ts.expect(OP, ":")
        allowed = {"s", "u"}
        expr = lambda: self.expression(allowed, f"curve {name.text}")  # noqa: E731
        got = self.fields({"x": expr, "y": expr, "z": expr, "domain": self.interval,
                           "closed": self.flag}, ";")
        self.require(got, ("x", "y", "z", "domain"), name)
        used = set().union(*(got[k][0][1] for k in "xyz"))
        if len(used) > 1:
            raise DslSyntaxError(f"curve {name.text!r} mixes variables {sorted(used)}; use one of s, u",
                                 name.line, name.col)
        var = used.pop() if used else "s"
        exprs = tuple(got[k][0][0] for k in "xyz")
        domain = got["domain"][0]
        closed = got["closed"][0] if "closed" in got else False
        curve = self._build_curve(name, exprs, var, domain, closed)
        self.scene.curves[name.text] = CurveDef(name.text, exprs, var, domain, closed, curve, name.line)

    def _one_var(self, exprs, var):
        params = self.scene.params

        def fn(j):
            env = dict(params)
            env[var] = j
            return tuple(evaluate(e, env) for e in exprs)

        return fn

    def _build_curve(self, name, exprs, var, domain, closed):
        fn = self._one_var(exprs, var)
        try:
            curve = Curve(fn, domain, False, name.text)
            gap = curve.closure_gap()
        except DomainError as exc:
            raise SceneDomainError(f"curve {name.text!r}: {exc}", name.line, name.col) from None
        if closed and gap > CLOSED_TOL:
            raise SceneDomainError(f"curve {name.text!r} declared closed but its ends differ by {gap:.3g}",
                                   name.line, name.col)
        if not closed and gap <= CLOSED_TOL:
            raise SceneDomainError(f"curve {name.text!r} declared open but it closes up (gap {gap:.3g})",
                                   name.line, name.col)
        return Curve(fn, domain, closed, name.text)

    def stmt_profile(self, kw):
        name = self.ident("a profile name")
        self.new_name(name)
        self.ts.expect(OP, ":")
        expr = lambda: self.expression({"t"}, f"profile {name.text}")  # noqa: E731
        got = self.fields({"f": expr, "g": expr, "h": expr, "domain": self.interval,
                           "closed": self.flag}, ";")
        self.require(got, ("f", "g", "h", "domain"), name)
        a, t0 = got["domain"][0]
        if a != 0.0:
            tok = got["domain"][1]
            raise SceneDomainError(f"profile domain must start at 0, got {a:g}", tok.line, tok.col)
        closed = got["closed"][0] if "closed" in got else False
        exprs = tuple(got[k][0][0] for k in "fgh")
        funcs = [self._one_var((e,), "t") for e in exprs]
        f, g, h = (lambda j, fn=fn: fn(j)[0] for fn in funcs)
        try:
            probe = ProfileTriple(f, g, h, t0, False, name.text)
            gap = probe.closure_gap()
        except DomainError as exc:
            raise SceneDomainError(f"profile {name.text!r}: {exc}", name.line, name.col) from None
        if closed and gap > CLOSED_TOL:
            raise SceneDomainError(f"profile {name.text!r} declared closed but its ends differ by {gap:.3g}",
                                   name.line, name.col)
        if not closed and gap <= CLOSED_TOL:
            raise SceneDomainError(f"profile {name.text!r} declared open but it closes up (gap {gap:.3g})",
                                   name.line, name.col)
        prof = ProfileTriple(f, g, h, t0, closed, name.text)
        self.scene.profiles[name.text] = ProfileDef(name.text, exprs, (0.0, t0), closed, prof, name.line)

    def stmt_surface(self, kw):
        name = self.ident("a surface name")
        self.new_name(name)
        self.ts.expect(OP, ":")
        kind = self.ident("tube or raw")
        if kind.text == "tube":
            self._tube(name)
        elif kind.text == "raw":
            self._raw(name)
        else:
            raise DslSyntaxError(f"expected tube(...) or raw(...), found {kind.text!r}", kind.line, kind.col)

    def _tube(self, name):
        self.ts.expect(OP, "(")
        cref = self.ident("a curve name")
        self.ts.expect(OP, ",")
        pref = self.ident("a profile name")
        self.ts.expect(OP, ")")
        if cref.text not in self.scene.curves:
            raise UnresolvedReference(f"undefined curve {cref.text!r}", cref.line, cref.col)
        if pref.text not in self.scene.profiles:
            raise UnresolvedReference(f"undefined profile {pref.text!r}", pref.line, pref.col)
        curve = self.scene.curves[cref.text].curve
        try:
            if unit_speed_defect(curve) > 1e-9:
                curve = reparam_horizontal_arclength(curve)
            surf = make_tube(curve, self.scene.profiles[pref.text].profile, name=name.text)
        except HeisgeoError as exc:
            raise SceneDomainError(f"surface {name.text!r}: {exc}", name.line, name.col) from None
        self.scene.surfaces[name.text] = SurfaceDef(name.text, "tube", (cref.text, pref.text), (), surf,
                                                    name.line)

    def rectangle(self):
        s_range = self.interval()
        tok = self.ident("'x' between the two intervals")
        if tok.text != "x":
            raise DslSyntaxError(f"expected 'x' between intervals, found {tok.text!r}", tok.line, tok.col)
        return s_range, self.interval()

    def _raw(self, name):
        self.ts.expect(OP, "(")
        expr = lambda: self.expression({"s", "t"}, f"surface {name.text}")  # noqa: E731
        got = self.fields({"x": expr, "y": expr, "z": expr, "domain": self.rectangle,
                           "closed_s": self.flag, "closed_t": self.flag}, ",", closer=")")
        self.ts.expect(OP, ")")
        self.require(got, ("x", "y", "z", "domain"), name)
        exprs = tuple(got[k][0][0] for k in "xyz")
        s_range, t_range = got["domain"][0]
        params = self.scene.params

        def fn(s, t):
            env = dict(params)
            env["s"], env["t"] = s, t
            return tuple(evaluate(e, env) for e in exprs)

        flags = [got[k][0] if k in got else False for k in ("closed_s", "closed_t")]
        surf = ParametricSurface.from_map(fn, s_range, t_range, *flags, name=name.text)
        try:
            gaps = surf.seam_gap()
        except DomainError as exc:
            raise SceneDomainError(f"surface {name.text!r}: {exc}", name.line, name.col) from None
        for which, declared, gap in zip("st", flags, gaps):
            if declared and gap > CLOSED_TOL:
                raise SceneDomainError(
                    f"surface {name.text!r} declared closed in {which} but the seam gap is {gap:.3g}",
                    name.line, name.col)
            if not declared and gap <= CLOSED_TOL:
                raise SceneDomainError(
                    f"surface {name.text!r} closes up in {which}; declare closed_{which} = true",
                    name.line, name.col)
        self.scene.surfaces[name.text] = SurfaceDef(name.text, "raw", (), exprs, surf, name.line)

    def stmt_task(self, kw):
        first = self.ident("a task name")
        parts = [first.text]
        while self.ts.accept(OP, "-"):
            nxt = self.ts.peek()
            if nxt.kind == NUM and nxt.text.isdigit():
                self.ts.next()
                parts.append(nxt.text)
            else:
                parts.append(self.ident("the rest of the task name").text)
        op = "-".join(parts)
        if op not in OPERATIONS:
            raise DslSyntaxError(f"unknown task {op!r} (known: {', '.join(sorted(OPERATIONS))})",
                                 first.line, first.col)
        self.ts.expect(OP, "(")
        target = self.ident("an object name")
        s = self.scene
        if not any(target.text in t for t in (s.curves, s.profiles, s.surfaces)):
            raise UnresolvedReference(f"task {op!r} refers to undefined object {target.text!r}",
                                      target.line, target.col)
        options = {}
        while self.ts.accept(OP, ","):
            key = self.ident("an option name")
            if key.text not in TASK_KEYS:
                raise DslSyntaxError(f"unknown task option {key.text!r} (expected tol or expect)",
                                     key.line, key.col)
            self.ts.expect(OP, "=")
            options[key.text] = self.constant()
        self.ts.expect(OP, ")")
        if "tol" in options and not options["tol"] > 0:
            raise SceneDomainError("task tolerance must be positive", first.line, first.col)
        s.tasks.append(Task(op, target.text, options, first.line))


def parse_scene(text):
    """Parse and resolve a scene; curves, profiles and surfaces are built eagerly."""
    return _SceneParser(text).parse()


def load_scene(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())


__all__ = ["Scene", "CurveDef", "ProfileDef", "SurfaceDef", "Task", "parse_scene", "load_scene"]
