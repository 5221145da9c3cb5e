"""Named checks and tasks shared by scene files and the command line.

Every entry point takes an object from a scene (curve, profile or
surface), a tolerance and an optional expected value, and returns an
:class:`Outcome`. Quadrature inside a check runs at ``min(tol, 1e-8)`` and
the comparison uses ``tol`` relative to the larger magnitude.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import curves as cv
from . import surfaces as sf
from . import volumes as vol
from .errors import UnknownObject
from .numerics import DEFAULT_TOL

DEFAULT_CHECK_TOL = 1e-6


@dataclass
class Outcome:
    op: str
    target: str
    passed: bool
    values: dict = field(default_factory=dict)
    note: str = ""


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _quad_tol(tol):
    return min(tol, DEFAULT_TOL)


def _kind(obj):
    if isinstance(obj, sf.TubeSurface):
        return "tube"
    if isinstance(obj, sf.ParametricSurface):
        return "surface"
    if isinstance(obj, cv.Curve):
        return "curve"
    if isinstance(obj, sf.ProfileTriple):
        return "profile"
    return type(obj).__name__


def _need(obj, op, *kinds):
    k = _kind(obj)
    if k not in kinds and not ("surface" in kinds and k == "tube"):
        raise TypeError(f"{op} needs a {' or '.join(kinds)}, got a {k}")


def _expect(outcome, value, expect, tol):
    outcome.values["value"] = value
    if expect is not None:
        outcome.values["expect"] = expect
        outcome.values["rel_diff"] = _rel(value, expect)
        outcome.passed = outcome.passed and outcome.values["rel_diff"] <= tol
    return outcome


# -- tasks ----------------------------------------------------------------


def task_area(obj, name, tol, expect=None):
    _need(obj, "area", "surface")
    q = sf.p_area(obj, tol=_quad_tol(tol))
    out = Outcome("area", name, True, {"err": q.err_estimate})
    return _expect(out, q.value, expect, tol)


def task_volume(obj, name, tol, expect=None):
    _need(obj, "volume", "surface")
    rep = vol.enclosed_volume(obj, tol=_quad_tol(tol))
    out = Outcome("volume", name, True, {"signed": rep.volume_signed, "err": rep.err_estimate})
    return _expect(out, rep.volume, expect, tol)


def curve_report(curve, samples=257):
    """Horizontal length, kappa/tau statistics, Frenet residual and Gauss degree."""
    reg = cv.is_horizontally_regular(curve, samples)
    if not reg.ok:
        raise cv.NotHorizontallyRegular(
            f"curve {curve.name!r} is not horizontally regular near u = {reg.worst_u:g} "
            f"(speed {reg.min_speed:.3g})")
    u = np.linspace(*curve.domain, samples)
    kappa = cv.p_curvature(curve, u)
    tau = cv.contact_normality(curve, u)
    values = {
        "length": cv.horizontal_length(curve),
        "kappa_min": float(kappa.min()), "kappa_mean": float(kappa.mean()), "kappa_max": float(kappa.max()),
        "tau_min": float(tau.min()), "tau_mean": float(tau.mean()), "tau_max": float(tau.max()),
    }
    unit = curve if cv.unit_speed_defect(curve) <= 1e-9 else cv.reparam_horizontal_arclength(curve)
    values["frenet_residual"] = cv.frenet_residual(unit, np.linspace(*unit.domain, samples))
    if curve.closed:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            deg = cv.gauss_degree(unit)
        values["gauss_degree"] = deg.value
    return values


def task_curve_info(obj, name, tol, expect=None, samples=257):
    _need(obj, "curve-info", "curve")
    values = curve_report(obj, samples)
    out = Outcome("curve-info", name, True, values)
    if expect is not None:
        out.values["expect"] = expect
        out.values["rel_diff"] = _rel(values["length"], expect)
        out.passed = out.values["rel_diff"] <= tol
    return out


def task_p_mean_curvature(obj, name, tol, expect=None, samples=257):
    _need(obj, "p-mean-curvature", "profile")
    H = sf.p_mean_curvature_tube(obj, np.linspace(0.0, obj.t0, samples))
    out = Outcome("p-mean-curvature", name, True,
                  {"H_min": float(H.min()), "H_max": float(H.max())})
    out.values["value"] = float(H.mean())
    if expect is not None:
        out.values["expect"] = expect
        out.values["max_diff"] = float(np.max(np.abs(H - expect)))
        out.passed = out.values["max_diff"] <= tol * max(1.0, abs(expect))
    return out


# -- checks -----------------------------------------------------------------


def _pappus(op, fn, obj, name, tol):
    _need(obj, op, "tube")
    chk = fn(obj.curve, obj.profile, tol=_quad_tol(tol))
    values = {"lhs": chk.lhs, "rhs": chk.rhs, "abs_diff": chk.abs_diff, "rel_diff": chk.rel_diff}
    if chk.mid is not None:
        values["mid"] = chk.mid
    values.update({f"hyp[{k}]": v for k, v in chk.hypothesis_report.items()})
    return Outcome(op, name, chk.passed(tol), values)


def check_pappus_volume(obj, name, tol, expect=None):
    return _pappus("pappus-volume", vol.pappus_volume_check, obj, name, tol)


def check_pappus_area_1(obj, name, tol, expect=None):
    return _pappus("pappus-area-1", vol.pappus_area_case1, obj, name, tol)


def check_pappus_area_2(obj, name, tol, expect=None):
    return _pappus("pappus-area-2", vol.pappus_area_case2, obj, name, tol)


def check_tube_formula_vs_divergence(obj, name, tol, expect=None):
    _need(obj, "theorem1-vs-divergence", "tube")
    q = _quad_tol(tol)
    formula = vol.tube_volume_formula(obj.curve, obj.profile, tol=q)
    div = vol.enclosed_volume(obj, tol=q, allow_open_s=not obj.closed_s)
    rel = _rel(formula.volume, div.volume)
    return Outcome("theorem1-vs-divergence", name, rel <= tol,
                   {"formula": formula.volume_signed, "divergence": div.volume_signed, "rel_diff": rel})


def _random_points(S, n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(*S.s_range, n), rng.uniform(*S.t_range, n)


def check_ab_lemma(obj, name, tol, expect=None, points=1000):
    _need(obj, "ab-lemma", "surface")
    s, t = _random_points(obj, points)
    a, b = sf.ab_coefficients(obj, s, t), sf.ab_via_cross(obj, s, t)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([a.A, a.B])))))
    diff = float(max(np.max(np.abs(a.A - b.A)), np.max(np.abs(a.B - b.B))))
    return Outcome("ab-lemma", name, diff <= tol * scale,
                   {"max_abs_diff": diff, "scale": scale, "rel_diff": diff / scale})


def check_tube_density(obj, name, tol, expect=None, points=1000):
    _need(obj, "tube-density", "tube")
    s, t = _random_points(obj, points)
    generic = sf.density(obj, s, t)
    q = obj.quantities(s, t)
    args = {k: q[k] for k in ("kappa", "tau", "f", "g", "df", "dg", "dh")}
    closed = sf.tube_density_closed_form(**args)
    exact = sf.tube_density_exact(**args)
    scale = max(1.0, float(np.max(generic)))
    diff = float(np.max(np.abs(generic - closed)))
    return Outcome("tube-density", name, diff <= tol * scale,
                   {"max_abs_diff": diff, "scale": scale, "rel_diff": diff / scale,
                    "exact_max_abs_diff": float(np.max(np.abs(generic - exact)))})


def check_isoperimetric(obj, name, tol, expect=None):
    _need(obj, "isoperimetric", "surface")
    rep = vol.isoperimetric_check(obj, tol=_quad_tol(tol))
    return Outcome("isoperimetric", name, rep.bound_ok,
                   {"V": rep.V, "A": rep.A, "sup_radius": rep.sup_radius,
                    "bound": 0.5 * rep.sup_radius * rep.A})


TASKS = {
    "area": task_area,
    "volume": task_volume,
    "curve-info": task_curve_info,
    "p-mean-curvature": task_p_mean_curvature,
}

CHECKS = {
    "pappus-volume": check_pappus_volume,
    "pappus-area-1": check_pappus_area_1,
    "pappus-area-2": check_pappus_area_2,
    "theorem1-vs-divergence": check_tube_formula_vs_divergence,
    "ab-lemma": check_ab_lemma,
    "tube-density": check_tube_density,
    "isoperimetric": check_isoperimetric,
}

OPERATIONS = {**TASKS, **CHECKS}

# which objects each check applies to when a whole scene is verified
APPLIES = {
    "pappus-volume": ("tube",),
    "pappus-area-1": ("tube",),
    "pappus-area-2": ("tube",),
    "theorem1-vs-divergence": ("tube",),
    "ab-lemma": ("tube", "surface"),
    "tube-density": ("tube",),
    "isoperimetric": ("tube", "surface"),
}


def applies(check, obj):
    k = _kind(obj)
    if k not in APPLIES[check]:
        return False
    if check == "isoperimetric":
        return obj.closed_s and obj.closed_t
    if check in ("pappus-volume", "theorem1-vs-divergence"):
        return obj.closed_t
    return True


def run(op, obj, name, tol=DEFAULT_CHECK_TOL, expect=None):
    if op not in OPERATIONS:
        raise KeyError(f"unknown operation {op!r} (known: {', '.join(sorted(OPERATIONS))})")
    return OPERATIONS[op](obj, name, tol, expect)


__all__ = ["UnknownObject", "Outcome", "TASKS", "CHECKS", "OPERATIONS", "run", "applies", "curve_report"]
