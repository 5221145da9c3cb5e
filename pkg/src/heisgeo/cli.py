"""Command-line front end.

    heisgeo <command> <scene-file> [object] [--tol X] [--samples N]
            [--grid NxM] [--format csv|obj] [--out PATH] [--json]

Commands: ``run`` (every task in the scene), ``curve-info``, ``area``,
``volume``, ``verify`` (a named check, default ``all``) and ``export``.
Output lines start with ``RESULT`` or ``CHECK``; failures print a single
``ERROR <kind>: <message>`` line on stderr. The exit status is 0 only if
every task or check passed (1 if one failed, 2 on an error).

A scene path that does not exist is looked up by file name among the
scenes bundled with the package.
"""

import argparse
import json
import os
import sys
from importlib import resources

from . import checks
from .dsl import load_scene
from .errors import HeisgeoError, HypothesisViolated
from .surfaces import export_mesh

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def bundled_scene_dir():
    return resources.files("heisgeo") / "scenes"


def resolve_scene(path):
    if os.path.exists(path):
        return path
    base = os.path.basename(path)
    for name in (base, base + ".scn"):
        candidate = bundled_scene_dir() / name
        if candidate.is_file():
            return str(candidate)
    raise FileNotFoundError(f"scene file not found: {path}")


def parse_grid(text):
    try:
        n, m = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x64, got {text!r}") from None
    if n < 2 or m < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per direction")
    return n, m


def _fmt(v):
    if isinstance(v, float) or hasattr(v, "dtype"):
        return repr(float(v))
    text = str(v)
    return repr(text) if any(c.isspace() for c in text) or not text else text


def _key(k):
    # keys stay single tokens so that lines split on whitespace
    return "".join(str(k).split())


class Printer:
    """Collects outcomes; prints text lines or one JSON document at the end."""

    def __init__(self, as_json, stream=None):
        self.as_json = as_json
        self.out = stream or sys.stdout
        self.records = []

    def result(self, name, value, err):
        self.records.append({"type": "result", "name": name, "value": float(value),
                             "err": None if err is None else float(err)})
        if not self.as_json:
            print(f"RESULT {name} {_fmt(value)} {'-' if err is None else _fmt(err)}", file=self.out)

    def check(self, outcome, status=None):
        status = status or ("PASS" if outcome.passed else "FAIL")
        values = {k: (float(v) if hasattr(v, "dtype") else v) for k, v in outcome.values.items()}
        self.records.append({"type": "check", "op": outcome.op, "target": outcome.target,
                             "status": status, "values": values, "note": outcome.note})
        if not self.as_json:
            fields = " ".join(f"{_key(k)}={_fmt(v)}" for k, v in outcome.values.items())
            note = f" note={outcome.note!r}" if outcome.note else ""
            print(f"CHECK {outcome.op} {outcome.target} {status} {fields}{note}".rstrip(), file=self.out)

    def finish(self, status):
        if self.as_json:
            json.dump({"exit": status, "records": self.records}, self.out, indent=2, default=str)
            self.out.write("\n")


def _objects(scene, name, table, kind):
    if name is not None:
        if name not in table:
            raise checks.UnknownObject(f"no {kind} named {name!r} in scene")
        return [name]
    if not table:
        raise checks.UnknownObject(f"scene has no {kind}")
    return list(table)


def cmd_run(args, scene, pr):
    ok = True
    if not scene.tasks:
        return ok
    for task in scene.tasks:
        tol = task.options.get("tol", args.tol)
        obj = scene.lookup(task.target)
        outcome = checks.run(task.op, obj, task.target, tol, task.options.get("expect"))
        pr.check(outcome)
        ok = ok and outcome.passed
    return ok


def cmd_curve_info(args, scene, pr):
    for name in _objects(scene, args.object, scene.curves, "curve"):
        values = checks.curve_report(scene.curves[name].curve, args.samples)
        for key, value in values.items():
            pr.result(f"{name}.{key}", value, None)
    return True


def cmd_area(args, scene, pr):
    for name in _objects(scene, args.object, scene.surfaces, "surface"):
        outcome = checks.task_area(scene.surfaces[name].surface, name, args.tol)
        pr.result(name, outcome.values["value"], outcome.values["err"])
    return True


def cmd_volume(args, scene, pr):
    for name in _objects(scene, args.object, scene.surfaces, "surface"):
        outcome = checks.task_volume(scene.surfaces[name].surface, name, args.tol)
        pr.result(name, outcome.values["signed"], outcome.values["err"])
    return True


def cmd_verify(args, scene, pr):
    names = list(checks.CHECKS) if args.check == "all" else [args.check]
    targets = _objects(scene, args.target, scene.surfaces, "surface")
    ok, ran = True, 0
    for check in names:
        for name in targets:
            obj = scene.surfaces[name].surface
            if args.check == "all" and not checks.applies(check, obj):
                continue
            try:
                outcome = checks.run(check, obj, name, args.tol)
            except HypothesisViolated as exc:
                outcome = checks.Outcome(check, name, False, {"which": exc.which, "residual": exc.residual},
                                         note=str(exc))
                if args.check == "all":
                    pr.check(outcome, "SKIP")
                    continue
                print(f"ERROR HypothesisViolated: {check} on {name}: {exc}", file=sys.stderr)
            except TypeError as exc:
                if args.check == "all":
                    continue
                raise checks.UnknownObject(str(exc)) from None
            pr.check(outcome)
            ran += 1
            ok = ok and outcome.passed
    if ran == 0:
        raise checks.UnknownObject(f"no surface in the scene admits check {args.check!r}")
    return ok


def cmd_export(args, scene, pr):
    names = _objects(scene, args.object, scene.surfaces, "surface")
    if args.out and len(names) > 1:
        raise checks.UnknownObject("--out needs a single surface; name one")
    for name in names:
        path = args.out or f"{name}.{args.format}"
        export_mesh(scene.surfaces[name].surface, path, grid=args.grid, fmt=args.format)
        n, m = args.grid
        pr.result(f"{name}.export", n * m, None)
    return True


COMMANDS = {
    "run": cmd_run,
    "curve-info": cmd_curve_info,
    "area": cmd_area,
    "volume": cmd_volume,
    "verify": cmd_verify,
    "export": cmd_export,
}


def build_parser():
    p = argparse.ArgumentParser(prog="heisgeo", description="Geometry in the Heisenberg group H1.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("scene", help="scene file (bundled scenes can be named by file name)")
        sp.add_argument("--tol", type=float, default=checks.DEFAULT_CHECK_TOL,
                        help="comparison tolerance (quadrature runs at min(tol, 1e-8))")
        sp.add_argument("--json", action="store_true", help="print one JSON document instead of lines")
        return sp

    common(sub.add_parser("run", help="run every task in the scene"))
    sp = common(sub.add_parser("curve-info", help="length, kappa, tau, Frenet residual, Gauss degree"))
    sp.add_argument("object", nargs="?")
    sp.add_argument("--samples", type=int, default=257)
    for name, text in (("area", "p-area of a surface"), ("volume", "enclosed volume of a closed surface")):
        common(sub.add_parser(name, help=text)).add_argument("object", nargs="?")
    sp = common(sub.add_parser("verify", help="run a named check"))
    sp.add_argument("check", nargs="?", default="all", choices=list(checks.CHECKS) + ["all"])
    sp.add_argument("--target", help="surface to check (default: every applicable surface)")
    sp = common(sub.add_parser("export", help="write a sampled mesh as CSV or OBJ"))
    sp.add_argument("object", nargs="?")
    sp.add_argument("--grid", type=parse_grid, default=(64, 64))
    sp.add_argument("--format", choices=("csv", "obj"), default="csv")
    sp.add_argument("--out")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0:
        print("ERROR ValueError: --tol must be positive", file=sys.stderr)
        return EXIT_ERROR
    pr = Printer(args.json)
    try:
        scene = load_scene(resolve_scene(args.scene))
        ok = COMMANDS[args.command](args, scene, pr)
    except (HeisgeoError, OSError, ValueError, KeyError) as exc:
        msg = str(exc).replace("\n", " ")
        if isinstance(exc, KeyError) and exc.args:
            msg = str(exc.args[0])
        print(f"ERROR {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_ERROR
    status = EXIT_OK if ok else EXIT_FAIL
    pr.finish(status)
    return status


if __name__ == "__main__":
    sys.exit(main())
