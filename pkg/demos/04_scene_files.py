"""
Scene files
===========

Everything above can be written as a small text file and run with the
``heisgeo`` command. Here we build a scene in memory, run its tasks through
the same code the command uses, and export a mesh.
"""

import os
import tempfile

from heisgeo import checks
from heisgeo.cli import main
from heisgeo.dsl import parse_expr, parse_scene, to_source
from heisgeo.surfaces import export_mesh

SCENE = """
# a helix of radius 2 and a circular cross-section of radius 0.5
param R = 2
param rho = 0.5
curve gamma : x = R*sin(s/R) ; y = -R*cos(s/R) ; z = (1 - R)*s ; domain = [0, 2*pi] ; closed = false
profile circle : f = rho*sin(t/rho) ; g = rho*cos(t/rho) ; h = 0 ; domain = [0, 2*pi*rho] ; closed = true
surface T : tube(gamma, circle)
task curve-info(gamma, expect=2*pi)
task p-mean-curvature(circle, expect=-1/rho)
task area(T, tol=1e-8)
task ab-lemma(T, tol=1e-12)
"""

# Expressions print back fully parenthesized; -t^2 means -(t^2).
print(to_source(parse_expr("-t^2 + R*sin(s/R)")))

scene = parse_scene(SCENE)
print("params:", scene.params, " surfaces:", list(scene.surfaces))
for task in scene.tasks:
    out = checks.run(task.op, scene.lookup(task.target), task.target,
                     task.options.get("tol", checks.DEFAULT_CHECK_TOL), task.options.get("expect"))
    print(f"{task.op:>17} {task.target:<7} {'PASS' if out.passed else 'FAIL'}  value={out.values.get('value', out.values.get('length'))}")

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "helix.obj")
    export_mesh(scene.surfaces["T"].surface, path, grid=(48, 24), fmt="obj")
    print("wrote", sum(1 for _ in open(path)), "lines of OBJ")

    # The command line runs the same scene; bundled scenes can be named directly.
    scene_path = os.path.join(tmp, "helix.scn")
    with open(scene_path, "w") as fh:
        fh.write(SCENE)
    print("exit status:", main(["run", scene_path]))
    print("exit status:", main(["volume", "torus.scn"]))
