"""Scene language: expressions over one or two variables, and scene files."""

from .expr import Call, BinOp, Name, Neg, Num, eval_jet, evaluate, free_names, parse_expr, to_source
from .lexer import Token, tokenize
from .scene import CurveDef, ProfileDef, Scene, SurfaceDef, Task, load_scene, parse_scene

__all__ = [
    "tokenize", "Token", "parse_expr", "to_source", "eval_jet", "evaluate", "free_names",
    "Num", "Name", "Neg", "BinOp", "Call",
    "parse_scene", "load_scene", "Scene", "CurveDef", "ProfileDef", "SurfaceDef", "Task",
]
