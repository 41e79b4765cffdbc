"""User-defined problems from arithmetic expression strings.

A problem file is JSON with variable bounds and one expression string
per objective/constraint in variables x1..xn, e.g.::

    {
      "name": "toy",
      "lower": [0, 0],
      "upper": [1, 1],
      "objectives": ["x1", "1 - x1 + 0.5 * x2"],
      "constraints": ["x1 + x2 - 0.2"]
    }

Constraints follow the g(x) >= 0 feasibility convention. Expressions
are parsed into a whitelisted AST (arithmetic, comparisons excluded)
and evaluated vectorized over numpy columns; sin/cos/tan/exp/log/sqrt/
abs and the constants pi/e are available. Missing Lipschitz constants
are estimated on load with the registry defaults.
"""

from __future__ import annotations

import ast
import json
from typing import Callable

import numpy as np

from .benchmarks import (
    LIPSCHITZ_SAFETY,
    LIPSCHITZ_SAMPLES,
    LIPSCHITZ_SEED,
    register_problem,
)
from .geometry import make_root
from .problems import (
    ProblemDefinition,
    estimate_constraint_lipschitz,
    estimate_lipschitz,
)

_FUNCTIONS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp,
    "log": np.log, "sqrt": np.sqrt, "abs": np.abs, "arctan": np.arctan,
}
_CONSTANTS = {"pi": np.pi, "e": np.e}
_BINOPS = {
    ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply,
    ast.Div: np.divide, ast.Pow: np.power, ast.Mod: np.mod,
}


def compile_expression(expr: str, n: int) -> Callable[[np.ndarray], np.ndarray]:
    """Compile one expression in x1..xn to a vectorized (N, n) -> (N,) call."""
    tree = ast.parse(expr, mode="eval")

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            value = float(node.value)
            return lambda X: value
        if isinstance(node, ast.Name):
            if node.id in _CONSTANTS:
                value = _CONSTANTS[node.id]
                return lambda X: value
            if node.id.startswith("x") and node.id[1:].isdigit():
                idx = int(node.id[1:]) - 1
                if 0 <= idx < n:
                    return lambda X: X[:, idx]
                raise ValueError(f"variable {node.id} out of range for n={n}")
            raise ValueError(f"unknown name {node.id!r} in expression")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            if isinstance(node.op, ast.USub):
                return lambda X: -inner(X)
            return inner
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op = _BINOPS[type(node.op)]
            left, right = build(node.left), build(node.right)
            return lambda X: op(left(X), right(X))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            if node.func.id not in _FUNCTIONS or node.keywords or len(node.args) != 1:
                raise ValueError(f"unsupported call {ast.dump(node)}")
            fn = _FUNCTIONS[node.func.id]
            arg = build(node.args[0])
            return lambda X: fn(arg(X))
        raise ValueError(f"unsupported syntax in expression: {ast.dump(node)}")

    fn = build(tree)

    def evaluate(X):
        return np.broadcast_to(fn(np.atleast_2d(X)), (np.atleast_2d(X).shape[0],)).astype(float)

    return evaluate


def _stacked(fns):
    def evaluate(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.stack([f(X) for f in fns], axis=1)
    return evaluate


def problem_from_spec(spec: dict) -> ProblemDefinition:
    """Build a ProblemDefinition from a parsed problem-file dict."""
    name = spec.get("name", "user-problem")
    lower = np.asarray(spec["lower"], dtype=float)
    upper = np.asarray(spec["upper"], dtype=float)
    n = len(lower)
    obj_exprs = spec["objectives"]
    con_exprs = spec.get("constraints", [])
    if len(obj_exprs) < 2:
        raise ValueError("problem file needs at least two objectives")
    objectives = _stacked([compile_expression(e, n) for e in obj_exprs])
    constraints = _stacked([compile_expression(e, n) for e in con_exprs]) if con_exprs else None

    prob = ProblemDefinition(
        name=name, n=n, m=len(obj_exprs), p=len(con_exprs),
        domain=make_root(lower, upper), objectives=objectives,
        constraints=constraints,
    )
    lf = spec.get("lipschitz_f")
    lg = spec.get("lipschitz_g")
    if lf is None:
        lf = estimate_lipschitz(prob, LIPSCHITZ_SAMPLES, LIPSCHITZ_SAFETY, LIPSCHITZ_SEED)
    if lg is None and prob.p:
        lg = estimate_constraint_lipschitz(prob, LIPSCHITZ_SAMPLES, LIPSCHITZ_SAFETY,
                                           LIPSCHITZ_SEED)
    return prob.with_lipschitz(lf, lg)


def load_problem_file(path, register: bool = True) -> ProblemDefinition:
    """Load a JSON problem file; optionally register it by name."""
    with open(path) as fh:
        spec = json.load(fh)
    prob = problem_from_spec(spec)
    if register:
        register_problem(prob.name, lambda: prob)
    return prob
