"""Expression tree nodes.  All nodes are frozen and hashable so that
structural equality is plain ``==``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    """The independent variable ``x``."""


@dataclass(frozen=True)
class Const:
    """A named constant, ``pi`` or ``e``."""

    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Node", ...]


Node = Union[Num, Var, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": 3.141592653589793, "e": 2.718281828459045}
FUNCTIONS = {
    "exp": 1,
    "ln": 1,
    "sin": 1,
    "cos": 1,
    "abs": 1,
    "lnmu": 1,
    "min": 2,
    "max": 2,
}
KINKED = frozenset({"abs", "min", "max"})


def walk(node):
    """Yield every node of the tree, parents before children."""
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, Neg):
            stack.append(cur.operand)
        elif isinstance(cur, BinOp):
            stack.extend((cur.right, cur.left))
        elif isinstance(cur, Call):
            stack.extend(reversed(cur.args))


def depth(node) -> int:
    if isinstance(node, Neg):
        return 1 + depth(node.operand)
    if isinstance(node, BinOp):
        return 1 + max(depth(node.left), depth(node.right))
    if isinstance(node, Call):
        return 1 + max(depth(a) for a in node.args)
    return 1
