"""Term algebra of the lambda-upsilon calculus.

Terms are de Bruijn indexed and carry explicit substitutions: a closure
``t[s]`` pairs a term with a pending substitution built from slash
(``a/``, substitute a term for index 0), lift (``⇑(s)``, protect a
substitution under a binder) and shift (``↑``, increment free indices).

All values are immutable with structural equality, so they are safe to
share between workers and to use as dictionary keys.  The size of a term
counts its constructors, with the index ``n`` weighing ``n + 1`` (indices
are conceptually unary numerals, although they are stored as machine
integers).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Index:
    """De Bruijn index; ``n`` must be non-negative."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("de Bruijn indices must be non-negative")


@dataclass(frozen=True)
class Abs:
    """Abstraction (binder)."""

    body: "Term"


@dataclass(frozen=True)
class App:
    """Application, left-associative in the concrete syntax."""

    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Closure:
    """A term with a suspended substitution: ``body[sub]``."""

    body: "Term"
    sub: "Subst"


@dataclass(frozen=True)
class Slash:
    """Substitution of ``term`` for index 0."""

    term: "Term"


@dataclass(frozen=True)
class Lift:
    """Substitution adjusted to pass under one binder."""

    sub: "Subst"


@dataclass(frozen=True)
class Shift:
    """Increment all free indices by one."""


SHIFT = Shift()

Term = Index | Abs | App | Closure
Subst = Slash | Lift | Shift
Node = Term | Subst

#: A position is the path of 0-based child ordinals from the root.
#: Child ordering: Abs -> [body]; App -> [fun, arg]; Closure -> [body, sub];
#: Slash -> [term]; Lift -> [sub]; Index/Shift -> [].
Position = tuple[int, ...]

_TERM_TYPES = (Index, Abs, App, Closure)
_SUBST_TYPES = (Slash, Lift, Shift)


def is_term(node: Node) -> bool:
    return isinstance(node, _TERM_TYPES)


def children(node: Node) -> tuple[Node, ...]:
    """Children of a node in canonical order."""
    if isinstance(node, (Index, Shift)):
        return ()
    if isinstance(node, Abs):
        return (node.body,)
    if isinstance(node, App):
        return (node.fun, node.arg)
    if isinstance(node, Closure):
        return (node.body, node.sub)
    if isinstance(node, Slash):
        return (node.term,)
    if isinstance(node, Lift):
        return (node.sub,)
    raise TypeError(f"not a lambda-upsilon node: {node!r}")


def with_child(node: Node, ordinal: int, child: Node) -> Node:
    """Copy of ``node`` with the child at ``ordinal`` replaced."""
    if isinstance(node, Abs) and ordinal == 0:
        return Abs(child)
    if isinstance(node, App):
        if ordinal == 0:
            return App(child, node.arg)
        if ordinal == 1:
            return App(node.fun, child)
    if isinstance(node, Closure):
        if ordinal == 0:
            return Closure(child, node.sub)
        if ordinal == 1:
            return Closure(node.body, child)
    if isinstance(node, Slash) and ordinal == 0:
        return Slash(child)
    if isinstance(node, Lift) and ordinal == 0:
        return Lift(child)
    raise ValueError(f"node {type(node).__name__} has no child {ordinal}")


def size(term: Term) -> int:
    """Constructor count of a term; ``size(Index(n)) == n + 1``."""
    total = 0
    stack: list[Node] = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Index):
            total += node.n + 1
        elif isinstance(node, Shift):
            total += 1
        else:
            total += 1
            stack.extend(children(node))
    return total


def size_sub(sub: Subst) -> int:
    """Constructor count of a substitution; ``size_sub(SHIFT) == 1``."""
    return size(sub)  # same traversal; the size rules coincide


def is_pure(term: Term) -> bool:
    """True iff the term contains no closure anywhere."""
    stack: list[Node] = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Closure):
            return False
        stack.extend(children(node))
    return True


def iter_subterms(term: Term):
    """Yield ``(position, node)`` pairs in pre-order.

    Pre-order means node before children, fun before arg, body before sub;
    substitution nodes are included.
    """
    stack: list[tuple[Position, Node]] = [((), term)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        kids = children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((pos + (i,), kids[i]))


def subterm_at(term: Term, position: Position) -> Node:
    """Node at ``position``; raises ValueError on an invalid path."""
    node: Node = term
    for depth, ordinal in enumerate(position):
        kids = children(node)
        if not 0 <= ordinal < len(kids):
            raise ValueError(
                f"invalid position {position!r}: no child {ordinal} at depth {depth}"
            )
        node = kids[ordinal]
    return node


def replace_at(term: Term, position: Position, replacement: Node) -> Term:
    """Copy of ``term`` with the node at ``position`` replaced."""
    spine: list[Node] = []
    node: Node = term
    for depth, ordinal in enumerate(position):
        kids = children(node)
        if not 0 <= ordinal < len(kids):
            raise ValueError(
                f"invalid position {position!r}: no child {ordinal} at depth {depth}"
            )
        spine.append(node)
        node = kids[ordinal]
    new = replacement
    for ordinal, parent in zip(reversed(position), reversed(spine)):
        new = with_child(parent, ordinal, new)
    return new
