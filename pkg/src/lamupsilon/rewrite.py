"""The eight rewriting rules, redex search, normalization and classifiers.

Rule left-hand sides are mutually exclusive and inspect only a node and
its immediate children, which the normalizer exploits: after a rewrite,
outside the freshly created subtree only the parent's redex status can
have changed.  The engine is therefore an incremental pre-order scan that
is observationally identical to "rescan from the root, fire the first
enabled redex" (leftmost-outermost), but runs in roughly constant time
per step.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional

from .syntax import render_term
from .terms import (
    SHIFT,
    Abs,
    App,
    Closure,
    Index,
    Lift,
    Position,
    Slash,
    Term,
    children,
    is_pure,
    size,
    with_child,
)


class RuleKind(Enum):
    """The eight rewriting rules."""

    BETA = "Beta"  # (\a) b        -> a[b/]
    APP = "App"  # (a b)[s]      -> a[s] (b[s])
    LAMBDA = "Lambda"  # (\a)[s]       -> \(a[lift(s)])
    FVAR = "FVar"  # 0[a/]         -> a
    RVAR = "RVar"  # (n+1)[a/]     -> n
    FVARLIFT = "FVarLift"  # 0[lift(s)]    -> 0
    RVARLIFT = "RVarLift"  # (n+1)[lift(s)]-> n[s][shift]
    VARSHIFT = "VarShift"  # n[shift]      -> n+1


ALL_RULES = frozenset(RuleKind)
UPSILON_RULES = frozenset(RuleKind) - {RuleKind.BETA}


@dataclass(frozen=True)
class Redex:
    position: Position
    kind: RuleKind


@dataclass(frozen=True)
class TraceStep:
    rule: RuleKind
    position: Position
    result: Optional[Term]  # whole term after the step; None if not recorded


@dataclass(frozen=True)
class Trace:
    steps: tuple[TraceStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def rules(self) -> tuple[RuleKind, ...]:
        return tuple(step.rule for step in self.steps)


class InvalidRedex(ValueError):
    """The claimed rule does not match at the claimed position."""


class BudgetExceeded(Exception):
    """Normalization ran out of steps; carries the partial result."""

    def __init__(self, term: Term, trace: Trace):
        self.term = term
        self.trace = trace
        super().__init__(f"step budget exhausted after {len(trace)} steps")


def match_redex(term: Term) -> Optional[RuleKind]:
    """The unique rule matching at the root, if any."""
    if isinstance(term, App):
        return RuleKind.BETA if isinstance(term.fun, Abs) else None
    if isinstance(term, Closure):
        body, sub = term.body, term.sub
        if isinstance(body, App):
            return RuleKind.APP
        if isinstance(body, Abs):
            return RuleKind.LAMBDA
        if isinstance(body, Index):
            if isinstance(sub, Slash):
                return RuleKind.FVAR if body.n == 0 else RuleKind.RVAR
            if isinstance(sub, Lift):
                return RuleKind.FVARLIFT if body.n == 0 else RuleKind.RVARLIFT
            return RuleKind.VARSHIFT
    return None


def rewrite_root(term: Term, kind: RuleKind) -> Term:
    """Right-hand side for a redex of ``kind`` at the root."""
    if match_redex(term) is not kind:
        raise InvalidRedex(f"{kind.value} does not match at the root")
    if kind is RuleKind.BETA:
        return Closure(term.fun.body, Slash(term.arg))
    if kind is RuleKind.APP:
        body, sub = term.body, term.sub
        return App(Closure(body.fun, sub), Closure(body.arg, sub))
    if kind is RuleKind.LAMBDA:
        return Abs(Closure(term.body.body, Lift(term.sub)))
    if kind is RuleKind.FVAR:
        return term.sub.term
    if kind is RuleKind.RVAR:
        return Index(term.body.n - 1)
    if kind is RuleKind.FVARLIFT:
        return Index(0)
    if kind is RuleKind.RVARLIFT:
        return Closure(Closure(Index(term.body.n - 1), term.sub.sub), SHIFT)
    return Index(term.body.n + 1)  # VarShift


def apply_at(term: Term, redex: Redex) -> Term:
    """Apply ``redex`` to ``term``; raises InvalidRedex on mismatch."""
    spine: list[tuple[Term, int]] = []
    node = term
    for ordinal in redex.position:
        kids = children(node)
        if not 0 <= ordinal < len(kids):
            raise InvalidRedex(f"no node at position {redex.position!r}")
        spine.append((node, ordinal))
        node = kids[ordinal]
    new = rewrite_root(node, redex.kind)
    for parent, ordinal in reversed(spine):
        new = with_child(parent, ordinal, new)
    return new


def find_redexes(term: Term, kinds: Optional[Iterable[RuleKind]] = None) -> list[Redex]:
    """All redexes whose kind is in ``kinds`` (default: all), in pre-order."""
    wanted = ALL_RULES if kinds is None else frozenset(kinds)
    found: list[Redex] = []
    stack: list[tuple[Position, object]] = [((), term)]
    while stack:
        pos, node = stack.pop()
        kind = match_redex(node) if isinstance(node, (App, Closure)) else None
        if kind is not None and kind in wanted:
            found.append(Redex(pos, kind))
        kids = children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((pos + (i,), kids[i]))
    return found


def count_redexes(term: Term, kind: RuleKind) -> int:
    """Number of positions where ``kind`` matches."""
    total = 0
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, (App, Closure)):
            if match_redex(node) is kind:
                total += 1
        stack.extend(children(node))
    return total


def count_all_redexes(term: Term) -> dict[RuleKind, int]:
    """Counts for all eight rules in a single traversal."""
    counts = dict.fromkeys(RuleKind, 0)
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, (App, Closure)):
            kind = match_redex(node)
            if kind is not None:
                counts[kind] += 1
        stack.extend(children(node))
    return counts


def _snapshot(frames: list[list], focus: Term) -> Term:
    """Current whole term; repairs stale frames in place."""
    cur = focus
    for frame in reversed(frames):
        node, ordinal = frame
        if children(node)[ordinal] is not cur:
            node = with_child(node, ordinal, cur)
            frame[0] = node
        cur = node
    return cur


def normalize(
    term: Term,
    strategy: str = "full",
    max_steps: Optional[int] = None,
    keep_terms: bool = True,
) -> tuple[Term, Trace]:
    """Repeatedly fire the leftmost-outermost enabled redex.

    ``strategy`` is ``"full"`` (all eight rules) or ``"upsilon"`` (all but
    Beta; always terminates with a pure term).  The leftmost-outermost
    redex is the pre-order-first one.  Raises BudgetExceeded once
    ``max_steps`` rewrites have happened and an enabled redex remains.
    With ``keep_terms=False`` the trace omits the per-step result terms.
    """
    if strategy == "full":
        enabled = ALL_RULES
    elif strategy == "upsilon":
        enabled = UPSILON_RULES
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if max_steps is not None and max_steps < 0:
        raise ValueError("max_steps must be non-negative")

    steps: list[TraceStep] = []
    frames: list[list] = []  # [node, ordinal] path from the root to the focus
    focus: object = term
    testing = True  # does the focus still need a redex test?
    resume = 0  # first child to visit after a (failed) test
    while True:
        if testing:
            kind = match_redex(focus) if isinstance(focus, (App, Closure)) else None
            if kind is not None and kind in enabled:
                if max_steps is not None and len(steps) >= max_steps:
                    raise BudgetExceeded(_snapshot(frames, focus), Trace(tuple(steps)))
                position = tuple(frame[1] for frame in frames)
                focus = rewrite_root(focus, kind)
                after = _snapshot(frames, focus) if keep_terms else None
                steps.append(TraceStep(kind, position, after))
                if frames:
                    # Only the parent's redex status can have changed
                    # outside the new subtree: re-test it, then dive back.
                    node, ordinal = frames.pop()
                    focus = with_child(node, ordinal, focus)
                    resume = ordinal
                else:
                    resume = 0
                continue
            kids = children(focus)
            if resume < len(kids):
                frames.append([focus, resume])
                focus = kids[resume]
                resume = 0
                continue
            testing = False
        else:
            if not frames:
                return focus, Trace(tuple(steps))
            node, ordinal = frames.pop()
            if children(node)[ordinal] is not focus:
                node = with_child(node, ordinal, focus)
            kids = children(node)
            if ordinal + 1 < len(kids):
                frames.append([node, ordinal + 1])
                focus = kids[ordinal + 1]
                resume = 0
                testing = True
            else:
                focus = node


def trace_to_json(trace: Trace) -> list[dict]:
    """Wire format: ``[{"rule": ..., "position": [...], "term": ...}]``."""
    out = []
    for step in trace.steps:
        if step.result is None:
            raise ValueError("trace was recorded without result terms")
        out.append(
            {
                "rule": step.rule.value,
                "position": list(step.position),
                "term": render_term(step.result),
            }
        )
    return out


def has_nested_substitution(term: Term) -> bool:
    """True iff some slash payload in ``term`` is impure.

    Non-Beta steps never create a slash node, so every slash payload of a
    strict substitution form (reached from ``a[b/]`` with pure ``a, b``)
    stays pure: a nested substitution certifies lazy form.  Checking every
    slash, including those wrapped in lifts, is exactly the complement of
    the restricted grammar behind ``solve_restricted_series``.
    """
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Slash) and not is_pure(node.term):
            return True
        stack.extend(children(node))
    return False


def unsuspended_constructors(term: Term) -> int:
    """Constructors reachable without entering any closure's substitution."""
    total = 0
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Index):
            total += node.n + 1
        elif isinstance(node, Abs):
            total += 1
            stack.append(node.body)
        elif isinstance(node, App):
            total += 1
            stack.append(node.fun)
            stack.append(node.arg)
        elif isinstance(node, Closure):
            total += 1
            stack.append(node.body)  # node.sub is suspended: skip it
        else:
            raise TypeError(f"not a term: {node!r}")
    return total


@lru_cache(maxsize=None)
def _pure_terms(n: int) -> tuple[Term, ...]:
    """All pure terms of size exactly ``n`` (binders, applications, indices)."""
    if n <= 0:
        return ()
    out: list[Term] = [Index(n - 1)]
    out.extend(Abs(a) for a in _pure_terms(n - 1))
    for i in range(1, n - 1):
        for a in _pure_terms(i):
            for b in _pure_terms(n - 1 - i):
                out.append(App(a, b))
    return tuple(out)


def _is_source(term: Term) -> bool:
    return (
        isinstance(term, Closure)
        and isinstance(term.sub, Slash)
        and is_pure(term.body)
        and is_pure(term.sub.term)
    )


def is_strict_form_bounded(
    term: Term,
    max_source_size: Optional[int] = None,
    max_steps: Optional[int] = None,
) -> str:
    """Bounded oracle for strict substitution form: ``"yes"`` or ``"unknown"``.

    A term is in strict substitution form when it is reachable from some
    ``a[b/]`` with ``a``, ``b`` pure using non-Beta steps only (under any
    redex choice).  The search enumerates all such sources up to
    ``max_source_size`` (default ``size(term) + 4``) and explores every
    reduction order for up to ``max_steps`` (default ``4*size(term) + 16``)
    steps.  It never answers ``"no"``: exhausting the bounded search only
    yields ``"unknown"``.
    """
    n = size(term)
    if max_source_size is None:
        max_source_size = n + 4
    if max_steps is None:
        max_steps = 4 * n + 16
    if _is_source(term):
        return "yes"
    for body_size in range(1, max_source_size - 2):
        for slash_size in range(1, max_source_size - 1 - body_size):
            for a in _pure_terms(body_size):
                for b in _pure_terms(slash_size):
                    if _reaches(Closure(a, Slash(b)), term, max_steps):
                        return "yes"
    return "unknown"


def _reaches(source: Term, target: Term, max_steps: int) -> bool:
    """Breadth-first non-Beta reachability, all redex orders."""
    if source == target:
        return True
    seen = {source}
    frontier = [source]
    for _ in range(max_steps):
        if not frontier:
            break
        next_frontier = []
        for cur in frontier:
            for redex in find_redexes(cur, UPSILON_RULES):
                succ = apply_at(cur, redex)
                if succ == target:
                    return True
                if succ not in seen:
                    seen.add(succ)
                    next_frontier.append(succ)
        frontier = next_frontier
    return False
