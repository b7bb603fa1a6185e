"""Display search: isolating a substructure on one side of the turnstile.

Display postulates are invertible, so the sequents reachable from a given one
form an undirected graph.  :func:`display_search` explores it breadth-first,
following the target occurrence through each step by way of the metavariable
that carries it, and so returns a shortest witness.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .checker import ProofTree
from .rules import (
    NoMatch, RuleSchema, display_postulates, locate, match_pattern, meta_paths, substitute,
)
from .syntax import Path, Sequent, Side, get_at, render, side_of

DEFAULT_DEPTH = 30


@dataclass(frozen=True)
class DisplayStep:
    rule: str
    direction: str  # "down" reads the schema premise-to-conclusion, "up" the reverse
    result: Sequent

    def __str__(self) -> str:
        return f"{self.rule} ({self.direction}): {render(self.result)}"


class SearchExhausted(Exception):
    def __init__(self, max_depth: int, explored: int):
        super().__init__(f"no display found within depth {max_depth} "
                         f"({explored} sequents explored)")
        self.max_depth = max_depth
        self.explored = explored


def _orientations(schema: RuleSchema):
    yield "down", schema.premises[0], schema.conclusion
    yield "up", schema.conclusion, schema.premises[0]


def _moves(s: Sequent, include_virtual: bool = True):
    for schema in display_postulates("intuitionistic"):
        if schema.virtual and not include_virtual:
            continue
        for direction, source, target in _orientations(schema):
            try:
                sub = match_pattern(source, s)
            except NoMatch:
                continue
            yield schema, direction, source, target, substitute(target, sub)


def applicable_postulates(s: Sequent, include_virtual: bool = True
                          ) -> list[tuple[str, str, Sequent]]:
    """Every display postulate applicable at the root of ``s``, with its result."""
    return [(schema.name, direction, result)
            for schema, direction, _, _, result in _moves(s, include_virtual)]


def _follow(source: Sequent, target: Sequent, path: Path) -> Path | None:
    """Where the occurrence at ``path`` lands after rewriting source to target."""
    kind, meta, rest = locate(source, path)
    if kind != "meta":
        return None
    for p, m in meta_paths(target):
        if m.name == meta.name:
            return p + rest
    return None


def display_search(s: Sequent, target: Path, max_depth: int = DEFAULT_DEPTH,
                   include_virtual: bool = True) -> list[DisplayStep]:
    """Shortest sequence of display postulates isolating the occurrence ``target``.

    Raises :class:`SearchExhausted` when no witness exists within ``max_depth``.
    """
    get_at(s, target)  # raises KeyError for a path outside the sequent
    if len(target) == 1:
        return []
    start = (s, target)
    parent: dict[tuple[Sequent, Path], tuple | None] = {start: None}
    queue = deque([(start, 0)])
    while queue:
        (seq, path), depth = queue.popleft()
        if depth >= max_depth:
            continue
        for schema, direction, source, tpat, result in _moves(seq, include_virtual):
            new_path = _follow(source, tpat, path)
            if new_path is None:
                continue
            state = (result, new_path)
            if state in parent:
                continue
            parent[state] = ((seq, path), DisplayStep(schema.name, direction, result))
            if len(new_path) == 1:
                steps = []
                cur = state
                while parent[cur] is not None:
                    prev, step = parent[cur]
                    steps.append(step)
                    cur = prev
                return steps[::-1]
            queue.append((state, depth + 1))
    raise SearchExhausted(max_depth, len(parent))


def follow_steps(s: Sequent, target: Path, steps: list[DisplayStep]
                 ) -> list[tuple[Sequent, Path]]:
    """The (sequent, target path) pairs visited by ``steps``, start included."""
    out = [(s, target)]
    for step in steps:
        seq, path = out[-1]
        for schema, direction, source, tpat, result in _moves(seq):
            if schema.name == step.rule and direction == step.direction and result == step.result:
                new_path = _follow(source, tpat, path)
                if new_path is None:
                    raise ValueError(f"step {step} destroys the target")
                out.append((result, new_path))
                break
        else:
            raise ValueError(f"step {step} does not apply to {render(seq)}")
    return out


def displayed_side(s: Sequent, target: Path, steps: list[DisplayStep]) -> Side:
    """Side on which the target ends up after ``steps``."""
    seq, path = follow_steps(s, target, steps)[-1]
    return side_of(seq, path)


def chain(top: ProofTree, steps: list[DisplayStep]) -> ProofTree:
    """Extend a derivation downward by the given display steps."""
    cur = top
    for step in steps:
        cur = ProofTree(step.rule, step.result, (cur,))
    return cur


def invert(start: Sequent, steps: list[DisplayStep]) -> list[DisplayStep]:
    """The steps that lead from the end of ``steps`` back to ``start``."""
    seqs = [start] + [st.result for st in steps]
    back = []
    for k in range(len(steps) - 1, -1, -1):
        st = steps[k]
        back.append(DisplayStep(st.rule, "up" if st.direction == "down" else "down",
                                seqs[k]))
    return back
