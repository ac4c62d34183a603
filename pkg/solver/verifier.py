from typing import Any, Dict, Iterable, Optional, Tuple

from graphs.digraph import Digraph, SelfCheckError, acyclic_after_deletion, is_acyclic


def verify_vertex_solution(d: Digraph, vertices: Iterable[int], k: Optional[int] = None) -> Dict[str, Any]:
    """
    Checks a candidate feedback vertex set:
    - every id names a vertex of d
    - at most k vertices when a budget is given
    - d minus the set is acyclic
    Returns: {ok: bool, note: str}
    """
    chosen = list(vertices)
    note_parts = []
    bad = [v for v in chosen if not 0 <= v < d.n]
    if bad:
        return {"ok": False, "note": f"unknown vertices {sorted(bad)}"}
    unique = set(chosen)
    if len(unique) != len(chosen):
        note_parts.append("duplicate vertices ignored")
    if k is not None and len(unique) > k:
        return {"ok": False, "note": f"{len(unique)} vertices exceed budget {k}"}
    if not acyclic_after_deletion(d, unique):
        return {"ok": False, "note": "a cycle survives the deletion"}
    return {"ok": True, "note": "; ".join(note_parts)}


def verify_arc_solution(d: Digraph, arcs: Iterable[Tuple[int, int]], k: Optional[int] = None) -> Dict[str, Any]:
    """Same contract as verify_vertex_solution, for feedback arc sets."""
    chosen = [tuple(a) for a in arcs]
    missing = [a for a in chosen if not (0 <= a[0] < d.n and 0 <= a[1] < d.n and d.has_arc(*a))]
    if missing:
        return {"ok": False, "note": f"arcs not in the digraph: {sorted(missing)}"}
    gone = set(chosen)
    if k is not None and len(gone) > k:
        return {"ok": False, "note": f"{len(gone)} arcs exceed budget {k}"}
    rest = Digraph(d.n, [a for a in d.arcs if a not in gone])
    if not is_acyclic(rest):
        return {"ok": False, "note": "a cycle survives the deletion"}
    return {"ok": True, "note": ""}


def ensure_acyclic_after_deletion(d: Digraph, vertices: Iterable[int], where: str) -> None:
    if not acyclic_after_deletion(d, vertices):
        raise SelfCheckError(f"{where}: returned set leaves a cycle")
