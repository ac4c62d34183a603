import json
from typing import Any, Dict, Iterable, List, TextIO


def to_jsonable(value: Any) -> Any:
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if hasattr(value, "to_json"):
        return to_jsonable(value.to_json())
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def summarize_trace(trace: Iterable[Dict[str, Any]]) -> Dict[str, int]:
    """Count of driver cases fired, keyed by case name."""
    counts: Dict[str, int] = {}
    for entry in trace:
        if entry.get("type") == "case":
            counts[entry["case"]] = counts.get(entry["case"], 0) + 1
    return counts


def render_trace(trace: List[Dict[str, Any]], out: TextIO) -> None:
    if not trace:
        return
    for entry in trace:
        et = entry.get("type")
        if et == "case":
            record = {k: entry.get(k) for k in ("type", "depth", "case", "size", "k", "crux")}
        elif et == "compress":
            record = {k: entry.get(k) for k in ("type", "depth", "w_size", "k")}
        else:
            record = entry
        out.write(json.dumps(to_jsonable(record), sort_keys=True) + "\n")
