"""
Instance and solution files.

PACE format (1-indexed): '%' comment lines anywhere; a header "N M 0"; then
exactly N adjacency lines, line i listing the out-neighbors of vertex i
(an empty line means no out-neighbors).

Edge-list format (0-indexed): '#' comments, an optional header "dfvs N M",
then one "u v" arc per line. Without a header N is the largest id plus one.

Solution files: one 1-indexed vertex per line ('%' comments allowed); arc
solutions use "u v" per line, also 1-indexed.
"""

import json
import os
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple

from graphs.digraph import Digraph

PACE = "pace"
EDGE_LIST = "edge-list"
FORMATS = (PACE, EDGE_LIST)
CORPUS_SCHEMA = 1


class InstanceFormatError(ValueError):
    pass


def _ints(tokens: List[str], lineno: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceFormatError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def read_pace(text: str) -> Digraph:
    lines = [(i, line.strip()) for i, line in enumerate(text.splitlines(), start=1)]
    lines = [(i, line) for i, line in lines if not line.startswith("%")]
    if not lines or not lines[0][1]:
        raise InstanceFormatError("missing 'N M 0' header")
    lineno, header = lines[0]
    fields = _ints(header.split(), lineno)
    if len(fields) != 3:
        raise InstanceFormatError(f"line {lineno}: header must be 'N M 0'")
    n, m, _ = fields
    body = lines[1:]
    # trailing blank lines beyond N are tolerated
    while len(body) > n and not body[-1][1]:
        body.pop()
    if len(body) != n:
        raise InstanceFormatError(f"expected {n} adjacency lines, found {len(body)}")
    arcs: List[Tuple[int, int]] = []
    for v, (lineno, line) in enumerate(body):
        for w in _ints(line.split(), lineno):
            if not 1 <= w <= n:
                raise InstanceFormatError(f"line {lineno}: vertex {w} outside 1..{n}")
            arcs.append((v, w - 1))
    if len(arcs) != m:
        raise InstanceFormatError(f"header announces {m} arcs, found {len(arcs)}")
    return Digraph(n, arcs)


def write_pace(d: Digraph, out: TextIO) -> None:
    out.write(f"{d.n} {d.m} 0\n")
    for v in d.vertices():
        out.write(" ".join(str(w + 1) for w in d.out_neighbors(v)) + "\n")


def read_edge_list(text: str) -> Digraph:
    n: Optional[int] = None
    m: Optional[int] = None
    arcs: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "dfvs":
            if n is not None or arcs:
                raise InstanceFormatError(f"line {lineno}: header must come first")
            n, m = _ints(tokens[1:], lineno) if len(tokens) == 3 else (None, None)
            if n is None:
                raise InstanceFormatError(f"line {lineno}: header must be 'dfvs N M'")
            continue
        if len(tokens) != 2:
            raise InstanceFormatError(f"line {lineno}: expected 'u v'")
        a, b = _ints(tokens, lineno)
        if a < 0 or b < 0:
            raise InstanceFormatError(f"line {lineno}: negative vertex id")
        arcs.append((a, b))
    if n is None:
        n = 1 + max((max(a, b) for a, b in arcs), default=-1)
    for a, b in arcs:
        if a >= n or b >= n:
            raise InstanceFormatError(f"arc ({a}, {b}) outside 0..{n - 1}")
    d = Digraph(n, arcs)
    if m is not None and d.m != m:
        raise InstanceFormatError(f"header announces {m} arcs, found {d.m}")
    return d


def write_edge_list(d: Digraph, out: TextIO) -> None:
    out.write(f"dfvs {d.n} {d.m}\n")
    for a, b in d.arcs:
        out.write(f"{a} {b}\n")


def detect_format(text: str) -> str:
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            return PACE
        if line.startswith("#") or line.startswith("dfvs"):
            return EDGE_LIST
        return PACE if len(line.split()) == 3 else EDGE_LIST
    raise InstanceFormatError("empty instance")


def parse_instance(text: str, fmt: Optional[str] = None) -> Digraph:
    fmt = fmt or detect_format(text)
    if fmt == PACE:
        return read_pace(text)
    if fmt == EDGE_LIST:
        return read_edge_list(text)
    raise InstanceFormatError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def load_instance(path: str, fmt: Optional[str] = None) -> Digraph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_instance(f.read(), fmt)


def save_instance(d: Digraph, path: str, fmt: str = PACE) -> None:
    with open(path, "w", encoding="utf-8") as f:
        (write_pace if fmt == PACE else write_edge_list)(d, f)


def read_vertex_solution(text: str) -> List[int]:
    out: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        (v,) = _ints(line.split()[:1], lineno)
        if v < 1:
            raise InstanceFormatError(f"line {lineno}: vertices are 1-indexed")
        out.append(v - 1)
    return out


def read_arc_solution(text: str) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InstanceFormatError(f"line {lineno}: expected 'u v'")
        a, b = _ints(tokens, lineno)
        if a < 1 or b < 1:
            raise InstanceFormatError(f"line {lineno}: vertices are 1-indexed")
        out.append((a - 1, b - 1))
    return out


def format_vertex_solution(vertices: Iterable[int]) -> str:
    return "".join(f"{v + 1}\n" for v in sorted(vertices))


def format_arc_solution(arcs: Iterable[Tuple[int, int]]) -> str:
    return "".join(f"{a + 1} {b + 1}\n" for a, b in sorted(arcs))


def save_corpus(directory: str, name: str, instances: Iterable[Tuple[Digraph, Optional[int]]]) -> str:
    """Write <name>_<i>.gr files plus the <name>.json sidecar; returns the sidecar path."""
    os.makedirs(directory, exist_ok=True)
    entries: List[Dict[str, Any]] = []
    for i, (d, opt) in enumerate(instances):
        fname = f"{name}_{i}.gr"
        save_instance(d, os.path.join(directory, fname), PACE)
        entries.append({"file": fname, "n": d.n, "m": d.m, "opt": opt})
    sidecar = os.path.join(directory, f"{name}.json")
    with open(sidecar, "w", encoding="utf-8") as f:
        json.dump({"schema": CORPUS_SCHEMA, "instances": entries}, f, indent=2)
    return sidecar


def load_corpus(sidecar: str) -> List[Tuple[Digraph, Dict[str, Any]]]:
    with open(sidecar, "r", encoding="utf-8") as f:
        meta = json.load(f)
    if meta.get("schema") != CORPUS_SCHEMA:
        raise InstanceFormatError(f"unsupported corpus schema {meta.get('schema')!r}")
    base = os.path.dirname(sidecar)
    return [(load_instance(os.path.join(base, e["file"]), PACE), e) for e in meta.get("instances", [])]
