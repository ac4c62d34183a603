#!/usr/bin/env python3
"""
Instance generator for the DFVS solver.
- Planted instances from named presets or explicit n/m/k
- Sampled small corpora with the exact optimum from the brute-force oracle
- Writes PACE files; corpora get a JSON sidecar

Usage:
  python tools/generate.py planted --preset small --out data/small.gr
  python tools/generate.py planted --n 1000 --m 3000 --k 3 --seed 7 --out data/p.gr
  python tools/generate.py corpus --name sampled --count 200 --out-dir data/corpus
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from generators import DEFAULT_BACK_DENSITY, DEFAULT_SEED, gen_planted, gen_sampled  # noqa: E402
from oracles import min_dfvs_size  # noqa: E402
from pace_io import save_corpus, save_instance  # noqa: E402

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


@dataclass
class Preset:
    key: str
    name: str
    n: int
    m: int
    k: int
    back_density: float = DEFAULT_BACK_DENSITY


PRESETS: List[Preset] = [
    Preset(key="tiny", name="Oracle-checkable", n=8, m=16, k=2),
    Preset(key="small", name="Small planted", n=100, m=300, k=3),
    Preset(key="bench-1", name="Scaling step 1", n=33333, m=100000, k=3),
    Preset(key="bench-2", name="Scaling step 2", n=66666, m=200000, k=3),
    Preset(key="bench-4", name="Scaling step 4", n=133333, m=400000, k=3),
]


def write_planted(args) -> int:
    preset = next((p for p in PRESETS if p.key == args.preset), None)
    n = args.n if args.n is not None else (preset.n if preset else None)
    m = args.m if args.m is not None else (preset.m if preset else None)
    k = args.k if args.k is not None else (preset.k if preset else None)
    if n is None or m is None or k is None:
        print("Give --preset or all of --n --m --k", file=sys.stderr)
        return 2
    inst = gen_planted(n, m, k, args.seed, preset.back_density if preset else DEFAULT_BACK_DENSITY)
    out = args.out or os.path.join(OUT_DIR, f"planted_n{n}_m{m}_k{k}_s{args.seed}.gr")
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    save_instance(inst.digraph, out)
    with open(out + ".json", "w", encoding="utf-8") as f:
        json.dump({"schema": 1, **inst.to_json()}, f, indent=2)
    print(out)
    return 0


def write_corpus(args) -> int:
    items = []
    for d in gen_sampled(args.count, args.n_max, args.m_max, args.seed):
        items.append((d, min_dfvs_size(d) if d.n <= 12 else None))
    sidecar = save_corpus(args.out_dir, args.name, items)
    print(sidecar)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    sub = parser.add_subparsers(dest="command", required=True)

    planted = sub.add_parser("planted", help="Write one planted instance")
    planted.add_argument("--preset", choices=[p.key for p in PRESETS])
    planted.add_argument("--n", type=int)
    planted.add_argument("--m", type=int)
    planted.add_argument("--k", type=int)
    planted.add_argument("--seed", type=int, default=int(os.getenv("DFVS_SEED", DEFAULT_SEED)))
    planted.add_argument("--out")

    corpus = sub.add_parser("corpus", help="Write a sampled corpus with oracle optima")
    corpus.add_argument("--name", default="sampled")
    corpus.add_argument("--count", type=int, default=200)
    corpus.add_argument("--n-max", type=int, default=8)
    corpus.add_argument("--m-max", type=int, default=20)
    corpus.add_argument("--seed", type=int, default=int(os.getenv("DFVS_SEED", DEFAULT_SEED)))
    corpus.add_argument("--out-dir", default=os.path.join(OUT_DIR, "corpus"))

    args = parser.parse_args(argv)
    if args.command == "planted":
        return write_planted(args)
    return write_corpus(args)


if __name__ == "__main__":
    sys.exit(main())
