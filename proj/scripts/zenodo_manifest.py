#!/usr/bin/env python3
"""Build a claimdist manifest from a directory-per-group text corpus.

Example, with the published corpus unpacked so that each group sits in its
own folder of plain-text files:

    python3 scripts/zenodo_manifest.py \
        --query corpus/query/query.txt \
        --group h-index=corpus/h-index \
        --group scientometrics=corpus/scientometrics \
        --group random=corpus/random \
        --embedding glove/glove.6B.300d.txt --dim 300 --label glove.6B.300d \
        -o corpus/manifest.json

Document ids are the first integer in each file name ("07_smith.txt" -> "7"),
falling back to the file stem. Paths in the manifest are written relative to
the manifest's directory. Groups keep the order given on the command line.
"""

import argparse
import json
import os
import re
import sys
from pathlib import Path

TEXT_SUFFIXES = {".txt", ".text", ".md"}


def doc_id(path: Path) -> str:
    m = re.search(r"\d+", path.stem)
    return str(int(m.group())) if m else path.stem


def relative(path: Path, base: Path) -> str:
    return Path(os.path.relpath(path.resolve(), base.resolve())).as_posix()


def parse_group(spec: str):
    label, sep, folder = spec.partition("=")
    if not sep or not label or not folder:
        raise argparse.ArgumentTypeError(f"expected LABEL=DIR, got {spec!r}")
    return label, Path(folder)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--query", required=True, type=Path, help="query document text file")
    ap.add_argument("--query-id", default=None, help="query id (default: file stem)")
    ap.add_argument("--group", action="append", required=True, type=parse_group, metavar="LABEL=DIR")
    ap.add_argument("--embedding", required=True, type=Path, help="GloVe text file")
    ap.add_argument("--dim", type=int, default=None, help="expected embedding dimension")
    ap.add_argument("--label", default="", help="embedding release name recorded in reports")
    ap.add_argument("--variant", default="symmetric-max",
                    choices=["symmetric-max", "one-sided-query", "one-sided-candidate"])
    ap.add_argument("--stopwords", type=Path, default=None, help="stopword file (default: bundled list)")
    ap.add_argument("--selector", choices=["lda", "ma"], default=None, help="reduce the query to claim sentences")
    ap.add_argument("--top-k", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("-o", "--output", required=True, type=Path)
    args = ap.parse_args(argv)

    base = args.output.parent
    documents = []
    for label, folder in args.group:
        if not folder.is_dir():
            ap.error(f"group {label!r}: {folder} is not a directory")
        files = sorted(p for p in folder.iterdir() if p.is_file() and p.suffix.lower() in TEXT_SUFFIXES)
        if not files:
            ap.error(f"group {label!r}: no text files in {folder}")
        seen = {}
        for f in files:
            i = doc_id(f)
            if i in seen:
                ap.error(f"group {label!r}: {f.name} and {seen[i].name} both map to id {i}")
            seen[i] = f
            documents.append({"id": i, "group": label, "path": relative(f, base)})

    query = {"id": args.query_id or args.query.stem, "path": relative(args.query, base)}
    if args.selector:
        query["selector"] = {"kind": args.selector, "top_k": args.top_k, "seed": args.seed}

    embedding = {"path": relative(args.embedding, base)}
    if args.dim:
        embedding["expected_dim"] = args.dim
    if args.label:
        embedding["label"] = args.label

    options = {"variant": args.variant, "seed": args.seed}
    if args.stopwords:
        options["stopwords"] = relative(args.stopwords, base)

    manifest = {
        "query": query,
        "groups": [label for label, _ in args.group],
        "documents": documents,
        "embedding": embedding,
        "options": options,
    }
    args.output.parent.mkdir(parents=True, exist_ok=True)
    args.output.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    counts = ", ".join(f"{label}: {sum(d['group'] == label for d in documents)}" for label, _ in args.group)
    print(f"wrote {args.output} ({counts})", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
