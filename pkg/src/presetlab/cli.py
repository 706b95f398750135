"""Command line driver: bank generation, embedding, search, mix, highlight,
render and serving. Output is tab-separated on stdout (or JSON with --json)
and byte-deterministic for fixed inputs and seeds.

Exit codes: 0 success, 2 usage error (argparse), 3 data/validation error,
4 provider error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bank import generate_bank, load_bank, save_bank
from .config import load_config
from .embed import embed_generation, provider_from_spec, save_embeddings
from .errors import DataError, ProviderError
from .mixing import Favorites, GenerationChain, mix
from .modify import group_importance
from .render import DEFAULT_CONFIG, render
from .schema import load_reference_schema, load_schema
from .search import audio_search, text_search

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_PROVIDER = 4


def _load_schema(args):
    if getattr(args, "schema", None):
        return load_schema(args.schema)
    return load_reference_schema()


def _load_embedded_bank(args, schema, provider):
    gen = load_bank(args.bank, schema)
    embed_generation(gen, provider, schema, DEFAULT_CONFIG)
    return gen


def _emit(rows, header, as_json):
    if as_json:
        sys.stdout.write(json.dumps([dict(zip(header, r)) for r in rows]) + "\n")
    else:
        for r in rows:
            sys.stdout.write("\t".join(str(c) for c in r) + "\n")


def cmd_bank_gen(args) -> int:
    schema = _load_schema(args)
    gen = generate_bank(schema, args.count, args.seed)
    save_bank(gen, schema, args.out)
    sys.stdout.write(f"presets: {len(gen)}\n")
    return EXIT_OK


def cmd_embed(args) -> int:
    schema = _load_schema(args)
    provider = provider_from_spec(args.provider, DEFAULT_CONFIG)
    gen = _load_embedded_bank(args, schema, provider)
    audio = {p.id: gen.embedding_matrix[i] for i, p in enumerate(gen.presets)}
    save_embeddings(args.out, provider.dimension, audio)
    sys.stdout.write(f"embeddings: {len(gen)}\n")
    return EXIT_OK


def cmd_search(args) -> int:
    schema = _load_schema(args)
    provider = provider_from_spec(args.provider, DEFAULT_CONFIG)
    gen = _load_embedded_bank(args, schema, provider)
    if args.text is not None:
        results = text_search(args.text, gen, provider, args.k)
    else:
        results = audio_search(args.anchor, gen, args.k)
    rows = [(r.rank, r.preset_id, format(r.score, ".6f")) for r in results.results]
    _emit(rows, ("rank", "id", "score"), args.json)
    return EXIT_OK


def cmd_mix(args) -> int:
    schema = _load_schema(args)
    provider = provider_from_spec(args.provider, DEFAULT_CONFIG)
    gen0 = _load_embedded_bank(args, schema, provider)
    chain = GenerationChain.from_default_bank(gen0)
    favorites = Favorites()
    for pid in args.favorites.split(","):
        favorites.add(pid.strip())
    child_gen = mix(favorites, chain, schema, provider, seed=args.seed)
    if args.out:
        save_bank(child_gen, schema, args.out)
    sys.stdout.write(f"children: {len(child_gen)}\n")
    return EXIT_OK


def cmd_highlight(args) -> int:
    schema = _load_schema(args)
    provider = provider_from_spec(args.provider, DEFAULT_CONFIG)
    gen = _load_embedded_bank(args, schema, provider)
    query = ("audio", args.anchor) if args.text is None else args.text
    imp = group_importance(query, gen, provider, schema)
    rows = [(s.group, format(s.raw, ".6f"), format(s.shade, ".6f"))
            for s in imp.scores]
    _emit(rows, ("group", "raw", "shade"), args.json)
    if imp.truncated and not args.json:
        sys.stderr.write(f"warning: bank smaller than corpus, used {imp.corpus_size}\n")
    return EXIT_OK


def cmd_render(args) -> int:
    schema = _load_schema(args)
    gen = load_bank(args.bank, schema)
    preset = gen.get(args.preset)
    recording = render(preset, schema, DEFAULT_CONFIG)
    recording.save_wav(args.out)
    sys.stdout.write(f"wrote: {args.out} ({recording.duration:.1f}s "
                     f"@ {recording.sample_rate} Hz)\n")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = load_config(args.config)
    if args.provider:
        config = type(config)(**{**config.__dict__, "provider": args.provider})
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=args.port or config.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="presetlab",
        description="synthesizer preset search, mixing and modification")
    parser.add_argument("--workdir", default=None,
                        help="resolve relative paths from this directory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bank=True, provider=True):
        p.add_argument("--schema", default=None,
                       help="schema file (default: the packaged reference schema)")
        if bank:
            p.add_argument("--bank", required=True, help="bank file")
        if provider:
            p.add_argument("--provider", default="spectral",
                           help="spectral | file:PATH | hybrid:PATH")
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("bank-gen", help="generate a deterministic preset bank")
    common(p, bank=False, provider=False)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=1337)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bank_gen)

    p = sub.add_parser("embed", help="render a bank and write its embedding file")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("search", help="rank presets against a text query or anchor")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--anchor")
    p.add_argument("--k", type=int, default=50)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("mix", help="breed favorites into a child generation")
    common(p)
    p.add_argument("--favorites", required=True,
                   help="comma-separated preset ids (at least 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write children as a bank file")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("highlight", help="group importance for a query")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--anchor")
    p.set_defaults(func=cmd_highlight)

    p = sub.add_parser("render", help="render one preset to a WAV file")
    common(p, provider=False)
    p.add_argument("--preset", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None, help="INI config file")
    p.add_argument("--provider", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workdir:
        import os

        os.chdir(args.workdir)
    try:
        return args.func(args)
    except DataError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except ProviderError as exc:
        sys.stderr.write(f"provider error: {exc}\n")
        return EXIT_PROVIDER


if __name__ == "__main__":
    sys.exit(main())
