"""Batch command-line interface.

Every verb maps onto one library operation and emits a JSON artifact
(DOT for graph payloads, plain text on request).  Exit codes: 0 success,
1 flag/schema violation, 2 domain error with a machine-readable
diagnostic on stderr, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .words import Alphabet, Word, WordError, abelianize_mod_l
from .gog import apply_endo, to_dot
from .normal_forms import (CompatibleWitness, Intersecting, SyllableError,
                           splittings_intersect)
from .catalog import (DemuskinParams, ParamError, SplitDescriptor,
                      build_split, curve_complex_slice, demuskin_presentation,
                      nielsen_separation, relator, slice_to_dot, twist_images,
                      two_edge_refinement, validate_splitting,
                      whitehead_minimal)
from . import pquot

SCHEMA_VERSION = 1


class SchemaError(Exception):
    exit_code = 1


class DomainError(Exception):
    exit_code = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message)


def _params_from(args) -> DemuskinParams:
    try:
        return DemuskinParams(args.p, args.d, args.r, args.rprime)
    except ParamError as exc:
        raise DomainError(str(exc)) from exc


def _descriptor_from(args, suffix: str = "") -> SplitDescriptor:
    kind = getattr(args, "kind" + suffix)
    n = getattr(args, "n" + suffix, None)
    form = getattr(args, "form" + suffix, "theorem")
    try:
        if kind == "hnn":
            return SplitDescriptor("hnn", form=form)
        return SplitDescriptor("amalg", n=n if n is not None else 1)
    except ParamError as exc:
        raise DomainError(str(exc)) from exc


def _emit(args, payload, dot: Optional[str] = None, text: Optional[str] = None) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        body = json.dumps(payload, indent=2) + "\n"
    elif fmt == "dot":
        if dot is None:
            raise SchemaError("dot output is not supported for this verb")
        body = dot
    elif fmt == "text":
        body = (text if text is not None else json.dumps(payload, indent=2)) + "\n"
    else:
        raise SchemaError(f"unknown format {fmt!r}")
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _add_params(p: argparse.ArgumentParser, rprime_default=None):
    p.add_argument("--p", type=int, default=3, help="odd prime")
    p.add_argument("--d", type=int, default=2, help="number of generator pairs")
    p.add_argument("--r", default=1, help="orientation level (integer or 'inf')")
    p.add_argument("--rprime", default=rprime_default,
                   help="deformation level (integer or 'inf')")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", "-o", help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for any sampled work (fixed default)")


def _add_descriptor(p: argparse.ArgumentParser, suffix: str = ""):
    p.add_argument("--kind" + suffix, choices=("hnn", "amalg"), required=True)
    p.add_argument("--n" + suffix, type=int, default=None,
                   help="amalgam index (1 <= n < d)")
    p.add_argument("--form" + suffix, choices=("theorem", "definition"),
                   default="theorem", help="HNN variant")


def build_parser() -> _Parser:
    parser = _Parser(prog="demuskin",
                     description="one-relator groups of Demuskin type: "
                                 "splittings, twists, and certificates")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("present", help="emit the one-relator presentation")
    _add_params(p, rprime_default="inf")
    _add_common(p)

    p = sub.add_parser("split", help="construct a catalog splitting")
    _add_params(p, rprime_default="inf")
    _add_descriptor(p)
    _add_common(p)

    p = sub.add_parser("validate", help="Tietze-check a catalog splitting")
    _add_params(p, rprime_default="inf")
    _add_descriptor(p)
    _add_common(p)

    p = sub.add_parser("twist", help="Dehn-twist generator images")
    _add_params(p, rprime_default="inf")
    _add_descriptor(p)
    p.add_argument("--k", type=int, default=1, help="twist power")
    p.add_argument("--word", help="optionally apply the twist to this word")
    _add_common(p)

    p = sub.add_parser("reduce", help="freely reduce a word")
    p.add_argument("--gens", required=True, help="comma-separated generators")
    p.add_argument("--word", required=True)
    p.add_argument("--mod", type=int, default=None,
                   help="also report the exponent vector mod this prime (0 = integers)")
    _add_common(p)

    p = sub.add_parser("tlength", help="translation length on a splitting tree")
    _add_params(p, rprime_default="inf")
    _add_descriptor(p)
    p.add_argument("--word", required=True, help="ambient word")
    _add_common(p)

    p = sub.add_parser("intersect", help="intersection verdict for two splittings")
    _add_params(p, rprime_default="inf")
    _add_descriptor(p, suffix="1")
    _add_descriptor(p, suffix="2")
    _add_common(p)

    p = sub.add_parser("certify-outer", help="finite p-group outerness certificate")
    _add_params(p, rprime_default="inf")
    _add_descriptor(p)
    p.add_argument("--k", type=int, default=1, help="twist power (nonzero)")
    p.add_argument("--bound", type=int, default=None,
                   help="subgroup search bound (default 3^9; env DEMUSKIN_MAX_SUBGROUP)")
    _add_common(p)

    p = sub.add_parser("whitehead", help="Whitehead minimality report")
    p.add_argument("--gens", help="comma-separated generators (with --word)")
    p.add_argument("--word", help="word to minimize (default: the relator)")
    _add_params(p, rprime_default=1)
    _add_common(p)

    p = sub.add_parser("separate", help="Nielsen separation table for a family")
    _add_params(p, rprime_default=1)
    p.add_argument("--rprimes", default="1,2,3", help="comma-separated r' values")
    p.add_argument("--primes", default="2,5,7,11",
                   help="comma-separated primes for mod-l primitivity")
    p.add_argument("--figure", help="also render a bar chart to this path")
    _add_common(p)

    p = sub.add_parser("quotient", help="construct a finite p-group quotient")
    _add_params(p, rprime_default=1)
    p.add_argument("--type", choices=("heisenberg", "class2", "cyclic"),
                   default="heisenberg")
    p.add_argument("--s", type=int, default=1, help="target torsion exponent")
    p.add_argument("--n", type=int, default=1, help="amalgam index")
    _add_common(p)

    p = sub.add_parser("curve-complex", help="finite slice of the splitting complex")
    _add_params(p)
    p.add_argument("--rprime-max", type=int, default=3)
    p.add_argument("--figure", help="also render the slice to this path")
    _add_common(p)

    return parser


def _parse_word(gens: str, text: str) -> Word:
    alpha = Alphabet(tuple(g.strip() for g in gens.split(",") if g.strip()))
    return alpha.word(text)


def _run(args) -> None:
    if args.verb == "present":
        params = _params_from(args)
        pres = demuskin_presentation(params)
        payload = {"schema_version": SCHEMA_VERSION, "params": params.to_json(),
                   **pres.to_json()}
        _emit(args, payload, text=f"relator: {pres.relators[0]}")
        return

    if args.verb in ("split", "validate", "tlength", "twist"):
        params = _params_from(args)
        desc = _descriptor_from(args)
        try:
            es = build_split(params, desc)
        except ParamError as exc:
            raise DomainError(str(exc)) from exc
        if args.verb == "split":
            payload = {"schema_version": SCHEMA_VERSION, **es.to_json()}
            from .normal_forms import one_edge_graph
            _emit(args, payload, dot=to_dot(one_edge_graph(es)))
            return
        if args.verb == "validate":
            ok = validate_splitting(es, params)
            payload = {"schema_version": SCHEMA_VERSION,
                       "params": params.to_json(),
                       "splitting": desc.to_json(), "valid": ok}
            _emit(args, payload, text=f"valid: {ok}")
            return
        if args.verb == "tlength":
            w = es.ambient.word(args.word)
            metrics = es.metrics(w)
            payload = {"schema_version": SCHEMA_VERSION, "word": w.to_json(),
                       **metrics.to_json()}
            _emit(args, payload,
                  text=f"elliptic: {metrics.elliptic}, "
                       f"translation length: {metrics.translation_length}")
            return
        images = twist_images(es, args.k)
        payload = {"schema_version": SCHEMA_VERSION, "params": params.to_json(),
                   "splitting": desc.to_json(), "k": args.k,
                   "images": {name: images[name].to_json()
                              for name in es.ambient.names}}
        if args.word:
            w = es.ambient.word(args.word)
            payload["word"] = w.to_json()
            payload["image"] = apply_endo(images, w).to_json()
        _emit(args, payload)
        return

    if args.verb == "reduce":
        w = _parse_word(args.gens, args.word)
        payload = {"schema_version": SCHEMA_VERSION, "word": w.to_json(),
                   "length": len(w)}
        if args.mod is not None:
            vec, primitive = abelianize_mod_l(w, args.mod)
            payload["exponent_vector"] = list(vec)
            payload["primitive"] = primitive
        _emit(args, payload, text=str(w))
        return

    if args.verb == "intersect":
        params = _params_from(args)
        d1 = _descriptor_from(args, "1")
        d2 = _descriptor_from(args, "2")
        s1, s2 = build_split(params, d1), build_split(params, d2)
        refinement = None
        if (d1.kind == d2.kind == "amalg" and d1.n != d2.n
                and max(d1.n, d2.n) < params.d):
            refinement = two_edge_refinement(params, min(d1.n, d2.n),
                                             max(d1.n, d2.n))
        verdict = splittings_intersect(s1, s2, refinement)
        payload = {"schema_version": SCHEMA_VERSION, "params": params.to_json(),
                   "splittings": [d1.to_json(), d2.to_json()]}
        if isinstance(verdict, Intersecting):
            payload["verdict"] = "intersecting"
            payload["witness"] = verdict.witness.to_json()
        elif isinstance(verdict, CompatibleWitness):
            payload["verdict"] = "compatible"
            payload["refinement"] = verdict.refinement.to_json()
        else:
            payload["verdict"] = "inconclusive"
            payload["reason"] = verdict.reason
        _emit(args, payload, text=f"verdict: {payload['verdict']}")
        return

    if args.verb == "certify-outer":
        params = _params_from(args)
        desc = _descriptor_from(args)
        if args.k == 0:
            raise DomainError("k = 0 is the identity twist")
        result = pquot.certify_outer(params, desc, args.k, bound=args.bound)
        payload = result.to_json()
        _emit(args, payload,
              text=("certificate found" if payload.get("nonconjugate")
                    else "no certificate in the default family"))
        return

    if args.verb == "whitehead":
        if args.word:
            if not args.gens:
                raise SchemaError("--word needs --gens")
            w = _parse_word(args.gens, args.word)
        else:
            w = relator(_params_from(args))
        report = whitehead_minimal(w)
        payload = {"schema_version": SCHEMA_VERSION, **report.to_json()}
        _emit(args, payload,
              text=f"length {report.length}, minimal: {report.minimal}")
        return

    if args.verb == "separate":
        params = _params_from(args)
        rprimes = [v.strip() for v in args.rprimes.split(",") if v.strip()]
        primes = [int(v) for v in args.primes.split(",") if v.strip()]
        try:
            table = nielsen_separation(params, rprimes, primes)
        except (ParamError, WordError) as exc:
            raise DomainError(str(exc)) from exc
        payload = {"schema_version": SCHEMA_VERSION, "params": params.to_json(),
                   **table}
        if args.figure:
            from .plotting import render_separation_figure
            render_separation_figure(table, args.figure)
        lines = [f"r'={row['rprime']}: length {row['length']}"
                 f" ({'minimal' if row['minimal'] else 'not minimal'})"
                 for row in table["rows"]]
        _emit(args, payload, text="\n".join(lines))
        return

    if args.verb == "quotient":
        params = _params_from(args)
        try:
            if args.type == "heisenberg":
                hom = pquot.heisenberg_case_hom(params, args.s, args.n)
            elif args.type == "class2":
                hom = pquot.class2_quotient_hom(params.alphabet(), params.p, args.s)
            else:
                hom = pquot.hnn_cyclic_hom(params, args.s)
        except (pquot.HomRejected, ParamError) as exc:
            raise DomainError(str(exc)) from exc
        payload = {"schema_version": SCHEMA_VERSION, "params": params.to_json(),
                   "quotient": hom.describe(), "images": hom.images_to_json()}
        _emit(args, payload)
        return

    if args.verb == "curve-complex":
        params = _params_from(args)
        try:
            slice_data = curve_complex_slice(params, args.rprime_max)
        except ParamError as exc:
            raise DomainError(str(exc)) from exc
        if args.figure:
            from .plotting import render_slice_figure
            render_slice_figure(slice_data, args.figure)
        _emit(args, slice_data, dot=slice_to_dot(slice_data),
              text=f"{len(slice_data['vertices'])} classes, "
                   f"{len(slice_data['edges'])} compatibility edges")
        return

    raise SchemaError(f"unknown verb {args.verb!r}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _run(args)
        return 0
    except SchemaError as exc:
        sys.stderr.write(json.dumps({"error": "schema", "detail": str(exc)}) + "\n")
        return 1
    except pquot.SubgroupBoundExceeded as exc:
        sys.stderr.write(json.dumps({"error": "resource", "detail": str(exc)}) + "\n")
        return 3
    except (DomainError, ParamError, WordError, SyllableError) as exc:
        sys.stderr.write(json.dumps({"error": "domain", "detail": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
