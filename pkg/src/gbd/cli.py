"""Command-line interface.

Exit codes: 0 when the command ran, 1 for parse, structural or validation
errors in the input, 2 when an internal consistency check fails.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .builders import (ContinuedFraction, NonUnitalSystemError, SupernaturalNumber, build_from_data,
                       system_from_skeleton)
from .circlemodel import inclusion_multiplicities, verify_ck
from .classify import cofinality, lpf, real_rank, simplicity
from .docformat import Document, DocumentError, emit_document, emit_skeleton, parse_document
from .dot import to_dot
from .families import (BunceDeddensFamily, Family, IrrationalRotationFamily, PermutationFamily, StationaryFamily,
                       disjoint_chains_family, product_cycle_family)
from .ktheory import LimitGroup, SubsetBoundExceeded, order_ideal_lattice, unit_class
from .leveldata import DataExtractionError, IncompatibleDataError, LevelData, check_compatibility, extract_data
from .sampling import random_skeleton
from .skeleton import GbdSkeleton, StructuralError, validate_gbd
from .tracesim import CircleMeasure, alpha_series, trace_lift

COMMANDS = ("validate", "data", "ktheory", "classify", "model-check", "traces", "dot", "gen")


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _matrix(text: str) -> list[list[int]]:
    return [_int_list(row) for row in text.split(";")]


def family_from_descriptor(desc: dict) -> Family:
    """Build a family from string parameters (command-line flags or a ``[family]`` section)."""
    name = desc.get("family", "").replace("_", "-")
    try:
        if name == "bunce-deddens":
            return BunceDeddensFamily(SupernaturalNumber(tuple(_int_list(desc.get("primes", "2")))))
        if name in ("irrational-rotation", "golden"):
            terms = _int_list(desc.get("terms", "1"))
            return IrrationalRotationFamily(ContinuedFraction(tuple(terms), periodic=True))
        if name in ("permutation", "permutation-system"):
            return PermutationFamily(desc.get("kind", "growing"), int(desc.get("size", "1")))
        if name == "stationary":
            return StationaryFamily(_matrix(desc["A"]), _matrix(desc["B"]), _int_list(desc["T"]))
        if name == "product-cycle":
            return product_cycle_family(int(desc.get("size", "2")))
        if name == "disjoint-chains":
            return disjoint_chains_family(int(desc.get("size", "2")))
    except KeyError as exc:
        raise InputError(f"family {name!r} needs the parameter {exc.args[0]!r}") from exc
    raise InputError(f"unknown family {desc.get('family')!r}")


@dataclass
class Source:
    """Whatever the input provides: a family, a skeleton, data, or a mix."""

    family: Family | None
    skeleton: GbdSkeleton | None
    data: LevelData | None
    digest: str
    descriptor: dict

    def need_skeleton(self) -> GbdSkeleton:
        if self.skeleton is None:
            self.skeleton = build_from_data(self.need_data())
        return self.skeleton

    def need_data(self) -> LevelData:
        if self.data is None:
            if self.skeleton is None:
                raise InputError("the input has neither a skeleton nor level data")
            self.data = extract_data(self.skeleton)
        return self.data

    def classify_target(self):
        return self.family if self.family is not None else self.need_skeleton()


def load_source(args) -> Source:
    desc: dict = {}
    doc = Document()
    if args.input:
        if args.input == "-":
            raw = sys.stdin.buffer.read()
        else:
            try:
                with open(args.input, "rb") as fh:
                    raw = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
        doc = parse_document(raw.decode("utf-8"))
        digest = hashlib.sha256(raw).hexdigest()
        desc = dict(doc.family or {})
    if args.family:
        desc = {"family": args.family}
        for key in ("primes", "terms", "kind", "size"):
            if getattr(args, key) is not None:
                desc[key] = str(getattr(args, key))
    if not args.input:
        if not desc:
            raise InputError("give an input document or --family")
        digest = hashlib.sha256(json.dumps(desc, sort_keys=True).encode()).hexdigest()
    family = family_from_descriptor(desc) if desc.get("family", "explicit") != "explicit" else None
    skel, data = doc.skeleton, doc.data
    if family is not None and skel is None and data is None:
        levels = args.depth + 1
        skel, data = family.skeleton(levels), family.data(levels)
    return Source(family, skel, data, digest, desc)


# -- commands


def cmd_validate(src: Source, args) -> tuple[dict, int]:
    report = validate_gbd(src.need_skeleton())
    return {"validation": report.to_dict()}, 0 if report.ok else 1


def cmd_data(src: Source, args) -> tuple[dict, int]:
    data = src.need_data()
    report = check_compatibility(data)
    return {"data": data.to_dict(), "compatibility": report.to_dict()}, 0 if report.ok else 1


def cmd_ktheory(src: Source, args) -> tuple[dict, int]:
    data = src.need_data()
    tail_a = src.family.injective_maps("A") if src.family else False
    tail_b = src.family.injective_maps("B") if src.family else False
    k0, k1 = LimitGroup(data, "K0", tail_a), LimitGroup(data, "K1", tail_b)
    unit = unit_class(data)
    out = {"k0": k0.to_dict(), "k1": k1.to_dict(),
           "unit_class": {"level": unit.level, "vector": list(unit.vector),
                          "positive": k0.positive(unit, args.horizon).to_dict()}}
    try:
        out["ideal_lattice"] = order_ideal_lattice(data).to_dict()
    except SubsetBoundExceeded as exc:
        out["ideal_lattice"] = {"skipped": str(exc)}
    return out, 0


def cmd_classify(src: Source, args) -> tuple[dict, int]:
    target = src.classify_target()
    return {name: fn(target, args.horizon).to_dict() for name, fn in
            (("cofinality", cofinality), ("simplicity", simplicity), ("lpf", lpf), ("real_rank", real_rank))}, 0


def cmd_model_check(src: Source, args) -> tuple[dict, int]:
    skel = src.need_skeleton()
    valid = validate_gbd(skel)
    if not valid.ok:
        return {"validation": valid.to_dict()}, 1
    depth = min(args.depth, skel.depth)
    data = extract_data(skel)
    ck = verify_ck(skel, depth, samples=args.samples, seed=args.seed)
    mults = []
    ok = ck.ok
    for N in range(depth):
        m = inclusion_multiplicities(skel, N)
        match = m.k0 == data.A[N] and m.k1 == data.B[N]
        ok = ok and match
        mults.append({**m.to_dict(), "A": [list(r) for r in data.A[N]], "B": [list(r) for r in data.B[N]],
                      "match": match})
    out = {"marked_edges": {"rule": "red edge leaving position 0 of every cycle"},
           "ck": ck.to_dict(), "multiplicities": mults}
    return out, 0 if ok else 2


def cmd_traces(src: Source, args) -> tuple[dict, int]:
    if src.family is not None:
        if not src.family.unit_cycles:
            raise InputError(f"{src.family.name} does not have cycles of length 1")
        system = src.family.permutation_system(args.depth + 1)
    else:
        system = system_from_skeleton(src.need_skeleton())
    series = {}
    for N in range(1, args.horizon + 1):
        s = alpha_series(src.family if src.family is not None else system, N, system.levels)
        series[str(N)] = {"beta_min": [str(x) for x in s.beta_min], "lower": [str(x) for x in s.lower],
                          "upper": [str(x) for x in s.upper],
                          "certificate": None if s.certificate is None else s.certificate.reason}
    top = [Fraction(1, system.counts[-1])] * system.counts[-1]
    mu = CircleMeasure.lebesgue_measure()
    _, steps = trace_lift(system, top, mu, 1)
    lift = [{"level": st.level, "tv_distance": str(st.distance), "variation_norm": str(st.norm),
             "bound": str(st.bound), "within_bound": st.distance <= st.bound} for st in steps]
    return {"alpha_series": series, "lift": {"measure": mu.to_dict(), "N": 1, "steps": lift}}, 0


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = argparse.ArgumentParser(prog="gbd", description="Generalised Bunce-Deddens diagrams")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help="document path, or - for stdin")
    parser.add_argument("--family", help="bunce-deddens, irrational-rotation, permutation, stationary, "
                                         "product-cycle or disjoint-chains")
    parser.add_argument("--primes", help="prime sequence, repeated forever (bunce-deddens)")
    parser.add_argument("--terms", help="continued fraction terms, repeated forever (irrational-rotation)")
    parser.add_argument("--kind", help="growing, constant or identity (permutation)")
    parser.add_argument("--size", type=int, help="cycle size (permutation, product-cycle, disjoint-chains)")
    parser.add_argument("--horizon", type=int, default=16)
    parser.add_argument("--depth", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=60)
    parser.add_argument("--out", help="write the output here instead of stdout")
    args = parser.parse_args(argv)

    try:
        if args.command == "gen" and not args.input and not args.family:
            skel = random_skeleton(random.Random(args.seed), max_levels=args.depth + 1)
            text, code = emit_skeleton(skel), 0
        else:
            src = load_source(args)
            if args.command == "gen":
                text, code = emit_document(Document(src.skeleton, src.data, src.descriptor or None)), 0
            elif args.command == "dot":
                text, code = to_dot(src.need_skeleton()), 0
            else:
                handler = {"validate": cmd_validate, "data": cmd_data, "ktheory": cmd_ktheory,
                           "classify": cmd_classify, "model-check": cmd_model_check, "traces": cmd_traces}
                body, code = handler[args.command](src, args)
                header = {"tool": "gbd", "version": __version__, "command": args.command,
                          "input_sha256": src.digest, "horizon": args.horizon, "depth": args.depth,
                          "seed": args.seed}
                text = json.dumps({"provenance": header, **body}, sort_keys=True, indent=2) + "\n"
    except (DocumentError, StructuralError, DataExtractionError, IncompatibleDataError, NonUnitalSystemError,
            InputError) as exc:
        print(f"gbd: error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"gbd: internal check failed: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"gbd: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
