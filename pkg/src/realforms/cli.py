"""Command line front end: JSON input documents, commands and reports.

Usage::

    realforms forms --input torus_compact_rank1
    realforms packet-compare --input path/to/doc.json --json

``--input`` takes a file path or the name of a bundled fixture.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import lcm
from typing import Any

from .exact_lattice import FinAbGroup, LatticeError, RationalLattice, RationalVector, transpose
from .oracle import (
    OracleError,
    brute_component_group,
    default_bound,
    verify_diagram,
    verify_fixture_lemmas,
)
from .packet_param import (
    DualParameter,
    PacketInconsistency,
    ParameterError,
    build_dL,
    compare_packets,
    lowest_index,
    maximally_split_chain,
    shelstad_transform,
    validate_parameter,
)
from .root_datum import BasedRootDatum, InvolutionState, RootDatumError
from .torus_forms import (
    TorusError,
    TorusWithInvolution,
    antifixed_quotient,
    cover_component_group,
    pi0_fixed,
    pure_real_forms,
    type_J_forms,
)

COMMANDS = ("forms", "pi0", "cayley", "dl", "packet-compare", "oracle")
KEYS = (
    "name",
    "description",
    "rank",
    "simple_roots",
    "simple_coroots",
    "theta",
    "noncompact_imaginary",
    "lambda",
    "delta_phi",
    "J_overlattice",
    "zeta",
    "denominator_bound",
)


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class InputDocument:
    rank: int
    theta: tuple[tuple[int, ...], ...]
    simple_roots: tuple[tuple[int, ...], ...] | None = None
    simple_coroots: tuple[tuple[int, ...], ...] | None = None
    noncompact_imaginary: tuple[int, ...] = ()
    lam: tuple[Fraction, ...] | None = None
    delta_phi: tuple[int, ...] = ()
    J_overlattice: tuple[tuple[Fraction, ...], ...] | None = None
    zeta: tuple[tuple[int, ...], ...] | None = None
    denominator_bound: int | None = None
    name: str | None = field(default=None, compare=False)
    description: str | None = field(default=None, compare=False)

    @property
    def torus_mode(self) -> bool:
        return self.simple_roots is None

    def torus(self) -> TorusWithInvolution:
        return TorusWithInvolution(self.theta)

    def overlattice(self) -> RationalLattice | None:
        if self.J_overlattice is None:
            return None
        return RationalLattice.from_generators(list(self.J_overlattice) + [list(r) for r in _eye(self.rank)], self.rank)

    def parameter(self) -> DualParameter:
        if self.torus_mode:
            raise InputError("this command needs simple_roots and simple_coroots")
        d = BasedRootDatum(self.rank, self.simple_roots, self.simple_coroots)
        state = InvolutionState(d, self.theta, frozenset(self.noncompact_imaginary))
        lam = RationalVector.from_fractions(self.lam) if self.lam is not None else RationalVector.zero(self.rank)
        return DualParameter(state, lam, self.delta_phi, self.overlattice(), self.zeta)


def _eye(n: int):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _line_of(text: str, key: str) -> int:
    for i, line in enumerate(text.splitlines(), 1):
        if f'"{key}"' in line:
            return i
    return 1


def _int_matrix(value, key: str, n: int, rows: int | None = None) -> tuple[tuple[int, ...], ...]:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise InputError(f"{key}: expected a list of integer rows")
    if rows is not None and len(value) != rows:
        raise InputError(f"{key}: expected {rows} rows, got {len(value)}")
    for r in value:
        if len(r) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise InputError(f"{key}: every row must hold {n} integers")
    return tuple(tuple(r) for r in value)


def _rational(value, key: str, n: int) -> tuple[Fraction, ...]:
    if not isinstance(value, dict) or set(value) != {"num", "den"}:
        raise InputError(f'{key}: expected {{"num": [...], "den": k}}')
    num, den = value["num"], value["den"]
    if not isinstance(den, int) or isinstance(den, bool) or den <= 0:
        raise InputError(f"{key}: den must be a positive integer")
    if not isinstance(num, list) or len(num) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in num):
        raise InputError(f"{key}: num must hold {n} integers")
    return tuple(Fraction(x, den) for x in num)


def _indices(value, key: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in value):
        raise InputError(f"{key}: expected a list of root indices")
    return tuple(value)


def _parse_object(obj: dict) -> InputDocument:
    unknown = sorted(set(obj) - set(KEYS))
    if unknown:
        raise InputError(f"{unknown[0]}: unknown key")
    if "rank" not in obj:
        raise InputError("rank: missing")
    n = obj["rank"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError("rank: expected a non-negative integer")
    if "theta" not in obj:
        raise InputError("theta: missing")
    theta = _int_matrix(obj["theta"], "theta", n, n)
    has_sr, has_sc = "simple_roots" in obj, "simple_coroots" in obj
    if has_sr != has_sc:
        present, missing = ("simple_roots", "simple_coroots") if has_sr else ("simple_coroots", "simple_roots")
        raise InputError(f"{present}: {missing} is required as well")
    sr = sc = None
    if has_sr:
        sr = _int_matrix(obj["simple_roots"], "simple_roots", n)
        sc = _int_matrix(obj["simple_coroots"], "simple_coroots", n, len(sr))
    else:
        for key in ("noncompact_imaginary", "lambda", "delta_phi", "zeta"):
            if key in obj:
                raise InputError(f"{key}: only allowed together with simple_roots")
    jl = None
    if "J_overlattice" in obj:
        rows = obj["J_overlattice"]
        if not isinstance(rows, list):
            raise InputError("J_overlattice: expected a list of rational rows")
        jl = tuple(_rational(r, "J_overlattice", n) for r in rows)
    bound = obj.get("denominator_bound")
    if bound is not None and (not isinstance(bound, int) or isinstance(bound, bool) or bound < 1):
        raise InputError("denominator_bound: expected a positive integer")
    name, desc = obj.get("name"), obj.get("description")
    for key, val in (("name", name), ("description", desc)):
        if val is not None and not isinstance(val, str):
            raise InputError(f"{key}: expected a string")
    return InputDocument(
        rank=n,
        theta=theta,
        simple_roots=sr,
        simple_coroots=sc,
        noncompact_imaginary=_indices(obj.get("noncompact_imaginary", []), "noncompact_imaginary"),
        lam=_rational(obj["lambda"], "lambda", n) if "lambda" in obj else None,
        delta_phi=_indices(obj.get("delta_phi", []), "delta_phi"),
        J_overlattice=jl,
        zeta=_int_matrix(obj["zeta"], "zeta", n, n) if "zeta" in obj else None,
        denominator_bound=bound,
        name=name,
        description=desc,
    )


def parse_input(text: str) -> InputDocument:
    """Parse and schema-check a document; errors carry the line of the offending key."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}: malformed JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise InputError("line 1: the document must be a JSON object")
    try:
        return _parse_object(obj)
    except InputError as exc:
        key = str(exc).split(":", 1)[0]
        raise InputError(f"line {_line_of(text, key)}: {exc}") from None


def _rational_json(v) -> dict:
    if isinstance(v, RationalVector):
        v = v.entries
    den = lcm(1, *(Fraction(x).denominator for x in v))
    return {"num": [int(Fraction(x) * den) for x in v], "den": den}


def serialize(doc: InputDocument) -> dict:
    out: dict[str, Any] = {}
    if doc.name is not None:
        out["name"] = doc.name
    if doc.description is not None:
        out["description"] = doc.description
    out["rank"] = doc.rank
    if doc.simple_roots is not None:
        out["simple_roots"] = [list(r) for r in doc.simple_roots]
        out["simple_coroots"] = [list(r) for r in doc.simple_coroots]
    out["theta"] = [list(r) for r in doc.theta]
    if not doc.torus_mode:
        out["noncompact_imaginary"] = list(doc.noncompact_imaginary)
        if doc.lam is not None:
            out["lambda"] = _rational_json(doc.lam)
        out["delta_phi"] = list(doc.delta_phi)
    if doc.J_overlattice is not None:
        out["J_overlattice"] = [_rational_json(r) for r in doc.J_overlattice]
    if doc.zeta is not None:
        out["zeta"] = [list(r) for r in doc.zeta]
    if doc.denominator_bound is not None:
        out["denominator_bound"] = doc.denominator_bound
    return out


def fixture_names() -> list[str]:
    base = resources.files("realforms") / "fixtures"
    return sorted(p.name[:-5] for p in base.iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    return (resources.files("realforms") / "fixtures" / f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str) -> InputDocument:
    return parse_input(fixture_text(name))


# ---------------------------------------------------------------------------
# commands


def _group_json(g: FinAbGroup) -> dict:
    return {"invariant_factors": list(g.invariant_factors), "order": g.order, "name": str(g)}


def _cmd_forms(doc: InputDocument, args) -> dict:
    T = doc.torus()
    L = doc.overlattice()
    pure = pure_real_forms(T)
    q = antifixed_quotient(T)
    classes = [_rational_json(q.representative(e)) for e in q.group.elements()]
    rep = {"pure": _group_json(pure), "pure_representatives": classes, "verdict": "pass"}
    if L is not None:
        rep["type_J"] = _group_json(type_J_forms(T, L))
    return rep


def _cmd_pi0(doc: InputDocument, args) -> dict:
    T = doc.torus()
    comps = pi0_fixed(TorusWithInvolution(transpose(T.sigma)))
    rep = {"pi0": _group_json(comps.group), "verdict": "pass"}
    L = doc.overlattice()
    if L is not None:
        cov = cover_component_group(T, transpose(T.sigma), L)
        rep["pi0_cover"] = _group_json(cov.components.group)
        rep["pairing_perfect"] = cov.is_perfect()
        rep["verdict"] = "pass" if rep["pairing_perfect"] else "fail"
    return rep


def _state_json(state: InvolutionState) -> dict:
    d = state.datum
    kinds = []
    for i in range(d.num_positive):
        k = state.classify(i)
        if k == "imaginary":
            k += "-noncompact" if i in state.noncompact else "-compact"
        kinds.append({"root": i, "vector": list(d.roots[i]), "kind": k})
    return {"theta": [list(r) for r in state.theta], "positive_roots": kinds}


def _steps_json(steps) -> list:
    return [{"root": s.root, "kind": s.kind} for s in steps]


def _cmd_cayley(doc: InputDocument, args) -> dict:
    p = doc.parameter()
    sh = shelstad_transform(p)
    chain = maximally_split_chain(p, sh.state)
    return {
        "start": _state_json(p.state),
        "shelstad_chain": _steps_json(sh.chain.steps),
        "shelstad": _state_json(sh.state),
        "split_chain": _steps_json(chain.steps),
        "split": _state_json(chain.final),
        "verdict": "pass",
    }


def _cmd_dl(doc: InputDocument, args) -> dict:
    p = doc.parameter()
    validate_parameter(p)
    levi = build_dL(p)
    d = p.datum
    return {
        "dL_positive_roots": [i for i in levi if i < d.num_positive],
        "delta_phi": list(p.delta_phi),
        "tempered": p.is_tempered,
        "verdict": "pass",
    }


def _index_json(index) -> dict | None:
    if index is None:
        return None
    return {
        "group": _group_json(index.components.group),
        "quotient": _group_json(index.quotient.quotient),
        "generators": list(index.generators),
        "generator_classes": [list(c) for c in index.generator_classes],
    }


def report_from_comparison(r) -> dict:
    rows = []
    for row in r.rows:
        rows.append(
            {
                "index": row.index,
                "tau_kls": list(row.tau_kls),
                "tau_abv": list(row.tau_abv),
                "lambda1": None if row.lam1 is None else _rational_json(row.lam1),
                "same_class": row.same_class,
                "orthogonal": row.orthogonal,
                "reflection_fixed": row.reflection_fixed,
                "samedelta": "pass" if row.passed else "fail",
            }
        )
    return {
        "group_two": _index_json(r.two),
        "group_one": _index_json(r.one),
        "shelstad_chain": _steps_json(r.shelstad_steps),
        "chain": _steps_json(r.chain),
        "rows": rows,
        "isomorphism": r.isomorphism_ok,
        "messages": list(r.messages),
        "verdict": "pass" if r.passed else "fail",
    }


def _cmd_compare(doc: InputDocument, args) -> dict:
    p = doc.parameter()
    choose = lowest_index
    if args.seed is not None:
        rng = random.Random(args.seed)
        choose = lambda cands: rng.choice(sorted(cands))  # noqa: E731
    return report_from_comparison(compare_packets(p, choose))


def _bound(doc: InputDocument, args, fallback: int) -> int:
    if args.denominator_bound is not None:
        return args.denominator_bound
    if doc.denominator_bound is not None:
        return doc.denominator_bound
    return fallback


def _cmd_oracle(doc: InputDocument, args) -> dict:
    if doc.torus_mode:
        # forms are dual to the components of the dual (cover) torus
        T = doc.torus()
        L = doc.overlattice()
        N = _bound(doc, args, 4)
        theta_y = transpose(T.sigma)
        checks = []
        brute = brute_component_group(theta_y, N)
        exact = pure_real_forms(T)
        checks.append({"check": "pure", "brute": str(brute), "exact": str(exact), "ok": brute == exact})
        if L is not None:
            e = lcm(1, *(x.denominator for r in L.basis for x in r))
            brute = brute_component_group(theta_y, lcm(N, 2 * e), L)
            exact = type_J_forms(T, L)
            checks.append({"check": "type_J", "brute": str(brute), "exact": str(exact), "ok": brute == exact})
        return {"bound": N, "certificates": checks, "verdict": "pass" if all(c["ok"] for c in checks) else "fail"}
    p = doc.parameter()
    validate_parameter(p)
    N = _bound(doc, args, default_bound(p))
    certs = verify_fixture_lemmas(p, N) + [verify_diagram(p, N)]
    return {
        "bound": N,
        "certificates": [c.summary() for c in certs],
        "verdict": "pass" if all(c.passed for c in certs) else "fail",
    }


HANDLERS = {
    "forms": _cmd_forms,
    "pi0": _cmd_pi0,
    "cayley": _cmd_cayley,
    "dl": _cmd_dl,
    "packet-compare": _cmd_compare,
    "oracle": _cmd_oracle,
}


def run_command(name: str, doc: InputDocument, args: argparse.Namespace | None = None) -> dict:
    if name not in HANDLERS:
        raise InputError(f"unknown command {name!r}")
    args = args if args is not None else argparse.Namespace(seed=None, denominator_bound=None)
    report = {"command": name, "parameter": serialize(doc)}
    if args.seed is not None:
        report["seed"] = args.seed
    report.update(HANDLERS[name](doc, args))
    return report


# ---------------------------------------------------------------------------
# rendering


def _render(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if cmd == "forms":
        lines.append(f"pure: {report['pure']['name']}")
        if "type_J" in report:
            lines.append(f"type-J: {report['type_J']['name']}")
    elif cmd == "pi0":
        lines.append(f"pi0: {report['pi0']['name']}")
        if "pi0_cover" in report:
            lines.append(f"pi0 (cover): {report['pi0_cover']['name']}")
            lines.append(f"pairing perfect: {report['pairing_perfect']}")
    elif cmd == "cayley":
        for key in ("start", "shelstad", "split"):
            st = report[key]
            lines.append(f"{key}: theta={st['theta']}")
            for r in st["positive_roots"]:
                lines.append(f"  root {r['root']} {r['vector']}: {r['kind']}")
            if key != "split":
                chain = report["shelstad_chain" if key == "start" else "split_chain"]
                lines.append(f"  cayley through {[s['root'] for s in chain]}")
    elif cmd == "dl":
        lines.append(f"dL positive roots: {report['dL_positive_roots']}")
        lines.append(f"delta_phi: {report['delta_phi']}")
        lines.append(f"tempered: {report['tempered']}")
    elif cmd == "packet-compare":
        for key, label in (("group_two", "Shelstad side"), ("group_one", "split side")):
            g = report[key]
            if g is not None:
                lines.append(
                    f"{label}: {g['group']['name']} / gens {g['generators']} = {g['quotient']['name']}"
                )
        lines.append(f"chain: {[s['root'] for s in report['chain']]}")
        for row in report["rows"]:
            lam = row["lambda1"]
            lam_s = "none" if lam is None else f"{lam['num']}/{lam['den']}"
            lines.append(
                f"  tau {row['index']}: {row['tau_kls']} -> {row['tau_abv']} lambda1={lam_s} {row['samedelta']}"
            )
        lines.extend(f"  note: {m}" for m in report["messages"])
    elif cmd == "oracle":
        lines.append(f"denominator bound: {report['bound']}")
        for c in report["certificates"]:
            if isinstance(c, dict):
                lines.append(f"  {c['check']}: brute {c['brute']} exact {c['exact']} {'ok' if c['ok'] else 'FAIL'}")
            else:
                lines.append(f"  {c}")
    lines.append(f"verdict: {report['verdict']}")
    return "\n".join(lines)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        if path in fixture_names():
            return fixture_text(path)
        raise InputError(f"no such file or fixture: {path}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="realforms", description="Real forms, component groups and packet comparison.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON document, '-' for stdin, or a fixture name")
    ap.add_argument("--json", action="store_true", help="emit the report as JSON")
    ap.add_argument("--denominator-bound", type=int, default=None, help="oracle denominator bound")
    ap.add_argument("--seed", type=int, default=None, help="randomize root choices in the split chain")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        doc = parse_input(_read(args.input))
        report = run_command(args.command, doc, args)
    except (InputError, ParameterError, RootDatumError, TorusError, LatticeError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PacketInconsistency as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_render(report))
        print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0 if report["verdict"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
