"""Command-line front end.  Every verb prints one JSON object.

Exit codes: 0 success, 1 domain error ({"error": ...}), 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import fibers, incoherent, lattices, mass, quadratic
from .arith import as_place, as_rational, fmt_rational, hilbert_symbol
from .errors import DomainError
from .hermitian import (HermGlobalInvariants, HermSpace, ImagQuadField, herm_global_exists,
                        herm_global_invariants, herm_local_class, realize_herm)

VERBS = ("symbol", "classify", "isomorphic", "exists", "realize", "incoherent-validate",
         "neighbor", "restrict", "lattice-maximal", "lattice-disc", "fiber", "mass",
         "dv-check", "batch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _payload(text: str):
    """Inline JSON, or @path to a JSON file."""
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


_NEG_VALUE = re.compile(r"^-\d+(/\d+)?$")


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Attach values such as -1/12 to the option before them, so argparse
    does not mistake them for flags."""
    out: list[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if _NEG_VALUE.match(tok) and prev.startswith("-") and "=" not in prev \
                and not _NEG_VALUE.match(prev):
            out[-1] = f"{prev}={tok}" if prev.startswith("--") else prev + tok
        else:
            out.append(tok)
    return out


def _build_parser() -> _Parser:
    ap = _Parser(prog="localglobal", description=__doc__)
    ap.add_argument("--precision", type=int, default=None,
                    help=f"p-adic precision for fiber computations (default {fibers.DEFAULT_FIBER_PRECISION})")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("symbol", help="Hilbert symbol (a, b)_v")
    s.add_argument("-a", required=True)
    s.add_argument("-b", required=True)
    s.add_argument("-v", required=True, help="prime or inf")

    s = sub.add_parser("classify", help="invariants of a diagonal space")
    s.add_argument("--space", required=True, help='{"coeffs": [...]} (add "m" for Hermitian)')
    s.add_argument("--at", help="report local invariants at this place")

    s = sub.add_parser("isomorphic", help="compare two diagonal quadratic spaces")
    s.add_argument("--space", required=True)
    s.add_argument("--other", required=True)
    s.add_argument("--at", help="compare only at this place")

    s = sub.add_parser("exists", help="is there a global space with these invariants?")
    s.add_argument("--invariants", required=True)

    s = sub.add_parser("realize", help="a diagonal space with these invariants")
    s.add_argument("--invariants", required=True)

    s = sub.add_parser("incoherent-validate", help="check incoherent definite data")
    s.add_argument("--data", required=True)

    s = sub.add_parser("neighbor", help="the neighbor V(v) of incoherent data")
    s.add_argument("--data", required=True)
    s.add_argument("--at", required=True)

    s = sub.add_parser("restrict", help="codimension-one data with complement <a>")
    s.add_argument("--data", required=True)
    s.add_argument("-a", required=True)
    s.add_argument("--rank2", action="store_true",
                   help="for 3-dimensional orthogonal data, return the plane as Hermitian data")

    s = sub.add_parser("lattice-maximal", help="maximal Z_p-lattice in a local space")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--det", default="1")
    s.add_argument("--eps", type=int, default=1, help="Hasse-Witt invariant (norm class if Hermitian)")
    s.add_argument("--herm-m", type=int, help="Hermitian over Q(sqrt(-m))")

    s = sub.add_parser("lattice-disc", help="discriminant group of a lattice")
    s.add_argument("--lattice", required=True, help='{"p": p, "gram": [[...]]} (add "m" for Hermitian)')

    s = sub.add_parser("fiber", help="a point of the fiber over the base lattice")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--det", default="1")
    s.add_argument("--herm-m", type=int, help="Hermitian over Q(sqrt(-m))")
    s.add_argument("--orientation", type=int, default=1)
    s.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                   help="same as the global --precision")
    s.add_argument("--param", required=True,
                   help='list of [x, y] pairs for x + y*sqrt(D), or {"entries": [...]}')

    s = sub.add_parser("mass", help="mass from the Euler characteristic of a neighbor")
    s.add_argument("--family", required=True, choices=mass.FAMILIES)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--chi", required=True)

    s = sub.add_parser("dv-check", help="the Drinfeld-Vladut style inequality")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--g", type=int, required=True)

    s = sub.add_parser("batch", help="run newline-delimited JSON commands")
    s.add_argument("--file", help="read commands from this file instead of stdin")
    return ap


# ------------------------------------------------------------------ verbs

def _is_herm(obj) -> bool:
    return isinstance(obj, dict) and "m" in obj


def _symbol(a):
    return {"symbol": hilbert_symbol(as_rational(a.a), as_rational(a.b), as_place(a.v))}


def _classify(a):
    obj = _payload(a.space)
    if _is_herm(obj):
        phi = HermSpace.from_json(obj)
        if a.at:
            return {"place": str(as_place(a.at)), "local_class": herm_local_class(phi, a.at)}
        return {"invariants": herm_global_invariants(phi).to_json()}
    V = quadratic.QuadSpaceQ.from_json(obj)
    if a.at:
        return {"place": str(as_place(a.at)),
                "invariants": quadratic.local_invariants(V, a.at).to_json()}
    return {"invariants": quadratic.global_invariants(V).to_json()}


def _isomorphic(a):
    V = quadratic.QuadSpaceQ.from_json(_payload(a.space))
    W = quadratic.QuadSpaceQ.from_json(_payload(a.other))
    if a.at:
        return {"isomorphic": quadratic.locally_isomorphic(V, W, a.at)}
    return {"isomorphic": quadratic.isometric(V, W)}


def _exists(a):
    obj = _payload(a.invariants)
    if _is_herm(obj):
        return {"exists": herm_global_exists(HermGlobalInvariants.from_json(obj))}
    return {"exists": quadratic.global_exists(quadratic.GlobalQuadInvariants.from_json(obj))}


def _realize(a):
    obj = _payload(a.invariants)
    if _is_herm(obj):
        return {"space": realize_herm(HermGlobalInvariants.from_json(obj)).to_json()}
    return {"space": quadratic.realize_global(quadratic.GlobalQuadInvariants.from_json(obj)).to_json()}


def _load_data(obj):
    if _is_herm(obj):
        return incoherent.IncoherentHermData.from_json(obj)
    return incoherent.IncoherentOrthData.from_json(obj)


def _validate(a):
    data = _load_data(_payload(a.data))
    report = (incoherent.validate_herm(data) if isinstance(data, incoherent.IncoherentHermData)
              else incoherent.validate_orth(data))
    return {"valid": report is None, "violation": report}


def _neighbor(a):
    data = _load_data(_payload(a.data))
    if isinstance(data, incoherent.IncoherentHermData):
        inv, space = incoherent.neighbor_herm(data, a.at)
    else:
        inv, space = incoherent.neighbor_orth(data, a.at)
    return {"invariants": inv.to_json(), "space": space.to_json()}


def _restrict(a):
    data = _load_data(_payload(a.data))
    if isinstance(data, incoherent.IncoherentHermData):
        return {"data": incoherent.restrict_herm(data, a.a).to_json()}
    if a.rank2:
        return {"data": incoherent.restrict_orth_rank2(data, a.a).to_json()}
    return {"data": incoherent.restrict_orth(data, a.a).to_json()}


def _orth_disc(L: lattices.OrthLatticeZp) -> dict:
    try:
        maximal = lattices.is_maximal(L)
    except DomainError:
        maximal = None
    return {"discriminant": lattices.dual_quotient(L).to_json(),
            "selfdual": lattices.is_selfdual(L), "maximal": maximal}


def _herm_disc(L: lattices.HermLatticeZp) -> dict:
    divisors, length = lattices.herm_dual_quotient(L)
    return {"divisors": list(divisors), "length": length, "selfdual": not divisors}


def _lattice_maximal(a):
    if a.herm_m is not None:
        L = lattices.herm_maximal_lattice(ImagQuadField(a.herm_m), a.n, a.eps, a.p)
        return {"lattice": L.to_json(), **_herm_disc(L)}
    L = lattices.maximal_lattice(a.n, as_rational(a.det), a.eps, a.p)
    return {"lattice": L.to_json(), **_orth_disc(L)}


def _lattice_disc(a):
    obj = _payload(a.lattice)
    if _is_herm(obj):
        L = lattices.HermLatticeZp(int(obj["p"]), ImagQuadField(int(obj["m"])),
                                   tuple(tuple(tuple(e) for e in r) for r in obj["gram"]))
        return _herm_disc(L)
    return _orth_disc(lattices.OrthLatticeZp.from_json(obj))


def _fiber(a):
    m = a.precision or fibers.DEFAULT_FIBER_PRECISION
    obj = _payload(a.param)
    if a.herm_m is not None:
        K = ImagQuadField(a.herm_m)
        base = fibers.base_point_herm(K, a.n, a.p)
    else:
        base = fibers.base_point(a.n, as_rational(a.det), -1, a.p, a.orientation)
    if isinstance(obj, dict):
        t = fibers.FiberParameter.from_json(obj)
    else:
        t = fibers.FiberParameter.from_pairs([tuple(e) for e in obj], a.p, m, base.D)
    point = (fibers.fiber_point_herm(base, t) if base.kind == "herm"
             else fibers.fiber_point(base, t))
    return {"base": base.to_json(), "filtration_level": fibers.filtration_level(t),
            **point.to_json()}


def _mass(a):
    fam = mass.MassFamily(a.family, a.n, a.q)
    return {"mass": fmt_rational(mass.mass_from_chi(fam, a.chi))}


def _dv(a):
    return {"holds": mass.dv_check(a.q, a.count, a.g)}


HANDLERS = {"symbol": _symbol, "classify": _classify, "isomorphic": _isomorphic,
            "exists": _exists, "realize": _realize, "incoherent-validate": _validate,
            "neighbor": _neighbor, "restrict": _restrict, "lattice-maximal": _lattice_maximal,
            "lattice-disc": _lattice_disc, "fiber": _fiber, "mass": _mass, "dv-check": _dv}


def run(argv: list[str]) -> tuple[int, dict]:
    """Execute one command; returns (exit code, JSON-ready result)."""
    try:
        args = _build_parser().parse_args(_merge_negative_values(list(argv)))
        if args.verb == "batch":
            raise UsageError("batch cannot be nested")
        return 0, HANDLERS[args.verb](args)
    except DomainError as exc:
        return 1, {"error": str(exc)}
    except UsageError as exc:
        return 2, {"error": str(exc)}
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return 2, {"error": f"malformed input: {exc!r}"}


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _batch(lines) -> int:
    worst = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            cmd = json.loads(line)
            if isinstance(cmd, dict):
                cmd = [cmd["verb"], *cmd.get("args", [])]
            if not isinstance(cmd, list) or not all(isinstance(x, str) for x in cmd):
                raise ValueError("a command is a list of strings or {verb, args}")
            code, out = run(cmd)
        except (ValueError, KeyError) as exc:
            code, out = 2, {"error": f"malformed batch line: {exc}"}
        print(_dump(out))
        worst = max(worst, code)
    return worst


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] == "batch":
        try:
            args = _build_parser().parse_args(argv)
        except UsageError as exc:
            print(_dump({"error": str(exc)}))
            return 2
        if args.file:
            with open(args.file) as fh:
                return _batch(fh.readlines())
        return _batch(sys.stdin)
    try:
        code, out = run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    print(_dump(out))
    if code == 2:
        print(_build_parser().format_usage(), file=sys.stderr, end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
