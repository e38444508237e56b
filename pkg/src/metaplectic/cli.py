"""Command-line interface.

Subcommands: hilbert, cover, satake, aset, weights, classify, oracle,
selftest.  Output is JSON (sorted keys, byte-stable for a fixed config
and seed) validated against the schemas below before printing; classify
can also emit CSV.  Exit codes: 0 success, 1 verification mismatch,
2 usage or schema error.

Parameters come from flags first, then an optional key=value config
file, then defaults (p=3, f=1, n=2, N=2(p-1), depth=4, seed=0).
Environment variables are not consulted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import jsonschema

from . import classify, cover, hecke, oracle, selftest, weights
from .characters import GenuineTorusCharacter, SmoothCharacterFx
from .cover import LocalFieldDescriptor, SquareClass
from .rootdata import Character, Cocharacter, ParabolicSubset, coroot, pairing

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 3
    f: int = 1
    n: int = 2
    N: int = 0  # 0 means "derive as 2(q-1)"
    depth: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.N == 0:
            self.N = 2 * (self.p**self.f - 1)
        field = LocalFieldDescriptor(self.p, self.f)  # validates p odd prime
        if self.N % 2 != 0:
            raise UsageError("N must be even")
        if self.N % self.p == 0:
            raise UsageError("N must be coprime to p")
        if self.depth < 1:
            raise UsageError("depth must be >= 1")
        if self.n < 1:
            raise UsageError("n must be >= 1")
        self.field = field

    @property
    def q(self) -> int:
        return self.p**self.f


_CONFIG_KEYS = ("p", "f", "n", "N", "depth", "seed")


def load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = int(value)
    return out


def resolve_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return RunConfig(**values)


# ---------------------------------------------------------------------
# output schemas

_TERMS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "mu": {"type": "array", "items": {"type": "integer"}},
            "c": {"type": "integer"},
        },
        "required": ["mu", "c"],
        "additionalProperties": False,
    },
}

_TRIPLE = {
    "type": "object",
    "properties": {
        "P": {"type": "array", "items": {"type": "integer"}},
        "Q": {"type": "array", "items": {"type": "integer"}},
        "sigma": {
            "type": "object",
            "properties": {
                "levi": {"type": "array", "items": {"type": "integer"}},
                "flags": {"type": "object"},
                "label": {"type": "string"},
                "torus_character": {"type": ["object", "null"]},
            },
            "required": ["levi", "flags", "label"],
        },
    },
    "required": ["P", "Q", "sigma"],
}

SCHEMAS = {
    "hilbert": {
        "type": "object",
        "properties": {
            "x": {"enum": ["1", "u", "pi", "upi"]},
            "y": {"enum": ["1", "u", "pi", "upi"]},
            "p": {"type": "integer"},
            "f": {"type": "integer"},
            "symbol": {"enum": [1, -1]},
            "verified": {"type": "boolean"},
        },
        "required": ["x", "y", "p", "f", "symbol"],
        "additionalProperties": False,
    },
    "cover": {
        "type": "object",
        "properties": {
            "n": {"type": "integer"},
            "Q_coroots": {"type": "array", "items": {"type": "integer"}},
            "B_lambda_basis": {"type": "array"},
            "B_with_similitude": {"type": "array", "items": {"type": "integer"}},
            "splits_over_Mprime": {"type": "object"},
        },
        "required": ["n", "Q_coroots", "splits_over_Mprime"],
        "additionalProperties": False,
    },
    "satake": {
        "type": "object",
        "properties": {
            "i": {"type": "integer"},
            "n": {"type": "integer"},
            "p": {"type": "integer"},
            "terms": _TERMS,
            "oracle": {"enum": ["agree", "disagree"]},
        },
        "required": ["i", "n", "p", "terms"],
        "additionalProperties": False,
    },
    "aset": {
        "type": "object",
        "properties": {
            "base": {"type": "array", "items": {"type": "integer"}},
            "i": {"type": "integer"},
            "n": {"type": "integer"},
            "elements": {"type": "array"},
            "fibers": {"type": "array"},
        },
        "required": ["base", "n", "elements"],
        "additionalProperties": False,
    },
    "weights": {
        "type": "object",
        "properties": {
            "nu": {"type": "array", "items": {"type": "integer"}},
            "q": {"type": "integer"},
            "levi": {"type": ["array", "null"]},
            "pi_nu": {"type": "array", "items": {"type": "integer"}},
            "M_regular": {"type": ["boolean", "null"]},
            "companion": {"type": ["object", "null"]},
        },
        "required": ["nu", "q", "pi_nu"],
        "additionalProperties": False,
    },
    "classify": {
        "type": "object",
        "properties": {
            "n": {"type": "integer"},
            "triples": {"type": "array", "items": _TRIPLE},
            "length": {"type": "integer"},
            "irreducible": {"type": "boolean"},
            "injectivity_clean": {"type": "boolean"},
            "merged": {"type": "array"},
        },
        "required": ["n", "triples"],
        "additionalProperties": False,
    },
    "oracle": {
        "type": "object",
        "properties": {
            "group": {"enum": ["sl2", "sp4"]},
            "i": {"type": "integer"},
            "p": {"type": "integer"},
            "depth": {"type": "integer"},
            "target": {"type": "array", "items": {"type": "integer"}},
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "mu": {"type": "array", "items": {"type": "integer"}},
                        "raw": {"type": "integer"},
                        "mod_p": {"type": "integer"},
                        "stabilized": {"type": "boolean"},
                    },
                    "required": ["mu", "raw", "mod_p"],
                    "additionalProperties": False,
                },
            },
        },
        "required": ["group", "i", "p", "depth", "target", "rows"],
        "additionalProperties": False,
    },
    "selftest": {
        "type": "object",
        "properties": {
            "criteria": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "number": {"type": "integer"},
                        "name": {"type": "string"},
                        "pass": {"type": "boolean"},
                        "detail": {"type": "string"},
                        "skipped_parts": {"type": "string"},
                    },
                    "required": ["number", "name", "pass"],
                    "additionalProperties": False,
                },
            },
            "all_pass": {"type": "boolean"},
        },
        "required": ["criteria", "all_pass"],
        "additionalProperties": False,
    },
}


def emit(payload: dict, schema: str) -> None:
    try:
        jsonschema.validate(payload, SCHEMAS[schema])
    except jsonschema.ValidationError as err:
        raise UsageError(f"output failed its schema: {err.message}")
    print(json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1))


def _element_terms(h) -> list[dict]:
    return [{"mu": list(mu), "c": c} for mu, c in h.terms()]


# ---------------------------------------------------------------------
# subcommands


def _require_json(args):
    if getattr(args, "emit", "json") != "json":
        raise UsageError("CSV output is only offered for the classification table")


def cmd_hilbert(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    x = SquareClass.from_name(args.x)
    y = SquareClass.from_name(args.y)
    symbol = cover.hilbert(x, y, config.field)
    payload = {
        "x": x.name,
        "y": y.name,
        "p": config.p,
        "f": config.f,
        "symbol": symbol,
    }
    if args.verify:
        check = cover.hilbert_solvable(x, y, config.field)
        payload["verified"] = check == symbol
    emit(payload, "hilbert")
    if args.verify and not payload["verified"]:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_cover(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    n = config.n
    basis = [Cocharacter(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)]
    similitude = Cocharacter(tuple(0 for _ in range(n)), gsp=1)
    payload = {
        "n": n,
        "Q_coroots": [cover.eval_Q(coroot(i, n)) for i in range(1, n + 1)],
        "B_lambda_basis": [
            [cover.eval_B(a, b) for b in basis] for a in basis
        ],
        "B_with_similitude": [cover.eval_B(a, similitude) for a in basis],
        "splits_over_Mprime": {
            str(i): cover.splits_over_Mprime(i, n) for i in range(1, n + 1)
        },
    }
    emit(payload, "cover")
    return EXIT_OK


def cmd_satake(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    if not 1 <= args.i <= config.n:
        raise UsageError(f"i must lie in 1..{config.n}")
    element = hecke.metaplectic_satake_T2lambda(args.i, config.n, config.p)
    payload = {
        "i": args.i,
        "n": config.n,
        "p": config.p,
        "terms": _element_terms(element),
    }
    mismatch = False
    if args.oracle:
        if config.n > 2 or config.f != 1:
            raise UsageError("the oracle runs at n <= 2, f = 1")
        agree = oracle.verify_metaplectic_pipeline(
            args.i, config.n, config.p, config.depth
        )
        payload["oracle"] = "agree" if agree else "disagree"
        mismatch = not agree
    emit(payload, "satake")
    return EXIT_MISMATCH if mismatch else EXIT_OK


def cmd_aset(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    n = config.n
    if args.lam:
        base = Cocharacter(_parse_ints(args.lam, n))
        i = None
    else:
        if not 1 <= args.i <= n:
            raise UsageError(f"i must lie in 1..{n}")
        base = hecke.t2lambda_base(args.i, n)
        i = args.i
    A = hecke.enumerate_A(base)
    payload = {
        "base": list(base.coords),
        "n": n,
        "elements": [list(a) for a in A.sorted_elements()],
    }
    if i is not None:
        payload["i"] = i
        fibers = []
        for fib in hecke.distinct_fibers(A, i):
            rep = min(fib)
            res = hecke.A_fiber(A, rep, i)
            fibers.append(
                {
                    "fiber": [list(b) for b in sorted(fib)],
                    "conforms": res.conforms,
                }
            )
        payload["fibers"] = fibers
    emit(payload, "aset")
    return EXIT_OK


def cmd_weights(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    n = config.n
    nu = Character(_parse_ints(args.nu, n))
    w = weights.QRestrictedWeight(nu, args.q or config.q)
    payload = {
        "nu": list(nu.coords),
        "q": w.q,
        "pi_nu": sorted(weights.pi_nu(w).roots),
    }
    if args.levi is not None:
        J = ParabolicSubset(n, frozenset(_parse_ints(args.levi, None)))
        payload["levi"] = sorted(J.roots)
        payload["M_regular"] = weights.is_M_regular(w, J)
    if args.i is not None:
        w2 = weights.change_of_weight_pair(w, args.i)
        payload["companion"] = {
            "nu": list(w2.nu.coords),
            "pairings": [pairing(w2.nu, coroot(k, n)) for k in range(1, n + 1)],
            "same_class_as_nu": weights.same_weight_class(w, w2),
        }
    emit(payload, "weights")
    return EXIT_OK


def _parse_ints(text: str, n) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}")
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} integers, got {len(vals)}")
    return vals


def _parse_torus_character(data: dict, config: RunConfig) -> GenuineTorusCharacter:
    xi = []
    for pair in data["xi"]:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise UsageError("xi entries are [unit_exp, pi_val] pairs")
        xi.append(SmoothCharacterFx(config.q, config.N, int(pair[0]), int(pair[1])))
    psi = SquareClass.from_name(data.get("psi_class", "1"))
    return GenuineTorusCharacter(tuple(xi), psi)


def _triple_payload(t: classify.SupersingularTriple) -> dict:
    sigma = {
        "levi": sorted(t.sigma.levi.roots),
        "flags": {str(k): v for k, v in sorted(t.sigma.flags.items())},
        "label": t.sigma.label,
    }
    if t.sigma.torus_character is not None:
        tc = t.sigma.torus_character
        sigma["torus_character"] = {
            "xi": [[x.unit_exp, x.pi_exp] for x in tc.xi],
            "psi_class": tc.psi_class.name,
        }
    return {"P": sorted(t.P.roots), "Q": sorted(t.Q.roots), "sigma": sigma}


def cmd_classify(args) -> int:
    config = resolve_config(args)
    n = config.n
    if args.input == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.input) as fh:
            data = json.load(fh)
    if not isinstance(data, dict):
        raise UsageError("classify input must be a JSON object")
    payload = {"n": n}
    if args.siegel:
        for key in ("P", "flags", "Q"):
            if key not in data:
                raise UsageError(f"siegel input needs {key!r}")
        P = ParabolicSubset(n, frozenset(int(x) for x in data["P"]))
        Q = ParabolicSubset(n, frozenset(int(x) for x in data["Q"]))
        flags = {int(k): bool(v) for k, v in data["flags"].items()}
        triple = classify.siegel_lift(
            P, flags, Q, n, label=data.get("label", "rho")
        )
        payload["triples"] = [_triple_payload(triple)]
    elif "xi" in data:
        sigma = _parse_torus_character(data, config)
        if sigma.rank != n:
            raise UsageError(f"character rank {sigma.rank} != configured n = {n}")
        datum = classify.torus_datum(sigma)
        factors = classify.composition_factors(datum)
        payload["triples"] = [_triple_payload(t) for t in factors]
        payload["length"] = classify.ps_length(sigma)
        payload["irreducible"] = classify.ps_irreducible(sigma)
    elif "levi" in data:
        levi = ParabolicSubset(n, frozenset(int(x) for x in data["levi"]))
        flags = {int(k): bool(v) for k, v in data.get("flags", {}).items()}
        datum = classify.SupersingularDatum(
            levi, flags, label=data.get("label", "sigma")
        )
        report = classify.enumerate_classification(n, [datum], config.field)
        payload["triples"] = [_triple_payload(t) for t in report.triples]
        payload["injectivity_clean"] = report.clean
        payload["merged"] = report.merged
    else:
        raise UsageError("input must carry 'xi' (torus character) or 'levi' (datum)")
    if args.emit == "csv":
        _print_classify_csv(payload["triples"])
        return EXIT_OK
    emit(payload, "classify")
    return EXIT_OK


def _print_classify_csv(triples: list[dict]) -> None:
    print("P;Q;levi;label;flags")
    for t in triples:
        flags = ",".join(f"{k}:{int(v)}" for k, v in sorted(t["sigma"]["flags"].items()))
        print(
            "{};{};{};{};{}".format(
                ",".join(map(str, t["P"])),
                ",".join(map(str, t["Q"])),
                ",".join(map(str, t["sigma"]["levi"])),
                t["sigma"]["label"],
                flags,
            )
        )


def cmd_oracle(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    if args.action != "satake":
        raise UsageError("the oracle exposes one action: satake")
    group = args.group
    n = {"sl2": 1, "sp4": 2}[group]
    if not 1 <= args.i <= n:
        raise UsageError(f"i must lie in 1..{n} for {group}")
    if config.f != 1:
        raise UsageError("the oracle runs over Q_p (f = 1)")
    lam = 2 * hecke.t2lambda_base(args.i, n)
    rows = oracle.oracle_rows(lam, config.depth, group, config.p)
    payload = {
        "group": group,
        "i": args.i,
        "p": config.p,
        "depth": config.depth,
        "target": list(lam.coords),
        "rows": [
            {
                "mu": list(r.mu.coords),
                "raw": r.raw_count,
                "mod_p": r.count_mod_p,
                "stabilized": r.stabilized,
            }
            for r in rows
        ],
    }
    emit(payload, "oracle")
    return EXIT_OK


def cmd_selftest(args) -> int:
    _require_json(args)
    config = resolve_config(args)
    results = selftest.run_all(run_sp4=args.sp4, seed=config.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = {
        "criteria": [
            {
                "number": r.number,
                "name": r.name,
                "pass": r.passed,
                "detail": r.detail,
                "skipped_parts": r.skipped_parts,
            }
            for r in results
        ],
        "all_pass": all(r.passed for r in results),
    }
    emit(payload, "selftest")
    return EXIT_OK if payload["all_pass"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metaplectic",
        description="symbolic and counting tools for the metaplectic cover of Sp_2n",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(sp):
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--p", type=int, help="odd residue characteristic")
        sp.add_argument("--f", type=int, help="residue extension degree")
        sp.add_argument("--n", type=int, help="rank")
        sp.add_argument("--N", type=int, help="value group order (even)")
        sp.add_argument("--depth", type=int, help="oracle enumeration depth")
        sp.add_argument("--seed", type=int, help="seed for randomized sweeps")
        sp.add_argument(
            "--emit", choices=("json", "csv"), default="json", help="output format"
        )

    sp = sub.add_parser("hilbert", help="quadratic Hilbert symbol on square classes")
    sp.add_argument("x", help="square class: 1|u|pi|upi")
    sp.add_argument("y", help="square class: 1|u|pi|upi")
    sp.add_argument("--verify", action="store_true", help="cross-check by solvability")
    add_config_flags(sp)
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("cover", help="quadratic form, bilinear form, splitting table")
    add_config_flags(sp)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("satake", help="metaplectic Satake value of T_{2 lambda}")
    sp.add_argument("--i", type=int, required=True, help="simple root index")
    sp.add_argument(
        "--oracle", action="store_true", help="verify against the counting oracle"
    )
    add_config_flags(sp)
    sp.set_defaults(func=cmd_satake)

    sp = sub.add_parser("aset", help="enumerate the antidominance exponent set")
    sp.add_argument("--i", type=int, default=0, help="simple root index for the base")
    sp.add_argument("--lam", help="explicit antidominant base, comma separated")
    add_config_flags(sp)
    sp.set_defaults(func=cmd_aset)

    sp = sub.add_parser("weights", help="q-restricted weight bookkeeping")
    sp.add_argument("--nu", required=True, help="weight coordinates, comma separated")
    sp.add_argument("--q", type=int, help="residue field size attached to the weight")
    sp.add_argument("--i", type=int, help="change-of-weight index")
    sp.add_argument("--levi", help="Levi subset for the regularity test")
    add_config_flags(sp)
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("classify", help="composition factors of a datum")
    sp.add_argument("--input", default="-", help="JSON file ('-' for stdin)")
    sp.add_argument(
        "--siegel", action="store_true", help="input is a reductive Siegel triple"
    )
    add_config_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("oracle", help="raw coset counts over Q_p")
    sp.add_argument("action", choices=("satake",))
    sp.add_argument("--group", choices=("sl2", "sp4"), required=True)
    sp.add_argument("--i", type=int, required=True)
    add_config_flags(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("selftest", help="run the acceptance criteria")
    sp.add_argument(
        "--sp4", action="store_true", help="include the Sp_4 oracle runs (slower)"
    )
    add_config_flags(sp)
    sp.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
