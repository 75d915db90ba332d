"""Command-line front end producing newline-delimited JSON reports.

Every report starts with a config record, has one record per check and ends with
a summary. Records carry the claim they test (``anchor``), the computed verdict
and the verdict the manifest expects. The exit status is 0 only when every
verdict matches.
"""

from __future__ import annotations

import argparse
import fnmatch
import itertools
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from . import cochain as co
from . import deform as df
from . import exponent as ex
from . import freealg as fa
from . import idsearch as ids
from .scalar import is_prime, parse_field
from .witt import (
    WittAlgebra,
    a0_matrix_failures,
    center_action_failures,
    left_center_basis,
    normalizer_of_center_basis,
    same_span,
)

SCHEMA = "rsymwitt-report/1"


# -- configuration -------------------------------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    target: str = None
    family: str = "laurent"
    n: int = 1
    p: int = None
    m: tuple = ()
    field: str = "rationals"
    degree: int = None
    window: str = "default"
    samples: int = None
    seed: int = 0
    order: int = None
    out: str = None
    timing: bool = False
    manifest: str = None

    def validate(self):
        if self.family not in (ex.LAURENT, ex.POLY, ex.DIVPOW):
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("--n must be positive")
        if self.family == ex.DIVPOW:
            if self.p is None or not is_prime(self.p):
                raise ValueError("divpow needs a prime --p")
            m = tuple(self.m) or (1,) * self.n
            if len(m) != self.n or min(m) < 1:
                raise ValueError("--m needs n entries, each >= 1")
            self.m = m
        parse_field(self.field)
        parse_window(self.window)

    def echo(self) -> dict:
        out = {
            "family": self.family,
            "n": self.n,
            "field": f"fp:{self.p}" if self.family == ex.DIVPOW else self.field,
            "window": self.window,
            "seed": self.seed,
        }
        if self.target:
            out["target"] = self.target
        if self.family == ex.DIVPOW:
            out["p"] = self.p
            out["m"] = list(self.m)
        for key in ("degree", "samples", "order"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        return out


def parse_window(text: str):
    """``default``, ``all``, ``box:LO:HI`` or ``deg:K``."""
    if text in ("default", "all"):
        return (text,)
    parts = text.split(":")
    if parts[0] == "box" and len(parts) == 3:
        lo, hi = int(parts[1]), int(parts[2])
        if lo > hi:
            raise ValueError("empty box window")
        return ("box", lo, hi)
    if parts[0] == "deg" and len(parts) == 2:
        k = int(parts[1])
        if k < 0:
            raise ValueError("empty degree window")
        return ("deg", k)
    raise ValueError(f"bad window {text!r}; use default, all, box:LO:HI or deg:K")


def make_algebra(cfg: RunConfig, family=None, n=None) -> WittAlgebra:
    family = family or cfg.family
    n = n or cfg.n
    if family == ex.DIVPOW:
        return WittAlgebra.divpow(cfg.p, cfg.m if len(cfg.m) == n else (1,) * n)
    fld = parse_field(cfg.field)
    return WittAlgebra.laurent(n, fld) if family == ex.LAURENT else WittAlgebra.poly(n, fld)


def window_of(alg: WittAlgebra, spec: str) -> list:
    w = parse_window(spec)
    if w[0] == "default":
        out = alg.default_window()
    elif w[0] == "all":
        if not alg.domain.finite:
            raise ValueError("window 'all' needs a finite-dimensional algebra")
        out = alg.all_basis()
    elif w[0] == "box":
        out = alg.basis_box(w[1], w[2])
    else:
        out = alg.basis_degree(w[1])
    if not out:
        raise ValueError(f"window {spec!r} is empty for {alg}")
    return out


def algebra_label(alg: WittAlgebra) -> str:
    if alg.divided:
        return f"divpow(p={alg.domain.p},m={','.join(map(str, alg.domain.m))})/n={alg.n}"
    return f"{alg.family}/n={alg.n}"


# -- reports -----------------------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def load_manifest(path=None) -> list:
    if path:
        data = json.loads(Path(path).read_text())
    else:
        data = json.loads(resources.files("rsymwitt").joinpath("manifest.json").read_text())
    return data["expected"]


def expected_verdict(manifest: list, name: str):
    for pattern, verdict in manifest:
        if fnmatch.fnmatchcase(name, pattern):
            return verdict
    return None


@dataclass
class Report:
    cfg: RunConfig
    manifest: list
    records: list = field(default_factory=list)

    def add(self, name: str, anchor: str, verdict: str, payload: dict = None, seconds: float = None,
            expected: str = None):
        if expected is None:
            expected = expected_verdict(self.manifest, name)
        rec = {
            "record": "check",
            "name": name,
            "anchor": anchor,
            "verdict": verdict,
            "expected": expected,
            "match": verdict == expected,
            "payload": _jsonable(payload or {}),
        }
        if self.cfg.timing and seconds is not None:
            print(f"{name}\t{seconds:.3f}s", file=sys.stderr)
        self.records.append(rec)
        return rec

    @property
    def ok(self) -> bool:
        return bool(self.records) and all(r["match"] for r in self.records)

    def lines(self) -> list:
        head = {
            "record": "config",
            "schema": SCHEMA,
            "version": __version__,
            "command": self.cfg.command,
            "config": self.cfg.echo(),
        }
        summary = {
            "record": "summary",
            "checks": len(self.records),
            "matched": sum(r["match"] for r in self.records),
            "mismatched": [r["name"] for r in self.records if not r["match"]],
            "ok": self.ok,
        }
        return [json.dumps(r, sort_keys=True, ensure_ascii=False) for r in [head, *self.records, summary]]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def _holds(v) -> str:
    return "holds" if v else "fails"


# -- commands ------------------------------------------------------------------------------------------


def cmd_verify_standard(cfg: RunConfig, report: Report) -> Report:
    """s_2n^rsym on (2n+1)-tuples, and the forms s_{k,r} that drive it."""
    alg = make_algebra(cfg)
    n = alg.n
    window = window_of(alg, cfg.window)
    label = algebra_label(alg)
    s = fa.standard_rsym(2 * n, alg.field)
    with _Timer() as t:
        if alg.domain.finite and cfg.samples is None:
            tuples = list(itertools.product(window, repeat=2 * n + 1))
            v = fa.check_identity(s, alg, tuples=tuples)
            mode = "exhaustive"
        else:
            v = fa.check_identity(s, alg, samples=cfg.samples or 200, seed=cfg.seed, window=window)
            mode = "random"
    report.add(f"standard-identity/{label}", "claim:standard-identity", _holds(v.holds),
               {"mode": mode, **v.payload()}, t.seconds)

    rng = random.Random(cfg.seed)
    count = cfg.samples or 200
    for r in range(1, n + 1):
        with _Timer() as t:
            holds, witness = True, None
            for tup in fa.random_tuples(rng, window, 2 * n, count):
                args = [alg.basis(a, i) for a, i in tup]
                val = fa.s_k_r(2 * n, r, args)
                if val:
                    holds, witness = False, ([str(a) for a in args], str(val))
                    break
        payload = {"samples": count}
        if witness:
            payload["counterexample"], payload["value"] = witness
        report.add(f"s2n-r/{label}/r={r}", "claim:s2n-r-vanishes", _holds(holds), payload, t.seconds)
    if n >= 2:
        with _Timer() as t:
            found = None
            for a in window:
                for b in window:
                    for r in range(1, n + 1):
                        val = fa.s_k_r(2, r, [alg.basis(*a), alg.basis(*b)])
                        if val:
                            found = (r, [str(alg.basis(*a)), str(alg.basis(*b))], str(val))
                            break
                    if found:
                        break
                if found:
                    break
        payload = {} if found is None else {"r": found[0], "witness": found[1], "value": found[2]}
        report.add(f"s2-r-witness/{label}", "claim:s2n-r-minimal", "found" if found else "none",
                   payload, t.seconds)
    return report


def _window_label(cfg, alg):
    if cfg.window != "default":
        return cfg.window
    if alg.domain.finite:
        return "all"
    return "box:-2:2" if alg.family == ex.LAURENT else "box:0:2"


def cmd_search_identities(cfg: RunConfig, report: Report) -> Report:
    alg = make_algebra(cfg)
    n = alg.n
    d = cfg.degree or 2 * n + 1
    window = window_of(alg, cfg.window)
    label = algebra_label(alg)
    mode = "exhaustive" if alg.domain.finite and cfg.samples is None else "random"
    include = []
    if d <= 2 * n and alg.family != ex.DIVPOW:
        include = [tuple(k for a in fa.lower_bound_witness(alg, d) for k in a.terms)]
    with _Timer() as t:
        M = ids.assemble(alg, d, mode=mode, samples=cfg.samples, seed=cfg.seed, window=window,
                         window_label=_window_label(cfg, alg), include=include)
        S = ids.nullspace(M)
    payload = {
        "degree": d,
        "monomials": M.ncols,
        "rank": M.rank,
        "nullity": S.dimension,
        "census": S.census,
        "basis": [str(f) for f in S.basis],
        "verified_on": S.verified_on,
    }
    if d == 2 * n + 1:
        fam = fa.tau_family(2 * n, alg.field)
        payload["tau_membership"] = [ids.span_membership(g, S) for g in fam]
    report.add(f"identity-space/{label}/d={d}", "claim:identity-space", f"nullity={S.dimension}",
               payload, t.seconds)
    if d == 2 * n + 1:
        report.add(f"tau-membership/{label}/d={d}", "claim:identity-space",
                   _holds(all(payload["tau_membership"])), {"members": payload["tau_membership"]})
        rank = ids.tau_independence_rank(n, alg.field)
        report.add(f"tau-independence/n={n}", "claim:identity-space", f"rank={rank}", {"polynomials": 2 * n + 1})
    return report


def _suite_novikov(cfg, report):
    alg = make_algebra(cfg)
    label = algebra_label(alg)
    window = window_of(alg, cfg.window)
    with _Timer() as t:
        v = fa.check_trilinear(fa.novikov_defect, alg, cfg.samples or 200, cfg.seed, window)
    report.add(f"novikov/{label}", "claim:novikov-rank-one", _holds(v.holds), v.payload(), t.seconds)
    if alg.n >= 2:
        a, b, c = fa.novikov_witness(alg)
        val = fa.novikov_defect(a, b, c)
        report.add(f"novikov-witness/{label}", "claim:novikov-rank-one", _holds(not val),
                   {"witness": [str(a), str(b), str(c)], "value": str(val)})


def _suite_mixed(cfg, report):
    alg = make_algebra(cfg)
    label = algebra_label(alg)
    window = window_of(alg, cfg.window)
    for name, fn in fa.MIXED_IDENTITIES.items():
        with _Timer() as t:
            v = fa.check_trilinear(fn, alg, cfg.samples or 200, cfg.seed, window, general=10)
        report.add(f"mixed/{name}/{label}", "claim:mixed-identities", _holds(v.holds), v.payload(), t.seconds)


def _suite_right(cfg, report):
    cases = [
        ("right-3", WittAlgebra.laurent(1), fa.right_standard_words(3), cfg.samples or 500),
        ("right-7", WittAlgebra.poly(2), fa.right_standard_words(7), cfg.samples or 30),
        ("operator-5", WittAlgebra.poly(1), fa.operator_words(4), cfg.samples or 50),
    ]
    for name, alg, words, samples in cases:
        with _Timer() as t:
            v = fa.check_right_words(words, alg, samples, cfg.seed)
        report.add(f"{name}/{algebra_label(alg)}", "claim:right-identities", _holds(v.holds),
                   {"words": len(words), **v.payload()}, t.seconds)


def _suite_centers(cfg, report):
    fam = cfg.family if cfg.family != ex.LAURENT or cfg.window != "default" else ex.POLY
    alg = make_algebra(cfg, family=fam)
    n = alg.n
    spec = cfg.window if cfg.window != "default" else "deg:2"
    window = window_of(alg, spec)
    label = algebra_label(alg)
    with _Timer() as t:
        center = left_center_basis(alg, window)
        normal = normalizer_of_center_basis(alg, window, center)
    ds = [alg.d(i) for i in range(1, n + 1)]
    a0 = [alg.basis(ex.unit(n, i), j) for i in range(1, n + 1) for j in range(1, n + 1)]
    report.add(f"center/{label}", "claim:center-normalizer", "matches" if same_span(center, ds) else "differs",
               {"window": spec, "basis": [str(z) for z in center]}, t.seconds)
    report.add(f"normalizer/{label}", "claim:center-normalizer",
               "matches" if same_span(normal, ds + a0) else "differs",
               {"window": spec, "dimension": len(normal), "basis": [str(z) for z in normal]})
    for k in sorted({2, 3, n}):
        fails = a0_matrix_failures(k)
        report.add(f"a0-matrix-isomorphism/n={k}", "claim:center-normalizer", _holds(not fails),
                   {"failures": [str(f) for f in fails[:5]]})
    with _Timer() as t:
        res = center_action_failures(alg, window, depth=5 if n <= 2 else 3)
    for key in ("derivation", "normalizer-associative", "iterated"):
        fails, tried = res[key]
        report.add(f"center-action/{key}/{label}", "claim:center-action", _holds(fails == 0),
                   {"failures": fails, "cases": tried}, t.seconds)


def _suite_cochain(cfg, report):
    groups = [
        co.delta_relations,
        co.cup_relations,
        co.mixed_relations,
        co.model_relations,
    ]
    for build in groups:
        for rc in build(signed=True):
            name = f"cochain/{rc.name}/{','.join(map(str, rc.indices))}"
            report.add(name, "claim:standard-polynomial-relations", _holds(rc.holds), rc.payload())
    literal = [rc for build in groups for rc in build(signed=False)]
    failing = [rc for rc in literal if not rc.holds]
    report.add("cochain-literal-reading", "claim:standard-polynomial-relations",
               f"{len(failing)}/{len(literal)} fail",
               {"reading": "shuffle terms without permutation signs",
                "failing": [f"{rc.name}/{','.join(map(str, rc.indices))}" for rc in failing]})


def _suite_amitsur(cfg, report):
    for n in sorted({2, 3} | ({cfg.n} if cfg.n >= 2 else set())):
        exhaustive = n == 2
        with _Timer() as t:
            res = co.amitsur_levitzki(n, exhaustive=exhaustive, samples=cfg.samples or 100, seed=cfg.seed)
        top = res["vanishes"]
        report.add(f"amitsur-levitzki/delta{2 * n - 1}/mat{n}", "claim:amitsur-levitzki",
                   "vanishes" if top.equal else "nonzero",
                   {"mode": "exhaustive-units" if exhaustive else "random", **top.payload()}, t.seconds)
        below = res["below"]
        payload = {}
        if below:
            units, entry, val = below
            payload = {"units": [list(u) for u in units], "entry": list(entry), "value": val}
        report.add(f"amitsur-levitzki/delta{2 * n - 2}/mat{n}", "claim:amitsur-levitzki",
                   "nonzero" if below else "vanishes", payload)


SUITES = {
    "novikov": _suite_novikov,
    "mixed": _suite_mixed,
    "right-identities": _suite_right,
    "centers": _suite_centers,
    "cochain": _suite_cochain,
    "amitsur-levitzki": _suite_amitsur,
}


def cmd_check(cfg: RunConfig, report: Report) -> Report:
    SUITES[cfg.target](cfg, report)
    return report


def _defect_payload(sd: dict) -> dict:
    return {
        "nonzero_orders": [
            {"monomial": list(m), "shift": W, "defect": v.format()}
            for m, comp in sorted(sd.items()) for W, v in sorted(comp.items())
        ][:5]
    }


def _scenario_osborn(cfg, report):
    N = cfg.order or 3
    with _Timer() as t:
        sd = df.osborn_product(N).symbolic_defect()
        res = df.solve_prolongation([(df.eps_monomial(1), df.PSI[1]), (df.eps_monomial(2), df.PSI[2])], N)
    report.add(f"osborn/defect/N={N}", "claim:osborn", "zero" if not sd else "nonzero", _defect_payload(sd), t.seconds)
    extra = sorted(m for m in res.components if sum(m) >= 2)
    report.add(f"osborn/corrections/N={N}", "claim:osborn", "trivial" if not extra and res.failure is None else "nontrivial",
               {"status": res.status, "corrections": [list(m) for m in extra]})


def _scenario_eps3(cfg, report):
    N = cfg.order or 6
    with _Timer() as t:
        res = df.solve_prolongation([(df.eps_monomial(3), df.PSI[3])], N)
    orders = []
    for mono, comp in sorted(res.components.items()):
        for w, P in sorted(comp.items()):
            form = df.operator_form(w, P)
            orders.append({"order": sum(mono), "w": w, "P": P.format(), "operator": df.format_operator(form)})
    report.add(f"eps3/solve/N={N}", "claim:eps3-prolongation", res.status,
               {"verified": res.verified, "orders": orders,
                "note": "solutions are normal forms modulo cocycles in the ansatz"}, t.seconds)
    rows = df.eps3_rows(res)
    for l in range(1, N):
        ref = df.REFERENCE_EPS3_ROWS.get(l)
        got = rows.get(l)
        if got is None:
            report.add(f"eps3/row/order={l}", "claim:eps3-prolongation", "no-operator-form",
                       {"reference": list(ref) if ref else None})
            continue
        sign, row = got
        match = ref is not None and tuple(row) == tuple(ref) and sign == (-1) ** l
        report.add(f"eps3/row/order={l}", "claim:eps3-prolongation", "matches" if match else "differs",
                   {"computed": [str(c) for c in row], "sign": sign,
                    "reference": list(ref) if ref else None})
    with _Timer() as t:
        W = WittAlgebra.laurent(1)
        prod = res.product()
        agree = True
        for i in range(-2, 3):
            for j in range(-2, 3):
                a, b = W.e(i), W.e(j)
                if prod(a, b) != df.eps3_closed_form(a, b, N):
                    agree = False
    report.add(f"eps3/closed-form/N={N}", "claim:eps3-prolongation", _holds(agree),
               {"window": "e_i, e_j with -2 <= i, j <= 2"}, t.seconds)


def _scenario_eps4(cfg, report):
    N = cfg.order or 5
    with _Timer() as t:
        sd = df.eps4_product(N).symbolic_defect()
        res = df.solve_prolongation([(df.eps_monomial(4), df.PSI[4])], N)
    report.add(f"eps4/defect/N={N}", "claim:eps4-prolongation", "zero" if not sd else "nonzero",
               _defect_payload(sd), t.seconds)
    closed = df.eps4_product(N).graded()
    report.add(f"eps4/solve/N={N}", "claim:eps4-prolongation",
               "matches" if res.failure is None and closed == res.components else "differs",
               {"status": res.status,
                "orders": [{"order": sum(m), "w": w, "P": P.format(),
                            "operator": df.format_operator(df.operator_form(w, P))}
                           for m, comp in sorted(res.components.items()) for w, P in sorted(comp.items())]})


def obstruction_grid(seed: int, count: int = 20) -> list:
    """Deterministic eps-points: half on eps1 eps4 + eps2 eps3 = 0, half generic."""
    rng = random.Random(seed)
    pts = []
    vals = [-2, -1, 1, 2]
    while len(pts) < count:
        e1, e2, e3 = (Fraction(rng.choice(vals)) for _ in range(3))
        if len(pts) % 2 == 0:
            e4 = -e2 * e3 / e1
        else:
            e4 = Fraction(rng.choice(vals))
        pt = (e1, e2, e3, e4)
        if pt not in pts:
            pts.append(pt)
    return pts


def _scenario_obstruction(cfg, report):
    pts = obstruction_grid(cfg.seed, cfg.samples or 20)
    degree = cfg.degree or 4
    split_ok = True
    computed_ok = True
    for pt in pts:
        with _Timer() as t:
            res = df.obstruction_sample(pt, degree)
        solvable = res["verdict"] == "solvable"
        split_ok &= solvable == (df.obstruction_value(pt) == 0)
        computed_ok &= solvable == (df.computed_obstruction_value(pt) == 0)
        stated = "solvable" if df.obstruction_value(pt) == 0 else "unsolvable-within-ansatz"
        report.add(f"obstruction/eps={','.join(map(str, pt))}", "claim:obstruction", res["verdict"], res,
                   t.seconds, expected=stated)
    report.add("obstruction-split/eps1eps4+eps2eps3", "claim:obstruction", "exact" if split_ok else "mismatch",
               {"points": len(pts), "degree_bound": degree})
    report.add("obstruction-split/eps1eps4-eps2eps3", "claim:obstruction", "exact" if computed_ok else "mismatch",
               {"points": len(pts), "degree_bound": degree})


SCENARIOS = {
    "osborn": _scenario_osborn,
    "eps3": _scenario_eps3,
    "eps4": _scenario_eps4,
    "obstruction": _scenario_obstruction,
}


def cmd_deform(cfg: RunConfig, report: Report) -> Report:
    SCENARIOS[cfg.target](cfg, report)
    return report


COMMANDS = {
    "verify-standard": cmd_verify_standard,
    "search-identities": cmd_search_identities,
    "check": cmd_check,
    "deform": cmd_deform,
}


def run(cfg: RunConfig) -> Report:
    cfg.validate()
    report = Report(cfg, load_manifest(cfg.manifest))
    COMMANDS[cfg.command](cfg, report)
    return report


# -- argument parsing -------------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--family", choices=[ex.LAURENT, ex.POLY, ex.DIVPOW], default=ex.LAURENT)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--p", type=int, default=None, help="prime for divpow")
    p.add_argument("--m", type=lambda s: tuple(int(x) for x in s.split(",")), default=(),
                   help="comma-separated truncation vector for divpow")
    p.add_argument("--field", default="rationals", help="rationals or fp:<p>")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--window", default="default", help="default, all, box:LO:HI or deg:K")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", type=int, default=None, help="eps truncation: work modulo eps^ORDER")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="print per-check wall-clock seconds to stderr")
    p.add_argument("--manifest", default=None, help="expected-verdict manifest (default: bundled)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsymwitt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rsymwitt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("verify-standard", help="standard right-symmetric identity of degree 2n+1"))
    _common(sub.add_parser("search-identities", help="space of multilinear left identities of a degree"))
    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("target", choices=sorted(SUITES))
    _common(p)
    p = sub.add_parser("deform", help="deformation scenarios for W_1")
    p.add_argument("target", choices=sorted(SCENARIOS))
    _common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    try:
        report = run(cfg)
    except (ValueError, ids.IdentitySearchError) as exc:
        print(f"rsymwitt: {exc}", file=sys.stderr)
        return 2
    text = report.text()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
