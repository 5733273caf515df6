"""Command-line front end tying the library together.

Subcommands: annihilate, chain, verify-spectral, factor, construct,
contractivity, cascade, check-convergence, spline, identity-tests. Every run
emits a machine-readable report with an "ok" flag (cascade may emit CSV data
instead when asked). Exit codes: 0 all requested checks passed, 1 a
verification failed, 2 malformed input.

Small Laurent polynomials are accepted inline: terms "c*z^k" joined by + or
-, with "(z+1)/2"-style sugar (a parenthesized sum, optional ^n, optional
/int or /int^int). Parser errors cite the offending position.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from math import comb

from .analysis import cascade as run_cascade
from .analysis import check_contractive, check_convergence
from .construct import BadSeed, synthesize
from .exactalg import (
    LaurentPoly,
    NotDivisible,
    NotTriangular,
    SingularDiagonal,
    lm_triangular_inverse,
    rat_from_str,
)
from .factor import NotAnnihilated, taylor_factorize, verify_spectral_chain
from .polybasis import NotInVd, Poly, PolyVec
from .splines import BadOrder, spline_chain, spline_mask, spline_verify
from .subdivision import DyadicGrid, Mask
from .taylor import (
    Chain,
    InvalidOperator,
    NotAChain,
    TaylorOperator,
    allones_operator,
    annihilator,
    chain_for,
    classical_operator,
    delta_operator,
)


class MalformedInput(Exception):
    """Anything unreadable on the way in: files, JSON shapes, inline text."""


# ---------------------------------------------------------------------------
# Inline Laurent grammar


class _LaurentParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def fail(self, msg: str):
        raise MalformedInput(f"inline polynomial, position {self.i}: {msg}")

    def peek(self) -> str | None:
        return self.text[self.i] if self.i < len(self.text) else None

    def advance(self) -> str:
        c = self.text[self.i]
        self.i += 1
        return c

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def expect(self, c: str) -> None:
        if self.peek() != c:
            self.fail(f"expected {c!r}")
        self.advance()

    def parse(self) -> LaurentPoly:
        self.skip_ws()
        if self.peek() == "(":
            out = self.parse_group()
        else:
            out = self.parse_sum(stop_at_close=False)
        self.skip_ws()
        if self.i != len(self.text):
            self.fail("unexpected trailing input")
        return out

    def parse_group(self) -> LaurentPoly:
        self.expect("(")
        out = self.parse_sum(stop_at_close=True)
        self.skip_ws()
        self.expect(")")
        self.skip_ws()
        if self.peek() == "^":
            self.advance()
            out = out ** self.parse_uint()
            self.skip_ws()
        if self.peek() == "/":
            self.advance()
            self.skip_ws()
            den = self.parse_uint()
            self.skip_ws()
            if self.peek() == "^":
                self.advance()
                den = den ** self.parse_uint()
            if den == 0:
                self.fail("zero denominator")
            out = out / den
        return out

    def parse_sum(self, stop_at_close: bool) -> LaurentPoly:
        total = LaurentPoly.zero()
        self.skip_ws()
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.advance() == "-" else 1
        while True:
            term = self.parse_term()
            total = total + (term * sign)
            self.skip_ws()
            c = self.peek()
            if c is None or (stop_at_close and c == ")"):
                return total
            if c == "+":
                sign = 1
            elif c == "-":
                sign = -1
            else:
                self.fail(f"expected '+' or '-', got {c!r}")
            self.advance()
            self.skip_ws()

    def parse_term(self) -> LaurentPoly:
        self.skip_ws()
        c = self.peek()
        if c == "z":
            return self.parse_zpow(Fraction(1))
        if c is not None and c.isdigit():
            coef = self.parse_rational()
            self.skip_ws()
            if self.peek() == "*":
                self.advance()
                self.skip_ws()
                if self.peek() != "z":
                    self.fail("expected 'z' after '*'")
                return self.parse_zpow(coef)
            return LaurentPoly.constant(coef)
        self.fail("expected a coefficient or 'z'")

    def parse_zpow(self, coef: Fraction) -> LaurentPoly:
        self.expect("z")
        e = 1
        if self.peek() == "^":
            self.advance()
            e = self.parse_int()
        return LaurentPoly.monomial(e, coef)

    def parse_uint(self) -> int:
        start = self.i
        while self.peek() is not None and self.peek().isdigit():
            self.advance()
        if start == self.i:
            self.fail("expected a number")
        return int(self.text[start : self.i])

    def parse_int(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.advance()
            sign = -1
        return sign * self.parse_uint()

    def parse_rational(self) -> Fraction:
        n = self.parse_uint()
        if self.peek() == "/":
            save = self.i
            self.advance()
            if self.peek() is not None and self.peek().isdigit():
                den = self.parse_uint()
                if den == 0:
                    self.fail("zero denominator")
                return Fraction(n, den)
            self.i = save
        return Fraction(n)


def parse_laurent(text: str) -> LaurentPoly:
    return _LaurentParser(text).parse()


# ---------------------------------------------------------------------------
# Input plumbing


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc


def _parse_preset_params(body: str, spec: str) -> dict[str, int]:
    params = {}
    if body:
        for piece in body.split(","):
            if "=" not in piece:
                raise MalformedInput(f"preset {spec!r}: expected k=v pairs")
            k, v = piece.split("=", 1)
            try:
                params[k.strip()] = int(v)
            except ValueError as exc:
                raise MalformedInput(f"preset {spec!r}: {v!r} is not an integer") from exc
    return params


def _taylor_from_preset(spec: str) -> TaylorOperator:
    name, _, body = spec.partition(":")
    params = _parse_preset_params(body, spec)
    makers = {"delta": delta_operator, "classical": classical_operator, "allones": allones_operator}
    if name not in makers:
        raise MalformedInput(f"unknown operator preset {name!r}")
    if set(params) != {"d"}:
        raise MalformedInput(f"operator preset {name!r} takes exactly d=<int>")
    return makers[name](params["d"])


def _load_taylor_arg(spec: str) -> TaylorOperator:
    if os.path.exists(spec):
        try:
            return TaylorOperator.from_json(_load_json(spec))
        except (InvalidOperator, KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"{spec}: {exc}") from exc
    if ":" in spec:
        return _taylor_from_preset(spec)
    raise MalformedInput(f"{spec!r} is neither a file nor an operator preset")


def _load_mask_arg(spec: str) -> Mask:
    if os.path.exists(spec):
        try:
            return Mask.from_json(_load_json(spec))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"{spec}: {exc}") from exc
    if spec.startswith("spline:"):
        params = _parse_preset_params(spec.partition(":")[2], spec)
        if set(params) != {"r", "d"}:
            raise MalformedInput("mask preset spline takes r=<int>,d=<int>")
        try:
            return spline_mask(params["r"], params["d"])
        except BadOrder as exc:
            raise MalformedInput(str(exc)) from exc
    raise MalformedInput(f"{spec!r} is neither a file nor a mask preset")


def _load_chain_arg(spec: str) -> Chain:
    if os.path.exists(spec):
        try:
            return Chain.from_json(_load_json(spec))
        except (NotAChain, NotInVd, KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"{spec}: {exc}") from exc
    if spec.startswith("spline:"):
        params = _parse_preset_params(spec.partition(":")[2], spec)
        if set(params) != {"r", "d"}:
            raise MalformedInput("chain preset spline takes r=<int>,d=<int>")
        try:
            return spline_chain(params["r"], params["d"])
        except BadOrder as exc:
            raise MalformedInput(str(exc)) from exc
    if ":" in spec:
        return chain_for(_taylor_from_preset(spec))
    raise MalformedInput(f"{spec!r} is neither a file nor a chain preset")


def _parse_window(text: str) -> tuple[int, int]:
    try:
        a_s, b_s = text.split(",")
        a, b = int(a_s), int(b_s)
    except ValueError as exc:
        raise MalformedInput(f"window must be 'a,b' with integers, got {text!r}") from exc
    if a >= b:
        raise MalformedInput(f"window must satisfy a < b, got {text!r}")
    return a, b


def _parse_g_flag(items: list[str]) -> dict[tuple[int, int], LaurentPoly]:
    out = {}
    for item in items:
        head, sep, body = item.partition(":")
        if not sep:
            raise MalformedInput(f"--g expects 'j,k:POLY', got {item!r}")
        try:
            j_s, k_s = head.split(",")
            j, k = int(j_s), int(k_s)
        except ValueError as exc:
            raise MalformedInput(f"--g expects integer 'j,k', got {head!r}") from exc
        out[(j, k)] = parse_laurent(body)
    return out


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_annihilate(args) -> int:
    if bool(args.vec) == bool(args.chain):
        raise MalformedInput("annihilate needs exactly one of --vec or --chain")
    if args.vec:
        try:
            vec = PolyVec.from_json(_load_json(args.vec))
        except (NotInVd, KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"{args.vec}: {exc}") from exc
    else:
        vec = _load_chain_arg(args.chain).last
    op = annihilator(vec)
    _emit(args, _dump_json({"ok": True, "taylor": op.to_json()}))
    return 0


def _cmd_chain(args) -> int:
    op = _load_taylor_arg(args.taylor)
    constants = {}
    for item in args.constant or []:
        head, sep, body = item.partition(":")
        if not sep:
            raise MalformedInput(f"--constant expects 'j,k:RATIONAL', got {item!r}")
        try:
            j_s, k_s = head.split(",")
            constants[(int(j_s), int(k_s))] = rat_from_str(body)
        except ValueError as exc:
            raise MalformedInput(f"--constant {item!r}: {exc}") from exc
    ch = chain_for(op, constants)
    _emit(args, _dump_json({"ok": True, "chain": ch.to_json()}))
    return 0


def _cmd_verify_spectral(args) -> int:
    mask = _load_mask_arg(args.mask)
    chain = _load_chain_arg(args.chain)
    if chain.d != mask.d:
        raise MalformedInput(
            f"mask has dimension {mask.d + 1}, chain has {chain.d + 1}"
        )
    report = verify_spectral_chain(mask, chain)
    _emit(args, _dump_json({"ok": report.ok, "spectral": report.to_json()}))
    return 0 if report.ok else 1


def _cmd_factor(args) -> int:
    mask = _load_mask_arg(args.mask)
    chain = _load_chain_arg(args.chain)
    if chain.d != mask.d:
        raise MalformedInput(
            f"mask has dimension {mask.d + 1}, chain has {chain.d + 1}"
        )
    scale = rat_from_str(args.scale) if args.scale else None
    try:
        fac = taylor_factorize(mask, chain, scale)
    except (NotAnnihilated, NotDivisible) as exc:
        _emit(args, _dump_json({"ok": False, "error": str(exc)}))
        return 1
    spectral = verify_spectral_chain(mask, chain)
    payload = {
        "ok": True,
        "factorization": fac.to_json(),
        "checks": {"identity": fac.verify(), "spectral_chain": spectral.ok},
    }
    _emit(args, _dump_json(payload))
    return 0


def _cmd_construct(args) -> int:
    op = _load_taylor_arg(args.taylor)
    try:
        seed = (
            LaurentPoly.from_json(_load_json(args.hdd_file))
            if args.hdd_file
            else parse_laurent(args.hdd)
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"seed polynomial: {exc}") from exc
    g = _parse_g_flag(args.g or [])
    try:
        result = synthesize(op, seed, g, strategy=args.strategy)
    except BadSeed as exc:
        raise MalformedInput(str(exc)) from exc
    except (NotDivisible, ValueError) as exc:
        _emit(args, _dump_json({"ok": False, "error": str(exc)}))
        return 1
    payload = {
        "ok": True,
        "bundle": result.to_json(),
        "checks": {
            "identity": result.factorization.verify(),
            "strategy": result.strategy,
        },
    }
    _emit(args, _dump_json(payload))
    return 0


def _default_nmax() -> int:
    raw = os.environ.get("HERMITE_FORGE_NMAX")
    if raw is None:
        return 8
    try:
        v = int(raw)
    except ValueError as exc:
        raise MalformedInput(f"HERMITE_FORGE_NMAX must be an integer, got {raw!r}") from exc
    if v < 1:
        raise MalformedInput("HERMITE_FORGE_NMAX must be at least 1")
    return v


def _cmd_contractivity(args) -> int:
    mask = _load_mask_arg(args.mask)
    n_max = args.n_max if args.n_max is not None else _default_nmax()
    report = check_contractive(mask, n_max=n_max)
    _emit(args, _dump_json({"ok": report.contractive, "contractivity": report.to_json()}))
    return 0 if report.contractive else 1


def _cmd_cascade(args) -> int:
    mask = _load_mask_arg(args.mask)
    window = _parse_window(args.window)
    if args.init == "delta":
        init = "delta"
    else:
        try:
            init = DyadicGrid.from_json(_load_json(args.init))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"{args.init}: {exc}") from exc
    grids = run_cascade(mask, args.levels, init, window, exact=args.exact)
    final = grids[-1]
    if args.format == "csv":
        _emit(args, final.to_csv())
    else:
        _emit(args, _dump_json({"ok": True, "grid": final.to_json()}))
    return 0


def _cmd_check_convergence(args) -> int:
    mask = _load_mask_arg(args.mask)
    window = _parse_window(args.window)
    taylor = _load_taylor_arg(args.taylor) if args.taylor else None
    report = check_convergence(
        mask,
        levels=args.levels,
        window=window,
        ratio_bound=args.ratio_bound,
        residual_tol=args.residual_tol,
        taylor=taylor,
    )
    _emit(args, _dump_json({"ok": report.ok, "convergence": report.to_json()}))
    return 0 if report.ok else 1


def _cmd_spline(args) -> int:
    try:
        mask = spline_mask(args.r, args.d)
        chain = spline_chain(args.r, args.d)
    except BadOrder as exc:
        raise MalformedInput(str(exc)) from exc
    payload = {"mask": mask.to_json(), "chain": chain.to_json()}
    if not args.verify:
        payload["ok"] = True
        _emit(args, _dump_json(payload))
        return 0
    report, fac = spline_verify(args.r, args.d)
    payload["ok"] = report.ok
    payload["report"] = report.to_json()
    payload["factor"] = fac.factor.to_json()
    _emit(args, _dump_json(payload))
    return 0 if report.ok else 1


def _random_poly(rng: random.Random, max_degree: int) -> Poly:
    deg = rng.randint(0, max_degree)
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg + 1)]
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(1)
    return Poly(coeffs)


def _random_operator(rng: random.Random, d: int) -> TaylorOperator:
    w = []
    for j in range(1, d + 1):
        row = [Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(j - 1)]
        row.append(Fraction(1))
        w.append(tuple(row))
    return TaylorOperator(tuple(w))


def difference_split_check(p: Poly, n: int) -> bool:
    """Exact identity for deg p <= n:
    Delta p = sum_{k=1}^{n-1} (Delta^k p)(. - k) + (Delta^n p)(. - (n-1))."""
    if n < 1 or p.degree > n:
        raise ValueError("the identity needs 1 <= n and deg p <= n")
    lhs = p.forward_difference()
    rhs = Poly.zero()
    for k in range(1, n):
        rhs = rhs + p.forward_difference(k).shift(-k)
    rhs = rhs + p.forward_difference(n).shift(-(n - 1))
    return lhs == rhs


def _cmd_identity_tests(args) -> int:
    rng = random.Random(args.seed)
    split_total = 0
    split_ok = True
    for _ in range(args.polys):
        p = _random_poly(rng, args.max_degree)
        lo = max(p.degree, 1)
        for n in range(lo, args.max_n + 1):
            split_total += 1
            if not difference_split_check(p, n):
                split_ok = False
    binom_total = 0
    binom_ok = True
    for n in range(1, 21):
        for j in range(n):
            binom_total += 1
            if comb(n, j + 1) != sum(comb(k, j) for k in range(j, n)):
                binom_ok = False
    inv_ok = True
    inv_total = 0
    for _ in range(50):
        d = rng.randint(1, 5)
        op = _random_operator(rng, d)
        try:
            inv = lm_triangular_inverse(op.symbol())
        except (NotTriangular, SingularDiagonal):
            inv_ok = False
            continue
        inv_total += 1
        for j in range(d + 1):
            for l in range(d + 1):
                want = 1 if l >= j else 0
                if inv.p[j][l].evaluate(1) != want:
                    inv_ok = False
    ok = split_ok and binom_ok and inv_ok
    payload = {
        "ok": ok,
        "checks": {
            "difference_split": {
                "polynomials": args.polys,
                "identities": split_total,
                "ok": split_ok,
            },
            "binomial_column_sums": {"pairs": binom_total, "ok": binom_ok},
            "inverse_numerators_at_one": {"operators": inv_total, "ok": inv_ok},
        },
        "seed": args.seed,
    }
    _emit(args, _dump_json(payload))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermite-forge",
        description="Construct, factorize, verify and analyze Hermite subdivision schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("annihilate", help="operator annihilating a graded vector or chain")
    p.add_argument("--vec", help="graded polynomial vector (JSON file)")
    p.add_argument("--chain", help="chain (JSON file or preset); its top vector is used")
    add_out(p)
    p.set_defaults(func=_cmd_annihilate)

    p = sub.add_parser("chain", help="canonical chain of a Taylor operator")
    p.add_argument("--taylor", required=True, help="operator JSON file or preset name:d=N")
    p.add_argument(
        "--constant",
        action="append",
        help="free antidifference constant 'j,k:RATIONAL' (repeatable)",
    )
    add_out(p)
    p.set_defaults(func=_cmd_chain)

    p = sub.add_parser("verify-spectral", help="check S_A v-hat_j = 2^-j v-hat_j for a chain")
    p.add_argument("--mask", required=True, help="mask JSON file or preset")
    p.add_argument("--chain", required=True, help="chain JSON file or preset")
    add_out(p)
    p.set_defaults(func=_cmd_verify_spectral)

    p = sub.add_parser("factor", help="factor a mask through a chain's Taylor operator")
    p.add_argument("--mask", required=True, help="mask JSON file or preset")
    p.add_argument("--chain", required=True, help="chain JSON file or preset")
    p.add_argument("--scale", help="factorization scale (default 2^-d)")
    add_out(p)
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("construct", help="synthesize a convergent scheme from an operator")
    p.add_argument("--taylor", required=True, help="operator JSON file or preset name:d=N")
    seed_group = p.add_mutually_exclusive_group(required=True)
    seed_group.add_argument("--hdd", help="corner seed polynomial, inline (e.g. \"(z+1)/2\")")
    seed_group.add_argument("--hdd-file", help="corner seed polynomial, JSON file")
    p.add_argument(
        "--g",
        action="append",
        help="free lower parameter 'j,k:POLY' with inline POLY (repeatable)",
    )
    p.add_argument(
        "--strategy",
        choices=("auto", "system", "recurrence"),
        default="auto",
        help="last-row strategy (default auto)",
    )
    add_out(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("contractivity", help="joint/diagonal contraction certificate")
    p.add_argument("--mask", required=True, help="factor mask JSON file or preset")
    p.add_argument(
        "--n-max",
        type=int,
        help="largest iterate to try (default HERMITE_FORGE_NMAX or 8)",
    )
    add_out(p)
    p.set_defaults(func=_cmd_contractivity)

    p = sub.add_parser("cascade", help="render Hermite data on a fine dyadic grid")
    p.add_argument("--mask", required=True, help="mask JSON file or preset")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--init", default="delta", help="'delta' or a DyadicGrid JSON file")
    p.add_argument("--window", default="-4,4", help="integer window 'a,b' (default -4,4)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--exact", action="store_true", help="carry exact rationals throughout")
    add_out(p)
    p.set_defaults(func=_cmd_cascade)

    p = sub.add_parser("check-convergence", help="empirical convergence diagnostics")
    p.add_argument("--mask", required=True, help="mask JSON file or preset")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--window", default="-4,4")
    p.add_argument("--ratio-bound", type=float, default=0.9)
    p.add_argument("--residual-tol", type=float, default=1e-4)
    p.add_argument(
        "--taylor",
        help="operator whose w-weights pair the residual rows (file or preset; "
        "default difference-type)",
    )
    add_out(p)
    p.set_defaults(func=_cmd_check_convergence)

    p = sub.add_parser("spline", help="B-spline Hermite scheme generator and verifier")
    p.add_argument("--r", type=int, required=True, help="spline degree")
    p.add_argument("--d", type=int, required=True, help="highest derivative carried")
    p.add_argument("--verify", action="store_true", help="run the full verification bundle")
    add_out(p)
    p.set_defaults(func=_cmd_spline)

    p = sub.add_parser("identity-tests", help="exact difference/binomial identity suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--polys", type=int, default=100)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--max-n", type=int, default=10)
    add_out(p)
    p.set_defaults(func=_cmd_identity_tests)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        NotInVd,
        InvalidOperator,
        NotAChain,
        BadOrder,
        BadSeed,
        KeyError,
        TypeError,
        ValueError,
    ) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
