"""Command-line front end.

    gmprivacy quote    --mu 0.5 --eta 0.25
    gmprivacy welfare  --mu 0.5 --eta 0.25 --fee 0.125
    gmprivacy table    --mu 1
    gmprivacy sweep    --mu-list 0.2,0.5 --epsilon-list 0,1,2 --out grid.csv
    gmprivacy simulate --mu 0.5 --eta 0.25 --rounds 1000000 --seed 42
    gmprivacy dp       --epsilon 1.0986 --mu 1
    gmprivacy oracle   --mu 0.5 --eta 0.3 --quote-rule true-direction

Any flag may also come from ``--config FILE`` (``key = value`` lines, ``#``
comments); flags given on the command line win. Environment variables are
not read.

Exit codes: 0 success, 1 Monte Carlo z-score above ``--z-max``, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Iterable, Optional, Sequence

from . import model, oracle
from .model import ModelParams, ParamError
from .montecarlo import SimConfig, convergence_report
from .sweep import SWEEP_COLUMNS, GridError, SweepSpec, sweep_rows

TABLE_ETAS = (0.0, 0.1, 0.25, 0.4, 0.5)

_FLAG_FOR = {
    "mu": "--mu", "eta": "--eta", "epsilon": "--epsilon", "v_low": "--v-low", "v_high": "--v-high",
    "rounds": "--rounds", "seed": "--seed", "fee": "--fee", "value_redraw": "--value-mode",
    "mu_values": "--mu-list", "eta_values": "--eta-list", "epsilon_values": "--epsilon-list",
    "grid": "--mu-list/--eta-list/--epsilon-list", "out": "--out",
}


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{flag}: {message}")


def fmt(x) -> str:
    """12 significant digits, then the shortest repr of that value."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    y = float(f"{x:.12g}")
    return repr(y + 0.0)  # + 0.0 folds -0.0 into 0.0


def _json_value(x):
    if isinstance(x, float):
        return None if not math.isfinite(x) else float(fmt(x))
    return x


def render_rows(columns: Sequence[str], rows: Iterable[dict], style: str) -> str:
    rows = list(rows)
    if style == "json":
        return json.dumps([{c: _json_value(r[c]) for c in columns} for r in rows], indent=2) + "\n"
    if style == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r[c]) for c in columns])
        return buf.getvalue()
    cells = [list(columns)] + [[fmt(r[c]) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "".join("  ".join(s.rjust(wd) for s, wd in zip(row, widths)).rstrip() + "\n" for row in cells)


def render_record(record: dict, style: str) -> str:
    if style == "text":
        width = max(len(k) for k in record)
        return "".join(f"{k.ljust(width)}  {fmt(v)}\n" for k, v in record.items())
    if style == "json":
        return json.dumps({k: _json_value(v) for k, v in record.items()}, indent=2) + "\n"
    return render_rows(list(record), [record], "csv")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise UsageError("--out", f"cannot write {out!r}: {e.strerror}") from None


def _float_list(flag: str):
    def parse(text: str) -> list[float]:
        try:
            return [float(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects comma-separated decimals, got {text!r}")
    return parse


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; keys are flag names with or without dashes."""
    out = {}
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise UsageError("--config", f"cannot read {path!r}: {e.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError("--config", f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


# --- argument resolution -------------------------------------------------------


def _params(args) -> ModelParams:
    if args.mu is None:
        raise UsageError("--mu", "required")
    eta = _eta(args)
    return ModelParams(mu=args.mu, eta=eta, v_low=args.v_low, v_high=args.v_high)


def _eta(args) -> float:
    if args.epsilon is not None:
        if args.eta is not None:
            raise UsageError("--epsilon", "give --eta or --epsilon, not both")
        try:
            return model.dp_flip_probability(args.epsilon)
        except ParamError as e:
            raise UsageError("--epsilon", str(e)) from None
    return 0.0 if args.eta is None else args.eta


def _channel_fields(args, params: ModelParams) -> dict:
    d = {"mu": params.mu, "eta": params.eta}
    if args.epsilon is not None:
        d["epsilon"] = args.epsilon
    d["v_low"], d["v_high"] = params.v_low, params.v_high
    return d


# --- subcommands ---------------------------------------------------------------


def cmd_quote(args) -> int:
    p = _params(args)
    q = model.quotes(p)
    rec = _channel_fields(args, p)
    rec.update(signal_strength=model.signal_strength(p), ask=q.ask, bid=q.bid, mid=q.mid, spread=q.spread)
    _emit(render_record(rec, args.format), args.out)
    return 0


def cmd_welfare(args) -> int:
    p = _params(args)
    w = model.welfare(p)
    rec = _channel_fields(args, p)
    rec.update(pi_informed=w.pi_informed, pi_noise=w.pi_noise, pi_maker=w.pi_maker,
               subsidy=w.subsidy, break_even_fee=w.break_even_fee)
    if args.fee is not None:
        if not math.isfinite(args.fee) or args.fee < 0:
            raise UsageError("--fee", "fee must be >= 0")
        rec.update(fee=args.fee, net_informed=w.pi_informed - args.fee,
                   net_noise=w.pi_noise - args.fee, maker_net=w.pi_maker + args.fee)
    _emit(render_record(rec, args.format), args.out)
    return 0


def table_rows(mu: Optional[float], v_low: float = 0.0, v_high: float = 1.0) -> list[dict]:
    """Spread and subsidy in units of delta at the five reference eta values.

    With ``mu`` None the entries are coefficient strings such as ``0.8*mu``.
    """
    rows = []
    for eta in TABLE_ETAS:
        if mu is None:
            unit = ModelParams(mu=1.0, eta=eta, v_low=v_low, v_high=v_high)
            sc = model.quotes(unit).spread / unit.delta
            bc = model.welfare(unit).subsidy / unit.delta
            rows.append({"eta": eta,
                         "spread_over_delta": f"{fmt(sc)}*mu" if sc else fmt(0.0),
                         "subsidy_over_delta": f"{fmt(bc)}*mu" if bc else fmt(0.0)})
        else:
            p = ModelParams(mu=mu, eta=eta, v_low=v_low, v_high=v_high)
            rows.append({"eta": eta,
                         "spread_over_delta": model.quotes(p).spread / p.delta,
                         "subsidy_over_delta": model.welfare(p).subsidy / p.delta})
    return rows


def cmd_table(args) -> int:
    rows = table_rows(args.mu, args.v_low, args.v_high)
    _emit(render_rows(("eta", "spread_over_delta", "subsidy_over_delta"), rows, args.format), args.out)
    return 0


def cmd_sweep(args) -> int:
    if args.eta_list is not None and args.epsilon_list is not None:
        raise UsageError("--epsilon-list", "eta and epsilon grids are mutually exclusive")
    spec = SweepSpec(
        mu_values=args.mu_list or [],
        eta_values=args.eta_list or [],
        epsilon_values=args.epsilon_list,
        v_low=args.v_low,
        v_high=args.v_high,
        normalize_by_delta=args.normalize,
    )
    try:
        rows = sweep_rows(spec)
    except ParamError as e:
        flag = {"mu": "--mu-list", "eta": "--eta-list", "epsilon": "--epsilon-list"}.get(e.field)
        raise UsageError(flag or _FLAG_FOR.get(e.field, e.field), str(e)) from None
    _emit(render_rows(SWEEP_COLUMNS, rows, args.format), args.out)
    return 0


def cmd_simulate(args) -> int:
    p = _params(args)
    cfg = SimConfig(params=p, rounds=args.rounds, seed=args.seed, fee=args.fee or 0.0,
                    value_redraw=args.value_mode.replace("-", "_"))
    rep = convergence_report(cfg)
    res = rep.result
    summary = _channel_fields(args, p)
    summary.update(
        rounds=res.rounds, seed=res.seed, fee=res.fee, value_mode=cfg.value_redraw,
        ask=res.ask, bid=res.bid,
        informed_count=res.informed_count, noise_count=res.noise_count,
        mean_pnl_informed=res.mean_pnl_informed, mean_pnl_noise=res.mean_pnl_noise,
        mean_pnl_maker=res.mean_pnl_maker, fee_revenue_per_trade=res.fee_revenue_per_trade,
        observed_buy_frequency=res.observed_buy_frequency,
    )
    cols = ("quantity", "realized", "target", "stderr", "gap", "z")
    rows = [{"quantity": r.name, "realized": r.realized, "target": r.target,
             "stderr": r.stderr, "gap": r.gap, "z": r.z} for r in rep.rows]
    if args.format == "json":
        text = json.dumps({"result": {k: _json_value(v) for k, v in summary.items()},
                           "comparisons": [{c: _json_value(r[c]) for c in cols} for r in rows]},
                          indent=2) + "\n"
    elif args.format == "csv":
        text = render_rows(cols, rows, "csv")
    else:
        text = render_record(summary, "text") + "\n" + render_rows(cols, rows, "text")
    _emit(text, args.out)
    if args.z_max > 0 and not rep.passed(args.z_max):
        print(f"convergence check failed: max |z| = {fmt(rep.max_abs_z())} > {fmt(args.z_max)}",
              file=sys.stderr)
        return 1
    return 0


def cmd_dp(args) -> int:
    if args.epsilon is None:
        raise UsageError("--epsilon", "required")
    if args.eta is not None:
        raise UsageError("--eta", "not accepted by dp; eta is derived from --epsilon")
    p = _params(args)
    q, w = model.quotes(p), model.welfare(p)
    rec = {"epsilon": args.epsilon, "eta": p.eta, "mu": p.mu, "v_low": p.v_low, "v_high": p.v_high,
           "spread": q.spread, "subsidy": w.subsidy, "fee_floor": w.break_even_fee}
    _emit(render_record(rec, args.format), args.out)
    return 0


def oracle_comparison(tree: oracle.OutcomeTree) -> dict[str, tuple[float, float]]:
    """Oracle value and closed-form value for each checked quantity."""
    p = tree.params
    ew = oracle.exact_welfare(tree)
    if tree.quote_rule == "committed_bayesian":
        w, q = model.welfare(p), model.quotes(p)
        ask, bid = q.ask, q.bid
    else:
        w = model.welfare(p.with_eta(0.0))
        ask = model.competitive_ask(p)
        bid = 2 * p.mid - ask
        w = model.WelfareBreakdown(w.pi_informed, w.pi_noise, 0.0, 0.0, 0.0)
    return {
        "ask": (tree.ask, ask),
        "bid": (tree.bid, bid),
        "spread": (tree.spread, ask - bid),
        "posterior_high_buy": (oracle.exact_posterior(tree, "buy"), model.posterior_high(p, "buy")),
        "posterior_high_sell": (oracle.exact_posterior(tree, "sell"), model.posterior_high(p, "sell")),
        "pi_informed": (ew.pi_informed, w.pi_informed),
        "pi_noise": (ew.pi_noise, w.pi_noise),
        "pi_maker": (ew.pi_maker, w.pi_maker),
        "zero_sum_residual": (ew.zero_sum_residual(p.mu), 0.0),
    }


def cmd_oracle(args) -> int:
    p = _params(args)
    tree = oracle.enumerate_outcomes(p, args.quote_rule.replace("-", "_"))
    comp = oracle_comparison(tree)
    gap = max(abs(a - b) for a, b in comp.values())
    atoms = [{"value": a.value, "trader": a.trader, "true_dir": a.true_direction,
              "obs_dir": a.observed_direction, "probability": a.probability,
              "trader_pnl": a.trader_pnl, "maker_pnl": a.maker_pnl} for a in tree.atoms]
    if args.format == "json":
        text = json.dumps({
            "quote_rule": tree.quote_rule,
            "atoms": [{k: _json_value(v) for k, v in a.items()} for a in atoms],
            "comparison": {k: {"oracle": _json_value(a), "closed_form": _json_value(b)}
                           for k, (a, b) in comp.items()},
            "max_abs_gap": _json_value(gap),
        }, indent=2) + "\n"
    else:
        body = render_rows(oracle.ATOM_COLUMNS, atoms, args.format)
        footer = [f"quote_rule={tree.quote_rule}"]
        footer += [f"{k}: oracle={fmt(a)} closed_form={fmt(b)}" for k, (a, b) in comp.items()]
        footer.append(f"max_abs_gap={fmt(gap)}")
        prefix = "# " if args.format == "csv" else ""
        text = body + ("" if args.format == "csv" else "\n") + "".join(prefix + line + "\n" for line in footer)
    _emit(text, args.out)
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; command-line flags take precedence")
    common.add_argument("--mu", type=float, help="informed-trader fraction in [0, 1]")
    common.add_argument("--eta", type=float, help="flip probability in [0, 0.5]")
    common.add_argument("--epsilon", type=float, help="randomized-response budget; sets eta = 1/(1+e^eps)")
    common.add_argument("--v-low", type=float, default=0.0)
    common.add_argument("--v-high", type=float, default=1.0)
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="gmprivacy", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, default_format="text", **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.add_argument("--format", choices=("text", "csv", "json"), default=default_format)
        sp.set_defaults(func=func)
        subs[name] = sp
        return sp

    add("quote", cmd_quote, help="ask, bid, mid and spread")
    sp = add("welfare", cmd_welfare, help="per-trade P&L decomposition and privacy subsidy")
    sp.add_argument("--fee", type=float, help="flat per-trade fee; adds net-of-fee values")
    add("table", cmd_table, default_format="csv", help="spread and subsidy per unit of delta at reference eta values")
    sp = add("sweep", cmd_sweep, default_format="csv", help="grid over mu and eta (or epsilon)")
    sp.add_argument("--mu-list", type=_float_list("--mu-list"))
    sp.add_argument("--eta-list", type=_float_list("--eta-list"))
    sp.add_argument("--epsilon-list", type=_float_list("--epsilon-list"))
    sp.add_argument("--normalize", action="store_true", help="divide money columns by delta")
    sp = add("simulate", cmd_simulate, help="Monte Carlo run checked against the closed forms")
    sp.add_argument("--rounds", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fee", type=float, default=0.0)
    sp.add_argument("--value-mode", choices=("per-round", "fixed-high", "fixed-low"), default="per-round")
    sp.add_argument("--z-max", type=float, default=4.0, help="fail if any |z| exceeds this; 0 disables")
    add("dp", cmd_dp, help="translate a privacy budget into eta, spread and fee floor")
    sp = add("oracle", cmd_oracle, help="dump the enumerated outcome tree")
    sp.add_argument("--quote-rule", choices=("committed-bayesian", "true-direction"),
                    default="committed-bayesian")
    return parser, subs


def _apply_config(argv: list[str], parser, subs) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config or known.command not in subs:
        return
    sp = subs[known.command]
    dests = {a.dest: a for a in sp._actions}
    cfg = {}
    for key, value in read_config(known.config).items():
        if key not in dests or key in ("config", "help", "func"):
            raise UsageError("--config", f"unknown key {key!r} for {known.command}")
        action = dests[key]
        if isinstance(action, argparse._StoreTrueAction):
            cfg[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            cfg[key] = value  # argparse runs string defaults through the flag's type
    sp.set_defaults(**cfg)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        _apply_config(argv, parser, subs)
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
    except ParamError as e:
        print(f"error: {_FLAG_FOR.get(e.field, e.field)}: {e}", file=sys.stderr)
    except GridError as e:
        print(f"error: {_FLAG_FOR.get(e.field, e.field)}: {e}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
