"""Command line interface.

Exit codes: 0 success, 2 bad input (parse, validation, option values),
3 I/O failure, 4 a brute-force or size guard refused the instance.
"""

from __future__ import annotations

import argparse
import itertools
import sys

from .bench import run_experiment, summarize, write_results_csv, write_summary_csv
from .convert import ConversionConfig, convert, load_oom, save_oom
from .diagram import DiagramError, GuardExceeded, InfluenceDiagram, load, validate
from .exact import PolicyEvaluator, solve_exact
from .generator import GeneratorParams
from .oom_solve import elim_oom_id


def _load_valid(path: str) -> InfluenceDiagram:
    diagram = load(path)
    problems = validate(diagram)
    if problems:
        raise DiagramError("; ".join(problems))
    return diagram


def _print_policy(diagram: InfluenceDiagram, policy) -> None:
    print("policy:")
    for d in diagram.decision_order:
        rule = policy.rules[d]
        domain = diagram.domain(d)
        if not rule.scope:
            print(f"  {d}: {domain[rule.actions[0]]}")
            continue
        labels = [diagram.domain(v) for v in rule.scope]
        for i, cfg in enumerate(itertools.product(*labels)):
            ctx = ", ".join(f"{v}={val}" for v, val in zip(rule.scope, cfg))
            print(f"  {d} | {ctx}: {domain[rule.actions[i]]}")


def _cmd_validate(args) -> int:
    diagram = load(args.diagram)
    problems = validate(diagram)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 2
    print("valid")
    return 0


def _cmd_solve_exact(args) -> int:
    diagram = _load_valid(args.diagram)
    solution = solve_exact(diagram)
    print(f"MEU = {solution.meu:.6f}")
    _print_policy(diagram, solution.policy)
    return 0


def _cmd_convert(args) -> int:
    diagram = _load_valid(args.diagram)
    oom = convert(diagram, ConversionConfig(args.epsilon))
    save_oom(oom, args.out)
    print(f"wrote {args.out}")
    return 0


def _solve_oom_diagram(args):
    if args.oom:
        return load_oom(args.diagram)
    if args.epsilon is None:
        raise DiagramError("--epsilon is required unless --oom is given")
    return convert(_load_valid(args.diagram), ConversionConfig(args.epsilon))


def _cmd_solve_oom(args) -> int:
    oom = _solve_oom_diagram(args)
    solution = elim_oom_id(oom)
    policies = solution.policies
    print(f"MEU = {solution.meu}")
    print(f"policies = {policies.count()}")
    for d in policies.decisions:
        scope = policies.scopes[d]
        domain = oom.domain(d)

        def actions(cell):
            return "{" + ",".join(domain[i] for i in sorted(cell)) + "}"

        if not scope:
            print(f"  {d}: {actions(policies.cells[d][0])}")
            continue
        labels = [oom.domain(v) for v in scope]
        for cfg, cell in zip(itertools.product(*labels), policies.cells[d]):
            ctx = ", ".join(f"{v}={val}" for v, val in zip(scope, cfg))
            print(f"  {d} | {ctx}: {actions(cell)}")
    return 0


def _cmd_compare(args) -> int:
    diagram = _load_valid(args.diagram)
    v = solve_exact(diagram).meu
    oom = convert(diagram, ConversionConfig(args.epsilon))
    solution = elim_oom_id(oom)
    policies, replaced = solution.policies.sample(args.samples, seed=args.seed)
    evaluator = PolicyEvaluator(diagram)
    utilities = sorted(evaluator.evaluate(p) for p in policies)
    v_med = utilities[(len(utilities) - 1) // 2]
    v_max = utilities[-1]
    if v == 0.0:
        eta_med, eta_max = abs(v - v_med), abs(v - v_max)
    else:
        eta_med = abs((v - v_med) / v)
        eta_max = abs((v - v_max) / v)
    print(f"v = {v:.6f}")
    print(f"v_med = {v_med:.6f}")
    print(f"v_max = {v_max:.6f}")
    print(f"eta_med = {eta_med:.6f}")
    print(f"eta_max = {eta_max:.6f}")
    print(f"policies = {solution.policies.count()}")
    if replaced:
        print("note: sampled with replacement (policy set smaller than sample size)")
    print("sampled utilities: " + " ".join(f"{u:.6f}" for u in utilities))
    return 0


def _cmd_bench(args) -> int:
    sizes = [int(x) for x in args.n.split(",") if x]
    epsilons = [float(x) for x in args.epsilons.split(",") if x]
    for eps in epsilons:
        ConversionConfig(eps)  # range check up front
    results = []
    for n in sizes:
        params = GeneratorParams(
            n_c=n - 5,
            n_d=5,
            k=2,
            p=2,
            r=5,
            a=5,
            utility_class=args.utility_class,
        )
        results.extend(
            run_experiment(
                params,
                epsilons,
                s=args.samples,
                instances=args.instances,
                seed=args.seed,
            )
        )
    write_results_csv(results, args.out)
    print(f"wrote {args.out} ({len(results)} rows)")
    if args.summary_out:
        write_summary_csv(summarize(results), args.summary_out)
        print(f"wrote {args.summary_out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oomid",
        description="Exact and order-of-magnitude influence diagram solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram file")
    p.add_argument("diagram")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("solve-exact", help="maximum expected utility and policy")
    p.add_argument("diagram")
    p.set_defaults(fn=_cmd_solve_exact)

    p = sub.add_parser("convert", help="quantize a numeric diagram")
    p.add_argument("diagram")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_convert)

    p = sub.add_parser("solve-oom", help="qualitative MEU and optimal policy set")
    p.add_argument("diagram")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--oom", action="store_true", help="input is already qualitative")
    p.set_defaults(fn=_cmd_solve_oom)

    p = sub.add_parser("compare", help="score sampled qualitative policies")
    p.add_argument("diagram")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("bench", help="random-diagram policy quality experiment")
    p.add_argument("--class", dest="utility_class", choices=("P", "M"), default="P")
    p.add_argument("--n", default="25,35,45", help="comma-separated total sizes")
    p.add_argument("--epsilons", default="0.5,0.05,0.005")
    p.add_argument("--instances", type=int, default=30)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--summary-out", default=None)
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:  # DiagramError and option range errors
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
