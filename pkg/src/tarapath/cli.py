"""Command-line interface.

One binary, scriptable exit codes:

    0   success / no policy breach
    1   validation failure
    2   risk-policy breach (--fail-on-risk)
    64  usage error
    65  input data error
    66  missing input file
"""

from __future__ import annotations

import argparse
import logging
import sys

from tarapath import __version__
from tarapath.catalog import CatalogError, load_catalog_file
from tarapath.compiler import (
    CompileError,
    compile_pack,
    load_meta_file,
    rules_from_text,
    rules_to_text,
)
from tarapath.dsl import RuleFileError, parse_rule_file
from tarapath.matching import KERNEL_NAME, evaluate_rules
from tarapath.model import ModelError, build_model, validate_model
from tarapath.report import build_report, max_risk, render_json, render_markdown
from tarapath.scoring import DEFAULT_CONFIG, ScoringError, load_config_file
from tarapath.trees import (
    TreeError,
    count_paths,
    load_tree_file,
    merge_trees,
    reduce_tree,
    save_tree,
    sp_semantics,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RISK_POLICY = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NO_INPUT = 66

logger = logging.getLogger(__name__)


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage problems through our exit code."""

    def error(self, message: str):  # noqa: D102
        raise _UsageError(message)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror}") from exc


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


# -- Subcommands ----------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        model = build_model(_read_text(args.model))
    except ModelError as exc:
        print(f"invalid: {exc}")
        return EXIT_INVALID
    violations = validate_model(model)
    if violations:
        for violation in violations:
            print(violation)
        print(f"{len(violations)} violation(s)")
        return EXIT_INVALID
    print(
        f"ok: {len(model.elements)} elements, {len(model.connectors)} connectors, "
        f"{len(model.boundaries)} boundaries, {len(model.assets)} assets"
    )
    return EXIT_OK


def cmd_rules_check(args: argparse.Namespace) -> int:
    try:
        entries = parse_rule_file(_read_text(args.rules))
    except RuleFileError as exc:
        print(f"invalid: {exc}")
        return EXIT_INVALID
    print(f"ok: {len(entries)} rule(s)")
    return EXIT_OK


def cmd_tree_build(args: argparse.Namespace) -> int:
    catalog = load_catalog_file(args.catalog)
    tree = catalog.tree_for(args.asset)
    if args.reduce:
        tree = reduce_tree(tree)
    _write_output(save_tree(tree), args.output)
    return EXIT_OK


def cmd_tree_merge(args: argparse.Namespace) -> int:
    tree = load_tree_file(args.tree)
    env = {}
    for binding in args.bind:
        name, _, path = binding.partition("=")
        if not name or not path:
            raise _UsageError(f"--bind expects ID=TREEFILE, got {binding!r}")
        env[name] = load_tree_file(path)
    merged = merge_trees(tree, env)
    if args.reduce:
        merged = reduce_tree(merged)
    _write_output(save_tree(merged), args.output)
    return EXIT_OK


def cmd_paths(args: argparse.Namespace) -> int:
    tree = load_tree_file(args.tree)
    if args.enumerate:
        graphs = sp_semantics(tree)
        for graph in graphs:
            print(graph.render())
        print(f"{len(graphs)} path(s)")
    else:
        print(count_paths(tree))
    return EXIT_OK


def cmd_compile(args: argparse.Namespace) -> int:
    trees = [load_tree_file(path) for path in args.tree]
    meta = load_meta_file(args.meta)
    config = load_config_file(args.config) if args.config else DEFAULT_CONFIG
    rules = compile_pack(trees, meta, config)
    if args.dry_run:
        print(f"{len(rules)} rule(s)")
        return EXIT_OK
    _write_output(rules_to_text(rules), args.output)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        model = build_model(_read_text(args.model))
        violations = validate_model(model)
        if violations:
            raise ModelError("; ".join(str(v) for v in violations))
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_DATA

    rules = rules_from_text(_read_text(args.rules))
    if args.config:
        load_config_file(args.config)  # validated; scores are already in the pack
    logger.info("evaluating %d rules with the %s kernel", len(rules), KERNEL_NAME)

    findings = evaluate_rules(rules, model)
    report = build_report(
        model,
        rules,
        findings,
        model_path=args.model,
        rules_path=args.rules,
        config_name=args.config or "default",
    )
    text = render_markdown(report) if args.format == "md" else render_json(report)
    _write_output(text, args.output)

    if args.fail_on_risk is not None and findings:
        if max_risk(findings) >= args.fail_on_risk:
            return EXIT_RISK_POLICY
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    import json

    try:
        report = json.loads(_read_text(args.report))
    except json.JSONDecodeError as exc:
        print(f"report error: not valid JSON: {exc}", file=sys.stderr)
        return EXIT_DATA
    text = render_markdown(report) if args.format == "md" else render_json(report)
    _write_output(text, args.output)
    return EXIT_OK


# -- Parser wiring ----------------------------------------------------------------


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="tarapath",
        description="Attack-tree threat rules and TARA work products for vehicle models.",
    )
    parser.add_argument("--version", action="version", version=f"tarapath {__version__}")
    parser.add_argument(
        "--verbose", action="store_true", help="log progress details to stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file against the invariants")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rules-check", help="parse a rule file and report problems")
    p.add_argument("rules")
    p.set_defaults(func=cmd_rules_check)

    p = sub.add_parser("tree-build", help="build an asset's tree from a catalog")
    p.add_argument("catalog")
    p.add_argument("--asset", required=True, help="owning asset or entry-point id")
    p.add_argument("--reduce", action="store_true", help="group branches with shared requirements")
    p.add_argument("-o", "--output", help="tree file to write (default: stdout)")
    p.set_defaults(func=cmd_tree_build)

    p = sub.add_parser("tree-merge", help="substitute bound trees into reference leaves")
    p.add_argument("tree")
    p.add_argument(
        "--bind",
        action="append",
        default=[],
        metavar="ID=TREEFILE",
        help="bind a reference id to a tree file (repeatable)",
    )
    p.add_argument("--reduce", action="store_true", help="group branches with shared requirements")
    p.add_argument("-o", "--output", help="tree file to write (default: stdout)")
    p.set_defaults(func=cmd_tree_merge)

    p = sub.add_parser("paths", help="count or enumerate a merged tree's attack paths")
    p.add_argument("tree")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--count", action="store_true", help="print the path count (default)")
    group.add_argument("--enumerate", action="store_true", help="print one line per path")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("compile", help="compile merged trees into a threat rule pack")
    p.add_argument("tree", nargs="+")
    p.add_argument("--meta", required=True, help="work-product metadata file")
    p.add_argument("--config", help="scoring configuration file")
    p.add_argument("--dry-run", action="store_true", help="print the rule count only")
    p.add_argument("-o", "--output", help="rule file to write (default: stdout)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("analyze", help="evaluate a rule pack against a model")
    p.add_argument("model")
    p.add_argument("rules")
    p.add_argument("--config", help="scoring configuration file")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.add_argument(
        "--fail-on-risk",
        type=int,
        metavar="N",
        help="exit 2 when any finding reaches risk N",
    )
    p.add_argument("-o", "--output", help="report file to write (default: stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("report")
    p.add_argument("--format", choices=("json", "md"), default="md")
    p.add_argument("-o", "--output", help="file to write (default: stdout)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)

    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_NO_INPUT
    except (CatalogError, CompileError, TreeError, RuleFileError, ScoringError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
