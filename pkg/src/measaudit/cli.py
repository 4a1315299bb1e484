"""Command line entry point: ``audit``, ``synth``, ``render``.

Exit status of ``audit``: 0 stable, 10 unstable, 1 any operational error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import AuditError
from .ingest import write_csv
from .pipeline import EXIT_ERROR, exit_status, run_audit, write_outputs
from .report import read_report
from .rng import RngStream
from .svg import render_figure
from .synth import SynthSpec, generate_synthetic


def cmd_audit(args) -> int:
    from .config import load_config

    config = load_config(args.config).with_overrides(args.out, args.seed, args.reproducible)
    result = run_audit(config)
    out = Path(config.output.directory)
    if not out.is_absolute() and args.out is None:
        out = config.base_dir / out
    write_outputs(result, out, config.output.emit_figure)
    for e in result.evaluations:
        print(f"{e.realization_id}: mse_train={e.mse_train:.6g} mse_test={e.mse_test:.6g}")
    for p in result.stability.pairs:
        s = p.stats
        print(f"{s.pair[0]} vs {s.pair[1]}: mean={s.mean_disagreement:.4g} "
              f"rel_mean={s.relative_mean_disagreement:.4g} r={s.pearson_r:.4f} -> {p.verdict}")
    if result.contrast.robust_but_unstable:
        print("all realizations robust, yet measurements unstable")
    print(f"verdict: {'STABLE' if result.stable else 'UNSTABLE'}; report in {out}")
    return exit_status(result)


def cmd_synth(args) -> int:
    try:
        spec = SynthSpec.from_json(Path(args.spec).read_text())
    except OSError as exc:
        raise AuditError(f"cannot read synth spec: {exc}") from None
    except json.JSONDecodeError as exc:
        raise AuditError(f"synth spec is not valid JSON: {exc}") from None
    dataset = generate_synthetic(spec, RngStream(args.seed, ("synth",)))
    with open(args.out, "w", newline="") as fh:
        write_csv(dataset, fh)
    return 0


def cmd_render(args) -> int:
    render_figure(read_report(args.report), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="measaudit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="train realizations, evaluate, and test measurement stability")
    p.add_argument("--config", required=True, help="INI configuration file")
    p.add_argument("--out", help="output directory (overrides output.directory)")
    p.add_argument("--seed", type=int, help="master seed (overrides evaluation.master_seed)")
    p.add_argument("--reproducible", action="store_true",
                   help="take the timestamp from the config so reports are byte-identical")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("synth", help="write a synthetic dataset as standard CSV")
    p.add_argument("--spec", required=True, help="JSON synth spec")
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="render the four-panel SVG from a JSON report")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AuditError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
