import sys
import argparse

from itflow.data import VERSION
from itflow.harness.run import RunConfig, cmd_run, cmd_validate


def build_parser():
    parser = argparse.ArgumentParser(
        prog="itflow",
        description="Validate interaction-technique worlds and replay scripted input through them.",
    )
    parser.add_argument("--version", action="version", version=f"itflow {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a world file")
    p_validate.add_argument("world", help="world XML file")

    p_run = sub.add_parser("run", help="replay a script through a world and write a trace")
    p_run.add_argument("world", help="world XML file")
    p_run.add_argument("--script", required=True, help="input script (JSONL)")
    p_run.add_argument("--steps", type=int, required=True, help="number of steps to run")
    p_run.add_argument("--dt", type=float, default=None, help="step duration in seconds")
    p_run.add_argument("--trace", default=None, help="trace output (JSONL), stdout if omitted")
    p_run.add_argument("--seed", type=int, default=0, help="recorded in the trace header")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args.world)
    try:
        config = RunConfig(
            world_path=args.world,
            script_path=args.script,
            steps=args.steps,
            dt=args.dt,
            trace_path=args.trace,
            seed=args.seed,
        )
    except ValueError as e:
        print(f"itflow run: {e}", file=sys.stderr)
        return 2
    return cmd_run(config)
