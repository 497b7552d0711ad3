"""Command-line entry point for the capture adapter.

Exit codes: 0 success, 2 unopenable source or bad options, 5 pose model
load failure.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import ExitStack

from .backends import BackendUnavailableError, make_backend
from .capture import CaptureConfig, SourceError, run_capture

EXIT_OK = 0
EXIT_SOURCE = 2
EXIT_MODEL = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posecapture",
        description="Run a pose-landmark backend on a video source and emit "
                    "landmark frames as JSON Lines.")
    parser.add_argument("--source", default="0",
                        help="device index or video file path")
    parser.add_argument("--output", default="-",
                        help="output JSONL path or - for stdout")
    parser.add_argument("--duration", type=float, default=None,
                        help="stop after this many seconds of source time")
    parser.add_argument("--backend", choices=("mediapipe", "marker"),
                        default="mediapipe")
    parser.add_argument("--model-complexity", type=int, default=1,
                        choices=(0, 1, 2))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.duration is not None and args.duration <= 0:
        print("error: --duration must be positive", file=sys.stderr)
        return EXIT_SOURCE

    try:
        backend = make_backend(args.backend, args.model_complexity)
    except BackendUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL

    config = CaptureConfig(source=args.source, max_duration_s=args.duration)
    with ExitStack() as stack:
        if args.output == "-":
            out = sys.stdout
        else:
            try:
                out = stack.enter_context(open(args.output, "w", encoding="utf-8"))
            except OSError as exc:
                print(f"error: cannot write {args.output}: {exc.strerror}",
                      file=sys.stderr)
                return EXIT_SOURCE
        try:
            frames = run_capture(config, backend, out)
        except SourceError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SOURCE
    print(f"captured {frames} frames", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
