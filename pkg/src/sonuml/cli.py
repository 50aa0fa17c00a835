"""Command-line entry points.

Exit codes follow the BSD sysexits convention: 64 for usage errors, 66 for
unreadable input files, 70 for internal failures. ``validate`` exits 2 when
the report carries error-severity violations so scripts can gate on it.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalogue as cat_mod
from . import principles, stats
from .audio import write_wav
from .sonifier import (
    RenderProfile,
    UnboundConceptError,
    captions_to_vtt,
    element_cue,
    plan_walkthrough,
    render_timeline,
)
from .uml import DiagramParseError, parse_diagram

EX_USAGE = 64
EX_NOINPUT = 66
EX_SOFTWARE = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _load_catalogue(spec: str):
    if spec.startswith("builtin:"):
        return cat_mod.builtin_catalogue(spec.split(":", 1)[1])
    return cat_mod.load_manifest(spec)


def _load_model(path: str):
    with open(path, encoding="utf-8") as f:
        return parse_diagram(f.read())


def _profile(args) -> RenderProfile:
    kwargs = {"audience": args.audience}
    if getattr(args, "tts_cmd", None):
        kwargs["tts_hook"] = args.tts_cmd
    if getattr(args, "no_motif", False):
        kwargs["motif_enabled"] = False
    return RenderProfile(**kwargs)


def cmd_validate(args) -> int:
    catalogue = _load_catalogue(args.catalogue)
    evidence = None
    if args.evidence:
        with open(args.evidence, encoding="utf-8") as f:
            doc = json.load(f)
        evidence = {
            row["element"]: row["fractions"]["proposed"] for row in doc.get("preferences", [])
        }
    report = principles.validate(catalogue, evidence=evidence)
    print(report.to_json() if args.json else report.to_text())
    return 2 if report.errors() else 0


def cmd_render(args) -> int:
    model = _load_model(args.model)
    catalogue = _load_catalogue(args.catalogue)
    profile = _profile(args)
    timeline = plan_walkthrough(model, catalogue, profile)
    buf, track = render_timeline(timeline, catalogue, profile, model.name)
    write_wav(buf, args.out)
    print(f"wrote {args.out}: {buf.duration_s:.2f} s, {len(timeline.events)} events")
    if args.captions:
        with open(args.captions, "w", encoding="utf-8") as f:
            f.write(captions_to_vtt(track))
        print(f"wrote {args.captions}: {len(track.cues)} caption cues")
    return 0


def cmd_cue(args) -> int:
    model = _load_model(args.model)
    catalogue = _load_catalogue(args.catalogue)
    buf, caption = element_cue(model, args.element, catalogue, _profile(args))
    write_wav(buf, args.out)
    print(f"wrote {args.out}: {buf.duration_s:.2f} s — {caption}")
    return 0


def cmd_analyze(args) -> int:
    with open(args.responses, encoding="utf-8") as f:
        dataset = stats.load_responses(f.read())
    report = stats.study_report(dataset, alpha=args.alpha)
    print(report.to_json() if args.json else report.to_text())
    return 0


def cmd_discriminate(args) -> int:
    catalogue = _load_catalogue(args.catalogue)
    violations, matrix, concepts, dropped = principles.check_discriminability(catalogue)
    width = max(len(c) for c in concepts)
    header = " " * (width + 2) + "  ".join(f"{c[:7]:>7}" for c in concepts)
    print(header)
    for i, name in enumerate(concepts):
        cells = "  ".join(f"{matrix[i, j]:7.3f}" for j in range(len(concepts)))
        print(f"{name:<{width}}  {cells}")
    if dropped:
        print(f"dropped zero-variance dimensions: {', '.join(dropped)}")
    for v in violations:
        print(f"below threshold: {' / '.join(v.subjects)} ({v.measured:.3f})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    model = _load_model(args.model)
    catalogue = _load_catalogue(args.catalogue)
    app = create_app(model, catalogue, static_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sonuml", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="lint a catalogue against the auditory principles")
    p.add_argument("catalogue", help="manifest path or builtin:proposed / builtin:baseline")
    p.add_argument("--evidence", help="study report JSON for the transparency check")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="render a diagram walkthrough to WAV")
    p.add_argument("model")
    p.add_argument("catalogue")
    p.add_argument("--audience", choices=("novice", "expert"), default="expert")
    p.add_argument("--out", default="walkthrough.wav")
    p.add_argument("--captions", help="also write a WebVTT caption track")
    p.add_argument("--tts-cmd", help="external TTS command template ({text} placeholder)")
    p.add_argument("--no-motif", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("cue", help="render one element's cue to WAV")
    p.add_argument("model")
    p.add_argument("catalogue")
    p.add_argument("element", help="element ref, e.g. classifier:Book or rel:0")
    p.add_argument("--audience", choices=("novice", "expert"), default="expert")
    p.add_argument("--out", default="cue.wav")
    p.set_defaults(func=cmd_cue)

    p = sub.add_parser("analyze", help="reproduce the study analysis from a response CSV")
    p.add_argument("responses")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("discriminate", help="print the earcon distance matrix")
    p.add_argument("catalogue")
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("serve", help="serve the navigation HTTP API")
    p.add_argument("model")
    p.add_argument("catalogue")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="directory with the built browser client to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EX_USAGE
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"sonuml: cannot read {exc.filename}", file=sys.stderr)
        return EX_NOINPUT
    except IsADirectoryError as exc:
        print(f"sonuml: {exc.filename} is a directory", file=sys.stderr)
        return EX_NOINPUT
    except (
        DiagramParseError,
        cat_mod.CatalogueError,
        stats.ResponseFormatError,
        UnboundConceptError,
        KeyError,
        ValueError,
    ) as exc:
        print(f"sonuml: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to sysexits
        print(f"sonuml: internal error: {exc}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
