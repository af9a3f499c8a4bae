# cogs/stream.py
import argparse
import json
import logging

from modules.core import coloring_from_dict, coloring_to_dict, load_hyperspace
from modules.cubes import OMEGA, CubeSpec, cube_stream, parse_factors
from modules.errors import MalformedInputError
from modules.setsystem import SetTuple, load_set_tuple
from modules.settings import get_settings
from modules.spray import SprayConfig, parse_centers, spray_stream
from modules.stream import COLORING_STRATEGIES, StreamHyperspace, acceptability_audit, single_class_stream, stream_from_hyperspace

logger = logging.getLogger(__name__)

STREAM_KINDS = ("cube", "spray", "single-class", "file")


def add_stream_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("stream")
    group.add_argument("--stream", choices=STREAM_KINDS, default="cube", help="which countable structure to enumerate")
    group.add_argument("--stuple", "--tuple", dest="tuple_path", default=None, help="set tuple file of the cube")
    group.add_argument("--n-cube", type=int, default=2, help="use the n-cube tuple <{0},...,{n-1}> when no --tuple")
    group.add_argument("--factors", default=None, help="factor sizes like '3,3' or 'omega,omega' (default: all omega)")
    group.add_argument("--centers", default="0,0;1,0;0,1", help="spray centers, ';'-separated points")
    group.add_argument("--relations", type=int, default=2, help="relation count of the single-class stream")
    group.add_argument("--declared-bound", type=int, default=None,
                       help="declared total-intersection bound of the single-class stream "
                            "(default: HYPERSPACE_PIGEONHOLE_THRESHOLD)")
    group.add_argument("--hyperspace", default=None, help="finite hyperspace JSON for --stream file")


def load_tuple(args) -> SetTuple:
    if args.tuple_path:
        return load_set_tuple(args.tuple_path)
    return SetTuple.singletons(args.n_cube)


def resolve_workers(value) -> int:
    """--workers, falling back to HYPERSPACE_WORKERS"""
    if value is None:
        return get_settings().workers
    if value < 1:
        raise MalformedInputError(f"--workers must be at least 1, got {value}")
    return value


def build_stream(args) -> StreamHyperspace:
    if args.stream == "cube":
        stuple = load_tuple(args)
        factors = parse_factors(args.factors) if args.factors else (OMEGA,) * stuple.m
        return cube_stream(CubeSpec(stuple, factors))
    if args.stream == "spray":
        return spray_stream(SprayConfig(parse_centers(args.centers)))
    if args.stream == "single-class":
        bound = args.declared_bound if args.declared_bound is not None else get_settings().pigeonhole_threshold
        return single_class_stream(args.relations, bound)
    if not args.hyperspace:
        raise MalformedInputError("--stream file needs --hyperspace PATH")
    return stream_from_hyperspace(load_hyperspace(args.hyperspace))


class StreamCommands:
    """color and audit"""

    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("color", self.color, "color a prefix a_0..a_{N-1} of a stream")
        add_stream_arguments(p)
        p.add_argument("--N", dest="length", type=int, required=True, help="prefix length")
        p.add_argument("--strategy", choices=sorted(COLORING_STRATEGIES), default="greedy", help="coloring strategy")

        p = cli.add_command("audit", self.audit, "audit a coloring of a stream prefix against the greedy certificate")
        add_stream_arguments(p)
        p.add_argument("--N", dest="length", type=int, required=True, help="prefix length")
        p.add_argument("--strategy", choices=sorted(COLORING_STRATEGIES), default="greedy",
                       help="coloring strategy used when no --coloring file is given")
        p.add_argument("--coloring", default=None, help="coloring JSON {\"n\":..,\"colors\":[..]}")
        p.add_argument("--workers", type=int, default=None, help="counting threads (default: HYPERSPACE_WORKERS)")

    def color(self, args):
        if args.length < 0:
            raise MalformedInputError("--N must be non-negative")
        stream = build_stream(args)
        coloring = COLORING_STRATEGIES[args.strategy](stream, args.length)
        self.cli.emit_json(coloring_to_dict(coloring))

    def audit(self, args):
        if args.length < 0:
            raise MalformedInputError("--N must be non-negative")
        stream = build_stream(args)
        if args.coloring:
            try:
                with open(args.coloring, 'r', encoding='utf-8') as f:
                    coloring = coloring_from_dict(json.load(f))
            except (OSError, json.JSONDecodeError) as e:
                raise MalformedInputError(f"cannot read coloring {args.coloring}: {e}")
        else:
            coloring = COLORING_STRATEGIES[args.strategy](stream, args.length)
        report = acceptability_audit(stream, coloring, args.length, workers=resolve_workers(args.workers))
        logger.info(f"{stream.name}: max count {report.max_count}, {len(report.violations)} violations")
        self.cli.emit_json(report.as_dict())


def setup(cli):
    cli.add_cog(StreamCommands(cli))
