# cogs/spray.py
import logging

from cogs.stream import resolve_workers
from modules.errors import MalformedInputError
from modules.spray import SprayConfig, cover_with_sprays, parse_centers, write_cover_csv

logger = logging.getLogger(__name__)


class SprayCommands:
    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("spray-cover", self.spray_cover, "greedy spray cover of a prefix of the rational grid")
        p.add_argument("--centers", default="0,0;1,0;0,1", help="';'-separated centers, coordinates may be fractions")
        p.add_argument("--N", dest="length", type=int, required=True, help="number of grid points")
        p.add_argument("--plot", default=None, help="write x_num,x_den,y_num,y_den,color rows to this CSV")
        p.add_argument("--counts", action="store_true", help="include every per-(a, i) count in the report")
        p.add_argument("--workers", type=int, default=None, help="counting threads (default: HYPERSPACE_WORKERS)")

    def spray_cover(self, args):
        if args.length < 0:
            raise MalformedInputError("--N must be non-negative")
        config = SprayConfig(parse_centers(args.centers))
        cover = cover_with_sprays(config, args.length, workers=resolve_workers(args.workers))
        if args.plot:
            write_cover_csv(cover, args.plot)
            logger.info(f"cover written to {args.plot}")
        report = cover.audit.as_dict()
        if not args.counts:
            report.pop("counts")
        report["max_count"] = cover.audit.max_count
        report["color_sizes"] = [cover.coloring.assignment.count(i) for i in range(config.n)]
        self.cli.emit_json(report)


def setup(cli):
    cli.add_cog(SprayCommands(cli))
