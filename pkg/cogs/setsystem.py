# cogs/setsystem.py
import logging

from modules.setsystem import (
    dandy_to_depth,
    depth,
    depth_witness,
    format_set_system,
    induced_system,
    load_set_system,
    load_set_tuple,
    minimum_transversal,
    transversal_number,
    tuple_transversal_number,
)
from modules.settings import get_settings

logger = logging.getLogger(__name__)


class SetSystemCommands:
    """depth, tau, dandy and induced"""

    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("depth", self.depth, "depth of a set system (least number of transversals with empty intersection)")
        p.add_argument("path", help="set system file: 'n=<ground>' then one member per line")
        p.add_argument("--witness", action="store_true", help="print the realizing transversals as JSON")

        p = cli.add_command("tau", self.tau, "transversal number of a set system or of a set tuple")
        p.add_argument("path", help="set system file, or set tuple file with --tuple")
        p.add_argument("--tuple", action="store_true", help="read an 'n=<n> m=<m>' set tuple")
        p.add_argument("--witness", action="store_true", help="print the least minimum transversal as JSON")

        p = cli.add_command("dandy", self.dandy, "is the set system dandy to depth d")
        p.add_argument("path", help="set system file")
        p.add_argument("--d", type=int, required=True, help="depth to test")
        p.add_argument("--max-ground", type=int, default=None,
                       help="refuse grounds larger than this (default: HYPERSPACE_DANDY_MAX_GROUND)")

        p = cli.add_command("induced", self.induced, "the set system I(S) induced by a set tuple")
        p.add_argument("path", help="set tuple file")

    def depth(self, args):
        system = load_set_system(args.path)
        if args.witness:
            witness = depth_witness(system)
            self.cli.emit_json({
                "depth": str(depth(system)),
                "transversals": None if witness is None else [sorted(t) for t in witness],
            })
            return
        self.cli.emit(str(depth(system)))

    def tau(self, args):
        system = load_set_tuple(args.path).as_family() if args.tuple else load_set_system(args.path)
        tau = transversal_number(system)
        if args.witness:
            best = minimum_transversal(system)
            self.cli.emit_json({"tau": str(tau), "transversal": None if best is None else sorted(best)})
            return
        self.cli.emit(str(tau))

    def dandy(self, args):
        system = load_set_system(args.path)
        max_ground = args.max_ground if args.max_ground is not None else get_settings().dandy_max_ground
        self.cli.emit("true" if dandy_to_depth(system, args.d, max_ground=max_ground) else "false")

    def induced(self, args):
        stuple = load_set_tuple(args.path)
        system = induced_system(stuple)
        logger.info(f"I{stuple} has {len(system)} members, tau = {tuple_transversal_number(stuple)}")
        self.cli.emit(format_set_system(system))


def setup(cli):
    cli.add_cog(SetSystemCommands(cli))
