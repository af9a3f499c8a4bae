# cogs/core.py
import logging

from modules.core import fine_to_depth, hyperspace_profile, is_grid_for, is_n_grid, load_hyperspace
from modules.errors import MalformedInputError
from modules.setsystem import format_set_system, load_set_system
from modules.settings import get_settings

logger = logging.getLogger(__name__)


class CoreCommands:
    """grid and fine checks on a finite hyperspace"""

    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("grid", self.grid, "is the hyperspace an (n, I)-grid at the given bound")
        p.add_argument("hyperspace", help="hyperspace JSON")
        p.add_argument("--system", default=None,
                       help="set system file of index sets; all 2-subsets (n-grid) when omitted")
        p.add_argument("--bound", type=int, default=None,
                       help="largest allowed intersection size (default: HYPERSPACE_GRID_BOUND)")
        p.add_argument("--profile", action="store_true",
                       help="print the index sets whose intersections all stay within the bound")

        p = cli.add_command("fine", self.fine, "is the hyperspace bound-fine to depth d")
        p.add_argument("hyperspace", help="hyperspace JSON")
        p.add_argument("--bound", type=int, default=None,
                       help="largest allowed window intersection (default: HYPERSPACE_GRID_BOUND)")
        p.add_argument("--d", type=int, required=True, help="depth to test")
        p.add_argument("--max-ground", type=int, default=None,
                       help="refuse more relations than this (default: HYPERSPACE_DANDY_MAX_GROUND)")

    def _bound(self, args) -> int:
        bound = args.bound if args.bound is not None else get_settings().grid_bound
        if bound < 0:
            raise MalformedInputError(f"--bound must be non-negative, got {bound}")
        return bound

    def grid(self, args):
        space = load_hyperspace(args.hyperspace)
        bound = self._bound(args)
        if args.profile:
            self.cli.emit(format_set_system(hyperspace_profile(space, bound)))
            return
        if args.system:
            verdict = is_grid_for(space, load_set_system(args.system), bound)
        else:
            verdict = is_n_grid(space, bound)
        logger.info(f"grid check at bound {bound}: {verdict}")
        self.cli.emit("true" if verdict else "false")

    def fine(self, args):
        space = load_hyperspace(args.hyperspace)
        verdict = fine_to_depth(space, self._bound(args), args.d, max_ground=args.max_ground)
        self.cli.emit("true" if verdict else "false")


def setup(cli):
    cli.add_cog(CoreCommands(cli))
