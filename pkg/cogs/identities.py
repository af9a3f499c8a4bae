# cogs/identities.py
import json

from modules.errors import IdentityRefutedError
from modules.identities import SUITES, run_suites
from modules.settings import get_settings


class IdentityCommands:
    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("check-identities", self.check_identities,
                            "run the set-system and cube identity suites and report counterexamples")
        p.add_argument("--n-max", type=int, default=4, help="largest ground size of the exhaustive checks")
        p.add_argument("--samples", type=int, default=500, help="random instances per sampled suite")
        p.add_argument("--seed", type=int, default=None, help="seed of the sampled suites (default: HYPERSPACE_SEED)")
        p.add_argument("--suite", action="append", choices=sorted(SUITES), default=None,
                       help="run only this suite (repeatable)")

    def check_identities(self, args):
        seed = args.seed if args.seed is not None else get_settings().seed
        results = run_suites(args.n_max, args.samples, seed, args.suite)
        for result in results:
            if result.passed:
                self.cli.emit(f"PASS {result.name} ({result.checked} checked)")
            else:
                self.cli.emit(f"FAIL {result.name} ({result.checked} checked): "
                              f"{json.dumps(result.counterexample, sort_keys=True)}")
        failed = [r for r in results if not r.passed]
        if failed:
            raise IdentityRefutedError(failed[0].name, failed[0].counterexample)


def setup(cli):
    cli.add_cog(IdentityCommands(cli))
