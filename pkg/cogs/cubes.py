# cogs/cubes.py
from cogs.stream import load_tuple
from modules.core import hyperspace_to_dict
from modules.cubes import CubeSpec, make_cube, make_halfcube, parse_factors
from modules.errors import MalformedInputError


def _with_payloads(space):
    data = hyperspace_to_dict(space)
    data["payloads"] = [list(p) for p in space.payloads]
    return data


def _add_tuple_arguments(p):
    p.add_argument("--stuple", "--tuple", dest="tuple_path", default=None, help="set tuple file")
    p.add_argument("--n", "--n-cube", dest="n_cube", type=int, default=2,
                   help="use the n-cube tuple <{0},...,{n-1}> when no --stuple")
    p.add_argument("--out", default=None, help="write the hyperspace JSON here instead of stdout")


class CubeCommands:
    """cube and halfcube generators, printed as hyperspace JSON"""

    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("cube", self.cube, "the finite S-cube over the given factors")
        _add_tuple_arguments(p)
        p.add_argument("--factors", required=True, help="finite factor sizes like '3,3'")

        p = cli.add_command("halfcube", self.halfcube, "the S-cube over k restricted to increasing m-tuples")
        _add_tuple_arguments(p)
        p.add_argument("--k", type=int, required=True, help="size of the underlying set")
        p.add_argument("--allow-empty", action="store_true", help="accept k < m and print an empty structure")

    def cube(self, args):
        stuple = load_tuple(args)
        space = make_cube(CubeSpec(stuple, parse_factors(args.factors)))
        self.cli.emit_json(_with_payloads(space), args.out)

    def halfcube(self, args):
        if args.k < 0:
            raise MalformedInputError("--k must be non-negative")
        space = make_halfcube(load_tuple(args), args.k, allow_empty=args.allow_empty)
        self.cli.emit_json(_with_payloads(space), args.out)


def setup(cli):
    cli.add_cog(CubeCommands(cli))
