# cogs/morphisms.py
import logging

from cogs.stream import add_stream_arguments, build_stream
from modules.core import load_hyperspace
from modules.errors import IndeterminateError, MalformedInputError
from modules.morphisms import FINDERS, MorphismKind, SearchStatus, Verdict, fcn_estimate
from modules.setsystem import format_set_tuple
from modules.settings import get_settings, parse_count
from modules.stream import prefix_hyperspace

logger = logging.getLogger(__name__)


class MorphismCommands:
    """embed and fcn"""

    def __init__(self, cli):
        self.cli = cli

        p = cli.add_command("embed", self.embed, "search an embedding, weak embedding or parbedding of B into A")
        p.add_argument("source", nargs="?", default=None, help="hyperspace JSON of B (or --from)")
        p.add_argument("target", nargs="?", default=None, help="hyperspace JSON of A (or --to)")
        p.add_argument("--from", dest="from_path", default=None, help="hyperspace JSON of B")
        p.add_argument("--to", dest="to_path", default=None, help="hyperspace JSON of A")
        p.add_argument("--kind", choices=[k.value for k in MorphismKind], default="embed", help="morphism kind")
        p.add_argument("--budget", "--node-budget", dest="node_budget", type=parse_count, default=None,
                       help="search nodes before giving up, '1e7' accepted (default: HYPERSPACE_NODE_BUDGET)")

        p = cli.add_command("fcn", self.fcn, "budget-relative finite cube number of a finite structure")
        add_stream_arguments(p)
        p.add_argument("--N", dest="length", type=int, default=None,
                       help="use the stream prefix of this length instead of a --hyperspace file")
        p.add_argument("--budget", type=int, default=2, help="largest cube factor size checked")
        p.add_argument("--node-budget", type=parse_count, default=None, help="search nodes per cube check")
        p.add_argument("--nonempty-only", action="store_true", help="only tuples of nonempty sets")
        p.add_argument("--witness-out", default=None, help="write the witness set tuple here (input of cube --stuple)")

    def _node_budget(self, args) -> int:
        return args.node_budget if args.node_budget is not None else get_settings().node_budget

    def _endpoint(self, positional, flag, name):
        if positional and flag and positional != flag:
            raise MalformedInputError(f"{name} given twice: {positional} and {flag}")
        path = flag or positional
        if not path:
            raise MalformedInputError(f"embed needs a {name} hyperspace")
        return load_hyperspace(path)

    def embed(self, args):
        source = self._endpoint(args.source, args.from_path, "source")
        target = self._endpoint(args.target, args.to_path, "target")
        kind = MorphismKind(args.kind)
        outcome = FINDERS[kind](source, target, self._node_budget(args))
        logger.info(f"{kind.value} search: {outcome.status.value}, {outcome.metrics.as_dict()}")
        self.cli.emit_json(outcome.as_dict())
        if outcome.status is SearchStatus.INDETERMINATE:
            raise IndeterminateError(f"node budget {self._node_budget(args)} exhausted")

    def fcn(self, args):
        if args.length is not None:
            space = prefix_hyperspace(build_stream(args), args.length)
        elif args.hyperspace:
            space = load_hyperspace(args.hyperspace)
        else:
            raise MalformedInputError("fcn needs --hyperspace PATH or a stream with --N")
        estimate = fcn_estimate(space, args.budget, self._node_budget(args), nonempty_only=args.nonempty_only)
        if args.witness_out and estimate.witness is not None:
            try:
                with open(args.witness_out, 'w', encoding='utf-8') as f:
                    f.write(format_set_tuple(estimate.witness))
            except OSError as e:
                raise MalformedInputError(f"cannot write {args.witness_out}: {e}")
        self.cli.emit_json(estimate.as_dict())
        if estimate.status is Verdict.INDETERMINATE:
            raise IndeterminateError(f"node budget {self._node_budget(args)} exhausted")


def setup(cli):
    cli.add_cog(MorphismCommands(cli))
