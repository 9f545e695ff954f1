import argparse
import logging
import sys

from .chowring import betti_numbers, chern_expansion, chow_presentation, picard_and_ample
from .config import Config
from .groupdata import KernelNotFiniteError
from .polycone import DimensionMismatchError
from .problem import ProblemFile, SchemaError
from .renderer import render_fan_svg
from .serialize import (
    dumps, encode_certificate, encode_component, encode_cone, encode_fan, encode_picard,
    encode_presentation, error_doc, result_doc,
)
from .stability import (
    PointSupport, UnsupportedError, chamber_lookup, effective_cone_and_walls, git_fan,
    invariants_trivial, point_test, unstable_components,
)

COMMANDS = ["fan", "unstable", "chow", "betti", "picard", "ample", "test-point", "effective", "walls", "svg"]
NEEDS_CHI = {"unstable", "chow", "betti", "picard", "ample", "test-point"}

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_INPUT = 2


class EmptyResultError(ValueError):
    kind = "empty"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(f"usage: {message}")


def build_parser():
    parser = _Parser(
        description="gitfan: GIT fans, unstable loci and Chow rings of linear quotients",
        epilog="Characters are given in the X*(G) basis: one det exponent per GL block, "
               "then one coordinate per torus factor (e.g. --chi 1,1).",
    )
    parser.add_argument("command", choices=COMMANDS, help="Computation to run")
    parser.add_argument("problem", help="Path to the problem file (JSON)")
    parser.add_argument("--chi", help="Character as comma-separated integers, or a name from the problem file")
    parser.add_argument("--support", help="Point support as comma-separated column indices (test-point)")
    parser.add_argument("--variant", choices=["semistable", "stable"], default="semistable",
                        help="Use the unstable locus (semistable) or the non-properly-stable locus (stable)")
    parser.add_argument("--out", help="Output path (SVG for 'svg', JSON otherwise; default stdout / fan.svg)")
    parser.add_argument("--threads", type=int, help="Worker threads for per-chamber work (overrides GITFAN_THREADS)")
    parser.add_argument("--theme", choices=sorted(Config.THEMES), help="SVG color theme")
    parser.add_argument("--quiet", action="store_true", help="No progress messages on stderr")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    return parser


def _parse_support(text, ws):
    if text is None or text.strip() == "":
        return frozenset()
    try:
        support = frozenset(int(x) for x in text.split(","))
    except ValueError as e:
        raise SchemaError(f"--support: cannot parse {text!r}") from e
    bad = sorted(a for a in support if not 0 <= a < len(ws.columns))
    if bad:
        raise SchemaError(f"--support: column indices {bad} out of range 0..{len(ws.columns) - 1}")
    return support


class Session:
    """One command invocation: the problem, its group data and a lazily built fan."""

    def __init__(self, args, problem, log):
        self.args = args
        self.problem = problem
        self.log = log
        self.log("Building group data...")
        self.gd, self.ws = problem.build()
        self.log(f"  rank {self.gd.rank}, |W| = {self.gd.weyl_order}, "
                 f"{len(self.ws.columns)} weight columns, dim V = {self.ws.N}")
        self._fan = None
        self.chi = problem.character(args.chi) if args.chi is not None else None

    @property
    def fan(self):
        if self._fan is None:
            self.log("Computing GIT fan...")
            self._fan = git_fan(self.gd, self.ws)
            self.log(f"  {len(self._fan.fan.maximal_cones())} maximal cones, "
                     f"{len(self._fan.walls)} walls, {len(self._fan.fan.cones)} cones in total")
        return self._fan

    def chamber(self):
        lookup = chamber_lookup(self.fan, self.chi)
        if not lookup.effective:
            raise EmptyResultError(f"character {list(self.chi)} is outside the effective cone: "
                                   f"the semistable locus is empty")
        return lookup.chamber

    # --- Commands ---

    def cmd_fan(self):
        return encode_fan(self.fan)

    def cmd_effective(self):
        effective, _, complete = effective_cone_and_walls(self.gd, self.ws)
        return {
            "effective_cone": encode_cone(effective),
            "complete": complete,
            "invariants_trivial": invariants_trivial(self.ws),
        }

    def cmd_walls(self):
        _, walls, complete = effective_cone_and_walls(self.gd, self.ws)
        return {"walls": [encode_cone(w) for w in walls], "complete": complete}

    def cmd_unstable(self):
        self.log("Enumerating unstable components...")
        comps = unstable_components(self.gd, self.ws, self.gd.character_embed(self.chi), self.args.variant)
        self.log(f"  {len(comps)} components")
        return {"components": [encode_component(c) for c in comps]}

    def _presentation(self):
        chamber = self.chamber()
        self.log("Computing Chow presentation...")
        pres = chow_presentation(self.gd, self.ws, chamber, self.args.variant)
        self.log(f"  {len(pres.ideal_generators)} ideal generators ({pres.label})")
        return chamber, pres

    def cmd_chow(self):
        _, pres = self._presentation()
        return encode_presentation(pres, [chern_expansion(self.gd, g) for g in pres.ideal_generators])

    def cmd_betti(self):
        _, pres = self._presentation()
        dim_quotient = self.ws.N - self.gd.dim
        if dim_quotient < 0:
            raise EmptyResultError(f"dim V - dim G = {dim_quotient} is negative")
        betti = betti_numbers(pres, dim_quotient)
        return {
            "betti": [str(b) for b in betti],
            "dim_quotient": str(dim_quotient),
            "label": pres.label,
            "invariants_trivial": self.fan.invariants_trivial,
        }

    def cmd_picard(self):
        return encode_picard(picard_and_ample(self.gd, self.chamber()))

    def cmd_ample(self):
        pic = picard_and_ample(self.gd, self.chamber())
        return {"ample_cone": encode_cone(pic.ample_cone),
                "properly_stable": pic.properly_stable}

    def cmd_test_point(self):
        support = _parse_support(self.args.support, self.ws)
        cert = point_test(self.gd, self.ws, self.gd.character_embed(self.chi), PointSupport(support=support))
        return encode_certificate(cert)

    def cmd_svg(self):
        if self.args.theme:
            Config.apply_theme(self.args.theme)
        out = self.args.out or "fan.svg"
        self.log(f"Rendering fan to '{out}'...")
        render_fan_svg(self.fan, out)
        return {"svg": out, "chambers": str(len(self.fan.maximal_chambers()))}


def _options(args):
    options = {"variant": args.variant}
    if args.chi is not None:
        options["chi"] = args.chi
    if args.support is not None:
        options["support"] = args.support
    return options


def _emit(doc, path=None, stream=None):
    text = dumps(doc)
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        (stream or sys.stdout).write(text)


def run_command(argv, stdout=None, stderr=None):
    """
    Runs one command and writes a canonical JSON document.

    Returns:
        int: 0 on success, 1 for empty or unsupported results, 2 for invalid input.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = None
    try:
        args = build_parser().parse_args(argv)

        def log(msg):
            if not args.quiet:
                print(msg, file=stderr)

        if args.verbose:
            logging.basicConfig(level=logging.DEBUG, stream=stderr, format="%(name)s: %(message)s")
        Config.apply_env()
        if args.threads is not None:
            Config.set_threads(args.threads)
        if args.command in NEEDS_CHI and args.chi is None:
            raise SchemaError(f"'{args.command}' needs --chi")

        try:
            with open(args.problem, "rb") as f:
                raw = f.read()
        except OSError as e:
            raise SchemaError(f"cannot read problem file: {e}") from e
        problem = ProblemFile.loads(raw.decode("utf-8", errors="replace"))

        session = Session(args, problem, log)
        payload = getattr(session, "cmd_" + args.command.replace("-", "_"))()
        doc = result_doc(args.command, _options(args), raw, payload)
        _emit(doc, args.out if args.command != "svg" else None, stdout)
        log("Done.")
        return EXIT_OK
    except (SchemaError, DimensionMismatchError, KernelNotFiniteError) as e:
        _emit(error_doc(e.kind, str(e)), stream=stdout)
        return EXIT_INPUT
    except (EmptyResultError, UnsupportedError) as e:
        _emit(error_doc(e.kind, str(e)), stream=stdout)
        return EXIT_EMPTY
    except ValueError as e:
        _emit(error_doc(getattr(e, "kind", "error"), str(e)), stream=stdout)
        return EXIT_EMPTY


def main():
    sys.exit(run_command(sys.argv[1:]))
