import json
import os
import pathlib

import click

from util.constants import CONFIG_DEFAULT, CONFIG_ENV, THREADS_ENV
from util.log_handler import logger


def load_defaults(sections):
    configfile = os.environ.get(CONFIG_ENV, CONFIG_DEFAULT)
    config = {}

    if not os.path.isfile(configfile):
        logger.warning(
            "careful, configfile {} does not exist in {}. No defaults.".format(
                configfile, os.getcwd()
            )
        )
        logger.warning(
            "To generate one, run 'multisect init' or export {}={}".format(
                CONFIG_ENV,
                pathlib.Path(__file__).parent.parent.absolute()
                / "templates/multisect.jinja",
            )
        )
    else:
        logger.info("reading config file from {}".format(configfile))
        with open(configfile) as f:
            try:
                config = json.load(f)
            except json.decoder.JSONDecodeError as err:
                logger.error("failed to load configfile {}".format(configfile))
                logger.error(err)

    tmp = {}
    if config:
        # set default variables
        if "default" in config.keys():
            tmp.update(config.get("default"))
        # give current sections precedence
        for i in range(len(sections)):
            section = "-".join(sections[: i + 1])
            if section in config.keys():
                tmp.update(config.get(section))

    return tmp


def thread_count(requested=None):
    """Number of worker threads, capped by the MULTISECT_THREADS variable."""
    count = requested if requested else os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            count = min(count, max(1, int(cap)))
        except ValueError:
            logger.warning("ignoring non-integer {}={}".format(THREADS_ENV, cap))
    return max(1, count)


class CommaSeperatedInts(click.ParamType):
    name = "CommaSeperatedInts"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        if isinstance(value, int):
            return [value]
        if not isinstance(value, str):
            self.fail("Input must be a string, found {}".format(value), param, ctx)
        try:
            return [int(e) for e in filter(lambda x: x != "", value.split(","))]
        except ValueError:
            self.fail("Input must be integers, found {}".format(value), param, ctx)


class CommaSeperatedStrings(click.ParamType):
    name = "CommaSeperatedStrings"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        elif not isinstance(value, str):
            self.fail("Input must be a string, found {}".format(value), param, ctx)
        return list(filter(lambda x: x != "", value.split(",")))


cli_help = {
    "k": r"number of pieces; the torus has dimension n = 2k-1",
    "n": r"dimension of the torus (odd; n = 2k-1, or 4 for the hardcoded T^4)",
    "index_set": r"the index set I as a comma separated list of residues mod k. "
    + r"Non-simple sets are canonicalized by a cyclic shift.",
    "suite": r"verification suites to run (comma separated). Known suites: {}",
    "depth": r"verification depth: 'symbolic' or 'exhaustive' (lattice sweeps, "
    + r"only for n <= 7)",
    "seed": r"seed for the randomized membership sweep",
    "samples": r"number of random lattice points for the membership sweep at n >= 7",
    "threads": r"maximal number of worker threads (capped by MULTISECT_THREADS)",
    "output_format": r"output format of reports and tables: text, csv or json",
    "output": r"file to write the table or report into (default: stdout only)",
    "golden": r"name of an embedded reference table to compare against",
    "limit": r"only build the first LIMIT pieces of the decomposition",
    "sigma": r"face permutation of a one-cube complex, 1-based and comma separated, "
    + r"or 'identity'",
    "file": r"cube complex in text format ('n <dim> cubes <count>' header, then "
    + r"'<a> face+<i> -> <b> face-<j> perm <p1,...,pn>' lines)",
    "config": r"the name of the config file that is being generated",
    "template_name": r"path to the template for the config file",
}
