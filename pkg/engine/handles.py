import click

from util.attachment import verify_attachment
from util.click_util import CommaSeperatedInts, cli_help
from util.constants import (
    DEPTHS,
    EXHAUSTIVE_MAX_N,
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    OUTPUT_FORMATS,
)
from util.golden import compare, emit, golden_records, load_golden, records_frame
from util.handle_decomposition import FactorShapeError, decompose
from util.log_handler import logger
from util.multisection import canonicalize_simple
from util.torus_core import TorusParams


def _params(n, k):
    if n and k:
        return TorusParams(k=k, n=n)
    if n:
        return TorusParams.from_n(n)
    if k:
        return TorusParams.from_k(k)
    raise ValueError("one of --n and --k is required")


@click.command()
@click.option("--n", type=int, default=0, help=cli_help["n"])
@click.option("--k", type=int, default=0, help=cli_help["k"])
@click.option(
    "--I", "index_set", type=CommaSeperatedInts(), default="", help=cli_help["index_set"]
)
@click.option("--golden", default="", help=cli_help["golden"])
@click.option(
    "--output-format",
    type=click.Choice(OUTPUT_FORMATS),
    default="text",
    help=cli_help["output_format"],
)
@click.option("--output", default="", help=cli_help["output"])
@click.option("--depth", type=click.Choice(DEPTHS), default="symbolic", help=cli_help["depth"])
@click.option("--limit", type=int, default=0, help=cli_help["limit"])
@click.option("--threads", type=int, default=0, help=cli_help["threads"])
def handles(n, k, index_set, golden, output_format, output, depth, limit, threads):
    threads = threads or None
    table = None
    try:
        if golden:
            table = load_golden(golden)
            params = table.params
            logger.info(
                "reproducing {}: T^{} with I={{{}}}".format(
                    table.name, params.n, ",".join(map(str, table.index_set))
                )
            )
        else:
            params = _params(n, k)
            if not index_set:
                raise ValueError("--I is required without --golden")
            canonical, shift = canonicalize_simple(index_set, params.k)
            if shift:
                logger.info(
                    "I={} canonicalized to {} (shift {})".format(index_set, canonical, shift)
                )
            if not canonical.proper:
                raise ValueError("I={} is all of Z_{}".format(canonical, params.k))
        if depth == "exhaustive" and params.n > EXHAUSTIVE_MAX_N:
            raise ValueError(
                "exhaustive depth is limited to n <= {}, got n={}".format(
                    EXHAUSTIVE_MAX_N, params.n
                )
            )
    except ValueError as err:
        logger.error(err)
        exit(EXIT_CONFIG)

    try:
        if table is not None:
            records = golden_records(table, threads)
        else:
            records = decompose(canonical, params, limit=limit or None, threads=threads)
    except FactorShapeError as err:
        logger.error("construction error: {}".format(err))
        logger.info("RESULT: handles FAILED")
        exit(EXIT_FAIL)

    print(emit(records_frame(records), output_format, output))

    out = True
    if table is not None:
        diff = compare(records, table)
        logger.info(
            "{}: {} rows, {}".format(
                table.name, len(table.rows), "match" if diff.ok else "{} diffs".format(len(diff.diffs))
            )
        )
        out = diff.ok
    if depth == "exhaustive":
        certificates = verify_attachment(records, params, threads=threads)
        failed = [c.z for c in certificates if not c.ok]
        if failed:
            logger.error("attachment certificates failed for pieces {}".format(failed))
        out = out and not failed

    if out:
        logger.info("RESULT: handles PASSED!")
    else:
        logger.info("RESULT: handles FAILED")

    exit(EXIT_PASS if out else EXIT_FAIL)
