import click

from util.click_util import cli_help
from util.constants import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS
from util.cubulation import (
    ComplexFormatError,
    from_permutation,
    homology_h1,
    lift_multisection,
    load_complex,
    validate_directed,
    vertex_link_check,
)
from util.log_handler import logger
from util.torus_core import TorusParams

# largest cube dimension for which the lifted pieces are glued cell by cell
LIFT_MAX_N = 5


def parse_sigma(sigma, n):
    if sigma.strip().lower() == "identity":
        return list(range(1, n + 1))
    try:
        values = [int(s) for s in sigma.split(",") if s.strip()]
    except ValueError:
        raise ValueError("sigma must be 'identity' or comma separated integers")
    if len(values) != n:
        raise ValueError("sigma has {} entries, expected n={}".format(len(values), n))
    return values


@click.command()
@click.option("--sigma", default="", help=cli_help["sigma"])
@click.option("--n", type=int, default=3, help=cli_help["n"])
@click.option("--k", type=int, default=2, help=cli_help["k"])
@click.option("--file", "file_name", default="", help=cli_help["file"])
def cubulate(sigma, n, k, file_name):
    try:
        if file_name:
            complex_ = load_complex(file_name)
            logger.info("read {} cubes of dimension {} from {}".format(
                complex_.cubes, complex_.n, file_name))
        elif sigma:
            complex_ = from_permutation(n, parse_sigma(sigma, n))
        else:
            raise ValueError("one of --sigma and --file is required")
    except (ValueError, ComplexFormatError, OSError) as err:
        logger.error(err)
        exit(EXIT_CONFIG)

    report = validate_directed(complex_)
    counts = ", ".join(
        "{} {}-cells".format(c, d) for d, c in sorted(report.cell_counts.items())
    )
    logger.info("quotient: {}".format(counts or "not built"))
    if not report.ok:
        logger.info("violations:")
        for v in report.violations:
            print(v)
        logger.info("RESULT: cubulate FAILED")
        exit(EXIT_FAIL)

    out = True
    if complex_.n == 3:
        links = vertex_link_check(complex_)
        spheres = all(link.ok for link in links)
        logger.info(
            "vertex links: {} vertices, {}".format(
                len(links), "all 2-spheres" if spheres else "not all 2-spheres"
            )
        )
        out = out and spheres

    h1 = homology_h1(complex_)
    print("H1 = {}".format(h1.label()))

    if complex_.n == 2 * k - 1 and complex_.n <= LIFT_MAX_N:
        lift = lift_multisection(complex_, TorusParams.from_k(k))
        print(
            "lifted multisection: pieces of genus {} (expected {})".format(
                ",".join(map(str, lift.genus)), lift.expected_genus
            )
        )
        out = out and lift.ok
    else:
        logger.warning(
            "no lift: needs n = 2k-1 <= {}, got n={} k={}".format(LIFT_MAX_N, complex_.n, k)
        )

    if out:
        logger.info("RESULT: cubulate PASSED!")
    else:
        logger.info("RESULT: cubulate FAILED")

    exit(EXIT_PASS if out else EXIT_FAIL)
