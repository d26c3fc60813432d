import json
import pathlib

import click
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from util.click_util import cli_help
from util.constants import CONFIG_DEFAULT, DEPTHS, EXIT_CONFIG, OUTPUT_FORMATS
from util.log_handler import logger
from util.torus_core import TorusParams


@click.command()
@click.option(
    "--template-name",
    default=pathlib.Path(__file__).parent.parent.absolute()
    / "templates"
    / "multisect.jinja",
    help=cli_help["template_name"],
)
@click.option("--config", default=CONFIG_DEFAULT, help=cli_help["config"])
@click.option("--k", type=int, default=3, help=cli_help["k"])
@click.option(
    "--depth", type=click.Choice(DEPTHS), default="symbolic", help=cli_help["depth"]
)
@click.option(
    "--output-format",
    type=click.Choice(OUTPUT_FORMATS),
    default="text",
    help=cli_help["output_format"],
)
@click.option("--seed", type=int, default=0, help=cli_help["seed"])
@click.option("--threads", type=int, default=0, help=cli_help["threads"])
def init(template_name, config, k, depth, output_format, seed, threads):
    try:
        params = TorusParams.from_k(k)
    except ValueError as err:
        logger.error(err)
        exit(EXIT_CONFIG)
    if threads < 0:
        logger.error("--threads must not be negative, got {}".format(threads))
        exit(EXIT_CONFIG)

    template_partition = str(template_name).rpartition("/")
    env = Environment(
        loader=FileSystemLoader(template_partition[0]), undefined=StrictUndefined
    )
    template = env.get_template(template_partition[2])
    # The template is supposed to be a valid json file so that it can work as
    # a default MULTISECT_CONFIG (even without running init first)

    warn_template = "init argument '--{}' not set. default to '{}'"
    if not threads:
        logger.warning(warn_template.format("threads", "all cores"))
    if not seed:
        logger.warning(warn_template.format("seed", seed))

    render_dict = {}
    render_dict["k"] = params.k
    render_dict["n"] = params.n
    render_dict["depth"] = depth
    render_dict["output_format"] = output_format
    render_dict["seed"] = seed
    render_dict["threads"] = threads

    rendered = template.render(render_dict)
    # round trip through json to catch template errors early
    rendered = json.dumps(json.loads(rendered), indent=2)
    with open(config, "w") as multisect_config:
        multisect_config.write(rendered)

    print("Successfully wrote multisect configuration to " + config)
    return 0
