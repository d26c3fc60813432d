"""Reference handle tables: loading, comparison and table emission."""

import json
import pathlib
from dataclasses import dataclass, field

import pandas as pd

from util.constants import table_columns
from util.handle_decomposition import decompose
from util.log_handler import logger
from util.multisection import IndexSet
from util.torus_core import TorusParams

GOLDEN_DIR = pathlib.Path(__file__).parent.parent.absolute() / "data" / "golden"

pd.set_option("display.max_colwidth", None)
pd.set_option("display.max_columns", None)
pd.set_option("display.width", None)


@dataclass(frozen=True)
class GoldenTable:
    name: str
    n: int
    k: int
    index_set: tuple
    rows: tuple
    j_order: list = None
    istar_order: list = None
    prefix: bool = False
    hardcoded: bool = False
    errata: tuple = ()

    @property
    def params(self):
        return TorusParams(k=self.k, n=self.n)

    @property
    def limit(self):
        return len(self.rows) if self.prefix else None

    def printed_rows(self):
        """The rows before the corrections listed in ``errata``."""
        printed = {e["z"]: tuple(e["printed_glue_to"]) for e in self.errata}
        return tuple((z, h, printed.get(z, glue)) for z, h, glue in self.rows)


def available():
    return sorted(p.stem for p in GOLDEN_DIR.glob("*.json"))


def load_golden(name):
    path = GOLDEN_DIR / "{}.json".format(name)
    if not path.is_file():
        raise ValueError(
            "unknown golden table '{}', known tables: {}".format(name, ", ".join(available()))
        )
    with open(path) as f:
        data = json.load(f)
    rows = tuple(
        (row["z"], row["h"], tuple(row["glue_to"])) for row in data["rows"]
    )
    return GoldenTable(
        name=data["name"],
        n=data["n"],
        k=data["k"],
        index_set=tuple(data["I"]),
        rows=rows,
        j_order=data.get("j_order"),
        istar_order=data.get("istar_order"),
        prefix=data.get("prefix", False),
        hardcoded=data.get("hardcoded", False),
        errata=tuple(data.get("errata", ())),
    )


def golden_records(table, threads=None):
    """The decomposition a golden table describes, in the table's orders."""
    return decompose(
        IndexSet.of(table.index_set, table.k),
        table.params,
        j_order=table.j_order,
        istar_order=table.istar_order,
        limit=table.limit,
        threads=threads,
    )


@dataclass
class GoldenDiff:
    name: str
    diffs: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.diffs


def compare(records, table):
    """Compare the (z, h, glue_to) triples; a prefix table only checks its rows."""
    computed = [(r.z, r.h, tuple(r.glue_to)) for r in records]
    if table.prefix:
        computed = computed[: len(table.rows)]
    diff = GoldenDiff(name=table.name)
    if len(computed) != len(table.rows):
        diff.diffs.append(
            "{}: {} rows computed, {} expected".format(
                table.name, len(computed), len(table.rows)
            )
        )
    for got, expected in zip(computed, table.rows):
        if got != expected:
            diff.diffs.append(
                "{}: z={} computed h={} glue {} expected h={} glue {}".format(
                    table.name, got[0], got[1], list(got[2]), expected[1], list(expected[2])
                )
            )
    for d in diff.diffs:
        logger.error(d)
    for e in table.errata:
        logger.info(
            "{}: z={} glue corrected from {} by adding {}".format(
                table.name, e["z"], e["printed_glue_to"], e["missing"]
            )
        )
    return diff


def _set_label(s):
    return "{" + ",".join(str(i) for i in s) + "}"


def records_frame(records):
    rows = []
    for r in records:
        d = r.descriptor
        rows.append(
            {
                "J": _set_label(d.J),
                "i_star": d.i_star,
                "U": _set_label(d.U),
                "V": _set_label(d.V),
                "Vminus": _set_label(d.Vminus),
                "Ucirc": _set_label(d.Ucirc),
                "Uminus": _set_label(d.Uminus),
                "rep": r.rep.label(),
                "classes": "".join(r.classes),
                "h": r.h,
                "z": r.z,
                "glue_to": ",".join(str(w) for w in r.glue_to) or "-",
                "copies": r.copies,
            }
        )
    return pd.DataFrame(rows, columns=table_columns)


def emit(frame, output_format, output=None):
    """Render a frame as text, csv or json and write it to ``output`` if set."""
    if output_format == "csv":
        text = frame.to_csv(index=False)
    elif output_format == "json":
        text = frame.to_json(orient="records", indent=1)
    else:
        text = frame.to_string(index=False)
    if output:
        with open(output, "w") as f:
            f.write(text)
        logger.info("wrote table to {}".format(output))
    return text
