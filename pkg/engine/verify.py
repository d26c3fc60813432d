import itertools
from dataclasses import dataclass

import click
import numpy as np
import pandas as pd

from util.attachment import verify_attachment
from util.central import central_decomposition
from util.click_util import CommaSeperatedInts, CommaSeperatedStrings, cli_help
from util.constants import (
    DEPTHS,
    EXHAUSTIVE_MAX_N,
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    OUTPUT_FORMATS,
    RESOLUTION,
    VERIFY_SUITES,
)
from util.golden import emit
from util.handle_decomposition import (
    bound_check,
    decompose,
    efficiency_report,
    euler_genus_report,
    pseudomanifold_check,
    u_disjoint_violations,
    v_order_parity_violations,
    v_order_set_violations,
)
from util.identities import combo1, combo2, constrained_types, enumerated_types, piece_types
from util.log_handler import logger
from util.multisection import (
    T4_CENTRAL,
    T4_PARAMS,
    T4_X01,
    IndexSet,
    canonicalize_simple,
    formula_XI,
    negative_handle_partition,
    negative_sum_decomposition,
    oracle_XI,
    sum_slabs_cover,
    t4_faces,
    verify_cover,
)
from util.torus_core import (
    TorusParams,
    face_box,
    in_intersection,
    in_piece_array,
    in_piece_direct_array,
    lattice_chunks,
)

# suites that build the whole set of subcubes or face lattices
ORACLE_MAX_K = 4


@dataclass
class VerifyRun:
    params: TorusParams
    index_sets: list
    depth: str
    seed: int
    samples: int
    threads: int

    @property
    def exhaustive(self):
        return self.depth == "exhaustive"


def simple_proper_sets(k):
    out = []
    for size in range(1, k):
        for rest in itertools.combinations(range(1, k), size - 1):
            index_set = IndexSet.of((0,) + rest, k)
            if index_set.simple:
                out.append(index_set)
    return out


def _row(suite, ok, detail, index_set=""):
    return {"suite": suite, "I": str(index_set), "ok": bool(ok), "detail": detail}


def _skip(suite, reason):
    logger.warning("suite {} skipped: {}".format(suite, reason))
    return [_row(suite, True, "skipped: {}".format(reason))]


def suite_cover(run):
    report = verify_cover(run.params, run.threads)
    return [
        _row(
            "cover",
            report.ok,
            "{} cubes partitioned {}".format(report.total, "/".join(map(str, report.sizes))),
        )
    ]


def _sample_points(run):
    params = run.params
    if run.exhaustive:
        # the full 1/6 lattice up to n = 5, the 1/2 lattice at n = 7
        step = 1 if params.n <= 5 else RESOLUTION // 2
        yield from lattice_chunks(params, step=step)
    else:
        rng = np.random.default_rng(run.seed)
        yield rng.integers(0, params.side, size=(run.samples, params.n))


def suite_membership(run):
    params = run.params
    checked = mismatches = uncovered = 0
    for chunk in _sample_points(run):
        covered = np.zeros(len(chunk), dtype=bool)
        for r in range(params.k):
            fast = in_piece_array(chunk, r, params)
            direct = in_piece_direct_array(chunk, r, params)
            mismatches += int(np.count_nonzero(fast != direct))
            covered |= fast
        uncovered += int(np.count_nonzero(~covered))
        checked += len(chunk)
    rows = [
        _row(
            "membership",
            mismatches == 0 and uncovered == 0,
            "{} points, {} cutoff/direct mismatches, {} uncovered".format(
                checked, mismatches, uncovered
            ),
        )
    ]
    rng = np.random.default_rng(run.seed)
    for index_set in run.index_sets:
        faces = sorted(formula_XI(index_set, params).canonical)
        misses = 0
        for face in faces[: run.samples]:
            box = face_box(face, params)
            x = [
                f.lo + int(rng.integers(0, f.hi - f.lo + 1)) for f in box.factors
            ]
            x = [x[t] for t in rng.permutation(params.n)]
            if not in_intersection(x, index_set, params):
                misses += 1
                logger.error("point {} of face {} is not in X_{}".format(x, face, index_set))
        rows.append(
            _row(
                "membership",
                misses == 0,
                "{} face points tested, {} outside".format(min(len(faces), run.samples), misses),
                index_set,
            )
        )
    return rows


def suite_xi(run):
    if run.params.k > ORACLE_MAX_K:
        return _skip("xi", "oracle needs k <= {}".format(ORACLE_MAX_K))
    rows = []
    for index_set in run.index_sets:
        formula = formula_XI(index_set, run.params)
        oracle = oracle_XI(index_set, run.params)
        ok = formula.canonical == oracle.canonical and oracle.exact_dim
        rows.append(
            _row(
                "xi",
                ok,
                "{} face types of dimension {}, formula {} oracle".format(
                    len(formula), formula.dim, "=" if ok else "!="
                ),
                index_set,
            )
        )
    return rows


def suite_identities(run):
    k = run.params.k
    first, second = combo1(k), combo2(k)
    rows = [
        _row("identities", first.ok, str(first)),
        _row("identities", second.ok, str(second)),
        _row(
            "identities",
            enumerated_types(k) == second.rhs,
            "cube types of T^n: {}".format(enumerated_types(k)),
        ),
    ]
    if k <= ORACLE_MAX_K:
        types = piece_types(k)
        rows.append(
            _row(
                "identities",
                types == constrained_types(k),
                "cube types of X_0: {}".format(types),
            )
        )
    return rows


def suite_negative(run):
    params = run.params
    dim = negative_handle_partition(params)
    expected_ok = dim == params.n - 1 if params.n == 3 else dim < params.n - 1
    rows = [
        _row(
            "negative",
            expected_ok,
            "coordinate count partition: X_0 n X_{} has dimension {}".format(params.k - 1, dim),
        )
    ]
    if (params.n, params.k) == (5, 3):
        slab_dim = negative_sum_decomposition(params)
        rows.append(
            _row(
                "negative",
                sum_slabs_cover(params) and slab_dim != params.n - 1,
                "coordinate sum slabs: X_0 n X_2 has dimension {}".format(slab_dim),
            )
        )
    return rows


def suite_efficiency(run):
    if run.params.k > ORACLE_MAX_K:
        return _skip("efficiency", "genus count needs k <= {}".format(ORACLE_MAX_K))
    report = efficiency_report(run.params)
    return [
        _row(
            "efficiency",
            report.ok,
            "genus {}, rank {}, efficiency {}".format(report.genus, report.rank, report.efficiency),
        )
    ]


def suite_euler(run):
    if run.params.k > ORACLE_MAX_K:
        return _skip("euler", "cell counts need k <= {}".format(ORACLE_MAX_K))
    rows = []
    for index_set in run.index_sets:
        report = euler_genus_report(index_set, run.params, run.threads)
        ok = report.ok
        if index_set.ell == 1:
            ok = ok and report.genus == run.params.n
        rows.append(
            _row(
                "euler",
                ok,
                "chi {} (cells {}), genus {}".format(
                    report.chi_handles, report.chi_cells, report.genus
                ),
                index_set,
            )
        )
    return rows


def suite_central(run):
    if run.params.k > ORACLE_MAX_K:
        return _skip("central", "needs k <= {}".format(ORACLE_MAX_K))
    report = central_decomposition(run.params)
    return [
        _row(
            "central",
            report.ok,
            "{} pieces, {} zero-handles, chi from handles {} (cells {})".format(
                len(report.pieces), report.zero_handles, report.chi_handles, report.chi_cells
            ),
        )
    ]


def suite_pseudomanifold(run):
    if run.params.k > ORACLE_MAX_K:
        return _skip("pseudomanifold", "needs k <= {}".format(ORACLE_MAX_K))
    report = pseudomanifold_check(run.params)
    return [
        _row(
            "pseudomanifold",
            report.ok,
            "{} faces, {} with odd incidence".format(report.faces, len(report.bad)),
        )
    ]


def suite_attachment(run):
    params = run.params
    rows = []
    by_index_set = {}
    for index_set in [s for s in run.index_sets if s.proper]:
        records = decompose(index_set, params, threads=run.threads)
        by_index_set[index_set] = records
        overlaps = u_disjoint_violations(records, params)
        detail = "{} pieces, max h {}, {} U- overlaps".format(
            len(records), max(r.h for r in records), len(overlaps)
        )
        ok = not overlaps
        if run.exhaustive:
            certificates = verify_attachment(records, params, threads=run.threads)
            failed = [c.z for c in certificates if not c.ok]
            ok = ok and not failed
            detail += ", certificates failed for {}".format(failed or "none")
        rows.append(_row("attachment", ok, detail, index_set))
    bound = bound_check(by_index_set)
    rows.append(_row("attachment", bound.ok, "max h <= |I| for {} sets".format(len(bound.rows))))
    parity = v_order_parity_violations()
    monotone = v_order_set_violations()
    rows.append(
        _row(
            "attachment",
            not parity and not monotone,
            "order laws: {} parity, {} monotone violations".format(len(parity), len(monotone)),
        )
    )
    return rows


def suite_t4(run):
    rows = []
    cover = verify_cover(T4_PARAMS, run.threads)
    rows.append(
        _row("t4", cover.ok, "81 cubes partitioned {}".format("/".join(map(str, cover.sizes))))
    )
    x01 = IndexSet.of((0, 1), 3)
    rows.append(
        _row(
            "t4",
            oracle_XI(x01, T4_PARAMS).canonical == t4_faces(T4_X01).canonical,
            "X_0 n X_1 faces",
            x01,
        )
    )
    center = IndexSet.of((0, 1, 2), 3)
    rows.append(
        _row(
            "t4",
            oracle_XI(center, T4_PARAMS).canonical == t4_faces(T4_CENTRAL).canonical,
            "central surface faces",
            center,
        )
    )
    report = euler_genus_report(x01, T4_PARAMS, run.threads)
    counts = report.handle_counts
    rows.append(
        _row(
            "t4",
            report.ok and counts.get(0) == 1 and counts.get(1) == 10,
            "c0 {}, c1 {}, genus {}".format(counts.get(0), counts.get(1), report.genus),
            x01,
        )
    )
    return rows


SUITES = {
    "cover": suite_cover,
    "membership": suite_membership,
    "xi": suite_xi,
    "identities": suite_identities,
    "negative": suite_negative,
    "efficiency": suite_efficiency,
    "euler": suite_euler,
    "central": suite_central,
    "pseudomanifold": suite_pseudomanifold,
    "attachment": suite_attachment,
    "t4": suite_t4,
}


@click.command()
@click.option("--k", type=int, default=2, help=cli_help["k"])
@click.option(
    "--suite",
    type=CommaSeperatedStrings(),
    default=",".join(VERIFY_SUITES),
    help=cli_help["suite"].format(", ".join(VERIFY_SUITES)),
)
@click.option(
    "--I", "index_set", type=CommaSeperatedInts(), default="", help=cli_help["index_set"]
)
@click.option("--depth", type=click.Choice(DEPTHS), default="symbolic", help=cli_help["depth"])
@click.option("--seed", type=int, default=0, help=cli_help["seed"])
@click.option("--samples", type=int, default=2000, help=cli_help["samples"])
@click.option("--threads", type=int, default=0, help=cli_help["threads"])
@click.option(
    "--output-format",
    type=click.Choice(OUTPUT_FORMATS),
    default="text",
    help=cli_help["output_format"],
)
def verify(k, suite, index_set, depth, seed, samples, threads, output_format):
    try:
        params = TorusParams.from_k(k)
    except ValueError as err:
        logger.error(err)
        exit(EXIT_CONFIG)
    unknown = [s for s in suite if s not in SUITES]
    if unknown:
        logger.error("unknown suites {}, known: {}".format(unknown, ", ".join(VERIFY_SUITES)))
        exit(EXIT_CONFIG)
    if depth == "exhaustive" and params.n > EXHAUSTIVE_MAX_N:
        logger.error(
            "exhaustive depth is limited to n <= {}, got n={}".format(EXHAUSTIVE_MAX_N, params.n)
        )
        exit(EXIT_CONFIG)

    if index_set:
        try:
            canonical, shift = canonicalize_simple(index_set, k)
        except ValueError as err:
            logger.error(err)
            exit(EXIT_CONFIG)
        if shift:
            logger.info("I={} canonicalized to {} (shift {})".format(index_set, canonical, shift))
        index_sets = [canonical]
    else:
        index_sets = simple_proper_sets(k)

    run = VerifyRun(
        params=params,
        index_sets=index_sets,
        depth=depth,
        seed=seed,
        samples=samples,
        threads=threads or None,
    )
    logger.info(
        "verifying T^{} (k={}) at {} depth: {}".format(params.n, k, depth, ", ".join(suite))
    )
    rows = []
    for name in suite:
        suite_rows = SUITES[name](run)
        for row in suite_rows:
            logger.info(
                "{} {} {}: {}".format(
                    "PASS" if row["ok"] else "FAIL", row["suite"], row["I"], row["detail"]
                )
            )
        rows += suite_rows

    frame = pd.DataFrame(rows, columns=["suite", "I", "ok", "detail"])
    print(emit(frame, output_format))
    out = bool(frame["ok"].all())
    if out:
        logger.info("RESULT: verify PASSED!")
    else:
        logger.info("RESULT: verify FAILED")

    exit(EXIT_PASS if out else EXIT_FAIL)
