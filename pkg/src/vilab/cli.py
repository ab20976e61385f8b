"""Batch driver: ``vilab <subcommand> INPUT [--seed S] [--tol T] ...``.

Every subcommand reads a JSON problem file, writes the full result payload
to ``--out`` (JSON, or CSV for ``triple-decay``) and prints a one-line
summary.  Exit codes:

    0  success
    1  invalid input
    2  non-convergence / search budget exhausted
    3  a checked property is violated

Payloads carry a UTC timestamp; set ``SOURCE_DATE_EPOCH`` to fix it so that
replays with the same seed produce byte-identical files.
"""

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import serialize
from .cosine import cosine
from .decomposition import (Subspace, annihilator, pi_T_iso_constants,
                            stampacchia_projection)
from .errors import ConvergenceError, NoWitnessError
from .gelfand import decay_study, write_decay_csv
from .operators import BilinearForm, OperatorToDual
from .orthogonality import (PROPERTIES, lattice_sampler, relation_from_dict,
                            test_property)
from .quadratic import QuadraticForm, epsilon_witness, witness_ratio
from .search import SearchConfig
from .spaces import Space
from .vi import VIProblem, solve_vi, verify_vi

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_VIOLATION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _timestamp():
    # SOURCE_DATE_EPOCH pins the clock so replays are byte-identical
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        when = datetime.datetime.fromtimestamp(int(epoch), datetime.timezone.utc)
    else:
        when = datetime.datetime.now(datetime.timezone.utc)
    return when.isoformat()


def _payload(command, args, result):
    return {
        "command": command,
        "config": {"seed": args.seed, "tol": args.tol, "samples": args.samples,
                   "max_iter": args.max_iter, "input": args.input},
        "result": result,
        "timestamp": _timestamp(),
    }


def _emit(args, command, result):
    text = serialize.dumps(_payload(command, args, result))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return text


def _require_seed(args):
    if args.seed is None:
        raise InputError("--seed is required for this subcommand")


def _operator(data):
    try:
        sp = Space.from_dict(data["space"])
        return OperatorToDual(data["matrix"], sp)
    except KeyError as err:
        raise InputError(f"missing field {err}") from err


def _search_config(args, data):
    return SearchConfig(starts=int(data.get("starts", 32)),
                        iters=int(data.get("iters", 500)),
                        samples=int(args.samples or data.get("samples", 100_000)),
                        seed=int(args.seed), tol=args.tol)


def cmd_vi_solve(args, data):
    _require_seed(args)
    try:
        prob = VIProblem.from_dict(data, data.get("allow_noncoercive", False))
    except KeyError as err:
        raise InputError(f"missing field {err}") from err
    sol = solve_vi(prob, tol=args.tol, max_iter=args.max_iter, seed=args.seed)
    rep = verify_vi(sol.x, prob, n_samples=args.samples or 10_000, seed=args.seed,
                    tol=max(args.tol, 1e-9))
    out = sol.to_dict()
    out["verify_report"] = rep.to_dict()
    _emit(args, "vi-solve", out)
    code = EXIT_OK if rep.ok else EXIT_VIOLATION
    return code, f"vi-solve: x={np.round(sol.x, 12).tolist()} residual={sol.residual:.3e} verify={'ok' if rep.ok else 'FAIL'}"


def cmd_cosine(args, data):
    _require_seed(args)
    T = _operator(data)
    res = cosine(T, _search_config(args, data))
    _emit(args, "cosine", res.to_dict())
    return EXIT_OK, f"cosine: value={res.value:.12g} angle={res.angle:.12g}"


def cmd_decompose(args, data):
    T = _operator(data)
    a = BilinearForm(T)
    try:
        M = Subspace.from_dict({"basis": data["basis"], "n": T.dim})
    except KeyError as err:
        raise InputError(f"missing field {err}") from err
    rep = stampacchia_projection(a, M)
    cfg = None if args.seed is None else SearchConfig(
        starts=6, iters=100, samples=args.samples or 256, seed=args.seed)
    iso = pi_T_iso_constants(a, M, cfg)
    out = rep.to_dict()
    out["annihilator"] = annihilator(M).basis.tolist()
    out["iso"] = iso.to_dict()
    _emit(args, "decompose", out)
    code = EXIT_VIOLATION if iso.degenerate else EXIT_OK
    return code, f"decompose: dim M={M.dim} dim ker P={rep.rank_complement} iso lower={iso.lower:.6g}"


def cmd_ortho_test(args, data):
    _require_seed(args)
    try:
        sp = Space.from_dict(data["space"])
        rel = relation_from_dict(data["relation"], sp)
        prop = data["property"]
    except KeyError as err:
        raise InputError(f"missing field {err}") from err
    if prop not in PROPERTIES:
        raise InputError(f"unknown property {prop!r}")
    smp = data.get("sampler", {"type": "sphere"})
    sampler = None
    if smp.get("type") == "lattice":
        sampler = lattice_sampler(sp.dim, int(smp.get("radius", 3)))
    elif smp.get("type") != "sphere":
        raise InputError(f"unknown sampler {smp!r}")
    rep = test_property(rel, prop, sampler, N=args.samples or 10_000,
                        seed=args.seed, max_witnesses=int(data.get("max_witnesses", 1)))
    _emit(args, "ortho-test", rep.to_dict())
    code = EXIT_OK if rep.holds else EXIT_VIOLATION
    return code, f"ortho-test: {prop} -> {rep.verdict} after {rep.samples} samples"


def cmd_witness(args, data):
    _require_seed(args)
    T = _operator(data)
    try:
        q = QuadraticForm(T)
        eps = float(data["eps"])
    except KeyError as err:
        raise InputError(f"missing field {err}") from err
    x = epsilon_witness(q, eps, _search_config(args, data))
    out = {"x": x.tolist(), "eps": eps, "q": float(q.eval(x)),
           "ratio": witness_ratio(q, x)}
    _emit(args, "witness", out)
    return EXIT_OK, f"witness: ratio={out['ratio']:.6g} < eps={eps:g}"


def cmd_triple_decay(args, data):
    try:
        study = decay_study(data["p"], data["n_list"], data["s_list"],
                            data.get("alpha"))
    except KeyError as err:
        raise InputError(f"missing field {err}") from err
    if args.out:
        write_decay_csv(study.rows, args.out)
    else:
        write_decay_csv(study.rows, sys.stdout)
    expect = data.get("expect_decay", float(data["p"]) > 2)
    code = EXIT_OK if study.decays == expect else EXIT_VIOLATION
    return code, (f"triple-decay: rows={len(study.rows)} min ratio={study.min_ratio:.6g} "
                  f"decays={study.decays}")


COMMANDS = {
    "vi-solve": cmd_vi_solve,
    "cosine": cmd_cosine,
    "decompose": cmd_decompose,
    "ortho-test": cmd_ortho_test,
    "witness": cmd_witness,
    "triple-decay": cmd_triple_decay,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="JSON problem file")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--out", default=None, help="result file")
    common.add_argument("--max-iter", type=int, default=100_000)
    parser = argparse.ArgumentParser(prog="vilab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code else EXIT_OK
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.seed is not None and not (0 <= args.seed < 2**64):
        print("error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_INPUT
    try:
        data = serialize.load(args.input)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: cannot read {args.input}: {err}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, summary = COMMANDS[args.command](args, data)
    except (ConvergenceError, NoWitnessError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (InputError, ValueError, TypeError, np.linalg.LinAlgError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    print(summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
