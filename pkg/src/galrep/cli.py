"""Command line interface: run, lfactor, verify, inspect.

Exit codes: 0 success, 1 validation error, 2 computation failure.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .curves import CurveSpec
from .errors import GalrepError, NoReconstruction
from .galois import (Pipeline, ReprTask, orbit_lengths_from_charpoly)
from .lfactor import zeta_numerator
from .polyring import (ddf_degree_multiset, factor_modp, pdiff, pgcd, pmod, pmul,
                       qpoly_modp)
from .util import rng_for

log = logging.getLogger("galrep")


def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SystemExit2(1, "cannot read %s: %s" % (path, exc))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemExit2(1, "%s:%d:%d: %s" % (path, exc.lineno, exc.colno, exc.msg))


class SystemExit2(Exception):
    def __init__(self, code, msg):
        self.code = code
        self.msg = msg


def _parse_config(path, overrides):
    data = _load_json(path)
    try:
        curve = CurveSpec.from_json(data["curve"])
        taskdata = dict(data["task"])
        if overrides.seed is not None:
            taskdata["seed"] = overrides.seed
        task = ReprTask.from_json(taskdata, curve)
    except KeyError as exc:
        raise SystemExit2(1, "%s: missing field %s" % (path, exc))
    except (GalrepError, ValueError) as exc:
        raise SystemExit2(1, "%s: %s" % (path, exc))
    return data, curve, task


def cmd_run(args):
    data, curve, task = _parse_config(args.config, args)
    out_path = args.out or data.get("output") or "%s_result.json" % task.curve.name
    cap = args.precision_cap or int(data.get("precision_cap", 4 * task.e0))
    ckpt_dir = data.get("checkpoint_dir")
    if args.threads and args.threads != 1:
        log.info("thread count %d accepted; this build runs single-threaded",
                 args.threads)
    try:
        result = _run_with_escalation(task, cap, ckpt_dir)
    except NoReconstruction as exc:
        print("computation failed: %s (accuracy cap %d reached)" % (exc, cap),
              file=sys.stderr)
        return 2
    except GalrepError as exc:
        print("computation failed: %s" % exc, file=sys.stderr)
        return 2
    payload = result.to_json()
    payload["metadata"]["config"] = str(args.config)
    Path(out_path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print("F of degree %d written to %s" % (len(result.F) - 1, out_path))
    return 0


def _run_with_escalation(task, cap, ckpt_dir):
    """compute_representation with accuracy doubling on NoReconstruction.

    The lifted basis is checkpointed so a precision raise resumes the ladder
    instead of restarting; the context rebuild at higher accuracy reduces to
    the lower one, so stored points stay valid.
    """
    from .lift import lift_torsion
    from .evalmap import build_chart_spec
    from .errors import ChartDegenerate
    e0 = task.e0
    pipe = Pipeline(task)
    pipe.build_context()
    pipe.find_basis()
    pipe.lift_basis()
    _save_checkpoint(ckpt_dir, task, pipe)
    while True:
        try:
            pipe.evaluate_all()
            return pipe.assemble(e_out=e0)
        except NoReconstruction:
            if 2 * e0 > cap:
                raise
            e0 *= 2
            log.info("reconstruction failed; raising accuracy to %d", e0)
            pipe = _resume_at(task, pipe, e0)
            _save_checkpoint(ckpt_dir, task, pipe)


def _resume_at(task, old, e0):
    """Continue a pipeline at doubled accuracy from its lifted family."""
    import copy
    from .evalmap import build_chart_spec
    from .errors import ChartDegenerate
    from .lift import lift_torsion
    from .jacobian import JacPoint
    task.e0 = e0
    pipe = Pipeline(task)
    pipe._set_a(old.a)
    pipe.build_context()
    pipe.basis = old.basis
    pipe.frob_mat = old.frob_mat
    rng = rng_for(task.seed, "lift-resume", e0)
    chart_rng = rng_for(task.seed, "chart-resume", e0)
    chart = build_chart_spec(pipe.ctx, chart_rng)
    fam = []
    for pt, vec in old.lift_info:
        moved = JacPoint(pipe.ctx.at(pt.acc), pt.W)
        for attempt in range(4):
            try:
                fam.append((lift_torsion(moved, task.ell, pipe.e_top, chart, rng), vec))
                break
            except ChartDegenerate:
                chart = build_chart_spec(pipe.ctx, chart_rng)
        else:
            raise ChartDegenerate("charts kept degenerating on resume")
    pipe.lift_info = fam
    pipe.cob_inv = old.cob_inv
    return pipe


def _save_checkpoint(ckpt_dir, task, pipe):
    if not ckpt_dir:
        return
    d = Path(ckpt_dir)
    d.mkdir(parents=True, exist_ok=True)
    payload = {
        "a": pipe.a,
        "e_top": pipe.e_top,
        "family": [{"vec": list(vec), "point": pt.to_json()}
                   for pt, vec in pipe.lift_info],
    }
    (d / ("lifted_e%d.json" % pipe.e_top)).write_text(json.dumps(payload))


def cmd_lfactor(args):
    data = _load_json(args.config)
    try:
        curve = CurveSpec.from_json(data["curve"] if "curve" in data else data)
        z = zeta_numerator(curve, args.p)
    except GalrepError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    print("L_%d(x) coefficients (ascending): %s" % (args.p, z.Lp))
    print("point counts: %s" % z.counts)
    return 0


def cmd_inspect(args):
    from .context import init_context
    from .zq import make_ring
    data, curve, task = _parse_config(args.config, args)
    pipe = Pipeline(task)
    ring = make_ring(task.p, pipe.a, 1, seed=task.seed)
    ctx = init_context(curve, ring, task.seed)
    orbit_sizes = {}
    seen = set()
    for i in range(ctx.n_z):
        if i in seen:
            continue
        j, size = i, 0
        while j not in seen:
            seen.add(j)
            j = ctx.frob_perm[j]
            size += 1
        orbit_sizes[size] = orbit_sizes.get(size, 0) + 1
    print("curve %s: genus %d, d0 = %d" % (curve.name, curve.genus, curve.d0))
    print("n_Z = %d, d_W = %d, dim V = %d, dim V3 = %d"
          % (ctx.n_z, ctx.d_w, ctx.dimV, ctx.dimV3))
    print("ring: p = %d, a = %d (q = %d)" % (task.p, pipe.a, task.p ** pipe.a))
    print("Frobenius orbit sizes on Z: %s"
          % ", ".join("%dx%d" % (n, s) for s, n in sorted(orbit_sizes.items())))
    print("#J(F_q) = %d = %d^%d * %d" % (pipe.N, task.ell, pipe.v, pipe.M))
    return 0


def cmd_verify(args):
    data = _load_json(args.result)
    try:
        F = [Fraction(s) for s in data["F"]]
        meta = data["metadata"]
        ell = int(meta["l"])
        d = len(meta["chi"]) - 1
    except (KeyError, ValueError) as exc:
        raise SystemExit2(1, "%s: malformed result file (%s)" % (args.result, exc))
    cfg = _load_json(args.config)
    curve = CurveSpec.from_json(cfg["curve"] if "curve" in cfg else cfg)
    primes = [int(x) for x in args.primes.split(",")]
    print("verification report (evidence, not proof): degree multisets of "
          "F mod r against orbit multisets predicted from L_r mod %d" % ell)
    overall = True
    rng = rng_for(0, "verify")
    for r in primes:
        verdict, detail = _verify_at_prime(F, curve, ell, d, r, rng)
        print("r = %-4d %s  %s" % (r, verdict, detail))
        if verdict == "FAIL":
            overall = False
    print("overall: %s" % ("PASS" if overall else "FAIL"))
    return 0 if overall else 2


def _verify_at_prime(F, curve, ell, d, r, rng):
    if r == ell:
        return "SKIPPED", "r equals ell"
    Fr = qpoly_modp(F, r)
    if Fr is None:
        return "SKIPPED", "a coefficient denominator vanishes mod r"
    if len(Fr) != len(F):
        return "SKIPPED", "leading coefficient vanishes mod r"
    if pgcd(Fr, pdiff(Fr, r), r) != [1]:
        return "SKIPPED", "F mod r is not squarefree"
    try:
        Lr = zeta_numerator(curve, r).Lp
    except GalrepError as exc:
        return "SKIPPED", "no L_%d: %s" % (r, exc)
    got = ddf_degree_multiset(Fr, r)
    facs = factor_modp(pmod(Lr, ell), ell, rng)
    determined = []
    undetermined = 0
    for mask in range(1, 1 << len(facs)):
        deg = sum((len(facs[i][0]) - 1) * facs[i][1]
                  for i in range(len(facs)) if mask >> i & 1)
        if deg != d:
            continue
        chi = [1]
        squarefree = True
        for i in range(len(facs)):
            if mask >> i & 1:
                g, e = facs[i]
                if e > 1:
                    squarefree = False
                for _ in range(e):
                    chi = pmul(chi, g, ell)
        if squarefree:
            lengths = orbit_lengths_from_charpoly(chi, ell, d)
            determined.append(lengths)
        else:
            undetermined += 1
    if got in determined:
        return "PASS", "multiset %s matches a candidate" % got
    if undetermined:
        return "SKIPPED", "no determined candidate matches and %d candidates " \
                          "are undetermined" % undetermined
    if not determined:
        return "SKIPPED", "no degree-%d candidate factor" % d
    return "FAIL", "multiset %s matches none of %s" % (got, determined)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="galrep",
        description="mod-l Galois representations from Jacobian torsion")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="compute a representation from a config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--precision-cap", type=int, default=None, dest="precision_cap")
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=cmd_run)

    p_lf = sub.add_parser("lfactor", help="print the local L-factor at p")
    p_lf.add_argument("--config", required=True)
    p_lf.add_argument("--p", type=int, required=True)
    p_lf.set_defaults(func=cmd_lfactor)

    p_ver = sub.add_parser("verify", help="Galois-consistency report for a result")
    p_ver.add_argument("--result", required=True)
    p_ver.add_argument("--config", required=True)
    p_ver.add_argument("--primes", required=True,
                       help="comma-separated auxiliary primes")
    p_ver.set_defaults(func=cmd_verify)

    p_ins = sub.add_parser("inspect", help="print context dimensions")
    p_ins.add_argument("--config", required=True)
    p_ins.add_argument("--seed", type=int, default=None)
    p_ins.set_defaults(func=cmd_inspect)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(exc.msg, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
