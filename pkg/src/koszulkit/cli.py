"""Batch front end: parse inputs, dispatch checks, emit deterministic reports.

Every report is a pure function of the job: JSON is emitted with sorted keys
and no whitespace, TSV rows run i ascending with j ascending inside a row,
and worker scheduling never reorders results (the pools preserve submission
order).  Exit codes: 0 for pass/success, 1 when a checker found a witness,
2 for input errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .bar_homology import (
    betti_table,
    is_koszul_window,
    is_large_window,
    is_one_linear_window,
)
from .errors import InputError, KoszulkitError, NonAcyclicModel
from .exact_linalg import FieldSpec
from .graded_algebra import (
    Presentation,
    augmentation_map,
    from_presentation,
    quotient_by_degree_one,
)
from .grassmann import pluecker_ring, schubert_map
from .homotopy import build_homotopy, sigma, verify_homotopy
from .model_complex import build_model, middle_homology, model_window_check
from .toric import (
    H1_ASSUMPTION,
    _idp_witness,
    coordinate_ring,
    idp_check,
    is_smooth,
    lattice_points,
    lattice_polytope,
)
from .verdict import Verdict

WINDOWED = (
    "betti",
    "koszul-check",
    "one-linear-check",
    "large-check",
    "model-check",
    "homotopy-verify",
)


@dataclasses.dataclass(frozen=True)
class JobSpec:
    subcommand: str
    paths: tuple
    field: FieldSpec
    window: tuple
    fmt: str
    options: dict


def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _read_json(path, files=None):
    if files is not None and path in files:
        text = files[path]
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"{path}: {e.strerror or e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}: {e.msg}") from None


def _presentation_from_json(data, path):
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError(f"{path}: 'generators' must be a nonempty list")
    names = []
    for g in gens:
        if not isinstance(g, dict) or "name" not in g:
            raise InputError(f"{path}: generator entries need a 'name'")
        if g.get("degree", 1) != 1:
            raise InputError(
                f"{path}: generator {g['name']!r} has degree {g.get('degree')};"
                " only degree 1 is supported"
            )
        names.append(g["name"])
    rels = []
    for rel in data.get("relations", []):
        terms = rel.get("terms") if isinstance(rel, dict) else None
        if not terms:
            raise InputError(f"{path}: each relation needs nonempty 'terms'")
        out = []
        for t in terms:
            try:
                expo = tuple(int(e) for e in t["exponents"])
                coeff = t["coeff"]
            except (KeyError, TypeError, ValueError):
                raise InputError(
                    f"{path}: relation terms need 'exponents' and 'coeff'"
                ) from None
            if not isinstance(coeff, (str, int)):
                raise InputError(f"{path}: coefficients must be strings or ints")
            out.append((coeff, expo))
        rels.append(tuple(out))
    return Presentation(gens=tuple(names), relations=tuple(rels)), data.get("field")


def _parse_pair(text, what):
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"{what} must be comma-separated integers") from None
    if len(parts) != 2:
        raise InputError(f"{what} must be a pair i,j")
    return parts


def parse_inputs(argv, files=None) -> JobSpec:
    ns = _argparser().parse_args(argv)
    sub = ns.subcommand
    field = FieldSpec.parse(ns.field) if getattr(ns, "field", None) else None

    options = {}
    paths = []
    if getattr(ns, "input", None):
        data = _read_json(ns.input, files)
        pres, file_field = _presentation_from_json(data, ns.input)
        options["presentation"] = pres
        if field is None and file_field:
            field = FieldSpec.parse(file_field)
        paths.append(ns.input)
    if getattr(ns, "polytope", None):
        data = _read_json(ns.polytope, files)
        verts = data.get("vertices")
        if not isinstance(verts, list):
            raise InputError(f"{ns.polytope}: 'vertices' must be a list")
        options["polytope"] = lattice_polytope([tuple(v) for v in verts])
        paths.append(ns.polytope)
    if getattr(ns, "grassmann", None) is not None:
        options["grassmann"] = ns.grassmann
    if getattr(ns, "schubert", None):
        options["schubert"] = _parse_pair(ns.schubert, "--schubert")
    if getattr(ns, "kill", None):
        options["kill"] = tuple(ns.kill.split(","))
    if getattr(ns, "alpha", None):
        try:
            options["alpha"] = tuple(int(x) for x in ns.alpha.split(","))
        except ValueError:
            raise InputError("--alpha must be comma-separated integers") from None
    for flag in ("ring", "smooth", "idp", "points"):
        val = getattr(ns, flag, None)
        if val is not None and val is not False:
            options[flag] = val

    window = ()
    if sub in WINDOWED:
        if ns.imax is None or ns.jmax is None:
            if sub == "model-check" and "alpha" in options:
                pass  # a single weight sequence fixes its own window
            else:
                raise InputError(f"{sub} requires --imax and --jmax")
        else:
            if ns.imax < 0 or ns.jmax < 0:
                raise InputError("window bounds must be nonnegative")
            window = (ns.imax, ns.jmax)
    jm = getattr(ns, "jmax", None)
    if window == () and jm is not None:
        if jm < 1:
            raise InputError("--jmax must be at least 1")
        options["jmax"] = jm

    srcs = [k for k in ("presentation", "polytope", "grassmann") if k in options]
    if sub in WINDOWED:
        if len(srcs) != 1:
            raise InputError(
                f"{sub} needs exactly one of --input, --polytope, --grassmann"
            )
        if "schubert" in options and "grassmann" not in options:
            raise InputError("--schubert requires --grassmann")
        if "schubert" in options and "kill" in options:
            raise InputError("--schubert and --kill are mutually exclusive")

    return JobSpec(
        subcommand=sub,
        paths=tuple(paths),
        field=field if field is not None else FieldSpec.gf(101),
        window=window,
        fmt=getattr(ns, "fmt", None) or ("tsv" if sub == "betti" else "json"),
        options=options,
    )


def _argparser():
    top = argparse.ArgumentParser(
        prog="koszulkit",
        description="Window-exact Koszulness, linearity, and model-complex checks",
    )
    subs = top.add_subparsers(dest="subcommand", required=True)

    def common(p, window=True):
        p.add_argument("--input", help="algebra presentation JSON")
        p.add_argument("--polytope", help="lattice polytope JSON")
        p.add_argument("--grassmann", type=int, metavar="N", help="use Gr(2,N)")
        p.add_argument("--schubert", metavar="I,J", help="Schubert quotient index")
        p.add_argument("--kill", metavar="NAME[,NAME...]", help="quotient by generators")
        p.add_argument("--field", help="gf:<p> or qq (default gf:101)")
        p.add_argument(
            "--format", dest="fmt", choices=("tsv", "json"), help="report format"
        )
        if window:
            p.add_argument("--imax", type=int)
            p.add_argument("--jmax", type=int)

    for name in WINDOWED:
        p = subs.add_parser(name)
        common(p)
        if name == "model-check":
            p.add_argument("--alpha", metavar="A0,A1,...", help="one weight sequence")

    tor = subs.add_parser("toric")
    tor.add_argument("--polytope", required=True)
    tor.add_argument("--ring", action="store_true", help="coordinate ring summary")
    tor.add_argument("--smooth", action="store_true", help="smoothness verdict")
    tor.add_argument("--idp", nargs=2, type=int, metavar=("A", "B"))
    tor.add_argument("--points", type=int, metavar="N", help="list nP lattice points")
    tor.add_argument("--jmax", type=int)
    tor.add_argument("--field", help="gf:<p> or qq (default gf:101)")
    tor.add_argument("--format", dest="fmt", choices=("tsv", "json"))

    gr = subs.add_parser("grassmann")
    gr.add_argument("--grassmann", type=int, required=True, metavar="N")
    gr.add_argument("--schubert", metavar="I,J")
    gr.add_argument("--jmax", type=int, default=3)
    gr.add_argument("--field", help="gf:<p> or qq (default gf:101)")
    gr.add_argument("--format", dest="fmt", choices=("tsv", "json"))
    return top


# -- source and map assembly ------------------------------------------------


def _resolve_ring(job, j_max):
    opts = job.options
    if "presentation" in opts:
        return from_presentation(opts["presentation"], job.field, j_max), ()
    if "polytope" in opts:
        ring = coordinate_ring(opts["polytope"], job.field, j_max)
        return ring, (H1_ASSUMPTION,)
    ring, _ = pluecker_ring(opts["grassmann"], job.field, j_max)
    return ring, ()


def _resolve_map(job, ring):
    opts = job.options
    if "schubert" in opts:
        return schubert_map(ring, opts["schubert"])[1]
    if "kill" in opts:
        idx = {name: t for t, name in enumerate(ring.gens)}
        forms = []
        for name in opts["kill"]:
            if name not in idx:
                raise InputError(f"--kill: unknown generator {name!r}")
            forms.append(
                [1 if t == idx[name] else 0 for t in range(len(ring.gens))]
            )
        return quotient_by_degree_one(ring, forms)[1]
    return augmentation_map(ring)[1]


def _with_assumptions(verdict, assumptions):
    if not assumptions:
        return verdict
    merged = tuple(sorted(set(verdict.assumptions) | set(assumptions)))
    return dataclasses.replace(verdict, assumptions=merged)


# -- subcommand runners ------------------------------------------------------


def _run_betti(job):
    i_max, j_max = job.window
    ring, _ = _resolve_ring(job, j_max)
    map_ = _resolve_map(job, ring)
    table = betti_table(ring, map_, i_max, j_max)
    return 0, table.to_tsv() if job.fmt == "tsv" else table.to_json() + "\n"


def _run_verdict(job):
    i_max, j_max = job.window
    ring, assume = _resolve_ring(job, j_max)
    if job.subcommand == "koszul-check":
        # with a quotient requested, the question is about the quotient ring
        if "kill" in job.options or "schubert" in job.options:
            ring = _resolve_map(job, ring).target
        v = is_koszul_window(ring, i_max, j_max)
    else:
        map_ = _resolve_map(job, ring)
        if job.subcommand == "one-linear-check":
            v = is_one_linear_window(map_, i_max, j_max)
        else:
            v = is_large_window(map_, i_max, j_max)
    v = _with_assumptions(v, assume)
    return (0 if v.passed else 1), v.to_json() + "\n"


def _run_model_check(job):
    alpha = job.options.get("alpha")
    if alpha is not None:
        j_max = job.window[1] if job.window else sum(alpha)
        ring, assume = _resolve_ring(job, j_max)
        map_ = _resolve_map(job, ring)
        h = middle_homology(build_model(ring, map_, alpha))
        v = Verdict(
            kind="model-alpha",
            passed=h == 0,
            window=(len(alpha) - 2, sum(alpha)),
            field=job.field.describe(),
            witness=None if h == 0 else alpha + (h,),
            assumptions=assume,
        )
        return (0 if v.passed else 1), v.to_json() + "\n"
    i_max, j_max = job.window
    ring, assume = _resolve_ring(job, j_max)
    map_ = _resolve_map(job, ring)
    v = _with_assumptions(model_window_check(ring, map_, i_max, j_max), assume)
    return (0 if v.passed else 1), v.to_json() + "\n"


def _run_homotopy_verify(job):
    i_max, j_max = job.window
    ring, assume = _resolve_ring(job, j_max)
    map_ = _resolve_map(job, ring)
    try:
        h = build_homotopy(ring, map_, i_max, j_max)
    except NonAcyclicModel as e:
        payload = {
            "kind": "homotopy-verify",
            "window": [i_max, j_max],
            "field": job.field.describe(),
            "verified": False,
            "witness": {"non_acyclic_model": list(e.alpha)},
            "models": [],
            "assumptions": sorted(assume),
        }
        return 1, _dumps(payload) + "\n"
    res = verify_homotopy(h, ring, map_)
    models = [
        {
            "alpha": list(alpha),
            "sigma": list(sigma(alpha)),
            "block_shape": [blk.rows, blk.cols],
        }
        for alpha, blk in sorted(h.maps.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    payload = {
        "kind": "homotopy-verify",
        "window": [i_max, j_max],
        "field": job.field.describe(),
        "verified": bool(res.ok),
        "witness": None
        if res.witness is None
        else {"alpha": list(res.witness[0]), "column": res.witness[1]},
        "models": models,
        "assumptions": sorted(assume),
    }
    return (0 if res.ok else 1), _dumps(payload) + "\n"


def _run_toric(job):
    opts = job.options
    p = opts["polytope"]
    chosen = [k for k in ("ring", "smooth", "idp", "points") if k in opts]
    if len(chosen) != 1:
        raise InputError("toric needs exactly one of --ring, --smooth, --idp, --points")
    mode = chosen[0]
    if mode == "points":
        pts = lattice_points(p, opts["points"])
        if job.fmt == "json":
            return 0, _dumps({"kind": "toric-points", "n": opts["points"], "points": [list(x) for x in pts]}) + "\n"
        return 0, "".join("\t".join(str(c) for c in x) + "\n" for x in pts)
    if mode == "smooth":
        v = Verdict(
            kind="toric-smooth",
            passed=is_smooth(p),
            window=(),
            field="zz",
        )
        return (0 if v.passed else 1), v.to_json() + "\n"
    if mode == "idp":
        a, b = opts["idp"]
        ok = idp_check(p, a, b)
        v = Verdict(
            kind="toric-idp",
            passed=ok,
            window=(a, b),
            field="zz",
            witness=None if ok else _idp_witness(p, a, b),
        )
        return (0 if v.passed else 1), v.to_json() + "\n"
    j_max = opts.get("jmax")
    if j_max is None:
        raise InputError("toric --ring requires --jmax")
    ring = coordinate_ring(p, job.field, j_max)
    payload = {
        "kind": "toric-ring",
        "field": job.field.describe(),
        "j_max": j_max,
        "piece_dims": list(ring.piece_dims),
        "generators": list(ring.gens),
        "assumptions": [H1_ASSUMPTION],
    }
    return 0, _dumps(payload) + "\n"


def _run_grassmann(job):
    opts = job.options
    n = opts["grassmann"]
    j_max = opts.get("jmax", 3)
    ring, pres = pluecker_ring(n, job.field, j_max)
    payload = {
        "kind": "grassmann-ring",
        "n": n,
        "field": job.field.describe(),
        "j_max": j_max,
        "generators": list(ring.gens),
        "relations": len(pres.relations),
        "piece_dims": list(ring.piece_dims),
    }
    if "schubert" in opts:
        s, _ = schubert_map(ring, opts["schubert"])
        w = tuple(sorted(opts["schubert"]))
        payload["schubert"] = {
            "w": list(w),
            "generators": list(s.gens),
            "piece_dims": list(s.piece_dims),
        }
    return 0, _dumps(payload) + "\n"


def run(job: JobSpec) -> int:
    """Execute a parsed job, writing its report to stdout."""
    runners = {
        "betti": _run_betti,
        "koszul-check": _run_verdict,
        "one-linear-check": _run_verdict,
        "large-check": _run_verdict,
        "model-check": _run_model_check,
        "homotopy-verify": _run_homotopy_verify,
        "toric": _run_toric,
        "grassmann": _run_grassmann,
    }
    code, text = runners[job.subcommand](job)
    sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    try:
        job = parse_inputs(sys.argv[1:] if argv is None else argv)
        return run(job)
    except NonAcyclicModel as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except KoszulkitError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
