"""Command-line driver.

Every subcommand writes ``<command>.json`` (the report) and
``manifest.json`` (configuration echo, versions, backend, wall time) into the
output directory. Reports contain no timings or paths that vary between
runs, so identical configurations and seeds give byte-identical files.

Exit status is 0 on success, 2 when the computation finished with a negative
verdict (dependence, a degenerate cone, a failed validation written with
``--force``, a non-stabilized count) and 1 on errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from teichcurrents import __version__, kernels
from teichcurrents.errors import (DegenerateInputError, TeichCurrentsError,
                                  ValidationFailed)
from teichcurrents.holonomy import (RELATOR_TOL, Holonomy, conjugate, dehn_twist,
                                    load_holonomy, orientation_reverse,
                                    precompose, random_moebius,
                                    regular_polygon_rep, save_holonomy, validate)
from teichcurrents.spectrum import SPECTRA_TOL, length_matrix, relation_kind
from teichcurrents.words import enumerate_classes, format_word, write_curve_file

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT = 2

COMMANDS = ("make-surfaces", "enumerate", "lengths", "rank", "cone",
            "intersect", "liouville", "flow")

# shared settings: name -> (default, type)
COMMON = {
    "genus": (2, int),
    "lmax": (6, int),
    "tol_rank": (1e-8, float),
    "tol_cone": (1e-6, float),
    "radius": (None, int),
    "seed": (0, int),
    "out": ("out", str),
    "surfaces": ("base", str),
    "force": (False, bool),
}
EXTRA = {
    "curves": (None, list),
    "box": (None, list),
    "current": (None, str),
    "observable": ("exp", str),
    "T": (2000.0, float),
    "dt": (0.05, float),
    "starts": (2, int),
    "mc_points": (1_000_000, int),
    "csv_every": (20, int),
}
SETTINGS = {**COMMON, **EXTRA}


class ConfigError(TeichCurrentsError, ValueError):
    pass


def _check_type(name: str, value: Any, typ) -> Any:
    if value is None:
        return None
    if typ is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"config field {name!r}: expected true/false, got {value!r}")
        return value
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config field {name!r}: expected an integer, got {value!r}")
        return value
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config field {name!r}: expected a number, got {value!r}")
        return float(value)
    if typ is list:
        if isinstance(value, str) or not isinstance(value, list):
            raise ConfigError(f"config field {name!r}: expected a list, got {value!r}")
        return value
    if name == "surfaces" and isinstance(value, list):
        return ",".join(str(v) for v in value)
    if not isinstance(value, str):
        raise ConfigError(f"config field {name!r}: expected a string, got {value!r}")
    return value


def load_config(path: str) -> Dict[str, Any]:
    """Read a JSON object whose keys are flag names (``-`` or ``_``)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    out = {}
    for key, value in raw.items():
        name = key.replace("-", "_")
        if name == "command":
            continue
        if name not in SETTINGS:
            raise ConfigError(f"{path}: unknown field {key!r}")
        out[name] = _check_type(name, value, SETTINGS[name][1])
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="teichcurrents",
        description="Liouville currents and limit cones of marked hyperbolic surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with default settings; flags win")
        sp.add_argument("--genus", type=int)
        sp.add_argument("--lmax", type=int, help="maximal class length")
        sp.add_argument("--tol-rank", type=float, help="relative rank threshold")
        sp.add_argument("--tol-cone", type=float, help="relative cone threshold")
        sp.add_argument("--radius", type=int, help="Cayley-ball radius for intersections")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", metavar="DIR")
        sp.add_argument("--surfaces", metavar="SPEC[,SPEC...]",
                        help="base, twist:aI:K, conj, tau or file:PATH")
        sp.add_argument("--force", action="store_const", const=True,
                        help="accept holonomies that fail validation")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        common(sp)
        if name == "intersect":
            sp.add_argument("curves", nargs="*", metavar="CURVE",
                            help='two words such as "a1" "b1 A2"')
        if name == "liouville":
            sp.add_argument("--box", nargs=4, type=float,
                            metavar=("A1", "A2", "B1", "B2"),
                            help="boundary arcs [A1, A2] and [B1, B2] in radians")
            sp.add_argument("--current", metavar="FILE",
                            help='lines "weight word" defining a curve combination')
        if name == "flow":
            sp.add_argument("--observable", choices=("one", "bump", "exp"))
            sp.add_argument("--T", type=float, help="flow time")
            sp.add_argument("--dt", type=float, help="time step")
            sp.add_argument("--starts", type=int, help="number of random starts")
            sp.add_argument("--mc-points", type=int, help="Monte-Carlo sample size")
            sp.add_argument("--csv-every", type=int,
                            help="keep every k-th step in the running-average CSV")
    return p


def resolve(args: argparse.Namespace) -> Dict[str, Any]:
    """Defaults, then the config file, then explicit flags."""
    cfg = {k: v[0] for k, v in SETTINGS.items()}
    if getattr(args, "config", None):
        cfg.update(load_config(args.config))
    for k in SETTINGS:
        v = getattr(args, k, None)
        if k == "curves" and v == []:
            v = None
        if v is not None:
            cfg[k] = list(v) if isinstance(v, (list, tuple)) else v
    cfg["command"] = args.command
    for k in ("tol_rank", "tol_cone", "dt", "T"):
        if not cfg[k] > 0:
            raise ConfigError(f"{k.replace('_', '-')} must be positive, got {cfg[k]}")
    if cfg["genus"] < 2:
        raise ConfigError(f"genus must be >= 2, got {cfg['genus']}")
    if cfg["radius"] is not None and cfg["radius"] < 1:
        raise ConfigError(f"radius must be >= 1, got {cfg['radius']}")
    return cfg


# -- surfaces ---------------------------------------------------------------

def make_surfaces(cfg: Dict[str, Any]) -> List[Holonomy]:
    """Build the surfaces named by ``cfg["surfaces"]``.

    ``conj`` draws its conjugating element from a generator seeded with
    ``--seed``; several ``conj`` entries draw successive elements.
    """
    genus = cfg["genus"]
    base = regular_polygon_rep(genus)
    rng = np.random.default_rng(cfg["seed"])
    force = cfg["force"]
    out = []
    specs = [s.strip() for s in cfg["surfaces"].split(",") if s.strip()]
    if not specs:
        raise ConfigError("no surfaces given")
    for spec in specs:
        if spec == "base":
            H = base
        elif spec == "conj":
            H = conjugate(base, random_moebius(rng, 1.0), spec)
        elif spec == "tau":
            H = orientation_reverse(base, spec)
        elif spec.startswith("twist:"):
            parts = spec.split(":")
            if len(parts) != 3 or not parts[1].startswith("a"):
                raise ConfigError(f"bad surface spec {spec!r}; expected twist:aI:K")
            try:
                idx, power = int(parts[1][1:]), int(parts[2])
            except ValueError:
                raise ConfigError(f"bad surface spec {spec!r}; expected twist:aI:K") from None
            H = precompose(base, dehn_twist(genus, idx, power), spec, check=not force)
        elif spec.startswith("file:"):
            H = load_holonomy(spec[5:], force=force)
            if H.genus != genus:
                raise ConfigError(f"{spec}: genus {H.genus} but --genus is {genus}")
            H = H.with_label(spec)
        else:
            raise ConfigError(f"unknown surface spec {spec!r}")
        out.append(H.with_label(spec) if H.label != spec else H)
    return out


# -- commands ---------------------------------------------------------------

def _tolerances(cfg) -> Dict[str, float]:
    return {"tol_rank": cfg["tol_rank"], "tol_cone": cfg["tol_cone"],
            "relator": RELATOR_TOL, "spectra": SPECTRA_TOL}


def cmd_make_surfaces(cfg, out_dir) -> Tuple[Dict, int]:
    surfaces = make_surfaces(cfg)
    sdir = os.path.join(out_dir, "surfaces")
    os.makedirs(sdir, exist_ok=True)
    items = []
    status = EXIT_OK
    for k, H in enumerate(surfaces):
        rep = validate(H)
        if not rep.passed:
            status = EXIT_VERDICT
        fname = f"surface_{k:02d}.hol"
        save_holonomy(H, os.path.join(sdir, fname))
        items.append({"label": H.label, "file": f"surfaces/{fname}",
                      "validation": rep.as_dict(), "failures": rep.failures()})
    return {"surfaces": items}, status


def cmd_enumerate(cfg, out_dir) -> Tuple[Dict, int]:
    classes = enumerate_classes(cfg["genus"], cfg["lmax"])
    write_curve_file(os.path.join(out_dir, "classes.txt"), classes,
                     header=f"genus {cfg['genus']}, length <= {cfg['lmax']}")
    by_len: Dict[str, int] = {}
    for c in classes:
        by_len[str(c.length)] = by_len.get(str(c.length), 0) + 1
    report = {"count": len(classes), "count_by_length": by_len,
              "classes_file": "classes.txt"}
    if len(classes) <= 200:
        report["classes"] = [format_word(c.rep) for c in classes]
    return report, EXIT_OK


def _length_table(cfg, out_dir):
    surfaces = make_surfaces(cfg)
    classes = enumerate_classes(cfg["genus"], cfg["lmax"])
    lm = length_matrix(surfaces, classes) if classes else None
    if lm is not None:
        lm.to_csv(os.path.join(out_dir, "lengths.csv"))
    return surfaces, classes, lm


def cmd_lengths(cfg, out_dir) -> Tuple[Dict, int]:
    surfaces, classes, lm = _length_table(cfg, out_dir)
    if lm is None:
        raise ConfigError("no classes: lmax must be >= 1")
    rows = []
    for label, row in zip(lm.rows, lm.values):
        j = int(np.argmin(row))
        rows.append({"label": label, "systole": float(row[j]),
                     "systole_class": format_word(classes[j].rep),
                     "mean_length": float(row.mean())})
    return {"shape": list(lm.shape), "matrix_file": "lengths.csv",
            "surfaces": rows}, EXIT_OK


def cmd_rank(cfg, out_dir) -> Tuple[Dict, int]:
    from teichcurrents.independence import independence_verdict

    surfaces = make_surfaces(cfg)
    if cfg["lmax"] < 1:
        raise DegenerateInputError(f"no classes of length <= {cfg['lmax']}")
    classes = enumerate_classes(cfg["genus"], cfg["lmax"])
    v = independence_verdict(surfaces, cfg["lmax"], cfg["tol_rank"], classes=classes)
    length_matrix(surfaces, classes).to_csv(os.path.join(out_dir, "lengths.csv"))
    report = v.as_dict()
    report["surfaces"] = [H.label for H in surfaces]
    report["matrix_file"] = "lengths.csv"
    return report, EXIT_OK if v.independent else EXIT_VERDICT


def cmd_cone(cfg, out_dir) -> Tuple[Dict, int]:
    from teichcurrents.independence import cone_dimension
    from teichcurrents.spectrum import jordan_samples

    surfaces = make_surfaces(cfg)
    classes = enumerate_classes(cfg["genus"], cfg["lmax"])
    est = cone_dimension(jordan_samples(surfaces, classes), cfg["tol_cone"])
    report = est.as_dict()
    report["surfaces"] = [H.label for H in surfaces]
    flags = []
    for i in range(len(surfaces)):
        for j in range(i + 1, len(surfaces)):
            kind = relation_kind(surfaces[i], surfaces[j], classes)
            if kind != "distinct":
                flags.append([surfaces[i].label, surfaces[j].label, kind])
    report["equal_spectrum_pairs"] = flags
    return report, EXIT_OK if est.full else EXIT_VERDICT


def cmd_intersect(cfg, out_dir) -> Tuple[Dict, int]:
    from teichcurrents.currents import geometric_intersection
    from teichcurrents.errors import StabilizationFailed
    from teichcurrents.words import curve

    words = cfg["curves"] or ["a1", "b1"]
    if len(words) != 2:
        raise ConfigError(f"intersect needs exactly two curves, got {len(words)}")
    c1, c2 = curve(words[0]), curve(words[1])
    status = EXIT_OK
    rows = []
    for H in make_surfaces(cfg):
        try:
            r = geometric_intersection(H, c1, c2, cfg["radius"])
            rr = geometric_intersection(H, c2, c1, cfg["radius"])
        except StabilizationFailed as exc:
            rows.append({"label": H.label, "stabilized": False, "error": str(exc)})
            status = EXIT_VERDICT
            continue
        rows.append({"label": H.label, "stabilized": True, "count": r.count,
                     "radius": r.radius,
                     "counts_by_radius": {str(k): v for k, v in r.counts_by_radius.items()},
                     "crossings": list(r.crossings),
                     "reverse_count": rr.count, "symmetric": r.count == rr.count})
        if r.count != rr.count:
            status = EXIT_VERDICT
    return {"curves": [format_word(c1.rep), format_word(c2.rep)],
            "results": rows}, status


def cmd_liouville(cfg, out_dir) -> Tuple[Dict, int]:
    from teichcurrents.currents import (BoundaryBox, DiscreteCurrent,
                                        liouville_box_mass,
                                        liouville_box_mass_quadrature,
                                        liouville_pairing, read_current_file)
    from teichcurrents.words import curve

    report: Dict[str, Any] = {}
    if cfg["box"] is not None:
        if len(cfg["box"]) != 4:
            raise ConfigError("box needs four angles")
        box = BoundaryBox(*[float(x) for x in cfg["box"]])
        closed = liouville_box_mass(box)
        quad = liouville_box_mass_quadrature(box)
        report["box"] = {"arcs": [box.alpha1, box.alpha2, box.beta1, box.beta2],
                         "mass": closed, "quadrature": quad,
                         "difference": abs(closed - quad)}
    if cfg["current"] is not None:
        nu = read_current_file(cfg["current"])
    else:
        nu = DiscreteCurrent.from_mapping(
            {curve(format_word((x,))): 1.0 for x in range(1, 2 * cfg["genus"] + 1)})
    report["current"] = [[w, format_word(c.rep)] for c, w in nu.terms]
    report["pairings"] = {H.label: liouville_pairing(H, nu) for H in make_surfaces(cfg)}
    return report, EXIT_OK


def cmd_flow(cfg, out_dir) -> Tuple[Dict, int]:
    from teichcurrents import flow

    surfaces = make_surfaces(cfg)
    results = []
    status = EXIT_OK
    for k, H in enumerate(surfaces):
        rep = flow.ergodicity_report(H, cfg["observable"], cfg["T"], cfg["dt"],
                                     cfg["seed"], cfg["starts"], cfg["mc_points"])
        rng = np.random.default_rng(cfg["seed"])
        for s in range(cfg["starts"]):
            start = flow.random_frame(rng, H)
            series = flow.running_average(H, start, cfg["observable"], cfg["T"],
                                          cfg["dt"], cfg["csv_every"])
            name = f"flow_{k:02d}_{s}.csv"
            np.savetxt(os.path.join(out_dir, name), series, delimiter=",",
                       header="t,running_average", comments="", fmt="%.17g")
        rep["label"] = H.label
        rep["series_files"] = [f"flow_{k:02d}_{s}.csv" for s in range(cfg["starts"])]
        rep["agree"] = bool(rep["spread"] <= 5e-2
                            and max(rep["relative_differences"]) <= 5e-2)
        if not rep["agree"]:
            status = EXIT_VERDICT
        results.append(rep)
    return {"results": results, "agreement_tolerance": 5e-2}, status


HANDLERS = {
    "make-surfaces": cmd_make_surfaces,
    "enumerate": cmd_enumerate,
    "lengths": cmd_lengths,
    "rank": cmd_rank,
    "cone": cmd_cone,
    "intersect": cmd_intersect,
    "liouville": cmd_liouville,
    "flow": cmd_flow,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def dump_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def versions() -> Dict[str, str]:
    import scipy

    return {"teichcurrents": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__}


def run(cfg: Dict[str, Any]) -> int:
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    t0 = time.perf_counter()
    report, status = HANDLERS[cfg["command"]](cfg, out_dir)
    wall = time.perf_counter() - t0
    report = {"command": cfg["command"], "config": cfg, "seed": cfg["seed"],
              "tolerances": _tolerances(cfg), "exit_status": status, **report}
    name = cfg["command"].replace("-", "_") + ".json"
    dump_json(os.path.join(out_dir, name), report)
    dump_json(os.path.join(out_dir, "manifest.json"),
              {"command": cfg["command"], "config": cfg, "versions": versions(),
               "backend": kernels.BACKEND, "wall_time_s": wall, "report": name,
               "exit_status": status})
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return run(cfg)
    except ValidationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in exc.report.failures():
            print(f"  {line}", file=sys.stderr)
        return EXIT_ERROR
    except (TeichCurrentsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
