"""Command line front end for meshing, solving, and emitting artifacts.

Configuration is flags-only so every run can be reproduced by quoting
its command line; --dump-spec on any subcommand prints the resolved
RunSpec first for archival.  Exit codes: 0 success, 1 numeric failure
(non-convergence or a verification threshold breach; also any module
error, reported to stderr as module.ExceptionName), 2 usage.
"""

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .cases import CASE_BUILDERS, Case, build_case
from .contour import ContourError
from .eikonal import ArrivalField, SolverConfig, SolverError, solve
from .mesh import Marker, Mesh, MeshError, geom_cache, load_mesh, save_mesh
from .postproc import burn_curves, emit_csv, emit_svg
from .star import bistar_design, bistar_interface, neutral_tip_angle

__all__ = ["RunSpec", "parse_args", "run", "main"]

_SOLVER_FLAGS = (
    "dissipation_scale",
    "cfl_safety",
    "convergence_tol",
    "quiet_steps",
    "max_steps",
)


@dataclass(frozen=True)
class RunSpec:
    """One resolved invocation: a single subcommand plus its options."""

    subcommand: str
    options: dict

    def __post_init__(self):
        if not self.subcommand:
            raise ValueError("RunSpec needs a subcommand")
        for key in ("out", "mesh", "residuals"):
            if key in self.options and self.options[key] is not None:
                if not str(self.options[key]):
                    raise ValueError(f"--{key.replace('_', '-')} must not be empty")


def _add_dump(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dump-spec", action="store_true", help="print the resolved RunSpec")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver overrides")
    g.add_argument("--dissipation-scale", type=float, default=None)
    g.add_argument("--cfl-safety", type=float, default=None)
    g.add_argument("--convergence-tol", type=float, default=None)
    g.add_argument("--quiet-steps", type=int, default=None)
    g.add_argument("--max-steps", type=int, default=None)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="burnback", description="2D grain burnback analysis toolkit"
    )
    sub = top.add_subparsers(dest="cmd", required=True)
    cases = sorted(CASE_BUILDERS)

    pm = sub.add_parser("mesh", help="generate or inspect meshes")
    pms = pm.add_subparsers(dest="sub", required=True)
    gen = pms.add_parser("gen", help="write a registry case mesh as text")
    gen.add_argument("--case", required=True, choices=cases)
    gen.add_argument("--out", required=True)
    _add_dump(gen)
    info = pms.add_parser("info", help="print mesh statistics")
    src = info.add_mutually_exclusive_group(required=True)
    src.add_argument("--mesh")
    src.add_argument("--case", choices=cases)
    _add_dump(info)

    slv = sub.add_parser("solve", help="relax an arrival-time field")
    src = slv.add_mutually_exclusive_group(required=True)
    src.add_argument("--mesh")
    src.add_argument("--case", choices=cases)
    slv.add_argument("--rate", type=float, default=None, help="uniform recession rate")
    slv.add_argument("--out", required=True, help="field CSV node,x,y,s")
    slv.add_argument("--residuals", default=None, help="history CSV step,dt,max_residual")
    _add_solver_flags(slv)
    _add_dump(slv)

    crv = sub.add_parser("curves", help="perimeter/area burn curves of a case")
    crv.add_argument("--case", required=True, choices=cases)
    crv.add_argument("--out", required=True, help="CSV tau,P_b,A_p,A_eq[,A_b]")
    crv.add_argument("--tau-min", type=float, default=None)
    crv.add_argument("--tau-max", type=float, default=None)
    crv.add_argument("--tau-count", type=int, default=33)
    crv.add_argument("--grain-length", type=float, default=None)
    _add_solver_flags(crv)
    _add_dump(crv)

    ctr = sub.add_parser("contours", help="SVG isochrones of a case")
    ctr.add_argument("--case", required=True, choices=cases)
    ctr.add_argument("--out", required=True, help="SVG path")
    ctr.add_argument("--levels", default=None, help="comma-separated tau values")
    ctr.add_argument("--nlevels", type=int, default=8)
    ctr.add_argument("--no-mesh", action="store_true", help="omit the mesh underlay")
    _add_solver_flags(ctr)
    _add_dump(ctr)

    st = sub.add_parser("star", help="star grain design formulas")
    sts = st.add_subparsers(dest="sub", required=True)
    neu = sts.add_parser("neutral", help="tip semi-angle of a neutral star")
    neu.add_argument("--n", type=int, required=True, help="number of tips")
    _add_dump(neu)

    bi = sub.add_parser("bistar", help="sliverless two-propellant star design")
    bis = bi.add_subparsers(dest="sub", required=True)
    for name in ("design", "interface"):
        p = bis.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--rc", type=float, required=True, help="casing radius")
        p.add_argument("--rf", type=float, required=True, help="slot fillet radius")
        p.add_argument("--d", type=float, required=True, help="slot depth")
        if name == "interface":
            p.add_argument("--samples", type=int, default=256)
            p.add_argument("--out", required=True, help="CSV y,r1,theta1,r2,theta2")
        _add_dump(p)

    ver = sub.add_parser("verify", help="end-to-end accuracy checks")
    vers = ver.add_subparsers(dest="sub", required=True)
    slot = vers.add_parser("slot", help="slot error study vs the exact oracle")
    slot.add_argument("--nodes", type=int, default=2500, help="target node budget")
    _add_dump(slot)

    return top


def parse_args(argv) -> RunSpec:
    ns = _build_parser().parse_args(list(argv))
    options = vars(ns)
    cmd = options.pop("cmd")
    subname = options.pop("sub", None)
    return RunSpec(f"{cmd}-{subname}" if subname else cmd, options)


# ---------------------------------------------------------------------------
# subcommand handlers


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _merged_config(opt: dict, base: SolverConfig | None) -> SolverConfig | None:
    given = {k: opt[k] for k in _SOLVER_FLAGS if opt.get(k) is not None}
    if not given:
        return base
    return replace(base, **given) if base is not None else SolverConfig(**given)


def _solve_case(case: Case, opt: dict) -> ArrivalField:
    res = solve(case.mesh, case.rate, config=_merged_config(opt, case.config))
    if not res.converged:
        raise SolverError(
            f"case {case.name} did not converge within {res.n_steps} steps"
        )
    return res


def _cmd_mesh_gen(opt: dict) -> int:
    case = build_case(opt["case"])
    _write(opt["out"], save_mesh(case.mesh))
    print(
        f"{opt['case']}: wrote {case.mesh.n_nodes} nodes, "
        f"{case.mesh.n_triangles} triangles to {opt['out']}"
    )
    return 0


def _load_mesh_arg(opt: dict) -> tuple[Mesh, str]:
    if opt.get("mesh") is not None:
        return load_mesh(Path(opt["mesh"]).read_text(encoding="utf-8")), opt["mesh"]
    case = build_case(opt["case"])
    return case.mesh, case.name


def _cmd_mesh_info(opt: dict) -> int:
    mesh, label = _load_mesh_arg(opt)
    cache = geom_cache(mesh)
    lo, hi = mesh.nodes.min(axis=0), mesh.nodes.max(axis=0)
    print(f"{label}: {mesh.n_nodes} nodes, {mesh.n_triangles} triangles")
    print(
        f"bbox [{lo[0]:.6g}, {hi[0]:.6g}] x [{lo[1]:.6g}, {hi[1]:.6g}], "
        f"{len(mesh.symmetry_lines)} symmetry lines"
    )
    counts = ", ".join(
        f"{m.name} {int((mesh.node_markers == m).sum())}" for m in Marker
    )
    print(f"markers: {counts}")
    h = cache.node_min_height
    print(f"node min heights: min {h.min():.3e}, median {np.median(h):.3e}")
    return 0


def _cmd_solve(opt: dict) -> int:
    if opt.get("mesh") is not None:
        mesh = load_mesh(Path(opt["mesh"]).read_text(encoding="utf-8"))
        rate = 1.0 if opt.get("rate") is None else opt["rate"]
        config = _merged_config(opt, None)
    else:
        case = build_case(opt["case"])
        mesh = case.mesh
        rate = case.rate if opt.get("rate") is None else opt["rate"]
        config = _merged_config(opt, case.config)
    res = solve(mesh, rate, config=config)
    _write(opt["out"], emit_csv(res.s, mesh=mesh))
    if opt.get("residuals"):
        _write(opt["residuals"], emit_csv(res))
    print(
        f"solve: {res.n_steps} steps, converged={res.converged}, "
        f"s in [{res.s.min():.6g}, {res.s.max():.6g}], wrote {opt['out']}"
    )
    if not res.converged:
        print("solver did not reach the quiet-step criterion", file=sys.stderr)
        return 1
    return 0


def _cmd_curves(opt: dict) -> int:
    case = build_case(opt["case"])
    res = _solve_case(case, opt)
    depth = case.depth if case.depth is not None else float(res.s.max())
    lo = opt["tau_min"] if opt.get("tau_min") is not None else 0.05 * depth
    hi = opt["tau_max"] if opt.get("tau_max") is not None else 0.95 * depth
    if not lo < hi:
        raise ValueError("curves needs tau-min < tau-max")
    tau = np.linspace(lo, hi, opt["tau_count"])
    labels = case.labels if case.labels is not None else np.ones(case.mesh.n_nodes, dtype=np.int64)
    curves = burn_curves(
        case.mesh, res.s, labels, case.rate_ratio, tau, grain_length=opt.get("grain_length")
    )
    _write(opt["out"], emit_csv(curves))
    print(
        f"curves: {len(tau)} levels in [{lo:.6g}, {hi:.6g}], "
        f"P_b in [{curves.P_b.min():.6g}, {curves.P_b.max():.6g}], wrote {opt['out']}"
    )
    return 0


def _cmd_contours(opt: dict) -> int:
    case = build_case(opt["case"])
    res = _solve_case(case, opt)
    depth = case.depth if case.depth is not None else float(res.s.max())
    if opt.get("levels"):
        levels = [float(tok) for tok in opt["levels"].split(",") if tok.strip()]
        if not levels:
            raise ValueError("--levels must hold at least one tau value")
    else:
        k = np.arange(1, opt["nlevels"] + 1)
        levels = list(depth * k / (opt["nlevels"] + 1.0))
    svg = emit_svg(
        case.mesh, res.s, levels=levels, contour=case.port, show_mesh=not opt["no_mesh"]
    )
    _write(opt["out"], svg)
    print(f"contours: {len(levels)} isochrones, wrote {opt['out']}")
    return 0


def _cmd_star_neutral(opt: dict) -> int:
    half = neutral_tip_angle(opt["n"])
    print(f"n = {opt['n']}: theta/2 = {math.degrees(half):.2f} deg")
    return 0


def _cmd_bistar_design(opt: dict) -> int:
    design = bistar_design(opt["n"], opt["rc"], opt["rf"], opt["d"])
    rows = [
        ("n", f"{design.n}"),
        ("r_c", f"{design.r_c:.6g}"),
        ("r_f", f"{design.r_f:.6g}"),
        ("d", f"{design.d:.6g}"),
        ("omega", f"{design.omega:.6g}"),
        ("f", f"{design.f:.3f}"),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  = {v}")
    return 0


def _cmd_bistar_interface(opt: dict) -> int:
    design = bistar_design(opt["n"], opt["rc"], opt["rf"], opt["d"])
    face = bistar_interface(design, opt["samples"])
    rows = ["y,r1,theta1,r2,theta2"]
    for vals in zip(face.y, face.r1, face.theta1, face.r2, face.theta2):
        rows.append(",".join(f"{v:.12g}" for v in vals))
    _write(opt["out"], "\n".join(rows) + "\n")
    print(f"interface: {len(face.y)} samples, f = {design.f:.3f}, wrote {opt['out']}")
    return 0


# Node budgets at or above this switch the slot study to its fine level.
_SLOT_FINE_NODES = 6000


def _cmd_verify_slot(opt: dict) -> int:
    level = "coarse" if opt["nodes"] < _SLOT_FINE_NODES else "fine"
    threshold = 0.01 if level == "coarse" else 0.005
    case = build_case(f"slot-{level}")
    res = _solve_case(case, opt)
    err = float(np.abs(res.s - case.exact).max() / case.depth)
    ok = err < threshold
    print(
        f"slot {level}: {case.mesh.n_nodes} nodes, max normalized error "
        f"{100.0 * err:.4f}% vs threshold {100.0 * threshold:g}%: "
        f"{'PASS' if ok else 'FAIL'}"
    )
    return 0 if ok else 1


_HANDLERS = {
    "mesh-gen": _cmd_mesh_gen,
    "mesh-info": _cmd_mesh_info,
    "solve": _cmd_solve,
    "curves": _cmd_curves,
    "contours": _cmd_contours,
    "star-neutral": _cmd_star_neutral,
    "bistar-design": _cmd_bistar_design,
    "bistar-interface": _cmd_bistar_interface,
    "verify-slot": _cmd_verify_slot,
}


def run(spec: RunSpec) -> int:
    """Execute one RunSpec; numeric failures return 1 instead of raising."""
    if spec.options.get("dump_spec"):
        print(spec)
    return _HANDLERS[spec.subcommand](spec.options)


def _origin_module(exc: BaseException) -> str:
    """Innermost package module on the traceback, for error attribution."""
    mod = type(exc).__module__
    name = mod.rsplit(".", 1)[-1] if mod.startswith("burnback") else "cli"
    tb = exc.__traceback__
    while tb is not None:
        g = tb.tb_frame.f_globals.get("__name__", "")
        if g.startswith("burnback"):
            name = g.rsplit(".", 1)[-1]
        tb = tb.tb_next
    return name


def main(argv=None) -> int:
    try:
        spec = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse usage error (2) or --help (0)
        return int(exc.code or 0)
    try:
        return run(spec)
    except (MeshError, ContourError, SolverError, ValueError, OSError) as exc:
        print(f"{_origin_module(exc)}.{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
