"""End-to-end runs producing JSON-ready reports, shared by the CLI and `verify`."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import sl3
from .alexander import (
    alexander_polynomial,
    analysis_report,
    default_precision,
    polynomial_roots,
    require_sl3_hypothesis,
    torsion_report,
)
from .cohomology import (
    character_module,
    cohomology_dims,
    cup,
    coboundary_membership,
    homomorphism_cochain,
    quotient,
    relator_vector,
    solve_coboundary,
    submodule,
    trivial_module,
)
from .deform import (
    coordinate_system,
    formal_deformation,
    galois_partner_data,
    integrate_deformation,
    minus_two_is_not_a_root,
    select_direction,
)
from .errors import HypothesisError, InconsistencyError, InputError
from .knotio import PDCode, Presentation, resolve_knot, wirtinger_presentation
from .metabel import MetabelianData, Rep, adjoint_module, metabelian_sl3, verify_representation

SCHEMA = 1
RESIDUAL_FLOOR = 1e-14


@dataclass
class RunConfig:
    knot: str
    alpha_root: int = 0
    precision: int = field(default_factory=default_precision)
    tol_rank: float = 1e-8
    tol_relator: float = 1e-10
    order: int = 4
    t_grid: tuple = (0.0025, 0.005, 0.01)
    workers: int = 1

    def __post_init__(self):
        if self.tol_rank <= 0 or self.tol_relator <= 0:
            raise ValueError("tolerances must be positive")
        if self.order < 1:
            raise ValueError("order must be >= 1")


@dataclass
class Context:
    """Everything downstream of the knot diagram for one chosen root."""

    name: str
    pd: PDCode
    presentation: Presentation
    roots: list
    alpha: complex

    @classmethod
    def load(cls, cfg: RunConfig) -> Context:
        name, pd = resolve_knot(cfg.knot)
        p = wirtinger_presentation(pd)
        delta = alexander_polynomial(p)
        roots = polynomial_roots(delta, cfg.precision) if delta.degree() > 0 else []
        if not roots:
            raise HypothesisError("the Alexander polynomial has no roots")
        if not 0 <= cfg.alpha_root < len(roots):
            raise InputError(f"--alpha-root {cfg.alpha_root} out of range (0..{len(roots) - 1})")
        return cls(name, pd, p, roots, roots[cfg.alpha_root][0])

    def knot_dict(self) -> dict:
        return {"name": self.name, "pd": self.pd.to_text()}


def _cpx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _header(kind: str, ctx: Context | None, cfg: RunConfig) -> dict:
    out = {"schema": SCHEMA, "kind": kind, "precision": cfg.precision, "alpha_root": cfg.alpha_root}
    if ctx is not None:
        out["knot"] = ctx.knot_dict()
        out["alpha"] = _cpx(ctx.alpha)
    return out


# --- analyze ------------------------------------------------------------------


def analyze(cfg: RunConfig) -> dict:
    name, pd = resolve_knot(cfg.knot)
    p = wirtinger_presentation(pd)
    report = {"schema": SCHEMA, "kind": "analyze", "knot": {"name": name, "pd": pd.to_text()},
              "precision": cfg.precision, "alpha_root": cfg.alpha_root}
    report.update(analysis_report(p, cfg.precision))
    roots = report["roots"]
    gate = {"passed": False, "reason": ""}
    report["torsion"] = None
    if not roots:
        gate["reason"] = "no roots"
    elif not 0 <= cfg.alpha_root < len(roots):
        raise InputError(f"--alpha-root {cfg.alpha_root} out of range (0..{len(roots) - 1})")
    else:
        root = roots[cfg.alpha_root]
        tr = torsion_report(p, complex(root["re"], root["im"]))
        report["torsion"] = {"r": tr.r, "dimH1": tr.dim_H1, "cyclic": tr.cyclic}
        try:
            require_sl3_hypothesis(tr)
            gate["passed"] = True
        except HypothesisError as exc:
            gate["reason"] = str(exc)
    report["sl3_gate"] = gate
    report["checks"] = {"sl3_gate": gate["passed"]}
    return report


# --- construct --------------------------------------------------------------------


def construct(cfg: RunConfig) -> tuple[dict, Context, Rep, MetabelianData]:
    ctx = Context.load(cfg)
    rt, data = metabelian_sl3(ctx.presentation, ctx.alpha)
    ver = verify_representation(ctx.presentation, rt)
    alpha = ctx.alpha
    expected_trace = rt.matrices[0][1, 1] * (alpha + 2)
    tr = complex(np.trace(rt((ctx.presentation.meridian,))))
    out = _header("construct", ctx, cfg)
    out["torsion"] = data.torsion.to_dict()
    out["rep"] = rt.to_dict()
    out["verification"] = ver.to_dict()
    out["trace_mu"] = _cpx(tr)
    out["conventions"] = {"S2": data.s2 + 1, "h": "exponent sum", "cube_root": "principal",
                          "z(S1)": 0, "g(S1)": 0, "z(S2)": 1}
    out["checks"] = {
        "relators": ver.relator < cfg.tol_relator,
        "det": ver.det < 1e-12,
        "boundary_commutes": ver.commutator < cfg.tol_relator,
        "trace_formula": abs(tr - expected_trace) < 1e-10,
    }
    return out, ctx, rt, data


# --- cohomology -------------------------------------------------------------------


def boundary_presentation() -> Presentation:
    """<mu, lambda | [mu, lambda]>."""
    return Presentation(2, ((1, 2, -1, -2),))


def boundary_module(p: Presentation, rt: Rep):
    return adjoint_module(rt.replace([rt((p.meridian,)), rt(p.longitude)]), "sl3|boundary")


def cup_product_suite(p: Presentation, data: MetabelianData, gd) -> dict:
    """Membership tests for the three cup-product classes."""
    n = p.num_generators
    ca = data.module_alpha
    triv = trivial_module(n)
    zh = coboundary_membership(relator_vector(cup(data.z, data.h, ca), p), ca, p)
    c_inv = gd.z_minus.module
    hz = coboundary_membership(relator_vector(cup(data.h, gd.z_minus, c_inv), p), c_inv, p)
    # h'' = h; h2 solves delta h2 + h cup h'' = 0
    h2, _ = solve_coboundary(-cup(data.h, data.h, triv), p, name="h2")
    cls = cup(data.z, h2, ca) + cup(data.g, homomorphism_cochain(p), ca)
    zg = coboundary_membership(relator_vector(cls, p), ca, p)

    def entry(m):
        return {"is_coboundary": m.is_coboundary, "residual": m.residual,
                "relative_residual": m.relative_residual, "norm": m.norm}

    return {"z_cup_h": entry(zh), "h_cup_zminus": entry(hz), "z_cup_h2_plus_g_cup_h": entry(zg)}


def cohomology(cfg: RunConfig) -> dict:
    _, ctx, rt, data = construct(cfg)
    p, n, alpha = ctx.presentation, ctx.presentation.num_generators, ctx.alpha
    adj = adjoint_module(rt)
    modules = [
        trivial_module(n),
        character_module(n, alpha, "C_alpha"),
        character_module(n, 1 / alpha, "C_alpha^-1"),
        submodule(adj, sl3.UPPER_NILPOTENT, "C_+(3)"),
        submodule(adj, sl3.BOREL, "b_+"),
        quotient(adj, sl3.BOREL, "C_-(3)"),
        adj,
    ]
    tables = [cohomology_dims(p, m, cfg.tol_rank).to_dict() for m in modules]
    bd = boundary_presentation()
    tables.append(cohomology_dims(bd, boundary_module(p, rt), cfg.tol_rank).to_dict())
    gd = galois_partner_data(p, alpha, data)
    cups = cup_product_suite(p, data, gd)
    out = _header("cohomology", ctx, cfg)
    out["tables"] = tables
    out["cup_products"] = cups
    out["checks"] = {
        "euler": all(t["h0"] - t["h1"] + t["h2"] == 0 for t in tables[:-1]),
        "z_cup_h_vanishes": cups["z_cup_h"]["is_coboundary"],
        "h_cup_zminus_vanishes": cups["h_cup_zminus"]["is_coboundary"],
        "z_cup_h2_plus_g_cup_h_nonzero": not cups["z_cup_h2_plus_g_cup_h"]["is_coboundary"],
    }
    return out


# --- deform -----------------------------------------------------------------------


def deform(cfg: RunConfig) -> dict:
    _, ctx, rt, data = construct(cfg)
    p = ctx.presentation
    if not minus_two_is_not_a_root(alexander_polynomial(p)):
        raise InconsistencyError("Delta(-2) = 0")
    gd = galois_partner_data(p, ctx.alpha, data)
    system = coordinate_system(p, adjoint_module(rt), gd)
    u1 = select_direction(p, rt, system)
    curve = formal_deformation(p, rt, u1, cfg.order)
    cert = integrate_deformation(p, rt, u1, cfg.t_grid, curve=curve, tol=cfg.tol_relator,
                                 workers=cfg.workers)
    out = _header("deform", ctx, cfg)
    out["certificate"] = cert.to_dict()
    out["formal_relator_defects"] = curve.relator_defects
    out["checks"] = {
        "unobstructed": curve.is_unobstructed(),
        "converged": all(s.residual < cfg.tol_relator for s in cert.samples),
        "boundary_commutes": all(s.commutator < cfg.tol_relator for s in cert.samples),
    }
    return out


# --- verify -----------------------------------------------------------------------


def _close(recorded: float, recomputed: float) -> bool:
    return recomputed <= 10 * recorded + RESIDUAL_FLOOR


def _config_from(report: dict) -> RunConfig:
    cfg = RunConfig(report["knot"]["pd"], report.get("alpha_root", 0), report.get("precision", 15))
    cert = report.get("certificate")
    if cert is not None:
        cfg.order = cert["orders"]
        cfg.t_grid = tuple(s["t"] for s in cert["samples"])
    return cfg


def verify(report: dict) -> dict:
    """Replay a stored report and re-check every recorded residual."""
    if report.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {report.get('schema')!r}")
    kind = report.get("kind")
    checks: dict[str, bool] = {}
    if kind == "analyze":
        cfg = RunConfig(report["knot"]["pd"], report.get("alpha_root", 0), report.get("precision", 15))
        fresh = analyze(cfg)
        checks["delta"] = fresh["delta"] == report["delta"]
        checks["torsion"] = fresh["torsion"] == report["torsion"]
    elif kind == "construct":
        name, pd = resolve_knot(report["knot"]["pd"])
        p = wirtinger_presentation(pd)
        rep = Rep.from_dict(report["rep"])
        ver = verify_representation(p, rep)
        rec = report["verification"]
        for key in ("relator", "det", "commutator"):
            checks[key] = _close(rec[key], getattr(ver, key))
        checks["recorded_checks"] = all(report["checks"].values())
    elif kind == "cohomology":
        fresh = cohomology(_config_from(report))
        checks["tables"] = fresh["tables"] == report["tables"]
        for key, rec in report["cup_products"].items():
            new = fresh["cup_products"][key]
            checks[key] = new["is_coboundary"] == rec["is_coboundary"] and (
                not rec["is_coboundary"] or _close(rec["residual"], new["residual"]))
    elif kind == "deform":
        name, pd = resolve_knot(report["knot"]["pd"])
        p = wirtinger_presentation(pd)
        cert = report["certificate"]
        for k, s in enumerate(cert["samples"]):
            rep = Rep.from_dict({"dim": 3, "alpha": report["alpha"], "generators": s["generators"]})
            ver = verify_representation(p, rep)
            checks[f"sample{k}.residual"] = _close(s["residual"], ver.relator)
            checks[f"sample{k}.commutator"] = _close(s["commutator"], ver.commutator)
        fresh = deform(_config_from(report))
        new = fresh["certificate"]
        checks["obstructions"] = all(_close(a, b) for a, b in
                                     zip(cert["obstruction_residuals"], new["obstruction_residuals"]))
        for k, (a, b) in enumerate(zip(cert["samples"], new["samples"])):
            checks[f"sample{k}.classification"] = all(a[key] == b[key] for key in
                                                      ("algebra_dim", "irreducible", "stable", "nonmetabelian"))
        checks["recorded_checks"] = all(report["checks"].values())
    else:
        raise ValueError(f"unknown report kind {kind!r}")
    return {"schema": SCHEMA, "kind": "verify", "verified_kind": kind, "checks": checks}
