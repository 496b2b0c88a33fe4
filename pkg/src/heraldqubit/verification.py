"""Closed-form versus brute-force reconciliation over a parameter grid."""

from dataclasses import dataclass, field
import math

import numpy as np
from joblib import Parallel, delayed

from .detection import outcome_distribution, povm_elements
from .scheme import (
    SchemeParams,
    coefficients_analytic,
    fidelity_analytic,
    herald,
    p_yn_analytic,
    rho_yn_analytic,
    run_numeric,
    simulate,
)

ORACLE_TOL = 1e-8
ANALYTIC_TOL = 1e-10
CONSISTENCY_TOL = 1e-12
COMPLETENESS_TOL = 1e-9
SMALL_GAMMA = 1e-4
SMALL_GAMMA_TOL = 1e-6
FAULT_SIZE = 1e-3


@dataclass
class Check:
    name: str
    tol: float
    worst: float = 0.0
    where: tuple = None
    count: int = 0

    def update(self, value, where):
        self.count += 1
        worse = math.isnan(value) or value > self.worst
        if self.where is None or (worse and not math.isnan(self.worst)):
            self.worst, self.where = value, where

    @property
    def passed(self):
        return self.count > 0 and math.isfinite(self.worst) and self.worst <= self.tol


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    vacuum_projector: dict = field(default_factory=dict)

    def check(self, name, tol):
        if name not in self.checks:
            self.checks[name] = Check(name, tol)
        return self.checks[name]

    @property
    def ok(self):
        return all(c.passed for c in self.checks.values())

    def failures(self):
        return [c for c in self.checks.values() if not c.passed]

    def format_table(self):
        width = max(len(c.name) for c in self.checks.values())
        lines = [f"{'check':<{width}}  {'worst':>10}  {'tol':>7}  {'n':>5}  status  worst at (eta, gamma, phi)"]
        for c in self.checks.values():
            where = ", ".join(f"{x:.6g}" for x in c.where) if c.where else "-"
            status = "ok" if c.passed else "FAIL"
            lines.append(
                f"{c.name:<{width}}  {c.worst:10.3e}  {c.tol:7.0e}  {c.count:5d}  {status:<6}  ({where})"
            )
        for eta, dev in self.vacuum_projector.items():
            lines.append(f"eta={eta:g}: no-click POVM element is the vacuum projector "
                         f"(max deviation {dev:.1e})")
        return "\n".join(lines)


def oracle_grid(n=12, gamma_range=(0.05, 2.0)):
    """``n`` gammas spanning ``gamma_range`` and ``n`` phis strictly inside ``(0, pi)``."""
    gammas = np.linspace(*gamma_range, n)
    phis = np.linspace(0.0, math.pi, n + 2)[1:-1]
    return gammas, phis


def _grid_point(eta, gamma, phi, numeric_eta):
    """All deltas at one grid point; the numeric arm runs at ``numeric_eta``."""
    params = SchemeParams(numeric_eta, gamma, phi)
    state = simulate(params)
    yn = herald(state, params, "yn")
    ny = herald(state, params, "ny")
    shifted = run_numeric(SchemeParams(numeric_eta, gamma, phi + math.pi / 2), "yn")
    det = povm_elements(numeric_eta, state.cutoff)
    total = sum(outcome_distribution(state, {1: det, 2: det}).values())

    coeffs = coefficients_analytic(eta, gamma, phi)
    p = float(p_yn_analytic(eta, gamma, phi))
    rho = rho_yn_analytic(eta, gamma, phi).matrix
    f = fidelity_analytic(eta, gamma, phi)
    return {
        "oracle |dp|": abs(yn.p_yn - p),
        "oracle max|drho|": float(np.max(np.abs(yn.rho.matrix - rho))),
        "oracle |dF|": abs(yn.fidelity - f),
        "d00+d11 vs P_YN": abs(coeffs.probability - p),
        "four-outcome sum": abs(total - 1.0),
        "NY(phi) vs YN(phi+pi/2)": max(
            abs(ny.p_yn - shifted.p_yn),
            float(np.max(np.abs(ny.rho.matrix - shifted.rho.matrix))),
            abs(ny.fidelity - shifted.fidelity),
        ),
        "numeric rho Hermitian": yn.rho.hermiticity_error(),
        "numeric rho min eigenvalue": max(0.0, -yn.rho.min_eigenvalue()),
        "numeric rho |tr-1|": abs(yn.rho.trace() - 1.0),
        "mode-a population above |1>": yn.high_level_population,
    }


_POINT_TOLS = {
    "oracle |dp|": ORACLE_TOL,
    "oracle max|drho|": ORACLE_TOL,
    "oracle |dF|": ORACLE_TOL,
    "d00+d11 vs P_YN": CONSISTENCY_TOL,
    "four-outcome sum": COMPLETENESS_TOL,
    "NY(phi) vs YN(phi+pi/2)": ORACLE_TOL,
    "numeric rho Hermitian": 1e-10,
    "numeric rho min eigenvalue": 1e-8,
    "numeric rho |tr-1|": 1e-9,
    "mode-a population above |1>": 1e-10,
}


def _boundary_cases(eta, gammas, phis):
    """``(name, gamma, phi, quantity, expected, tol_analytic, tol_numeric)`` rows."""
    rows = []
    for phi in phis:
        rows.append(("P(eta,0,phi)=(eta/2)sin^2", 0.0, phi, "p", eta / 2 * math.sin(phi) ** 2,
                     ANALYTIC_TOL, ORACLE_TOL))
        rows.append(("F(eta,1e-4,phi)=1", SMALL_GAMMA, phi, "f", 1.0, SMALL_GAMMA_TOL, SMALL_GAMMA_TOL))
    for g in gammas:
        rows.append(("P(eta,g,pi/2)=(eta/2)exp(-eta g^2)", g, math.pi / 2, "p",
                     eta / 2 * math.exp(-eta * g * g), ANALYTIC_TOL, ORACLE_TOL))
        rows.append(("P(eta,g,0)=(1-exp(-eta g^2))(1-eta/2)", g, 0.0, "p",
                     (1 - math.exp(-eta * g * g)) * (1 - eta / 2), ANALYTIC_TOL, ORACLE_TOL))
        rows.append(("F(eta,g,pi/2)=1", g, math.pi / 2, "f", 1.0, ANALYTIC_TOL, ORACLE_TOL))
    return rows


def _boundary_point(eta, numeric_eta, row):
    name, g, phi, kind, expected = row[:5]
    if kind == "p":
        a = float(p_yn_analytic(eta, g, phi))
        n = run_numeric(SchemeParams(numeric_eta, g, phi)).p_yn
    else:
        a = fidelity_analytic(eta, g, phi)
        n = run_numeric(SchemeParams(numeric_eta, g, phi)).fidelity
    return abs(a - expected), abs(n - expected)


def run_verification(etas=(0.4, 0.8, 1.0), n_grid=12, gamma_range=(0.05, 2.0),
                     inject_fault=False, n_jobs=None):
    """Run every reconciliation check and collect worst-case deviations.

    With ``inject_fault`` the numeric arm uses an efficiency shifted by
    ``FAULT_SIZE``, which the report must flag.
    """
    report = VerificationReport()
    gammas, phis = oracle_grid(n_grid, gamma_range)
    for eta in etas:
        numeric_eta = eta
        if inject_fault:
            numeric_eta = eta - FAULT_SIZE if eta >= FAULT_SIZE else eta + FAULT_SIZE
        if eta == 1.0:
            pi_no = povm_elements(eta, 8).pi_no
            vac = np.zeros_like(pi_no)
            vac[0, 0] = 1.0
            report.vacuum_projector[eta] = float(np.max(np.abs(pi_no - vac)))

        points = [(g, f) for f in phis for g in gammas]
        results = Parallel(n_jobs=n_jobs)(
            delayed(_grid_point)(eta, g, f, numeric_eta) for g, f in points
        )
        for (g, f), deltas in zip(points, results):
            for name, value in deltas.items():
                report.check(name, _POINT_TOLS[name]).update(value, (eta, g, f))

        rows = _boundary_cases(eta, gammas, phis)
        results = Parallel(n_jobs=n_jobs)(
            delayed(_boundary_point)(eta, numeric_eta, row) for row in rows
        )
        for row, (da, dn) in zip(rows, results):
            name, g, phi = row[:3]
            report.check(name + " [analytic]", row[5]).update(da, (eta, g, phi))
            report.check(name + " [numeric]", row[6]).update(dn, (eta, g, phi))
    return report
