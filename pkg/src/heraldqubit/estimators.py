"""scikit-learn style front ends.

:class:`HeraldedQubitModel` is a stateless transformer: rows of
``(gamma, phi)`` go in, columns ``p_yn, fidelity`` (plus ``dp, dF`` in
``mode="both"``) come out. It composes with pipelines and ``get_params`` /
``set_params`` like any other transformer.

:class:`DesignSearch` is a fit-only estimator whose ``fit`` runs the
constrained design search and stores the incumbent as fitted attributes.
"""

import math

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InfeasibleDesignError, InvalidArgumentError, ZeroProbabilityError
from .scheme import SchemeParams, _fidelity, run_numeric
from .validation import (
    check_cutoff_spec,
    check_eta,
    check_mode,
    check_outcome,
    check_parameter_grid,
    check_probability_floor,
)


def _numeric_point(eta, gamma, phi, outcome, cutoff):
    try:
        res = run_numeric(SchemeParams(eta, gamma, phi, cutoff), outcome)
    except ZeroProbabilityError as exc:
        return exc.probability, math.nan
    return res.p_yn, res.fidelity


def evaluate_analytic(eta, gamma, phi, outcome="yn"):
    """Vectorised ``(p_yn, fidelity)``; fidelity is NaN where undefined."""
    if outcome == "ny":
        phi = phi + math.pi / 2
    f, p = _fidelity(eta, gamma, phi)
    return np.asarray(p, dtype=float), np.asarray(f, dtype=float)


def evaluate_numeric(eta, gamma, phi, outcome="yn", cutoff="auto", n_jobs=None):
    """Brute-force ``(p_yn, fidelity)`` for each grid point, in input order."""
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_numeric_point)(eta, complex(g), float(f), outcome, cutoff)
        for g, f in zip(gamma, phi)
    )
    p, f = zip(*rows)
    return np.array(p, dtype=float), np.array(f, dtype=float)


class HeraldedQubitModel(TransformerMixin, BaseEstimator):
    """Map ``(gamma, phi)`` rows to heralding probability and fidelity.

    Parameters
    ----------
    eta : float
        Detector quantum efficiency in ``[0, 1]``.
    outcome : {"yn", "ny"}
        Which single-click pattern heralds the qubit.
    mode : {"analytic", "numeric", "both"}
        ``"both"`` returns the closed forms plus the numeric-minus-analytic
        deltas ``dp`` and ``dF``.
    cutoff : "auto" or int
        Fock cutoff for the numeric route.
    n_jobs : int or None
        Workers for the numeric route (joblib semantics). Output order never
        depends on scheduling.
    """

    def __init__(self, eta=0.8, outcome="yn", mode="analytic", cutoff="auto", n_jobs=None):
        self.eta = eta
        self.outcome = outcome
        self.mode = mode
        self.cutoff = cutoff
        self.n_jobs = n_jobs

    def _check_params(self):
        return (
            check_eta(self.eta),
            check_outcome(self.outcome),
            check_mode(self.mode),
            check_cutoff_spec(self.cutoff),
        )

    def fit(self, X, y=None):
        self._check_params()
        check_parameter_grid(X)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        eta, outcome, mode, cutoff = self._check_params()
        gamma, phi = check_parameter_grid(X)
        p, f = evaluate_analytic(eta, gamma, phi, outcome)
        if mode == "analytic":
            return np.column_stack([p, f])
        pn, fn = evaluate_numeric(eta, gamma, phi, outcome, cutoff, self.n_jobs)
        if mode == "numeric":
            return np.column_stack([pn, fn])
        return np.column_stack([p, f, pn - p, fn - f])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_in_")
        names = ["p_yn", "fidelity"]
        if self.mode == "both":
            names += ["dp", "dF"]
        return np.array(names, dtype=object)


def _better(f, p, best_f, best_p, atol=1e-12):
    """Lexicographic order: higher fidelity, then higher probability on ties."""
    if f > best_f + atol:
        return True
    return abs(f - best_f) <= atol and p > best_p


def _argbest(f, p):
    f = np.where(np.isnan(f), -np.inf, f)
    top = np.max(f)
    tied = np.flatnonzero(f >= top - 1e-12)
    return tied[np.argmax(p.reshape(-1)[tied])]


def _parse_target(target):
    a0, a1 = (complex(x) for x in target)
    norm = math.hypot(abs(a0), abs(a1))
    if norm == 0:
        raise InvalidArgumentError("target qubit must be nonzero")
    return a0 / norm, a1 / norm


class DesignSearch(BaseEstimator):
    """Find ``(gamma, phi)`` maximising the fidelity subject to ``P_YN >= p_min``.

    Without a target, a coarse ``grid_size x grid_size`` grid over
    ``gamma in [0, gamma_max]``, ``phi in [0, pi]`` is refined ``n_rounds``
    times with a ``zoom_size x zoom_size`` grid spanning one coarse step
    around the incumbent. The incumbent only changes on strict improvement.

    With ``target=(a0, a1)`` the search is restricted to the one-parameter
    family whose ideal output is that qubit, ``gamma = (a1/a0) tan(phi)``,
    and scanned in 1-D the same way.

    Fitted attributes: ``best_gamma_``, ``best_phi_``, ``best_fidelity_``,
    ``best_p_yn_``, ``history_`` (incumbent after each stage),
    ``max_p_yn_`` (largest probability seen on the coarse scan).
    """

    def __init__(self, eta=0.8, p_min=0.195, target=None, gamma_max=2.0,
                 grid_size=64, zoom_size=8, n_rounds=3):
        self.eta = eta
        self.p_min = p_min
        self.target = target
        self.gamma_max = gamma_max
        self.grid_size = grid_size
        self.zoom_size = zoom_size
        self.n_rounds = n_rounds

    def _score(self, gamma, phi):
        f, p = _fidelity(self._eta, gamma, phi)
        f = np.where(p >= self._p_min, f, np.nan)
        return f, p

    def fit(self, X=None, y=None):
        self._eta = check_eta(self.eta)
        self._p_min = check_probability_floor(self.p_min)
        if self.gamma_max <= 0:
            raise InvalidArgumentError("gamma_max must be positive")
        if self.grid_size < 2 or self.zoom_size < 2 or self.n_rounds < 0:
            raise InvalidArgumentError("grid sizes must be >= 2 and n_rounds >= 0")
        if self.target is None:
            self.family_ = "grid"
            self._fit_grid()
        else:
            self._fit_target(*_parse_target(self.target))
        return self

    def _record(self, gamma, phi, f, p):
        if isinstance(gamma, complex) and gamma.imag == 0:
            gamma = gamma.real
        self.best_gamma_, self.best_phi_ = gamma, float(phi)
        self.best_fidelity_, self.best_p_yn_ = float(f), float(p)
        self.history_.append((gamma, float(phi), float(f), float(p)))

    def _fit_grid(self):
        gmax = float(self.gamma_max)
        gs = np.linspace(0.0, gmax, self.grid_size)
        ps = np.linspace(0.0, math.pi, self.grid_size)
        G, P = np.meshgrid(gs, ps)
        f, p = self._score(G, P)
        self.max_p_yn_ = float(np.max(p))
        if np.all(np.isnan(f)):
            raise InfeasibleDesignError(
                f"no grid point reaches P_YN >= {self._p_min}; max P_YN = {self.max_p_yn_:.6g}",
                self.max_p_yn_,
            )
        i = _argbest(f, p)
        self.history_ = []
        self._record(float(G.flat[i]), P.flat[i], f.flat[i], p.flat[i])
        hg, hp = gs[1] - gs[0], ps[1] - ps[0]
        for _ in range(self.n_rounds):
            g0, p0 = self.best_gamma_, self.best_phi_
            zg = np.linspace(max(0.0, g0 - hg), min(gmax, g0 + hg), self.zoom_size)
            zp = np.linspace(max(0.0, p0 - hp), min(math.pi, p0 + hp), self.zoom_size)
            G, P = np.meshgrid(zg, zp)
            f, p = self._score(G, P)
            i = _argbest(f, p)
            if not np.isnan(f.flat[i]) and _better(
                f.flat[i], p.flat[i], self.best_fidelity_, self.best_p_yn_
            ):
                self._record(float(G.flat[i]), P.flat[i], f.flat[i], p.flat[i])
            else:
                self.history_.append(self.history_[-1])
            hg, hp = 2 * hg / (self.zoom_size - 1), 2 * hp / (self.zoom_size - 1)
        return self

    def _family(self, a0, a1, u):
        """Map the 1-D family coordinate ``u`` to ``(gamma, phi)``."""
        if abs(a1) < 1e-15:
            self.family_ = "phi=pi/2"
            return u.astype(complex), np.full_like(u, math.pi / 2)
        if abs(a0) < 1e-15:
            self.family_ = "phi=0"
            return u * (a1 / abs(a1)), np.zeros_like(u)
        self.family_ = "gamma=(a1/a0)tan(phi)"
        return (a1 / a0) * np.tan(u), u

    def _fit_target(self, a0, a1):
        gmax = float(self.gamma_max)
        n = self.grid_size ** 2
        if abs(a1) < 1e-15 or abs(a0) < 1e-15:
            lo, hi = 0.0, gmax
            u = np.linspace(lo, hi, n)
        else:
            # phi and pi - phi flip the sign of gamma but give the same target,
            # fidelity and probability; keep the branch where gamma ~ a1/a0
            lo, hi = 0.0, math.pi / 2
            u = np.linspace(lo, hi, n + 2)[1:-1]

        def score(u):
            gamma, phi = self._family(a0, a1, u)
            f, p = self._score(gamma, phi)
            f = np.where(np.abs(gamma) <= gmax * (1 + 1e-12), f, np.nan)
            return gamma, phi, f, p

        gamma, phi, f, p = score(u)
        self.max_p_yn_ = float(np.max(np.where(np.abs(gamma) <= gmax * (1 + 1e-12), p, 0.0)))
        if np.all(np.isnan(f)):
            raise InfeasibleDesignError(
                f"no point of the target family reaches P_YN >= {self._p_min}; "
                f"max P_YN = {self.max_p_yn_:.6g}",
                self.max_p_yn_,
            )
        self.history_ = []
        i = _argbest(f, p)
        self._record(complex(gamma[i]), phi[i], f[i], p[i])
        u0, h = u[i], u[1] - u[0]
        m = self.zoom_size ** 2
        for _ in range(self.n_rounds):
            z = np.linspace(max(lo, u0 - h), min(hi, u0 + h), m)
            if hi == math.pi / 2:
                z = z[(z > 0) & (z < hi)]
            gamma, phi, f, p = score(z)
            i = _argbest(f, p)
            if not np.isnan(f[i]) and _better(f[i], p[i], self.best_fidelity_, self.best_p_yn_):
                self._record(complex(gamma[i]), phi[i], f[i], p[i])
                u0 = z[i]
            else:
                self.history_.append(self.history_[-1])
            h = 2 * h / (m - 1)
        return self
