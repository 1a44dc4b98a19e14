"""Angular minimum-volume sets on the positive max-norm sphere.

The candidate class consists of unions of equal-measure grid cells on the
faces of the positive unit sphere of the max norm (the sets ``{theta >= 0,
max theta = 1, theta_j = 1}`` for each face j, each partitioned into
``m**(d-1)`` congruent boxes). With equal cell measures, selecting cells in
decreasing order of empirical angular mass until the mass constraint
``alpha - psi`` is met is an exact minimum-volume solution within the class.

Anomalies among extremes are ranked by the product score

    s(x) = s_r(x) * s_theta(theta(v(x))),  s_r(x) = 1 / ||v(x)||_inf**2

where v is the marginal standardization and s_theta an angular density proxy
(empirical cell mass by default). Lower scores are more anomalous.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._serialize import read_model_file, write_model_file
from ._validation import check_in_range, check_matrix, check_positive_int
from .geometry import polar
from .tail import select_extremes
from .transforms import EmpiricalParetoTransform

__all__ = [
    "AngularGrid",
    "MvSetModel",
    "cell_masses_of_sample",
    "fit_angular_mvset",
    "mvset_mass_check",
    "anomaly_score",
    "default_mass_tolerance",
    "AngularMinVolumeSet",
]

MAX_GRID_CELLS = 10_000_000


@dataclass(frozen=True)
class AngularGrid:
    """Equal-measure partition of the positive max-norm sphere faces.

    The sphere has d faces (one per coordinate attaining the max); each face
    is cut into ``m**(d-1)`` boxes of face-Lebesgue measure ``1 / m**(d-1)``.
    Cells are indexed ``face * m**(d-1) + flat box index``.
    """

    d: int
    m: int

    def __post_init__(self):
        check_positive_int(self.d, "d", minimum=2)
        check_positive_int(self.m, "m")
        if self.n_cells > MAX_GRID_CELLS:
            raise ValueError(
                f"grid of {self.d} * {self.m}**{self.d - 1} cells exceeds the "
                f"cap of {MAX_GRID_CELLS}"
            )

    @property
    def cells_per_face(self):
        return self.m ** (self.d - 1)

    @property
    def n_cells(self):
        return self.d * self.m ** (self.d - 1)

    @property
    def cell_measure(self):
        return 1.0 / self.m ** (self.d - 1)

    def locate(self, angles):
        """Cell index of each angle on the positive max-norm unit sphere.

        The face is the first coordinate attaining the maximum (ties go to
        the smallest index); the remaining d-1 coordinates are floored into
        m bins, with the boundary value 1 mapped to the last bin.
        """
        angles = check_matrix(angles, "angles")
        if angles.shape[1] != self.d:
            raise ValueError(f"angles have dimension {angles.shape[1]}, grid has d={self.d}")
        if np.any(angles < 0.0):
            raise ValueError("grid cells are defined for non-negative angles only")
        face = np.argmax(angles, axis=1)
        sub = np.minimum((angles * self.m).astype(np.int64), self.m - 1)
        # drop the face coordinate, flatten the remaining multi-index
        n = angles.shape[0]
        keep = np.ones((n, self.d), dtype=bool)
        keep[np.arange(n), face] = False
        rest = sub[keep].reshape(n, self.d - 1)
        weights = self.m ** np.arange(self.d - 1)
        return face * self.cells_per_face + rest @ weights


@dataclass(frozen=True)
class MvSetModel:
    """A fitted angular minimum-volume set with its empirical cell masses."""

    grid: AngularGrid
    norm_p: float
    alpha: float
    psi: float
    k: int
    standardization: str
    cell_masses: np.ndarray
    selected_cells: np.ndarray
    achieved_mass: float

    def __post_init__(self):
        self.cell_masses.setflags(write=False)
        self.selected_cells.setflags(write=False)

    @property
    def selection_mask(self):
        mask = np.zeros(self.grid.n_cells, dtype=bool)
        mask[self.selected_cells] = True
        return mask

    @property
    def volume(self):
        """Face-Lebesgue measure of the selected set."""
        return self.selected_cells.size * self.grid.cell_measure

    def save(self, path):
        header = {
            "d": self.grid.d,
            "m": self.grid.m,
            "norm_p": float(self.norm_p),
            "alpha": float(self.alpha),
            "psi": float(self.psi),
            "k": int(self.k),
            "standardization": self.standardization,
            "achieved_mass": float(self.achieved_mass),
        }
        rows = [
            [int(c), float(self.cell_masses[c]), int(in_sel)]
            for c, in_sel in enumerate(self.selection_mask)
        ]
        write_model_file(path, "mvset", header, {"cells": (["cell", "mass", "selected"], rows)})

    @classmethod
    def load(cls, path):
        kind, header, tables = read_model_file(path)
        if kind != "mvset":
            raise ValueError(f"file holds a {kind!r} model, not an mvset")
        grid = AngularGrid(int(header["d"]), int(header["m"]))
        masses = np.zeros(grid.n_cells)
        selected = []
        for cell, mass, sel in tables["cells"]:
            masses[int(cell)] = mass
            if int(sel):
                selected.append(int(cell))
        return cls(
            grid=grid,
            norm_p=header["norm_p"],
            alpha=header["alpha"],
            psi=header["psi"],
            k=int(header["k"]),
            standardization=header["standardization"],
            cell_masses=masses,
            selected_cells=np.asarray(selected, dtype=np.int64),
            achieved_mass=float(header["achieved_mass"]),
        )


def default_mass_tolerance(delta, k):
    """Default tolerance psi(delta) = sqrt(log(1/delta) / k).

    Matches the leading order of the deviations of the empirical angular
    masses over the grid class.
    """
    return float(np.sqrt(np.log(1.0 / delta) / k))


def _greedy_select(masses, required):
    """Indices of the heaviest cells whose cumulative mass reaches ``required``.

    With equal cell measures this prefix attains the minimum volume subject
    to the mass constraint. Ties are broken toward smaller cell indices.
    """
    order = np.lexsort((np.arange(masses.size), -masses))
    cum = np.cumsum(masses[order])
    if required <= 0.0:
        return order[:0], 0.0
    n_take = min(int(np.searchsorted(cum, required - 1e-15) + 1), masses.size)
    if cum[n_take - 1] < required - 1e-12:
        raise AssertionError("total mass cannot reach the requested level")
    return np.sort(order[:n_take]), float(cum[n_take - 1])


def cell_masses_of_sample(sample, grid):
    """Normalized empirical angular mass of every grid cell (sums to one)."""
    cells = grid.locate(sample.angles)
    counts = np.bincount(cells, minlength=grid.n_cells)
    return counts / sample.k


def fit_angular_mvset(X, k, alpha, psi, grid, standardization="rank", margins=None):
    """Empirical angular minimum-volume set from the k largest observations.

    Cell masses are the normalized angular distribution of the k extremes
    (max-norm radii); cells are added in decreasing mass order until the
    cumulative mass reaches ``alpha - psi``.
    """
    alpha = check_in_range(alpha, 0.0, 1.0, "alpha", lo_open=True)
    psi = check_in_range(psi, 0.0, np.inf, "psi")
    if alpha - psi <= 0.0:
        raise ValueError(f"alpha - psi must be positive, got {alpha - psi}")
    sample = select_extremes(X, k, p=np.inf, standardization=standardization, margins=margins)
    masses = cell_masses_of_sample(sample, grid)
    selected, achieved = _greedy_select(masses, alpha - psi)
    return MvSetModel(
        grid=grid,
        norm_p=np.inf,
        alpha=alpha,
        psi=psi,
        k=k,
        standardization=standardization,
        cell_masses=masses,
        selected_cells=selected,
        achieved_mass=achieved,
    )


def mvset_mass_check(model, X_holdout, k, margins=None):
    """Re-estimate the selected set's angular mass on held-out data.

    Returns ``(holdout_mass, passed)`` where the check passes when the
    holdout mass is at least ``alpha - 2 psi``. The holdout sample must be
    disjoint from the training data for the guarantee to be meaningful.
    """
    X_holdout = check_matrix(X_holdout, "X_holdout")
    if X_holdout.shape[0] == 0:
        raise ValueError("empty holdout set")
    k = check_positive_int(k, "k")
    if k > X_holdout.shape[0]:
        raise ValueError(f"holdout tail of k={k} exceeds the {X_holdout.shape[0]} holdout rows")
    sample = select_extremes(
        X_holdout, k, p=np.inf, standardization=model.standardization, margins=margins
    )
    masses = cell_masses_of_sample(sample, model.grid)
    holdout_mass = float(masses[model.selected_cells].sum())
    return holdout_mass, holdout_mass >= model.alpha - 2.0 * model.psi


def anomaly_score(model, margins, X, angular_score="mass"):
    """Radial-times-angular anomaly score; lower means more anomalous.

    The radial factor is ``1 / ||v(x)||_inf**2`` with v the standardization
    map given by ``margins`` (a fitted :class:`EmpiricalParetoTransform`, or
    None when the model was fitted without standardization). The angular
    factor is the empirical mass of the grid cell containing the angle
    (``angular_score='mass'``), or the mass not yet covered when the cell
    enters the nested family of minimum-volume sets
    (``angular_score='mv-level'``; cells outside every set score 0).
    """
    X = check_matrix(X, "X")
    if isinstance(margins, EmpiricalParetoTransform):
        V = margins.transform(X)
    elif margins is None:
        V = X
    else:
        raise TypeError("margins must be a fitted EmpiricalParetoTransform or None")
    radii, angles = polar(V, np.inf)
    cells = model.grid.locate(angles)
    if angular_score == "mass":
        s_theta = model.cell_masses[cells]
    elif angular_score == "mv-level":
        order = np.lexsort((np.arange(model.cell_masses.size), -model.cell_masses))
        cum_before = np.concatenate(([0.0], np.cumsum(model.cell_masses[order])[:-1]))
        level = np.empty_like(model.cell_masses)
        level[order] = np.where(model.cell_masses[order] > 0.0, 1.0 - cum_before, 0.0)
        s_theta = level[cells]
    else:
        raise ValueError(f"unknown angular_score {angular_score!r}")
    return s_theta / radii**2


class AngularMinVolumeSet(BaseEstimator):
    """Anomaly detector for extremes based on angular minimum-volume sets.

    ``fit`` standardizes the data, keeps the ``k`` observations of largest
    max-norm and selects the smallest union of angular grid cells carrying
    empirical mass ``alpha - psi``. ``score_samples`` returns the
    radial-times-angular score (higher = more normal, matching the usual
    estimator convention); ``predict`` flags points whose angle falls
    outside the fitted set as anomalous (-1) among extremes.

    Parameters
    ----------
    k : int
        Number of extreme observations used to estimate angular masses.
    alpha : float
        Target angular mass of the normal region.
    psi : float or None
        Mass tolerance; None uses ``sqrt(log(1/delta)/k)``.
    delta : float
        Confidence level used when psi is None.
    m : int
        Grid resolution per axis.
    standardization : {'rank', 'known-pareto', 'none'}
    margins : sequence of callables, optional
        Marginal CDFs for 'known-pareto'.
    angular_score : {'mass', 'mv-level'}
    """

    def __init__(
        self,
        k=100,
        alpha=0.9,
        psi=None,
        delta=0.1,
        m=4,
        standardization="rank",
        margins=None,
        angular_score="mass",
    ):
        self.k = k
        self.alpha = alpha
        self.psi = psi
        self.delta = delta
        self.m = m
        self.standardization = standardization
        self.margins = margins
        self.angular_score = angular_score

    def fit(self, X, y=None):
        X = check_matrix(X, "X")
        psi = self.psi if self.psi is not None else default_mass_tolerance(self.delta, self.k)
        grid = AngularGrid(X.shape[1], self.m)
        if self.standardization == "rank":
            self.margins_ = EmpiricalParetoTransform().fit(X)
        else:
            self.margins_ = self.margins
        self.model_ = fit_angular_mvset(
            X, self.k, self.alpha, psi, grid,
            standardization=self.standardization, margins=self.margins_,
        )
        return self

    def score_samples(self, X):
        margins = self.margins_ if self.standardization == "rank" else None
        return anomaly_score(self.model_, margins, X, angular_score=self.angular_score)

    def predict(self, X):
        """+1 when the (standardized) angle lies in the fitted set, else -1."""
        X = check_matrix(X, "X")
        if self.standardization == "rank":
            V = self.margins_.transform(X)
        elif self.standardization == "known-pareto":
            from .transforms import pareto_standardize

            V = pareto_standardize(self.margins_, X)
        else:
            V = X
        _, angles = polar(V, np.inf)
        cells = self.model_.grid.locate(angles)
        return np.where(self.model_.selection_mask[cells], 1, -1)
