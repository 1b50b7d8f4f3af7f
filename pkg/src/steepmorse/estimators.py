"""Estimator-style wrappers: configure with parameters, ``fit`` on a complex."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ordering import ReorderSchedule
from .reduction import reduce_fully
from .torsion import DEFAULT_SNF_LIMIT, homology
from .validation import check_complex, check_ring


def _schedule(reorder, keys):
    if isinstance(reorder, ReorderSchedule):
        return reorder
    return ReorderSchedule.parse(reorder or "none", keys)


class MorseReducer(TransformerMixin, BaseEstimator):
    """Iterated steepness-matching reduction.

    After ``fit``: ``reduced_``, ``f_`` (and ``g_`` when ``want_g``),
    ``n_passes_`` and ``matched_counts_``. ``transform`` returns the reduced
    complex of its argument.
    """

    def __init__(self, ring=None, reorder="none", keys=None, max_passes=None,
                 want_f=True, want_g=False, prune=False):
        self.ring = ring
        self.reorder = reorder
        self.keys = keys
        self.max_passes = max_passes
        self.want_f = want_f
        self.want_g = want_g
        self.prune = prune

    def _run(self, X):
        C = check_complex(X, self.ring)
        return reduce_fully(
            C,
            reorder=_schedule(self.reorder, self.keys),
            want_f=self.want_f,
            want_g=self.want_g,
            max_passes=self.max_passes,
            prune=self.prune,
        )

    def fit(self, X, y=None):
        res = self._run(X)
        self.result_ = res
        self.reduced_ = res.reduced
        self.f_ = res.f
        self.g_ = res.g
        self.n_passes_ = res.passes
        self.matched_counts_ = res.matched_counts
        return self

    def transform(self, X):
        check_is_fitted(self, "result_")
        return self._run(X).reduced

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X).reduced_


class HomologyEstimator(BaseEstimator):
    """Homology over the chosen ring (Z, Q, GF(p) or Z localized at p).

    Fitted attributes: ``result_``, ``betti_``, ``torsion_``.
    """

    def __init__(self, ring="Z", generators=False, reorder="none", keys=None,
                 snf_limit=DEFAULT_SNF_LIMIT):
        self.ring = ring
        self.generators = generators
        self.reorder = reorder
        self.keys = keys
        self.snf_limit = snf_limit

    def _run(self, X):
        C = check_complex(X, check_ring(self.ring))
        kw = {"snf_limit": self.snf_limit} if C.ring.kind == "Z" else {}
        return homology(C, self.generators, _schedule(self.reorder, self.keys), **kw)

    def fit(self, X, y=None):
        self.result_ = self._run(X)
        self.betti_ = self.result_.betti()
        self.torsion_ = self.result_.torsion()
        return self

    def transform(self, X=None):
        check_is_fitted(self, "result_")
        return self.result_ if X is None else self._run(X)
