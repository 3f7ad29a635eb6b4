"""scikit-learn style wrappers.

Fitting fixes the universe (and, for Scott abstraction, the equivalence
matrix); transforming maps presentations or sets to abstraction objects.
Inputs and outputs are plain Python lists of symbolic objects, not arrays.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import abstraction, model
from .errors import ElementNotInUniverse, UserError


def _universe(value):
    return value if isinstance(value, model.Universe) else model.parse_universe(value)


def _presentation(item):
    # "formula" or ("formula", {"p": hf})
    if isinstance(item, tuple):
        return item[0], item[1]
    return item, None


class AbstractionTransformer(BaseEstimator, TransformerMixin):
    """Map class presentations to extension objects or number objects.

    Parameters
    ----------
    universe : str or Universe
        Descriptor such as ``"v3"`` or ``"ack:16"``.
    kind : {"extension", "number"}
    budget : int, optional
        Enumeration indices to scan before giving up.
    object_var : str
    """

    def __init__(self, universe="v3", kind="extension", budget=None, object_var="x"):
        self.universe = universe
        self.kind = kind
        self.budget = budget
        self.object_var = object_var

    def fit(self, X=None, y=None):
        if self.kind not in ("extension", "number"):
            raise UserError(f"kind must be 'extension' or 'number', not {self.kind!r}")
        self.universe_ = _universe(self.universe)
        return self

    def transform(self, X):
        if not hasattr(self, "universe_"):
            raise NotFittedError("call fit before transform")
        op = abstraction.extension_of if self.kind == "extension" else abstraction.class_number
        out = []
        for item in X:
            f, env = _presentation(item)
            out.append(op(self.universe_, f, env, object_var=self.object_var, budget=self.budget))
        return out


class ScottAbstractor(BaseEstimator, TransformerMixin):
    """Scott's-trick abstraction for a set-level equivalence.

    ``fit`` validates the relation over the universe and tabulates alpha;
    ``transform`` looks elements up.
    """

    def __init__(self, universe="v3", relation="a = b", left="a", right="b"):
        self.universe = universe
        self.relation = relation
        self.left = left
        self.right = right

    def fit(self, X=None, y=None):
        self.universe_ = _universe(self.universe)
        self.table_ = abstraction.scott_abstractions(self.universe_, self.relation,
                                                     left=self.left, right=self.right)
        self.n_classes_ = len(set(self.table_.values()))
        return self

    def transform(self, X):
        if not hasattr(self, "table_"):
            raise NotFittedError("call fit before transform")
        out = []
        for x in X:
            if x not in self.table_:
                raise ElementNotInUniverse(f"{x} is not in {self.universe_.label}")
            out.append(self.table_[x])
        return out
