"""scikit-learn style front ends for the constructions.

Each estimator takes its hyperparameters in ``__init__`` (so ``get_params``
and ``set_params`` come from ``BaseEstimator``), does the exact computation in
``fit`` and exposes results as attributes with a trailing underscore.
``transform`` applies the fitted structure to new inputs.
"""
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ainfty import construct_local_coalgebra, verify_square_zero
from .coinner import construct_chi, build_duality, verify_duality
from .hochschild import transported_structure, bv_check, connes_delta, normalize
from .lie import construct_local_lie, verify_lie_square_zero, bernoulli_report
from .minimal_model import Cobimodule, decompose_cobimodule, validate_decomposition
from .simplicial import default_fundamental_class
from .tensor import apply_derivation
from .validation import (InputError, check_complex, check_truncation, check_coproduct,
                         check_chain, parse_window)


class LocalCoalgebra(TransformerMixin, BaseEstimator):
    """Local A-infinity coalgebra on the chains of a complex.

    ``transform`` applies the coalgebra differential to chains given as
    ``{cell id: coeff}`` and returns ``{word of cell ids: coeff}``.
    """

    def __init__(self, truncation=6, coproduct="strict-aw"):
        self.truncation = truncation
        self.coproduct = coproduct

    def fit(self, X, y=None):
        check_truncation(self.truncation)
        check_coproduct(self.coproduct)
        self.complex_ = check_complex(X)
        self.family_ = construct_local_coalgebra(self.complex_, self.truncation, self.coproduct)
        self.trace_ = [t.as_dict() for t in self.family_.trace]
        self.square_zero_ = verify_square_zero(self.family_).ok
        return self

    def transform(self, X):
        check_is_fitted(self, "family_")
        K = self.complex_
        ids = [c.id for c in K.cells]
        out = []
        for chain in X:
            el = {(c,): v for c, v in check_chain(K, chain).items()}
            img = apply_derivation(self.family_, el, max_length=self.truncation)
            out.append({tuple(ids[x] for x in w): v for w, v in sorted(img.items())})
        return out


class DualityStructure(TransformerMixin, BaseEstimator):
    """Symmetric closed co-inner product built from a fundamental cycle.

    ``mu`` defaults to the fixture's fundamental class.  ``transform`` maps
    chains through the fitted chain map into co-inner elements.
    """

    def __init__(self, truncation=6, coproduct="strict-aw", max_tensor_degree=None,
                 mu=None, mode="canonical"):
        self.truncation = truncation
        self.coproduct = coproduct
        self.max_tensor_degree = max_tensor_degree
        self.mu = mu
        self.mode = mode

    def fit(self, X, y=None):
        check_truncation(self.truncation)
        check_coproduct(self.coproduct)
        if self.mode not in ("canonical", "sparse"):
            raise InputError("mode must be 'canonical' or 'sparse'")
        K = self.complex_ = check_complex(X)
        mu = default_fundamental_class(K) if self.mu is None else check_chain(K, self.mu)
        self.family_ = construct_local_coalgebra(K, self.truncation, self.coproduct)
        self.chi_ = construct_chi(K, self.family_, self.max_tensor_degree, mode=self.mode)
        self.duality_ = build_duality(self.chi_, mu)
        self.report_ = verify_duality(self.duality_, self.family_)
        return self

    def transform(self, X):
        check_is_fitted(self, "chi_")
        return [self.chi_(check_chain(self.complex_, chain)) for chain in X]


class CobimoduleDecomposition(TransformerMixin, BaseEstimator):
    """Split a cobimodule into a minimal and a linear contractible part.

    ``fit`` takes a ``Cobimodule``; ``transform`` applies the splitting
    isomorphism to elements of its bar complex.
    """

    def __init__(self, truncation=None):
        self.truncation = truncation

    def fit(self, X, y=None):
        if not isinstance(X, Cobimodule):
            raise InputError("expected a Cobimodule, got %s" % type(X).__name__)
        self.decomposition_ = decompose_cobimodule(X, self.truncation)
        self.checks_ = validate_decomposition(self.decomposition_)
        self.minimal_dim_ = len(self.decomposition_.p_index)
        return self

    def transform(self, X):
        check_is_fitted(self, "decomposition_")
        return [self.decomposition_.phi(el) for el in X]


class LocalLieModel(TransformerMixin, BaseEstimator):
    """Local Lie model on the free Lie algebra of cells.

    ``transform`` applies the fitted derivation to Lie elements given as
    ``{word of cell indices: coeff}``.
    """

    def __init__(self, truncation=6):
        self.truncation = truncation

    def fit(self, X, y=None):
        check_truncation(self.truncation)
        self.complex_ = check_complex(X)
        self.structure_ = construct_local_lie(self.complex_, self.truncation)
        self.square_zero_ = not verify_lie_square_zero(self.structure_)
        return self

    def bernoulli(self, edge="sigma", start="a", end="b"):
        check_is_fitted(self, "structure_")
        return bernoulli_report(self.structure_, edge, start, end)

    def transform(self, X):
        check_is_fitted(self, "structure_")
        L = self.structure_.algebra
        return [L.apply_derivation(self.structure_.components, x) for x in X]


class HochschildBV(TransformerMixin, BaseEstimator):
    """BV identities for the transported product on truncated cochains.

    ``transform`` applies the Connes operator to normalized cochains valued
    in ``C`` (``{word: coeff}``, value letter first).
    """

    def __init__(self, arity_max=4, window=(-2, 2), samples=20, seed=0,
                 coproduct="strict-aw", mu=None):
        self.arity_max = arity_max
        self.window = window
        self.samples = samples
        self.seed = seed
        self.coproduct = coproduct
        self.mu = mu

    def fit(self, X, y=None):
        check_truncation(self.arity_max, 2, "arity_max")
        check_coproduct(self.coproduct)
        window = parse_window(self.window)
        K = self.complex_ = check_complex(X)
        mu = default_fundamental_class(K) if self.mu is None else check_chain(K, self.mu)
        D = construct_local_coalgebra(K, self.arity_max + 2, self.coproduct)
        F = build_duality(construct_chi(K, D, self.arity_max), mu)
        self.structure_, _ = transported_structure(K, D, F, self.arity_max)
        self.counit_defects_ = self.structure_.alg.counit_defects()
        self.report_ = bv_check(self.structure_, window, self.arity_max - 1,
                                self.samples, self.seed)
        return self

    def transform(self, X):
        check_is_fitted(self, "structure_")
        alg = self.structure_.alg
        return [connes_delta(alg, normalize(alg, x)) for x in X]
