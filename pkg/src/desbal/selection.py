"""Competence regions and the dynamic classifier/ensemble selection schemes.

Selectors share a `SelectionContext` (pool behaviour precomputed over the
DSEL) and a per-query `Query` (region of competence plus the pool's outputs
for the query point). Determinism rules used throughout: competence ties
break to the lowest classifier index, vote ties to the lowest class id,
distance ties to the lowest DSEL index.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.spatial.distance import cdist

from .pool import DselSet, Pool
from .rng import make_rng

logger = logging.getLogger(__name__)

SELECTOR_NAMES = (
    "STATIC", "RANK", "LCA", "MCB", "KNE", "KNU", "DES-KNN", "DESP",
    "DES-RRC", "META-DES", "F-LCA", "F-MCB", "F-KNE", "F-KNU", "F-DES-KNN",
)

FIRE_BASES = {
    "F-LCA": "LCA", "F-MCB": "MCB", "F-KNE": "KNE",
    "F-KNU": "KNU", "F-DES-KNN": "DES-KNN",
}

_CANONICAL = {n.lower(): n for n in SELECTOR_NAMES}


def normalize_selector(name: str) -> str:
    try:
        return _CANONICAL[name.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown selector {name!r}; choose from {SELECTOR_NAMES}"
        ) from None


# ---------------------------------------------------------------------------
# Regions, queries, shared context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionOfCompetence:
    """Indices and distances of the nearest DSEL samples, closest first."""

    indices: np.ndarray
    distances: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)


def region_of_competence(dsel, x_q, k: int = 7) -> RegionOfCompetence:
    """The k nearest DSEL rows by Euclidean distance (ties to lower index)."""
    features = dsel.features if isinstance(dsel, DselSet) else np.asarray(dsel, float)
    x_q = np.asarray(x_q, dtype=float)
    dists = cdist(x_q[None, :], features)[0]
    if features.shape[0] < k:
        logger.warning(
            "DSEL holds %d < k=%d samples; using the whole set", features.shape[0], k
        )
        k = features.shape[0]
    order = np.argsort(dists, kind="stable")[:k]
    return RegionOfCompetence(indices=order, distances=dists[order])


@dataclass(frozen=True)
class Query:
    """One test point: its region plus every classifier's output for it."""

    x: np.ndarray
    roc: RegionOfCompetence
    predictions: np.ndarray  # (M,) class ids
    supports: np.ndarray  # (M, L)

    def restrict(self, classifier_indices) -> "Query":
        return replace(
            self,
            predictions=self.predictions[classifier_indices],
            supports=self.supports[classifier_indices],
        )


class SelectionContext:
    """Pool behaviour over a DSEL set, precomputed once and queried per point."""

    def __init__(self, pool: Pool, dsel: DselSet):
        self.pool = pool
        self.dsel = dsel
        self.n_classes = pool.n_classes
        self.predictions = pool.predict_all(dsel.features)  # (M, n)
        self.hits = self.predictions == dsel.labels[None, :]
        self.meta = None
        self._rrc_cache = {}

    @property
    def pool_size(self) -> int:
        return self.predictions.shape[0]

    @cached_property
    def supports(self) -> np.ndarray:
        return self.pool.support_all(self.dsel.features)  # (M, n, L)

    def make_query(self, x_q, k: int = 7) -> Query:
        x_q = np.asarray(x_q, dtype=float)
        return Query(
            x=x_q,
            roc=region_of_competence(self.dsel, x_q, k),
            predictions=self.pool.predict_all(x_q[None, :])[:, 0],
            supports=self.pool.support_all(x_q[None, :])[:, 0, :],
        )

    def make_queries(self, X, k: int = 7) -> list:
        """Queries for a whole test matrix with batched pool evaluation."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        k_eff = min(k, self.dsel.n_samples)
        if k_eff < k:
            logger.warning(
                "DSEL holds %d < k=%d samples; using the whole set",
                self.dsel.n_samples, k,
            )
        dists = cdist(X, self.dsel.features)
        order = np.argsort(dists, axis=1, kind="stable")[:, :k_eff]
        predictions = self.pool.predict_all(X)
        supports = self.pool.support_all(X)
        return [
            Query(
                x=X[q],
                roc=RegionOfCompetence(
                    indices=order[q], distances=dists[q, order[q]]
                ),
                predictions=predictions[:, q],
                supports=supports[:, q, :],
            )
            for q in range(X.shape[0])
        ]

    def rrc_csrc(self, draws: int = 1000, seed: int = 0) -> np.ndarray:
        """Centered correct-classification probability of the randomized
        reference model for every (classifier, DSEL sample) pair."""
        key = (draws, seed)
        if key not in self._rrc_cache:
            self._rrc_cache[key] = _rrc_csrc_matrix(
                self.supports, self.dsel.labels, self.n_classes, draws, seed
            )
        return self._rrc_cache[key]


class _RestrictedContext:
    """View of a context limited to a surviving subset of the pool."""

    def __init__(self, parent: SelectionContext, survivors: np.ndarray):
        self.dsel = parent.dsel
        self.n_classes = parent.n_classes
        self.predictions = parent.predictions[survivors]
        self.hits = parent.hits[survivors]

    @property
    def pool_size(self) -> int:
        return self.predictions.shape[0]


# ---------------------------------------------------------------------------
# Results and vote rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelectionResult:
    """Chosen sub-ensemble, optional vote weights, and the aggregated label."""

    selected: np.ndarray
    predicted_class: int
    vote_weights: np.ndarray | None = None

    def aggregate_score(self, query: Query) -> np.ndarray:
        """Mean class support of the sub-ensemble (vote-weighted when given)."""
        supports = query.supports[self.selected]
        if self.vote_weights is None:
            return supports.mean(axis=0)
        w = self.vote_weights.astype(float)
        return (supports * w[:, None]).sum(axis=0) / w.sum()


def majority_vote(predictions, n_classes: int) -> int:
    """Plurality class id; ties break to the lowest id."""
    return int(np.argmax(np.bincount(predictions, minlength=n_classes)))


def _whole_pool(ctx, query) -> SelectionResult:
    return SelectionResult(
        selected=np.arange(ctx.pool_size),
        predicted_class=majority_vote(query.predictions, ctx.n_classes),
    )


def _singleton(index: int, query: Query) -> SelectionResult:
    return SelectionResult(
        selected=np.array([index]),
        predicted_class=int(query.predictions[index]),
    )


# ---------------------------------------------------------------------------
# Output profiles
# ---------------------------------------------------------------------------


def profile_similarity(u_i, u_j) -> float:
    """Fraction of positions where two output profiles agree."""
    u_i = np.asarray(u_i)
    u_j = np.asarray(u_j)
    if u_i.shape != u_j.shape:
        raise ValueError("output profiles must have equal length")
    return float(np.mean(u_i == u_j))


# ---------------------------------------------------------------------------
# DCS schemes
# ---------------------------------------------------------------------------


def _consecutive_hits(ctx, roc) -> np.ndarray:
    """Length of each classifier's initial run of correct neighbours."""
    hits = ctx.hits[:, roc.indices]
    padded = np.concatenate([hits, np.zeros((hits.shape[0], 1), dtype=bool)], axis=1)
    return np.argmax(~padded, axis=1)


def select_rank(ctx, query: Query) -> SelectionResult:
    """Modified classifier rank: longest streak of correct nearest neighbours."""
    runs = _consecutive_hits(ctx, query.roc)
    return _singleton(int(np.argmax(runs)), query)


def select_lca(ctx, query: Query) -> SelectionResult:
    """Local class accuracy over the neighbours sharing the predicted label."""
    labels_roc = ctx.dsel.labels[query.roc.indices]
    hits_roc = ctx.hits[:, query.roc.indices]
    competence = np.zeros(ctx.pool_size)
    for i in range(ctx.pool_size):
        same = labels_roc == query.predictions[i]
        if same.any():
            competence[i] = hits_roc[i, same].mean()
    return _singleton(int(np.argmax(competence)), query)


@dataclass(frozen=True)
class McbConfig:
    """Similarity and competence-difference thresholds of MCB."""

    t_s: float = 0.7
    t_c: float = 0.1


def select_mcb(ctx, query: Query, config: McbConfig = McbConfig()) -> SelectionResult:
    """Multiple classifier behaviour.

    Neighbours whose output profiles resemble the query's (similarity above
    t_s) form a refined region; accuracy over it, divided by the original
    region size, is the competence. A single classifier wins only when it
    beats the runner-up by more than t_c, otherwise the whole pool votes.
    """
    profiles = ctx.predictions[:, query.roc.indices]  # (M, K) columns are u_j
    sims = (profiles == query.predictions[:, None]).mean(axis=0)
    kept = sims > config.t_s
    hits_roc = ctx.hits[:, query.roc.indices]
    competence = hits_roc[:, kept].sum(axis=1) / len(query.roc)
    best = int(np.argmax(competence))
    others = np.delete(competence, best)
    if others.size == 0 or competence[best] - others.max() > config.t_c:
        return _singleton(best, query)
    return _whole_pool(ctx, query)


# ---------------------------------------------------------------------------
# DES schemes
# ---------------------------------------------------------------------------


def select_kne(ctx, query: Query) -> SelectionResult:
    """KNORA-Eliminate: local oracles over the largest feasible region.

    Equivalent to shrinking the region one neighbour at a time: the longest
    streak of correct closest neighbours any classifier achieves is the final
    region size, and every classifier reaching it is selected. With no streak
    at all the whole pool votes.
    """
    runs = _consecutive_hits(ctx, query.roc)
    best = runs.max() if runs.size else 0
    if best == 0:
        return _whole_pool(ctx, query)
    selected = np.flatnonzero(runs == best)
    return SelectionResult(
        selected=selected,
        predicted_class=majority_vote(query.predictions[selected], ctx.n_classes),
    )


def select_knu(ctx, query: Query) -> SelectionResult:
    """KNORA-Union: one vote per correctly recognized neighbour."""
    votes = ctx.hits[:, query.roc.indices].sum(axis=1)
    selected = np.flatnonzero(votes > 0)
    if selected.size == 0:
        return _whole_pool(ctx, query)
    weights = votes[selected]
    tally = np.zeros(ctx.n_classes)
    np.add.at(tally, query.predictions[selected], weights)
    return SelectionResult(
        selected=selected,
        predicted_class=int(np.argmax(tally)),
        vote_weights=weights,
    )


def double_fault(hits_i, hits_j) -> float:
    """Fraction of region samples misclassified by both classifiers."""
    hits_i = np.asarray(hits_i, dtype=bool)
    hits_j = np.asarray(hits_j, dtype=bool)
    return float(np.mean(~hits_i & ~hits_j))


@dataclass(frozen=True)
class DesKnnConfig:
    """Accuracy pre-selection size N and final diversity size J.

    Unset values resolve against the effective pool: N = ceil(0.5 * M),
    J = ceil(0.3 * M), both clamped to valid ranges.
    """

    n: int | None = None
    j: int | None = None

    def resolve(self, pool_size: int):
        n = int(np.ceil(0.5 * pool_size)) if self.n is None else self.n
        j = int(np.ceil(0.3 * pool_size)) if self.j is None else self.j
        n = max(1, min(n, pool_size))
        j = max(1, min(j, n))
        return n, j


def select_desknn(ctx, query: Query, config: DesKnnConfig = DesKnnConfig()) -> SelectionResult:
    """Accuracy pre-selection followed by double-fault diversity ranking.

    Diversity is ranked on integer both-wrong counts (the shared 1/K factor
    cannot change the order) so exact ties stay exact.
    """
    n, j = config.resolve(ctx.pool_size)
    hits_roc = ctx.hits[:, query.roc.indices]
    # hit counts order identically to accuracies and tie exactly
    by_accuracy = np.lexsort((np.arange(ctx.pool_size), -hits_roc.sum(axis=1)))
    candidates = by_accuracy[:n]
    wrong = (~hits_roc[candidates]).astype(int)
    pair_faults = wrong @ wrong.T
    div_sum = pair_faults.sum(axis=1) - np.diag(pair_faults)
    by_diversity = np.lexsort((candidates, div_sum))  # ascending = most diverse
    selected = np.sort(candidates[by_diversity[:j]])
    return SelectionResult(
        selected=selected,
        predicted_class=majority_vote(query.predictions[selected], ctx.n_classes),
    )


def select_desp(ctx, query: Query) -> SelectionResult:
    """Keep classifiers whose local accuracy beats a random guesser (1/L)."""
    accuracy = ctx.hits[:, query.roc.indices].mean(axis=1)
    competence = accuracy - 1.0 / ctx.n_classes
    selected = np.flatnonzero(competence > 0)
    if selected.size == 0:
        return _whole_pool(ctx, query)
    return SelectionResult(
        selected=selected,
        predicted_class=majority_vote(query.predictions[selected], ctx.n_classes),
    )


# ---------------------------------------------------------------------------
# DES-RRC
# ---------------------------------------------------------------------------


def rrc_correct_probability(support, true_class: int, draws: int = 1000, rng=None) -> float:
    """Monte-Carlo probability that a randomized reference model centred on
    `support` ranks the true class first.

    The randomized model is a Dirichlet draw with concentration L * support
    (plus a small floor so zero supports stay admissible); the argmax of the
    gamma variates decides the winner, so no normalization is needed.
    """
    support = np.asarray(support, dtype=float)
    L = support.shape[0]
    alpha = L * support + 1e-3
    if rng is None:
        rng = np.random.default_rng(0)
    gammas = rng.gamma(shape=alpha, size=(draws, L))
    return float(np.mean(np.argmax(gammas, axis=1) == true_class))


def _rrc_csrc_matrix(supports, labels, n_classes, draws, seed):
    """Centred RRC win probabilities per (classifier, DSEL sample).

    Distinct support vectors are few (one per leaf), so Monte-Carlo runs once
    per unique support with its own derived generator; seeding by support
    content keeps results independent of sample order.
    """
    M, n, L = supports.shape
    flat = np.round(supports.reshape(-1, L), 12)
    unique, inverse = np.unique(flat, axis=0, return_inverse=True)
    win = np.empty((unique.shape[0], L))
    for u, support in enumerate(unique):
        rng = make_rng(seed, "rrc", support.tobytes().hex())
        gammas = rng.gamma(shape=L * support + 1e-3, size=(draws, L))
        win[u] = np.bincount(np.argmax(gammas, axis=1), minlength=L) / draws
    prob = win[inverse].reshape(M, n, L)
    correct = np.take_along_axis(
        prob, np.broadcast_to(labels[None, :, None], (M, n, 1)), axis=2
    )[..., 0]
    return correct - 1.0 / n_classes


def select_desrrc(ctx, query: Query, draws: int = 1000, seed: int = 0,
                  region_factor: int = 30) -> SelectionResult:
    """Gaussian-weighted sum of centred RRC probabilities over the DSEL.

    The sum runs over the `region_factor * K` nearest DSEL samples; farther
    weights exp(-d^2) are negligible on standardized features. Classifiers
    with positive competence are selected, otherwise the whole pool votes.
    """
    csrc = ctx.rrc_csrc(draws=draws, seed=seed)
    dists = cdist(query.x[None, :], ctx.dsel.features)[0]
    limit = region_factor * max(len(query.roc), 1)
    if limit < dists.shape[0]:
        nearest = np.argsort(dists, kind="stable")[:limit]
    else:
        nearest = np.arange(dists.shape[0])
    weights = np.exp(-dists[nearest] ** 2)
    competence = csrc[:, nearest] @ weights
    selected = np.flatnonzero(competence > 0)
    if selected.size == 0:
        return _whole_pool(ctx, query)
    return SelectionResult(
        selected=selected,
        predicted_class=majority_vote(query.predictions[selected], ctx.n_classes),
    )


# ---------------------------------------------------------------------------
# META-DES
# ---------------------------------------------------------------------------


def _meta_features_all(ctx, query: Query, kp: int, exclude: int | None = None) -> np.ndarray:
    """Meta-feature matrix (one row per classifier) for a query point.

    Layout: hit/miss on each region neighbour, support assigned to each
    neighbour's true class, local accuracy, hit/miss on the kp DSEL samples
    with the most similar output profiles, and the maximum support for the
    query itself.
    """
    idx = query.roc.indices
    hits_roc = ctx.hits[:, idx].astype(float)
    true_support = np.take_along_axis(
        ctx.supports[:, idx, :],
        np.broadcast_to(
            ctx.dsel.labels[idx][None, :, None], (ctx.pool_size, idx.size, 1)
        ),
        axis=2,
    )[..., 0]
    accuracy = hits_roc.mean(axis=1, keepdims=True)
    sims = (ctx.predictions == query.predictions[:, None]).mean(axis=0)
    if exclude is not None:
        sims = sims.copy()
        sims[exclude] = -1.0
    profile_idx = np.argsort(-sims, kind="stable")[:kp]
    hits_profiles = ctx.hits[:, profile_idx].astype(float)
    max_support = query.supports.max(axis=1, keepdims=True)
    return np.hstack([hits_roc, true_support, accuracy, hits_profiles, max_support])


def extract_meta_features(ctx, classifier_index: int, query: Query, kp: int = 5) -> np.ndarray:
    """Meta-feature vector of one classifier for one query point."""
    return _meta_features_all(ctx, query, kp)[classifier_index]


class MetaClassifier:
    """Two-class Gaussian naive Bayes over meta-features.

    Predicts the probability that a base classifier will label a query
    correctly. Degenerate single-class training collapses to a constant.
    """

    def __init__(self, priors, means, variances, constant: float | None = None):
        self.priors = priors
        self.means = means
        self.variances = variances
        self.constant = constant

    @classmethod
    def fit(cls, features, labels) -> "MetaClassifier":
        features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=int)
        classes = np.unique(labels)
        if classes.size < 2:
            logger.warning(
                "meta-training collapsed to a single class (%s); constant output",
                classes,
            )
            return cls(None, None, None, constant=float(classes[0]))
        smoothing = 1e-9 * max(features.var(axis=0).max(), 1.0)
        priors = np.empty(2)
        means = np.empty((2, features.shape[1]))
        variances = np.empty((2, features.shape[1]))
        for c in (0, 1):
            rows = features[labels == c]
            priors[c] = rows.shape[0] / features.shape[0]
            means[c] = rows.mean(axis=0)
            variances[c] = rows.var(axis=0) + smoothing
        return cls(priors, means, variances)

    def posterior_competent(self, features) -> np.ndarray:
        """P(correct | meta-features) per row."""
        features = np.atleast_2d(np.asarray(features, dtype=float))
        if self.constant is not None:
            return np.full(features.shape[0], self.constant)
        log_like = np.empty((features.shape[0], 2))
        for c in (0, 1):
            log_like[:, c] = np.log(self.priors[c]) - 0.5 * np.sum(
                np.log(2 * np.pi * self.variances[c])
                + (features - self.means[c]) ** 2 / self.variances[c],
                axis=1,
            )
        shifted = log_like - log_like.max(axis=1, keepdims=True)
        probs = np.exp(shifted)
        return probs[:, 1] / probs.sum(axis=1)


def train_meta_classifier(ctx: SelectionContext, train, k: int = 7, kp: int = 5,
                          seed: int = 0) -> MetaClassifier:
    """Fit the competence meta-model on every (training sample, classifier) pair.

    Training samples are located inside the DSEL by prefix alignment (the
    standard `build_dsel` layout) so each sample's own row is excluded from
    its region and profile neighbours.
    """
    n_train = train.features.shape[0]
    aligned = ctx.dsel.n_samples >= n_train and np.array_equal(
        ctx.dsel.features[:n_train], train.features
    )
    if not aligned:
        logger.warning("training set is not a prefix of DSEL; no self-exclusion")
    dists = cdist(train.features, ctx.dsel.features)
    rows, labels = [], []
    for t in range(n_train):
        exclude = t if aligned else None
        d = dists[t]
        if exclude is not None:
            d = d.copy()
            d[exclude] = np.inf
        k_eff = min(k, ctx.dsel.n_samples - (1 if exclude is not None else 0))
        order = np.argsort(d, kind="stable")[:k_eff]
        roc = RegionOfCompetence(indices=order, distances=d[order])
        query = Query(
            x=train.features[t],
            roc=roc,
            predictions=ctx.predictions[:, t] if aligned
            else ctx.pool.predict_all(train.features[t][None, :])[:, 0],
            supports=ctx.supports[:, t, :] if aligned
            else ctx.pool.support_all(train.features[t][None, :])[:, 0, :],
        )
        rows.append(_meta_features_all(ctx, query, kp, exclude=exclude))
        labels.append(
            ctx.hits[:, t] if aligned
            else ctx.pool.predict_all(train.features[t][None, :])[:, 0] == train.labels[t]
        )
    meta = MetaClassifier.fit(np.vstack(rows), np.concatenate(labels).astype(int))
    return meta


def select_metades(ctx, query: Query, threshold: float = 0.5, kp: int = 5) -> SelectionResult:
    """Select classifiers the meta-model deems competent for this query."""
    if ctx.meta is None:
        raise RuntimeError(
            "META-DES needs a trained meta-classifier; call train_meta_classifier "
            "and assign it to ctx.meta"
        )
    competence = ctx.meta.posterior_competent(_meta_features_all(ctx, query, kp))
    selected = np.flatnonzero(competence > threshold)
    if selected.size == 0:
        return _whole_pool(ctx, query)
    return SelectionResult(
        selected=selected,
        predicted_class=majority_vote(query.predictions[selected], ctx.n_classes),
    )


# ---------------------------------------------------------------------------
# FIRE wrapper and static baseline
# ---------------------------------------------------------------------------


def dfp_prune(ctx, roc: RegionOfCompetence) -> np.ndarray:
    """Dynamic frienemy pruning: keep classifiers that recognize the border.

    A classifier survives when its correctly labelled region samples span at
    least two classes (equivalently, it labels both members of some frienemy
    pair correctly). Single-class regions and empty survivor sets keep the
    whole pool.
    """
    everyone = np.arange(ctx.pool_size)
    labels_roc = ctx.dsel.labels[roc.indices]
    if np.unique(labels_roc).size < 2:
        return everyone
    hits_roc = ctx.hits[:, roc.indices]
    classes_hit = [
        np.unique(labels_roc[hits_roc[i]]).size for i in range(ctx.pool_size)
    ]
    survivors = np.flatnonzero(np.asarray(classes_hit) >= 2)
    return survivors if survivors.size else everyone


_BASE_SELECTORS = {}  # name -> callable(ctx, query, cfg); filled below


def select_fire(base: str, ctx: SelectionContext, query: Query, cfg=None) -> SelectionResult:
    """Run a base scheme on the DFP-pruned pool; indices map back to the pool."""
    base = normalize_selector(base)
    if base not in FIRE_BASES.values():
        raise ValueError(f"{base} cannot be wrapped by FIRE")
    survivors = dfp_prune(ctx, query.roc)
    cfg = cfg or SelectorConfig()
    if survivors.size == ctx.pool_size:
        return _BASE_SELECTORS[base](ctx, query, cfg)
    restricted = _RestrictedContext(ctx, survivors)
    local = _BASE_SELECTORS[base](restricted, query.restrict(survivors), cfg)
    return replace(local, selected=survivors[local.selected])


def static_majority_vote(pool: Pool, x_q) -> int:
    """Plurality vote of the whole pool; ties break to the lowest class id."""
    predictions = pool.predict_all(np.asarray(x_q, dtype=float)[None, :])[:, 0]
    return majority_vote(predictions, pool.n_classes)


def select_static(ctx, query: Query) -> SelectionResult:
    return _whole_pool(ctx, query)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelectorConfig:
    """Every tunable of the selection schemes, with the paper-desk defaults."""

    k: int = 7
    mcb: McbConfig = field(default_factory=McbConfig)
    desknn: DesKnnConfig = field(default_factory=DesKnnConfig)
    metades_threshold: float = 0.5
    meta_kp: int = 5
    rrc_draws: int = 1000
    rrc_region_factor: int = 30
    seed: int = 0


_BASE_SELECTORS.update(
    {
        "LCA": lambda ctx, q, cfg: select_lca(ctx, q),
        "MCB": lambda ctx, q, cfg: select_mcb(ctx, q, cfg.mcb),
        "KNE": lambda ctx, q, cfg: select_kne(ctx, q),
        "KNU": lambda ctx, q, cfg: select_knu(ctx, q),
        "DES-KNN": lambda ctx, q, cfg: select_desknn(ctx, q, cfg.desknn),
    }
)

SELECTORS = {
    "STATIC": lambda ctx, q, cfg: select_static(ctx, q),
    "RANK": lambda ctx, q, cfg: select_rank(ctx, q),
    "LCA": _BASE_SELECTORS["LCA"],
    "MCB": _BASE_SELECTORS["MCB"],
    "KNE": _BASE_SELECTORS["KNE"],
    "KNU": _BASE_SELECTORS["KNU"],
    "DES-KNN": _BASE_SELECTORS["DES-KNN"],
    "DESP": lambda ctx, q, cfg: select_desp(ctx, q),
    "DES-RRC": lambda ctx, q, cfg: select_desrrc(
        ctx, q, draws=cfg.rrc_draws, seed=cfg.seed, region_factor=cfg.rrc_region_factor
    ),
    "META-DES": lambda ctx, q, cfg: select_metades(
        ctx, q, threshold=cfg.metades_threshold, kp=cfg.meta_kp
    ),
    **{
        name: (lambda base: lambda ctx, q, cfg: select_fire(base, ctx, q, cfg))(base)
        for name, base in FIRE_BASES.items()
    },
}


def run_selector(name: str, ctx: SelectionContext, query: Query,
                 cfg: SelectorConfig = SelectorConfig()) -> SelectionResult:
    """Dispatch a canonical selector name on a prepared query."""
    return SELECTORS[normalize_selector(name)](ctx, query, cfg)
